"""Tests for atomic symbols, contexts and weighted norms."""

import math

import numpy as np
import pytest

from qnf_engine.core_symbols import (
    Atom,
    AtomicSymbol,
    Context,
    combine_tags,
    dump_symbol,
    load_symbol,
    merge_add,
    oscillating_part,
    pointwise_product,
    prune,
    weighted_norm,
    weighted_norm_k,
    x_average,
)
from qnf_engine.errors import (
    IncompatibleHbarTag,
    InputError,
    InsufficientGrid,
    NotAtomic,
)
from tests.conftest import GOLDEN


def single(p, q, a, tag=None):
    return AtomicSymbol.from_atoms(len(q), [Atom(p, tuple(q), a)], hbar_tag=tag)


class TestContext:
    """Test cases for context validation."""

    def test_canonical_context(self, ctx):
        """Test the canonical context fields."""
        assert ctx.l == 2
        assert ctx.omega == (1.0, GOLDEN)
        assert ctx.kappa == pytest.approx(GOLDEN)
        assert ctx.epsilon_factor == 1.0

    def test_tau_must_exceed_l_minus_one(self):
        """Test that tau <= l - 1 is rejected."""
        with pytest.raises(InputError, match="tau must exceed"):
            Context.create(omega=(1.0, GOLDEN), hbar=0.1, gamma=2.0, tau=1.0, rho=1.0)

    def test_hbar_range(self):
        """Test that hbar outside (0, 1] is rejected."""
        with pytest.raises(InputError, match="hbar must lie"):
            Context.create(omega=(1.0, GOLDEN), hbar=0.0, gamma=2.0, tau=1.5, rho=1.0)

    def test_dimension_mismatch(self):
        """Test that omega must have l entries."""
        with pytest.raises(InputError, match="omega has 3 entries"):
            Context(l=2, omega=(1.0, 2.0, 3.0), hbar=0.1, gamma=2.0, tau=1.5, rho=1.0)

    def test_normalization_records_epsilon_factor(self):
        """Test that normalizing omega rescales it to unit l1 norm."""
        ctx = Context.create(
            omega=(1.0, GOLDEN), hbar=0.1, gamma=2.0, tau=1.5, rho=1.0, normalize=True
        )

        assert sum(abs(w) for w in ctx.omega) == pytest.approx(1.0)
        assert ctx.epsilon_factor == pytest.approx(1.0 / (1.0 + GOLDEN))

    def test_with_hbar(self, ctx):
        """Test that with_hbar only changes hbar."""
        other = ctx.with_hbar(0.05)

        assert other.hbar == 0.05
        assert other.omega == ctx.omega


class TestAtomicSymbol:
    """Test cases for the merged atomic representation."""

    def test_equal_keys_merge(self):
        """Test that atoms with equal keys are added."""
        s = AtomicSymbol.from_atoms(
            2, [Atom(1.0, (1, 0), 1.0), Atom(1.0, (1, 0), 2.0), Atom(0.0, (0, 1), 1j)]
        )

        assert s.size == 2
        atoms = {(a.p, a.q): a.a for a in s.atoms()}
        assert atoms[(1.0, (1, 0))] == 3.0

    def test_cancellation_drops_atoms(self, potential):
        """Test that S - S is the empty symbol."""
        assert (potential - potential).is_empty

    def test_from_records_checks_length(self):
        """Test that literal records need 3 + l fields."""
        with pytest.raises(InputError, match="must have 5 fields"):
            AtomicSymbol.from_records([[1.0, 0.0, 1.0, 1]], 2)

    def test_from_records_rejects_fractional_modes(self):
        """Test that lattice entries must be integers."""
        with pytest.raises(InputError, match="must be integers"):
            AtomicSymbol.from_records([[1.0, 0.0, 1.0, 0.5, 0]], 2)

    def test_canonical_potential_is_real(self, potential):
        """Test the canonical potential layout."""
        assert potential.size == 8
        assert potential.is_real()
        assert potential.max_mode() == 1
        assert not potential.is_x_independent()

    def test_non_symmetric_symbol_is_not_real(self):
        """Test that a lone complex atom fails the Hermitian symmetry check."""
        assert not single(1.0, (1, 0), 1.0).is_real()

    def test_evaluate_canonical_potential(self, potential):
        """Test pointwise evaluation against 2 cos t (cos x_1 + cos x_2)."""
        t = np.array([0.3, -1.1])
        x = np.array([[0.2, 1.0], [2.5, -0.7]])

        values = potential.evaluate(t, x)

        expected = 2 * np.cos(t) * (np.cos(x[:, 0]) + np.cos(x[:, 1]))
        np.testing.assert_allclose(values.real, expected, atol=1e-14)
        np.testing.assert_allclose(values.imag, 0.0, atol=1e-14)

    def test_linear_symbol_evaluates_to_t(self):
        """Test that L_omega evaluates to t and has gradient omega in xi."""
        linear = AtomicSymbol.linear_symbol(2)
        omega = np.array([1.0, GOLDEN])

        grad_xi, grad_x = linear.gradient(np.array([0.5, 0.1]), np.array([1.0, 2.0]), omega)

        assert linear.evaluate(np.array(0.7), np.zeros(2)) == pytest.approx(0.7)
        np.testing.assert_allclose(grad_xi, omega)
        np.testing.assert_allclose(grad_x, 0.0)

    def test_gradient_matches_finite_differences(self, potential):
        """Test the exact gradient against central differences."""
        omega = np.array([1.0, GOLDEN])
        xi = np.array([0.3, -0.2])
        x = np.array([0.4, 1.3])
        h = 1e-6

        grad_xi, grad_x = potential.gradient(xi, x, omega)

        for k in range(2):
            step = np.zeros(2)
            step[k] = h
            d_xi = (potential.evaluate((xi + step) @ omega, x)
                    - potential.evaluate((xi - step) @ omega, x)).real / (2 * h)
            d_x = (potential.evaluate(xi @ omega, x + step)
                   - potential.evaluate(xi @ omega, x - step)).real / (2 * h)
            assert grad_xi[k] == pytest.approx(d_xi, abs=1e-7)
            assert grad_x[k] == pytest.approx(d_x, abs=1e-7)

    def test_scaling_linear_part_by_complex_factor(self):
        """Test that an L_omega part cannot be scaled by a complex number."""
        with pytest.raises(NotAtomic, match="complex factor"):
            AtomicSymbol.linear_symbol(2).scaled(1j)

    def test_mean_and_oscillating_parts(self, potential):
        """Test the split into q = 0 and q != 0 atoms."""
        s = potential + single(1.0, (0, 0), 0.25)

        assert x_average(s).size == 1
        assert oscillating_part(s).size == 8
        assert x_average(potential).size == 0

    def test_pointwise_product(self):
        """Test that opposite atoms multiply to a constant."""
        product = pointwise_product(single(1.0, (1, 0), 2.0), single(-1.0, (-1, 0), 3.0))

        assert product.size == 1
        assert product.atoms()[0] == Atom(0.0, (0, 0), 6.0)


class TestHbarTags:
    """Test cases for hbar tag bookkeeping."""

    def test_untagged_symbols_combine(self):
        """Test that untagged symbols stay untagged."""
        assert combine_tags(None, None) is None
        assert combine_tags(None, 0.1) == 0.1

    def test_mismatched_tags_raise(self):
        """Test that symbols from different hbar cannot be added."""
        with pytest.raises(IncompatibleHbarTag, match="hbar = 0.1 and hbar = 0.2"):
            merge_add(single(1.0, (1, 0), 1.0, tag=0.1), single(1.0, (1, 0), 1.0, tag=0.2))


class TestWeightedNorms:
    """Test cases for the weighted norms and pruning."""

    def test_canonical_norm(self, potential):
        """Test |V|_rho = 4 exp(2 rho) for the canonical potential."""
        assert weighted_norm(potential, 1.0) == pytest.approx(4.0 * math.e**2)
        assert weighted_norm(potential, 0.0) == pytest.approx(4.0)

    def test_linear_part_does_not_count(self, potential):
        """Test that the L_omega part is excluded from the norm."""
        s = merge_add(potential, AtomicSymbol.linear_symbol(2))

        assert weighted_norm(s, 0.5) == weighted_norm(potential, 0.5)

    def test_negative_radius(self, potential):
        """Test that negative radii are rejected."""
        with pytest.raises(InputError, match="rho must be nonnegative"):
            weighted_norm(potential, -0.1)

    def test_norm_is_submultiplicative(self, rng):
        """Test |FG|_rho <= |F|_rho |G|_rho for pointwise products."""
        from tests.conftest import random_symbol

        for _ in range(50):
            f = random_symbol(rng)
            g = random_symbol(rng)
            lhs = weighted_norm(pointwise_product(f, g), 0.7)
            assert lhs <= weighted_norm(f, 0.7) * weighted_norm(g, 0.7) * (1 + 1e-12)

    def test_prune_reports_slack(self):
        """Test that pruning removes small atoms and reports their weight."""
        s = AtomicSymbol.from_atoms(
            2, [Atom(0.0, (1, 0), 1.0), Atom(0.0, (2, 0), 1e-12)]
        )

        pruned, slack = prune(s, 0.5, 1e-8)

        assert pruned.size == 1
        assert slack == pytest.approx(1e-12 * math.exp(1.0))
        assert prune(s, 0.5, 0.0) == (s, 0.0)

    def test_norm_k_zero_matches_norm(self, potential):
        """Test that the order-zero diagnostic is the plain norm."""
        value = weighted_norm_k([(0.1, potential)], 0.5, 0, (1.0, GOLDEN))

        assert value == pytest.approx(weighted_norm(potential, 0.5))

    def test_norm_k_one_uses_difference_quotient(self):
        """Test the order-one diagnostic on an amplitude linear in hbar."""
        family = [(h, single(0.0, (0, 0), h)) for h in (0.1, 0.2)]

        value = weighted_norm_k(family, 0.3, 1, (1.0, GOLDEN))

        assert value == pytest.approx(0.1 + 1.0)

    def test_norm_k_needs_enough_samples(self, potential):
        """Test that order k needs k + 1 hbar samples."""
        with pytest.raises(InsufficientGrid, match="order 2 needs 3"):
            weighted_norm_k([(0.1, potential), (0.2, potential)], 0.5, 2, (1.0, GOLDEN))


class TestSymbolFiles:
    """Test cases for the literal symbol format."""

    def test_dump_and_load(self, tmp_path, potential):
        """Test that a dumped symbol reads back unchanged."""
        path = tmp_path / "v.txt"

        dump_symbol(path, potential)
        loaded = load_symbol(path)

        assert loaded.l == 2
        assert (loaded - potential).is_empty
        assert path.read_text().startswith("# qnf-engine symbol l=2")

    def test_linear_part_cannot_be_dumped(self, tmp_path):
        """Test that L_omega has no literal form."""
        with pytest.raises(NotAtomic):
            dump_symbol(tmp_path / "l.txt", AtomicSymbol.linear_symbol(2))

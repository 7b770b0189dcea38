"""Tests for the KAM iteration."""

import dataclasses
import math

import numpy as np
import pytest

from qnf_engine.core_symbols import Atom, AtomicSymbol, merge_add, weighted_norm
from qnf_engine.errors import (
    InputError,
    NotHermitian,
    StepConditionViolated,
    ThetaTooLarge,
)
from qnf_engine.homological import DivisorModel, DivisorTerm, solve_homological
from qnf_engine.kam_engine import (
    KamState,
    RadiusLedger,
    kam_run,
    kam_step,
    step_identity_residual,
    superconvergence_holds,
    unitary_product,
)
from qnf_engine.verify_spectrum import build_hamiltonian, label_spectrum
from qnf_engine.weyl_matrix import ModeBox


def cos_t() -> AtomicSymbol:
    return AtomicSymbol.from_atoms(2, [Atom(1.0, (0, 0), 1.0), Atom(-1.0, (0, 0), 1.0)])


class TestRadiusLedger:
    """Test cases for the KAM radius schedule."""

    def test_small_radius_scale(self):
        """Test s = 0.9 * 3 rho / pi^2 below rho = pi^2 / 3."""
        ledger = RadiusLedger.schedule(1.0, 2)

        scale = 0.9 * 3.0 / math.pi**2
        assert ledger.scale == pytest.approx(scale)
        assert ledger.d == pytest.approx((scale, scale / 4, scale / 9))
        assert ledger.rho[-1] > 0.5

    def test_large_radius_scale(self):
        """Test s = 1 above rho = pi^2 / 3."""
        ledger = RadiusLedger.schedule(4.0, 3)

        assert ledger.scale == 1.0
        assert ledger.rho[1] == pytest.approx(3.0)
        assert ledger.delta(2) == pytest.approx(1.25)

    def test_radius_must_be_positive(self):
        """Test that rho = 0 is rejected."""
        with pytest.raises(InputError, match="rho must be positive"):
            RadiusLedger.schedule(0.0, 2)


class TestKamStep:
    """Test cases for a single step."""

    def test_one_step(self, ctx, potential):
        """Test that a step squares epsilon and records its norms."""
        state = KamState.initial(potential, 1e-3, ctx.rho, 2)

        following = kam_step(state, ctx)

        assert following.ell == 1
        assert following.epsilon_ell == pytest.approx(1e-6)
        assert len(following.records) == 1
        record = following.records[0]
        assert record.norm_V == pytest.approx(weighted_norm(potential, 1.0))
        assert record.norm_N == 0.0
        assert record.theta == 0.0
        assert following.V_ell.size > 0
        assert following.V_ell.is_real(rtol=1e-9)

    def test_theta_too_large(self, ctx, potential):
        """Test that a divisor with theta >= 1 stops the step."""
        state = dataclasses.replace(
            KamState.initial(potential, 1e-3, ctx.rho, 2),
            divisor=DivisorModel((DivisorTerm(1.0, cos_t(), rho=1.0, d=0.5),)),
        )

        with pytest.raises(ThetaTooLarge, match="theta"):
            kam_step(state, ctx)

    def test_step_condition(self, ctx, potential):
        """Test that a large epsilon violates eps A |V| / d < 1."""
        state = KamState.initial(potential, 0.5, ctx.rho, 2)

        with pytest.raises(StepConditionViolated) as excinfo:
            kam_step(state, ctx)

        assert excinfo.value.details["ratio"] >= 1.0


class TestKamRun:
    """Test cases for the full iteration."""

    def test_step_count_range(self, ctx, potential):
        """Test that at most four steps may be requested."""
        with pytest.raises(InputError, match=r"steps must lie in \[0, 4\]"):
            kam_run(potential, ctx, 1e-3, 5)

    def test_zero_epsilon(self, ctx, potential):
        """Test that eps = 0 stops before the first step."""
        run = kam_run(potential, ctx, 0.0, 2)

        assert run.records == []
        assert (run.D - AtomicSymbol.linear_symbol(2)).is_empty

    def test_x_independent_perturbation(self, ctx):
        """Test that an x-independent V terminates with D = L + eps V."""
        run = kam_run(cos_t(), ctx, 1e-3, 3)

        assert len(run.records) == 1
        assert run.final.V_ell.is_empty
        expected = merge_add(AtomicSymbol.linear_symbol(2), cos_t().scaled(1e-3))
        assert (run.D - expected).is_empty

    def test_diagnostics(self, ctx, potential):
        """Test the superconvergence diagnostics of two canonical steps."""
        run = kam_run(potential, ctx, 1e-3, 2)

        diagnostics = run.diagnostics
        assert len(run.records) == 2
        assert len(run.ledgers) == 2
        assert len(diagnostics["eps_norms"]) == 3
        assert all(diagnostics["contraction_bounded_by_E"])
        assert diagnostics["log_size_slope_in_2_pow_ell"] < 0.0

    @pytest.mark.slow
    def test_normal_form_matches_spectrum(self, ctx, potential):
        """Test D_2 eigenvalues against the diagonalized operator on M = 12."""
        eps = 1e-3
        run = kam_run(potential, ctx, eps, 2)
        box = ModeBox(2, 12)
        spectrum = label_spectrum(build_hamiltonian(potential, eps, box, ctx), ctx, 1, 2)

        usable = spectrum.usable
        ns = np.array([e.n for e in usable])
        predicted = run.D.evaluate_mean(ctx.hbar * (ns @ ctx.omega_array)).real
        errors = np.abs(np.array([e.value for e in usable]) - predicted)

        remainder = run.final.epsilon_ell * weighted_norm(run.final.V_ell, 0.0)
        assert errors.max() <= 10.0 * remainder + 1e-9
        assert errors.max() <= 10.0 * (eps * weighted_norm(potential, ctx.rho)) ** 4


class TestUnitaryConjugation:
    """Test cases for the matrix-level step identity."""

    def test_unitary_product_is_unitary(self, ctx, potential):
        """Test that the product of step exponentials is unitary."""
        w = solve_homological(potential, DivisorModel(), ctx, 1.0, 0.5).W
        box = ModeBox(2, 4)

        u = unitary_product([(w, 1e-3), (w, 1e-6)], box, ctx).entries

        np.testing.assert_allclose(u.conj().T @ u, np.eye(box.dimension), atol=1e-12)

    def test_complex_generator_is_rejected(self, ctx):
        """Test that a non-real generator has no unitary exponential."""
        w = AtomicSymbol.from_atoms(2, [Atom(0.0, (1, 0), 1.0)])

        with pytest.raises(NotHermitian, match="real-valued"):
            unitary_product([(w, 1e-3)], ModeBox(2, 2), ctx)

    def test_first_step_conjugation_keeps_interior_spectrum(self, ctx, potential):
        """Test that U_1 H U_1^* has the labelled interior eigenvalues of H."""
        eps = 1e-3
        run = kam_run(potential, ctx, eps, 1)
        box = ModeBox(2, 10)
        u = unitary_product([(run.final.products[0].W, eps)], box, ctx)
        h = build_hamiltonian(potential, eps, box, ctx)

        before = label_spectrum(h, ctx, 1, 2)
        after = label_spectrum(h.conjugated_by(u), ctx, 1, 2)

        off_diagonal = u.entries - np.diag(np.diag(u.entries))
        assert np.abs(off_diagonal).max() > 1e-4
        values = {e.n: e.value for e in after.usable}
        common = [e for e in before.usable if e.n in values]
        assert len(common) >= 0.9 * len(before.usable) > 0
        for entry in common:
            assert abs(values[entry.n] - entry.value) <= 1e-8

    @pytest.mark.slow
    def test_step_identity(self, ctx, potential):
        """Test U (F + eps V) U* = F + eps N + eps^2 V_next away from the edge."""
        run = kam_run(potential, ctx, 1e-3, 1)
        product = run.final.products[0]

        residual = step_identity_residual(product, ModeBox(2, 10), ctx, margin=5)

        assert residual < 1e-8


class TestSuperconvergence:
    """Test cases for the log-form superconvergence check."""

    def test_vanished_perturbation(self):
        """Test that a zero next size always passes."""
        assert superconvergence_holds(1e-3, 0.0, 1.5)

    def test_squared_size_passes(self):
        """Test that eps_{l+1}|V_{l+1}| = (eps_l |V_l|)^2 passes."""
        assert superconvergence_holds(1e-3, 1e-6, 1.5)

    def test_growth_fails(self):
        """Test that a size far above mu (eps |V|)^2 fails."""
        mu = math.exp(8.0 * 6.0)
        assert not superconvergence_holds(1e-3, 10.0 * mu * 1e-6, 1.5)

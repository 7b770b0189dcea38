"""Tests for the classical track and the Egorov check."""

import math

import numpy as np
import pytest

from qnf_engine.classical_limit import (
    classical_birkhoff,
    egorov_residual,
    hamiltonian_flow,
    hamiltonian_trajectory,
    sample_grid,
    write_trajectory_csv,
)
from qnf_engine.core_symbols import Atom, AtomicSymbol, weighted_norm
from qnf_engine.errors import InputError
from qnf_engine.homological import DivisorModel, solve_homological
from qnf_engine.qnf_order import qnf_construct
from tests.conftest import make_context


def cos_t(scale: float) -> AtomicSymbol:
    return AtomicSymbol.from_atoms(
        2, [Atom(1.0, (0, 0), scale), Atom(-1.0, (0, 0), scale)]
    )


def generator(potential, ctx):
    return solve_homological(potential, DivisorModel(), ctx, 1.0, 0.5).W


class TestBirkhoffNormalForm:
    """Test cases for the classical normal form."""

    def test_first_order_matches_quantum(self, ctx):
        """Test that B_1 is the mean on both tracks."""
        v = AtomicSymbol.from_atoms(
            2, [Atom(0.0, (1, 0), 1.0), Atom(0.0, (-1, 0), 1.0), Atom(0.0, (0, 0), 0.5)]
        )

        quantum = qnf_construct(v, 1, ctx)
        classical = classical_birkhoff(v, 1, ctx)

        assert (quantum.B[0] - classical.B[0]).is_empty
        assert classical.classical

    def test_second_order_gap_scales_with_hbar_squared(self, potential):
        """Test |B_2 - B_2^cl| ~ hbar^2 over a halving sequence."""
        gaps = []
        for hbar in (0.2, 0.1, 0.05):
            ctx = make_context(hbar=hbar)
            quantum = qnf_construct(potential, 2, ctx).B[1]
            classical = classical_birkhoff(potential, 2, ctx).B[1]
            gaps.append(weighted_norm(quantum - classical, 0.5))

        for coarse, fine in zip(gaps, gaps[1:]):
            assert 0.2 <= fine / coarse <= 0.3

    def test_classical_form_is_hbar_independent(self, potential):
        """Test that the Birkhoff coefficients do not depend on hbar."""
        coarse = classical_birkhoff(potential, 2, make_context(hbar=0.2)).B[1]
        fine = classical_birkhoff(potential, 2, make_context(hbar=0.05)).B[1]

        assert weighted_norm(coarse - fine, 0.5) < 1e-14


class TestHamiltonianFlow:
    """Test cases for the RK4 flow."""

    def test_linear_flow_is_a_shift(self, ctx):
        """Test that L_omega moves x by omega t and fixes xi."""
        xi, x = sample_grid(ctx)

        xi_t, x_t = hamiltonian_flow(
            AtomicSymbol.linear_symbol(2), xi, x, 0.7, 10, ctx.omega_array
        )

        np.testing.assert_allclose(xi_t, xi)
        expected = np.mod(x + 0.7 * ctx.omega_array, 2.0 * math.pi)
        np.testing.assert_allclose(x_t, expected, atol=1e-13)

    def test_x_independent_generator(self, ctx):
        """Test x(t) = x + t W'(<omega, xi>) omega for W depending on t only."""
        w = cos_t(0.3)
        xi = np.array([[0.2, -0.4]])
        x = np.array([[1.0, 2.0]])

        xi_t, x_t = hamiltonian_flow(w, xi, x, 0.5, 20, ctx.omega_array)

        slope = -0.6 * math.sin(float(xi[0] @ ctx.omega_array))
        expected = np.mod(x + 0.5 * slope * ctx.omega_array, 2.0 * math.pi)
        np.testing.assert_allclose(xi_t, xi)
        np.testing.assert_allclose(x_t, expected, atol=1e-13)

    def test_energy_is_conserved(self, ctx, potential):
        """Test that the flow of W preserves W."""
        w = generator(potential, ctx)
        xi, x = sample_grid(ctx)

        xi_t, x_t = hamiltonian_flow(w, xi, x, 1.0, 10_000, ctx.omega_array)

        before = w.evaluate(xi @ ctx.omega_array, x).real
        after = w.evaluate(xi_t @ ctx.omega_array, x_t).real
        assert np.abs(after - before).max() <= 1e-8

    def test_negative_steps(self, ctx):
        """Test that a negative step count is rejected."""
        with pytest.raises(InputError, match="steps must be nonnegative"):
            hamiltonian_flow(cos_t(1.0), np.zeros(2), np.zeros(2), 0.1, -1,
                             ctx.omega_array)

    def test_sample_grid(self, ctx):
        """Test the default grid layout."""
        xi, x = sample_grid(ctx)

        assert xi.shape == (64, 2)
        assert x.shape == (64, 2)
        assert x.min() == 0.0 and x.max() < 2.0 * math.pi
        np.testing.assert_allclose(xi[0], [1.0, 1.0])

    def test_trajectory_csv(self, tmp_path, ctx):
        """Test the trajectory rows and their file layout."""
        rows = hamiltonian_trajectory(
            AtomicSymbol.linear_symbol(2), np.zeros(2), np.zeros(2), 1.0, 4,
            ctx.omega_array,
        )
        path = tmp_path / "trajectory.csv"

        write_trajectory_csv(path, rows, 2)

        assert rows.shape == (5, 6)
        np.testing.assert_allclose(rows[-1, 4:], ctx.omega_array)
        lines = path.read_text().splitlines()
        assert lines[0] == "step,t,xi_1,xi_2,x_1,x_2"
        assert lines[-1].startswith("4,1,0,0,")


class TestEgorov:
    """Test cases for the conjugation against the classical transport."""

    def test_zero_time(self, ctx, potential):
        """Test that eps = 0 has no residual."""
        assert egorov_residual(potential, generator(potential, ctx), 0.0, ctx) == 0.0

    def test_linear_symbol_under_x_independent_generator(self, ctx):
        """Test that L_omega is invariant on both sides when W depends on t only."""
        residual = egorov_residual(AtomicSymbol.empty(2), cos_t(0.3), 0.1, ctx)

        assert residual < 1e-14

    def test_residual_scales_with_hbar_squared(self, potential):
        """Test that halving hbar divides the Egorov residual by about four."""
        residuals = []
        for hbar in (0.2, 0.1, 0.05):
            ctx = make_context(hbar=hbar)
            w = generator(potential, ctx)
            residuals.append(egorov_residual(potential, w, 0.01, ctx, rho=0.5, d=0.25))

        assert residuals[0] > 0.0
        for coarse, fine in zip(residuals, residuals[1:]):
            assert 0.15 <= fine / coarse <= 0.35

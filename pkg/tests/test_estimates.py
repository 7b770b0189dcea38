"""Tests for the Diophantine certificate and the constants ledger."""

import logging
import math

import pytest

from qnf_engine.core_symbols import Context, weighted_norm
from qnf_engine.errors import InputError, ResonantFrequency
from qnf_engine.estimates import (
    LogValue,
    coefficient_a,
    coefficient_e,
    diophantine_certify,
    epsilon_star,
    epsilon_star_table,
    hypothesis_report,
    ledger_evaluate,
    log_mu,
    log_mu_ell,
    pi_factor,
)
from qnf_engine.kam_engine import KamState
from tests.conftest import GOLDEN


class TestDiophantineCertificate:
    """Test cases for the small-divisor scan."""

    def test_resonant_frequency(self):
        """Test that omega = (1, 1) is resonant at q = (1, -1)."""
        with pytest.raises(ResonantFrequency) as excinfo:
            diophantine_certify((1.0, 1.0), 1.5, 50)

        assert excinfo.value.worst_q == (1, -1)
        assert excinfo.value.to_record()["details"]["worst_q"] == [1, -1]

    def test_golden_mean(self):
        """Test gamma = 1 at q = (1, 0) for the golden vector with tau = 1."""
        certificate = diophantine_certify((1.0, GOLDEN), 1.0, 1000)

        assert certificate.gamma_measured == pytest.approx(1.0)
        assert certificate.worst_q == (1, 0)

    def test_golden_mean_is_stable_in_search_radius(self):
        """Test that doubling q_max leaves the golden constant unchanged."""
        small = diophantine_certify((1.0, GOLDEN), 1.0, 1000)
        large = diophantine_certify((1.0, GOLDEN), 1.0, 2000)

        assert large.gamma_measured == pytest.approx(small.gamma_measured, rel=1e-12)
        assert large.worst_q == small.worst_q

    def test_search_radius(self):
        """Test that q_max must be positive."""
        with pytest.raises(InputError, match="q_max must be at least 1"):
            diophantine_certify((1.0, GOLDEN), 1.0, 0)

    def test_certificate_backs_context(self):
        """Test that a context gamma below the measured constant is refused."""
        certificate = diophantine_certify((1.0, GOLDEN), 1.5, 200)

        ctx = Context(l=2, omega=(1.0, GOLDEN), hbar=0.1, gamma=2.0, tau=1.5,
                      rho=1.0, certificate=certificate)
        assert ctx.certificate is certificate

        with pytest.raises(InputError, match="below the measured constant"):
            Context(l=2, omega=(1.0, GOLDEN), hbar=0.1, gamma=0.5, tau=1.5,
                    rho=1.0, certificate=certificate)

    def test_report(self):
        """Test the report layout of a certificate."""
        report = diophantine_certify((1.0, GOLDEN), 1.0, 20).to_report()

        assert report["worst_q"] == [1, 0]
        assert report["omega"] == [1.0, GOLDEN]


class TestEpsilonStar:
    """Test cases for the convergence radius."""

    def test_closed_form(self):
        """Test log10 eps* = -(120 log10 e + log10 4) at tau = 1, r = 0, |V| = 1."""
        value = epsilon_star(1.0, 1.0, 1.0, 0)

        expected = -(120.0 * math.log10(math.e) + math.log10(4.0))
        assert value.log10 == pytest.approx(expected, abs=1e-9)
        assert value.value < 1e-50

    def test_decreasing_in_r(self):
        """Test that eps*_r decreases with r."""
        table = epsilon_star_table(2.0, 1.5, 4.0, 4)

        logs = [entry.log for entry in table]
        assert logs == sorted(logs, reverse=True)
        assert len(logs) == 5

    def test_norm_must_be_positive(self):
        """Test that |V| = 0 is rejected."""
        with pytest.raises(InputError, match="norm of V must be positive"):
            epsilon_star(2.0, 1.5, 0.0)

    def test_log_value(self):
        """Test mantissa and exponent of a stored logarithm."""
        value = LogValue(math.log(2.5e-7))

        mantissa, exponent = value.mantissa_exponent()

        assert mantissa == pytest.approx(2.5)
        assert exponent == -7
        assert LogValue(-1000.0).value == 0.0

    def test_mu(self):
        """Test log mu = 8 (3 + 2 tau) and mu_ell = mu^(2^ell)."""
        assert log_mu(1.5) == 48.0
        assert log_mu_ell(1.5, 3) == 8 * 48.0


class TestLedgerCoefficients:
    """Test cases for the ledger formulas."""

    def test_pi_factor(self):
        """Test Pi at k = 0 and k = 1."""
        assert pi_factor(0, 0.0) == 2.0
        assert pi_factor(1, 1.0) == pytest.approx(64.0 / math.e)
        assert pi_factor(1, 0.0) == math.inf

    def test_a_for_identity_divisor(self):
        """Test A = gamma tau^tau / (e d)^tau when theta = 0."""
        a = coefficient_a(2.0, 1.5, 0.25, 0.0, 0.0)

        assert a == pytest.approx(2.0 * 1.5**1.5 / (math.e * 0.25) ** 1.5)

    def test_a_diverges_at_theta_one(self):
        """Test that theta >= 1 gives an infinite A."""
        assert coefficient_a(2.0, 1.5, 0.25, 1.0, 1.0) == math.inf

    def test_e_diverges_past_step_condition(self):
        """Test that E is infinite once eps A |V| / d >= 1."""
        assert coefficient_e(0.25, 1.0, 1.0, 1.0, 1.0) == math.inf

    def test_ledger_of_initial_state(self, ctx, potential):
        """Test the ledger of the first canonical step."""
        state = KamState.initial(potential, 1e-3, ctx.rho, 2)

        ledger = ledger_evaluate(state, ctx)

        d0 = state.ledger.d[0]
        a = 2.0 * 1.5**1.5 / (math.e * d0) ** 1.5
        assert ledger.theta == 0.0
        assert ledger.A == pytest.approx(a)
        assert ledger.step_ratio == pytest.approx(
            1e-3 * a * weighted_norm(potential, 1.0) / d0
        )
        assert ledger.step_ratio < 1.0
        assert math.isfinite(ledger.E)
        assert len(ledger.log_eps_star_k) == 5
        assert ledger.to_report()["theta_le_inv_rho"]


class TestHypotheses:
    """Test cases for the radius hypotheses."""

    def test_canonical_radius_fails(self, ctx, caplog):
        """Test that rho = 1 misses 1 + 16 gamma tau^tau and warns."""
        with caplog.at_level(logging.WARNING, logger="qnf_engine.estimates"):
            report = hypothesis_report(ctx, 2)

        assert report["h3_threshold"] == pytest.approx(1.0 + 32.0 * 1.5**1.5)
        assert not report["h3_holds"]
        assert report["forms_agree_at_k0"]
        assert len(report["lambda_k"]) == 3
        assert "not rigorous" in caplog.text

    def test_large_radius_passes(self):
        """Test that a radius above the threshold satisfies the first form."""
        ctx = Context.create(omega=(1.0, GOLDEN), hbar=0.1, gamma=2.0, tau=1.5, rho=100.0)

        report = hypothesis_report(ctx, 1)

        assert report["h3_holds"]
        assert report["lambda_holds"] == [True, False]

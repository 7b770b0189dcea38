"""Diophantine certification and the constant ledger of the KAM iteration."""

import logging
import math
from dataclasses import dataclass, asdict
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core_symbols import Context, weighted_norm, weighted_norm_k
from .errors import InputError, ResonantFrequency

if TYPE_CHECKING:
    from .kam_engine import KamState

logger = logging.getLogger(__name__)

RESONANCE_RTOL = 1e-15


@dataclass(frozen=True)
class DiophantineCertificate:
    """
    Result of an exhaustive small-divisor scan.

    For every 0 < |q|_1 <= q_max:
    1 / |<omega, q>| <= gamma_measured * |q|_1^tau, with equality at worst_q.
    """

    omega: Tuple[float, ...]
    tau: float
    gamma_measured: float
    q_max: int
    worst_q: Tuple[int, ...]

    def to_report(self) -> Dict[str, Any]:
        report = asdict(self)
        report["omega"] = list(self.omega)
        report["worst_q"] = list(self.worst_q)
        return report


@dataclass(frozen=True)
class LogValue:
    """A positive number stored by its natural logarithm."""

    log: float

    @property
    def log10(self) -> float:
        return self.log / math.log(10.0)

    @property
    def value(self) -> float:
        """The number itself; underflows to 0.0 below double range."""
        if self.log < -745.0:
            return 0.0
        return math.exp(self.log)

    def mantissa_exponent(self) -> Tuple[float, int]:
        """Return (m, e) with value = m * 10^e and 1 <= m < 10."""
        exponent = math.floor(self.log10)
        return 10.0 ** (self.log10 - exponent), int(exponent)


@dataclass(frozen=True)
class ConstantsLedger:
    """Constants of one KAM step at derivative order k."""

    ell: int
    k: int
    theta: float
    theta_k: float
    A: float
    C: float
    E: float
    Psi: float
    Pi: float
    step_ratio: float
    log_mu: float
    log_mu_ell: float
    log_eps_star: float
    log_eps_star_k: Tuple[float, ...]
    theta_le_inv_rho: bool

    def to_report(self) -> Dict[str, Any]:
        report = asdict(self)
        report["log_eps_star_k"] = list(self.log_eps_star_k)
        return report


def diophantine_certify(
    omega: Sequence[float], tau: float, q_max: int
) -> DiophantineCertificate:
    """
    Scan every lattice vector with 0 < |q|_1 <= q_max.

    Vectors q and -q give the same divisor, so the scan covers the half
    lattice whose first nonzero entry is positive; worst_q is reported in
    that normalization.

    Args:
        omega: Frequency vector
        tau: Diophantine exponent
        q_max: Search radius in the l1 norm

    Returns:
        Certificate with the measured constant

    Raises:
        ResonantFrequency: If some <omega, q> vanishes; worst_q is the
            shortest resonant vector
    """
    omega_arr = np.asarray(omega, dtype=float)
    l = omega_arr.shape[0]
    if q_max < 1:
        raise InputError(f"q_max must be at least 1, got {q_max}")
    best_gamma = -math.inf
    worst: Optional[Tuple[int, ...]] = None
    resonant: Optional[Tuple[int, Tuple[int, ...]]] = None

    for first in range(0, q_max + 1):
        rest = _l1_ball(l - 1, q_max - first)
        q = np.column_stack((np.full(rest.shape[0], first, dtype=np.int64), rest))
        if first == 0:
            q = q[_positive_leading(rest)]
        if q.shape[0] == 0:
            continue
        l1 = np.abs(q).sum(axis=1)
        freq = np.abs(q @ omega_arr)
        hits = freq <= RESONANCE_RTOL * (np.abs(q) @ np.abs(omega_arr))
        if hits.any():
            for row in q[hits]:
                candidate = (int(np.abs(row).sum()), tuple(int(v) for v in row))
                if resonant is None or candidate < resonant:
                    resonant = candidate
            continue
        gamma = 1.0 / (freq * l1.astype(float) ** tau)
        idx = int(np.argmax(gamma))
        if gamma[idx] > best_gamma:
            best_gamma = float(gamma[idx])
            worst = tuple(int(v) for v in q[idx])

    if resonant is not None:
        raise ResonantFrequency(
            f"omega = {tuple(omega_arr.tolist())} is resonant at q = {resonant[1]}",
            worst_q=resonant[1],
        )
    assert worst is not None
    logger.debug(
        f"Certified omega up to |q|_1 <= {q_max}: gamma {best_gamma:.6g} at {worst}"
    )
    return DiophantineCertificate(
        omega=tuple(omega_arr.tolist()),
        tau=float(tau),
        gamma_measured=best_gamma,
        q_max=int(q_max),
        worst_q=worst,
    )


def epsilon_star(gamma: float, tau: float, norm_v: float, r: int = 0) -> LogValue:
    """
    Convergence radius 1 / (e^(24(3 + 2 tau)) (r + 2)^(2 tau) |V|_rho).

    gamma does not enter the closed form; it is accepted so call sites read
    like the other ledger functions.
    """
    if norm_v <= 0.0:
        raise InputError(f"norm of V must be positive, got {norm_v}")
    if r < 0:
        raise InputError(f"r must be nonnegative, got {r}")
    log_value = -24.0 * (3.0 + 2.0 * tau) - 2.0 * tau * math.log(r + 2.0) - math.log(norm_v)
    return LogValue(log_value)


def epsilon_star_table(
    gamma: float, tau: float, norm_v: float, k_max: int
) -> List[LogValue]:
    """epsilon_star for r = 0 .. k_max."""
    return [epsilon_star(gamma, tau, norm_v, r) for r in range(k_max + 1)]


def log_mu(tau: float) -> float:
    """log of mu = e^(8(3 + 2 tau))."""
    return 8.0 * (3.0 + 2.0 * tau)


def log_mu_ell(tau: float, ell: int) -> float:
    """log of mu_ell = mu^(2^ell)."""
    return (2.0**ell) * log_mu(tau)


def pi_factor(k: int, delta: float) -> float:
    """[2(k+1)^2]^(k+1) k^k / (e^k delta^k), with 0^0 = 1."""
    head = (2.0 * (k + 1) ** 2) ** (k + 1)
    if k == 0:
        return head
    if delta <= 0.0:
        return math.inf
    return head * k**k / (math.e**k * delta**k)


def coefficient_a(
    gamma: float,
    tau: float,
    d: float,
    theta: float,
    theta_k: float,
    k: int = 0,
    delta: float = 0.0,
) -> float:
    """A = gamma tau^tau / (e d)^tau [1 + Pi P] with P = theta_k^(k+1) / (1-theta)^(k+1)."""
    if theta >= 1.0:
        return math.inf
    if theta_k == 0.0:
        correction = 0.0
    else:
        correction = pi_factor(k, delta) * theta_k ** (k + 1) / (1.0 - theta) ** (k + 1)
    return gamma * tau**tau / (math.e * d) ** tau * (1.0 + correction)


def psi_factor(k: int, d: float, delta: float) -> float:
    """Psi = (k+1)^2 4^k / (e d)^3 Pi."""
    return (k + 1) ** 2 * 4.0**k / (math.e * d) ** 3 * pi_factor(k, delta)


def coefficient_c(k: int, d: float, eps_ell: float, a: float, norm_v: float) -> float:
    """C = (k+1)^2 4^(2k) / (e d)^3 A [2 + |eps| (k+1) 4^k / (e d)^2 A |V|]."""
    inner = 2.0 + abs(eps_ell) * (k + 1) * 4.0**k / (math.e * d) ** 2 * a * norm_v
    return (k + 1) ** 2 * 4.0 ** (2 * k) / (math.e * d) ** 3 * a * inner


def coefficient_e(
    d: float, eps_ell: float, a: float, psi: float, norm_v: float
) -> float:
    """E = Psi A [2 + |eps| e Psi A |V|] / (1 - |eps| A |V| / d)."""
    denominator = 1.0 - abs(eps_ell) * a * norm_v / d
    if denominator <= 0.0:
        return math.inf
    return psi * a * (2.0 + abs(eps_ell) * math.e * psi * a * norm_v) / denominator


def ledger_evaluate(state: "KamState", ctx: Context, k: int = 0) -> ConstantsLedger:
    """
    Evaluate every constant of the current step from the recorded norms.

    Args:
        state: KAM state at step ell
        ctx: Computational context
        k: Derivative order of the norms

    Returns:
        The constants ledger
    """
    ell = state.ell
    radii = state.ledger
    rho_ell = radii.rho[ell]
    d_ell = radii.d[ell]
    delta_ell = radii.delta(ell)
    divisor = state.divisor
    theta = divisor.theta()
    theta_k = theta
    if k > 0:
        theta_k = float(
            sum(
                abs(term.epsilon)
                * weighted_norm_k([(ctx.hbar, term.symbol)], term.rho, k, ctx.omega)
                / (math.e * term.d)
                for term in divisor.terms
            )
        )
    norm_v = weighted_norm(state.V_ell, rho_ell)
    eps_ell = state.epsilon_ell
    a = coefficient_a(ctx.gamma, ctx.tau, d_ell, theta, theta_k, k, delta_ell)
    pi = pi_factor(k, delta_ell)
    psi = psi_factor(k, d_ell, delta_ell)
    c = coefficient_c(k, d_ell, eps_ell, a, norm_v)
    e = coefficient_e(d_ell, eps_ell, a, psi, norm_v)
    stars = epsilon_star_table(ctx.gamma, ctx.tau, state.v0_norm, 4)
    ratio = abs(eps_ell) * a * norm_v / d_ell
    theta_ok = theta <= 1.0 / radii.rho0
    if not theta_ok:
        logger.warning(
            f"Step {ell}: theta = {theta:.4g} exceeds 1/rho = {1.0 / radii.rho0:.4g}"
        )
    return ConstantsLedger(
        ell=ell,
        k=k,
        theta=theta,
        theta_k=theta_k,
        A=a,
        C=c,
        E=e,
        Psi=psi,
        Pi=pi,
        step_ratio=ratio,
        log_mu=log_mu(ctx.tau),
        log_mu_ell=log_mu_ell(ctx.tau, ell),
        log_eps_star=stars[0].log,
        log_eps_star_k=tuple(s.log for s in stars),
        theta_le_inv_rho=theta_ok,
    )


def hypothesis_report(ctx: Context, k_max: int = 0) -> Dict[str, Any]:
    """
    Check the radius hypotheses of the convergence theorem.

    The first form asks rho > 1 + 16 gamma tau^tau; the order-k form asks
    rho > lambda(k) = 1 + 8 gamma tau^tau 2 (k+1)^2. At k = 0 the two agree.
    """
    base = ctx.gamma * ctx.tau**ctx.tau
    h3 = 1.0 + 16.0 * base
    lambdas = [1.0 + 8.0 * base * 2.0 * (k + 1) ** 2 for k in range(k_max + 1)]
    report = {
        "rho": ctx.rho,
        "h3_threshold": h3,
        "h3_holds": ctx.rho > h3,
        "lambda_k": lambdas,
        "lambda_holds": [ctx.rho > lam for lam in lambdas],
        "forms_agree_at_k0": math.isclose(h3, lambdas[0], rel_tol=1e-15),
    }
    if not report["h3_holds"]:
        logger.warning(
            f"rho = {ctx.rho} does not exceed 1 + 16 gamma tau^tau = {h3:.4g}; "
            "ledger bounds are reported but not rigorous"
        )
    return report


def _l1_ball(dim: int, radius: int) -> np.ndarray:
    """All integer vectors of the given dimension with |v|_1 <= radius."""
    if dim == 0:
        return np.zeros((1, 0), dtype=np.int64)
    axis = np.arange(-radius, radius + 1, dtype=np.int64)
    if dim == 1:
        return axis.reshape(-1, 1)
    grid = np.stack(np.meshgrid(*([axis] * dim), indexing="ij"), axis=-1).reshape(-1, dim)
    return grid[np.abs(grid).sum(axis=1) <= radius]


def _positive_leading(rows: np.ndarray) -> np.ndarray:
    """Mask of rows whose first nonzero entry is positive."""
    if rows.shape[1] == 0:
        return np.zeros(rows.shape[0], dtype=bool)
    nonzero = rows != 0
    has = nonzero.any(axis=1)
    first = np.argmax(nonzero, axis=1)
    leading = rows[np.arange(rows.shape[0]), first]
    return has & (leading > 0)


__all__ = [
    "ConstantsLedger",
    "DiophantineCertificate",
    "LogValue",
    "coefficient_a",
    "coefficient_c",
    "coefficient_e",
    "diophantine_certify",
    "epsilon_star",
    "epsilon_star_table",
    "hypothesis_report",
    "ledger_evaluate",
    "log_mu",
    "log_mu_ell",
    "pi_factor",
    "psi_factor",
]

"""Homological equation solver for the identity and KAM divisors."""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .core_symbols import (
    AtomicSymbol,
    Context,
    merge_add,
    oscillating_part,
    pointwise_product,
    prune,
    sum_symbols,
    weighted_norm,
    x_average,
)
from .errors import (
    BudgetExceeded,
    InputError,
    NeumannDiverges,
    ResonantMode,
    ZeroShift,
)
from .moyal_algebra import DEFAULT_ATOM_BUDGET, moyal_bracket

logger = logging.getLogger(__name__)

# relative size of <omega, q> below which a mode counts as resonant
RESONANCE_RTOL = 1e-15
MAX_NEUMANN_ORDER = 200


@dataclass(frozen=True)
class DivisorTerm:
    """One accumulated correction eps_s N_s measured at radius rho_s."""

    epsilon: float
    symbol: AtomicSymbol
    rho: float
    d: float

    def __post_init__(self) -> None:
        if not self.symbol.is_x_independent() or self.symbol.linear != 0.0:
            raise InputError("divisor corrections must be x-independent atoms")


@dataclass(frozen=True)
class DivisorModel:
    """
    F(u) = u + sum_s eps_s N_s(u); the empty model is the identity divisor.

    Attributes:
        terms: Accumulated corrections in step order
    """

    terms: Tuple[DivisorTerm, ...] = ()

    @property
    def is_identity(self) -> bool:
        return all(term.symbol.size == 0 for term in self.terms)

    def theta(self) -> float:
        """Contraction factor sum |eps_s| |N_s|_{rho_s} / (e d_s)."""
        return float(
            sum(
                abs(term.epsilon) * weighted_norm(term.symbol, term.rho)
                / (math.e * term.d)
                for term in self.terms
            )
        )

    def phi(self, l: int) -> AtomicSymbol:
        """The correction Phi = sum_s eps_s N_s as one symbol."""
        return sum_symbols(l, (term.symbol.scaled(term.epsilon) for term in self.terms))

    def symbol(self, l: int) -> AtomicSymbol:
        """F(L_omega) = L_omega + Phi(L_omega)."""
        return merge_add(AtomicSymbol.linear_symbol(l), self.phi(l))

    def extended(self, term: DivisorTerm) -> "DivisorModel":
        """Return the model with one more correction appended."""
        return DivisorModel(self.terms + (term,))


@dataclass
class HomologicalSolution:
    """
    Solution (W, N) of {F(L_omega), W} + V = N.

    Attributes:
        W: Generator, no q = 0 atoms
        N: q = 0 part of V
        residual_bound: Bound on the weighted norm of the equation residual
        neumann_order: Largest Neumann order used over all modes
        mode_theta: Measured contraction factor per mode
    """

    W: AtomicSymbol
    N: AtomicSymbol
    residual_bound: float
    neumann_order: int
    mode_theta: List[float] = field(default_factory=list)


def build_g(div: DivisorModel, zeta: float, ctx: Context) -> AtomicSymbol:
    """
    Difference quotient g(u, zeta) = (Phi(u + zeta) - Phi(u)) / zeta.

    Raises:
        ZeroShift: If zeta is zero
    """
    if zeta == 0.0:
        raise ZeroShift("difference quotient needs a nonzero shift")
    phi = div.phi(ctx.l)
    factor = (np.exp(1j * zeta * phi.p) - 1.0) / zeta
    return AtomicSymbol(ctx.l, phi.p, phi.q, phi.a * factor, hbar_tag=phi.hbar_tag)


def centred_g(div: DivisorModel, zeta: float, ctx: Context) -> AtomicSymbol:
    """
    build_g recentred at the midpoint u - zeta/2.

    Its atoms carry 2i sin(zeta p / 2) / zeta. Under Weyl symbols the
    divisor difference is taken between the two half-shifted arguments,
    so this is the form the per-mode Neumann series uses.
    """
    if zeta == 0.0:
        raise ZeroShift("difference quotient needs a nonzero shift")
    phi = div.phi(ctx.l)
    factor = 2j * np.sin(0.5 * zeta * phi.p) / zeta
    return AtomicSymbol(ctx.l, phi.p, phi.q, phi.a * factor, hbar_tag=phi.hbar_tag)


def solve_homological(
    v: AtomicSymbol,
    div: DivisorModel,
    ctx: Context,
    rho_in: float,
    d: float,
    tol: float = 1e-10,
    atom_budget: int = DEFAULT_ATOM_BUDGET,
) -> HomologicalSolution:
    """
    Solve {F(L_omega), W}_M + V = N for (W, N).

    N is the q = 0 part of V. For the identity divisor each oscillating atom
    gives the W atom v / (i <omega, q>). For a KAM divisor each mode q is
    divided by i <omega, q> (1 + g_q) where g_q is the centred difference
    quotient at zeta = hbar <omega, q>; the inverse of 1 + g_q is the
    Neumann series sum (-g_q)^n, cut when
    theta_q^(n+1) / (1 - theta_q) |V_q|_rho_in < tol |V|_rho_in.

    Args:
        v: Right-hand side
        div: Divisor model
        ctx: Computational context
        rho_in: Radius at which V is measured
        d: Radius loss granted to the solution, 0 < d < rho_in
        tol: Neumann tolerance relative to |V|_rho_in
        atom_budget: Largest atom count allowed per mode

    Returns:
        The solution with its residual bound

    Raises:
        NeumannDiverges: If theta of the divisor is at least one
        ResonantMode: If V carries amplitude on a mode with <omega, q> = 0
    """
    if not 0.0 < d < rho_in:
        raise InputError(f"need 0 < d < rho_in, got d = {d}, rho_in = {rho_in}")
    if v.linear != 0.0:
        raise InputError("right-hand side of the homological equation must be atomic")
    theta = div.theta()
    if theta >= 1.0:
        raise NeumannDiverges(f"divisor contraction theta = {theta:.4g} >= 1", theta=theta)

    n_part = x_average(v)
    osc = oscillating_part(v)
    if osc.size == 0:
        return HomologicalSolution(AtomicSymbol.empty(ctx.l, v.hbar_tag), n_part, 0.0, 0)

    freq = ctx.frequencies(osc.q)
    scale = np.abs(osc.q) @ np.abs(ctx.omega_array)
    resonant = np.abs(freq) <= RESONANCE_RTOL * scale
    if resonant.any():
        q_bad = osc.q[np.argmax(resonant)]
        raise ResonantMode(
            f"mode q = {tuple(int(c) for c in q_bad)} is resonant: <omega, q> = 0",
            q=q_bad,
        )

    if div.is_identity:
        w = AtomicSymbol(ctx.l, osc.p, osc.q, osc.a / (1j * freq), hbar_tag=v.hbar_tag)
        logger.debug(f"Identity divisor solve: {osc.size} atoms")
        return HomologicalSolution(w, n_part, 0.0, 0)

    tol_abs = tol * weighted_norm(v, rho_in)
    pieces: List[AtomicSymbol] = []
    residual = 0.0
    max_order = 0
    thetas: List[float] = []
    for q in osc.modes():
        v_q = osc.select(np.all(osc.q == q, axis=1))
        wq = float(q @ ctx.omega_array)
        g = centred_g(div, ctx.hbar * wq, ctx)
        theta_q = weighted_norm(g, rho_in)
        if theta_q >= 1.0:
            raise NeumannDiverges(
                f"mode {tuple(int(c) for c in q)} has contraction {theta_q:.4g} >= 1",
                theta=theta_q,
            )
        norm_q = weighted_norm(v_q, rho_in)
        term = v_q
        acc = [v_q]
        order = 0
        dropped = 0.0
        while theta_q ** (order + 1) / (1.0 - theta_q) * norm_q >= tol_abs:
            if order >= MAX_NEUMANN_ORDER:
                raise NeumannDiverges(
                    f"Neumann series for mode {tuple(int(c) for c in q)} "
                    f"did not converge in {MAX_NEUMANN_ORDER} terms",
                    theta=theta_q,
                )
            term = pointwise_product(term, g).scaled(-1.0)
            term, slack = prune(term, rho_in, tol_abs * 1e-3)
            dropped += slack
            if term.size > atom_budget:
                raise BudgetExceeded(
                    f"Neumann term has {term.size} atoms, budget {atom_budget}",
                    atoms=term.size,
                )
            acc.append(term)
            order += 1
        quotient = sum_symbols(ctx.l, acc)
        pieces.append(quotient.scaled(1.0 / (1j * wq)))
        residual += theta_q ** (order + 1) * norm_q + dropped
        max_order = max(max_order, order)
        thetas.append(theta_q)

    w = sum_symbols(ctx.l, pieces).with_tag(v.hbar_tag)
    logger.debug(
        f"KAM divisor solve: {len(thetas)} modes, max theta {max(thetas):.3e}, "
        f"Neumann order {max_order}, residual bound {residual:.3e}"
    )
    return HomologicalSolution(w, n_part, residual, max_order, thetas)


def verify_homological(
    sol: HomologicalSolution,
    v: AtomicSymbol,
    div: DivisorModel,
    ctx: Context,
    rho_out: float,
) -> float:
    """
    Weighted norm of {F(L_omega), W}_M + V - N at rho_out.

    The bracket with F(L_omega) is exact on atoms for every divisor.
    """
    lhs = moyal_bracket(div.symbol(ctx.l), sol.W, ctx)
    residual = merge_add(merge_add(lhs, v), sol.N.scaled(-1.0))
    return weighted_norm(residual, rho_out)


def mode_amplification(
    sol: HomologicalSolution, v: AtomicSymbol, ctx: Context, rho: float
) -> List[Tuple[Tuple[int, ...], float]]:
    """Ratio |W_q|_rho / |V_q|_rho for every oscillating mode of V."""
    osc = oscillating_part(v)
    ratios = []
    for q in osc.modes():
        v_q = osc.select(np.all(osc.q == q, axis=1))
        w_q = sol.W.select(np.all(sol.W.q == q, axis=1))
        ratios.append(
            (tuple(int(c) for c in q), weighted_norm(w_q, rho) / weighted_norm(v_q, rho))
        )
    return ratios


__all__ = [
    "DivisorModel",
    "DivisorTerm",
    "HomologicalSolution",
    "build_g",
    "centred_g",
    "mode_amplification",
    "solve_homological",
    "verify_homological",
]

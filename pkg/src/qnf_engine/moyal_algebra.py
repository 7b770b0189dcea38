"""Star product, Moyal bracket and adjoint series on atomic symbols."""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from .core_symbols import (
    AtomicSymbol,
    Context,
    combine_tags,
    prune,
    sum_symbols,
    weighted_norm,
)
from .errors import BudgetExceeded, InputError, NotAtomic, SeriesDiverges

logger = logging.getLogger(__name__)

# pairs per vectorized block in the pairwise product
PAIR_BLOCK = 2_000_000
DEFAULT_ATOM_BUDGET = 200_000

Kernel = Callable[[np.ndarray], np.ndarray]


@dataclass
class SlackLedger:
    """
    Accumulates the weighted norm of everything a computation dropped.

    Each entry is keyed by the operation that produced it so reports can
    show where the truncation budget went.
    """

    entries: List[tuple] = field(default_factory=list)

    def add(self, source: str, amount: float) -> None:
        """Record a dropped amount."""
        if amount > 0.0:
            self.entries.append((source, float(amount)))

    @property
    def total(self) -> float:
        """Sum of all recorded amounts."""
        return float(sum(amount for _, amount in self.entries))


def symplectic_phase(
    p_f: np.ndarray,
    q_f: np.ndarray,
    p_g: np.ndarray,
    q_g: np.ndarray,
    omega: np.ndarray,
) -> np.ndarray:
    """
    Pairwise phase Omega = p_F <omega, q_G> - p_G <omega, q_F>.

    Returns:
        Array of shape (len(p_f), len(p_g)), antisymmetric under swapping
        the two argument pairs
    """
    return np.outer(p_f, q_g @ omega) - np.outer(q_f @ omega, p_g)


def star_product(
    f: AtomicSymbol,
    g: AtomicSymbol,
    ctx: Context,
    rho: Optional[float] = None,
    tol: float = 0.0,
    ledger: Optional[SlackLedger] = None,
) -> AtomicSymbol:
    """
    Symbol of the operator product F^ G^.

    Each atom pair contributes a_F a_G exp(i hbar Omega / 2) at the key
    (p_F + p_G, q_F + q_G).

    Args:
        f: Left factor
        g: Right factor
        ctx: Computational context
        rho: Radius used for pruning, defaults to ctx.rho
        tol: Pruning threshold on weighted atom contributions
        ledger: Optional slack ledger receiving the pruned norm

    Returns:
        Merged product symbol tagged with ctx.hbar

    Raises:
        NotAtomic: If either factor carries an L_omega part
    """
    if f.linear != 0.0 or g.linear != 0.0:
        raise NotAtomic("star product is defined on atoms only; L_omega is unbounded")
    half_hbar = 0.5 * ctx.hbar
    tag = combine_tags(f.hbar_tag, g.hbar_tag, ctx.hbar)
    product = _pairwise(
        f, g, ctx.omega_array, lambda phase: np.exp(1j * half_hbar * phase), tag
    )
    return _pruned(product, ctx, rho, tol, ledger, "star_product")


def moyal_bracket(
    f: AtomicSymbol,
    g: AtomicSymbol,
    ctx: Context,
    rho: Optional[float] = None,
    tol: float = 0.0,
    ledger: Optional[SlackLedger] = None,
) -> AtomicSymbol:
    """
    Symbol of the scaled commutator [F^, G^] / (i hbar).

    Atom pairs contribute a_F a_G (2/hbar) sin(hbar Omega / 2). L_omega
    parts bracket exactly: {F, L_omega} = i <omega, q> a atom-wise.
    """
    hbar = ctx.hbar
    tag = combine_tags(f.hbar_tag, g.hbar_tag, hbar)
    bracket = _bracket(
        f, g, ctx, lambda phase: (2.0 / hbar) * np.sin(0.5 * hbar * phase), tag
    )
    return _pruned(bracket, ctx, rho, tol, ledger, "moyal_bracket")


def poisson_bracket(
    f: AtomicSymbol,
    g: AtomicSymbol,
    ctx: Context,
    rho: Optional[float] = None,
    tol: float = 0.0,
    ledger: Optional[SlackLedger] = None,
) -> AtomicSymbol:
    """
    Poisson bracket d_x F . d_xi G - d_xi F . d_x G, the hbar -> 0 limit.

    The result is tagged only when an input was, since the kernel itself
    does not depend on hbar.
    """
    tag = combine_tags(f.hbar_tag, g.hbar_tag)
    bracket = _bracket(f, g, ctx, lambda phase: phase, tag)
    return _pruned(bracket, ctx, rho, tol, ledger, "poisson_bracket")


def moyal_bracket_truncated(
    f: AtomicSymbol, g: AtomicSymbol, ctx: Context, j: int
) -> AtomicSymbol:
    """
    Bracket with the sine kernel cut after its j-th hbar^2 correction.

    j = 0 reproduces the Poisson bracket.
    """
    if j < 0:
        raise InputError(f"truncation order must be nonnegative, got {j}")
    hbar = ctx.hbar

    def kernel(phase: np.ndarray) -> np.ndarray:
        total = np.zeros_like(phase)
        for i in range(j + 1):
            total = total + (
                (-1) ** i * hbar ** (2 * i) * phase ** (2 * i + 1)
                / (4**i * math.factorial(2 * i + 1))
            )
        return total

    return _bracket(f, g, ctx, kernel, combine_tags(f.hbar_tag, g.hbar_tag, hbar))


def poisson_limit_residual(
    f: AtomicSymbol, g: AtomicSymbol, ctx: Context
) -> float:
    """Weighted norm at rho/2 of the Moyal bracket minus the Poisson bracket."""
    difference = moyal_bracket(f, g, ctx) - poisson_bracket(f, g, ctx)
    return weighted_norm(difference, ctx.rho / 2.0)


@dataclass
class AdjointSeries:
    """
    Truncated power series sum_m t^m / m! ad_W^m(X) with ad_W(X) = {X, W}.

    Attributes:
        terms: terms[m] = ad_W^m(X) / m!
        order: Truncation order m*
        tail_bound: Bound on the dropped tail at |t| = t_max, radius rho - d
        pruned: Weighted norm removed by pruning, scaled by t_max^m
        t_max: Largest |t| the bounds were computed for
    """

    terms: List[AtomicSymbol]
    order: int
    tail_bound: float
    pruned: float
    t_max: float

    def evaluate(self, t: float) -> AtomicSymbol:
        """Sum the series at a given t."""
        if abs(t) > self.t_max * (1 + 1e-12):
            raise InputError(f"t = {t} exceeds the series range {self.t_max}")
        l = self.terms[0].l
        return sum_symbols(l, (term.scaled(t**m) for m, term in enumerate(self.terms)))

    def integrate(self, weights: List[float]) -> AtomicSymbol:
        """Return sum_m weights[m] * terms[m] for m up to the order."""
        l = self.terms[0].l
        return sum_symbols(
            l, (term.scaled(w) for term, w in zip(self.terms, weights))
        )


def adjoint_series(
    w: AtomicSymbol,
    x: AtomicSymbol,
    ctx: Context,
    t_max: float,
    rho: float,
    d: float,
    tol: float,
    max_order: int = 120,
    atom_budget: int = DEFAULT_ATOM_BUDGET,
    bracket: Callable[..., AtomicSymbol] = moyal_bracket,
) -> AdjointSeries:
    """
    Expand exp(i t W^/hbar) X^ exp(-i t W^/hbar) in powers of t.

    Terms are generated until the iterated bracket bound on the tail,
    sum_{r>m} |t|^r sqrt(2 pi r) (kappa |W|_rho)^r |X|_rho / (e d d^r),
    drops below tol. An L_omega part of X is handled through its first
    bracket, which is exact and bounded at the full radius.

    Args:
        w: Generator, atomic
        x: Conjugated symbol
        ctx: Computational context
        t_max: Largest |t| the series must cover
        rho: Radius at which norms are measured
        d: Radius loss; the tail is bounded at rho - d
        tol: Tail tolerance; also the pruning threshold per term
        max_order: Hard cap on the number of brackets
        atom_budget: Largest atom count allowed in a term
        bracket: Bracket used for ad_W, Moyal by default

    Returns:
        Truncated series

    Raises:
        SeriesDiverges: If |t_max| kappa |W|_rho / d >= 1 or the cap is hit
        BudgetExceeded: If a term grows beyond the atom budget
    """
    if tol <= 0.0:
        raise InputError(f"tail tolerance must be positive, got {tol}")
    if not 0.0 < d <= rho:
        raise InputError(f"radius loss d must lie in (0, rho], got d = {d}, rho = {rho}")
    if w.linear != 0.0:
        raise NotAtomic("the generator of a conjugation must be atomic")
    t_abs = abs(t_max)
    norm_w = weighted_norm(w, rho)
    ratio = t_abs * ctx.kappa * norm_w / d
    if ratio >= 1.0:
        raise SeriesDiverges(
            f"conjugation series needs |t| kappa |W| / d < 1, got {ratio:.4g}",
            ratio=ratio,
        )

    terms = [x]
    pruned_total = 0.0
    if w.size == 0 or t_abs == 0.0:
        return AdjointSeries(terms, 0, 0.0, 0.0, t_abs)

    base_norm = weighted_norm(x, rho)
    linear_norm = 0.0
    if x.linear != 0.0:
        linear_norm = weighted_norm(
            bracket(AtomicSymbol.linear_symbol(x.l, x.linear), w, ctx), rho
        )
    bound = _TailBound(t_abs, ratio, d, base_norm, linear_norm)

    current = x
    exact = False
    m = 0
    while True:
        tail = bound.tail(m)
        if tail < tol or exact or current.is_empty:
            break
        if m >= max_order:
            raise SeriesDiverges(
                f"conjugation series did not reach tol {tol:g} within {max_order} terms",
                tail=tail,
            )
        m += 1
        current = bracket(current, w, ctx).scaled(1.0 / m)
        exact = current.is_empty
        if not exact:
            threshold = tol * math.exp(min(700.0, -m * math.log(t_abs)))
            current, dropped = prune(current, rho, threshold)
            pruned_total += dropped * t_abs**m
        if current.size > atom_budget:
            raise BudgetExceeded(
                f"conjugation term {m} has {current.size} atoms, budget {atom_budget}",
                atoms=current.size,
            )
        terms.append(current)
    tail = 0.0 if exact else bound.tail(m)
    logger.debug(
        f"Adjoint series: order {m}, tail {tail:.3e}, pruned {pruned_total:.3e}"
    )
    return AdjointSeries(terms, m, tail, pruned_total, t_abs)


class _TailBound:
    """Geometric tail of the iterated bracket bound."""

    def __init__(
        self, t_abs: float, ratio: float, d: float, base: float, linear: float
    ) -> None:
        self._t = t_abs
        self._ratio = ratio
        self._d = d
        self._base = base
        self._linear = linear

    def _coefficient(self, r: int) -> float:
        # bound on |t|^r |ad^r X / r!|_{rho - d}
        atoms = (
            math.sqrt(2 * math.pi * r) * self._ratio**r * self._base
            / (math.e * self._d)
        )
        if self._linear == 0.0:
            return atoms
        if r == 1:
            return atoms + self._t * self._linear
        inner = (
            math.sqrt(2 * math.pi * (r - 1)) * self._ratio ** (r - 1) * self._linear
            / (math.e * self._d)
        )
        return atoms + self._t * inner

    def tail(self, m: int) -> float:
        total = 0.0
        r = m + 1
        while True:
            term = self._coefficient(r)
            total += term
            if term <= 1e-17 * total or r > m + 10_000:
                return total
            r += 1


def _pairwise(
    f: AtomicSymbol,
    g: AtomicSymbol,
    omega: np.ndarray,
    kernel: Kernel,
    tag: Optional[float],
) -> AtomicSymbol:
    """All atom pairs of f and g with amplitude a_F a_G kernel(Omega)."""
    l = f.l
    if f.size == 0 or g.size == 0:
        return AtomicSymbol.empty(l, hbar_tag=tag)
    rows = max(1, PAIR_BLOCK // g.size)
    blocks = []
    for start in range(0, f.size, rows):
        stop = min(f.size, start + rows)
        p_f, q_f, a_f = f.p[start:stop], f.q[start:stop], f.a[start:stop]
        phase = symplectic_phase(p_f, q_f, g.p, g.q, omega)
        blocks.append(
            AtomicSymbol(
                l,
                np.add.outer(p_f, g.p).ravel(),
                (q_f[:, None, :] + g.q[None, :, :]).reshape(-1, l),
                (np.outer(a_f, g.a) * kernel(phase)).ravel(),
            )
        )
    return sum_symbols(l, blocks).with_tag(tag)


def _bracket(
    f: AtomicSymbol,
    g: AtomicSymbol,
    ctx: Context,
    kernel: Kernel,
    tag: Optional[float],
) -> AtomicSymbol:
    """Pairwise bracket plus the exact contributions of L_omega parts."""
    if f.l != g.l:
        raise InputError(f"cannot bracket symbols of dimension {f.l} and {g.l}")
    f_atoms = f.without_linear()
    g_atoms = g.without_linear()
    parts = [_pairwise(f_atoms, g_atoms, ctx.omega_array, kernel, tag)]
    if f.linear != 0.0 and g_atoms.size:
        # {L, G} = -i <omega, q_G> a_G
        amp = -1j * f.linear * ctx.frequencies(g_atoms.q) * g_atoms.a
        parts.append(AtomicSymbol(f.l, g_atoms.p, g_atoms.q, amp, hbar_tag=tag))
    if g.linear != 0.0 and f_atoms.size:
        # {F, L} = i <omega, q_F> a_F
        amp = 1j * g.linear * ctx.frequencies(f_atoms.q) * f_atoms.a
        parts.append(AtomicSymbol(f.l, f_atoms.p, f_atoms.q, amp, hbar_tag=tag))
    return sum_symbols(f.l, parts)


def _pruned(
    s: AtomicSymbol,
    ctx: Context,
    rho: Optional[float],
    tol: float,
    ledger: Optional[SlackLedger],
    source: str,
) -> AtomicSymbol:
    if tol <= 0.0:
        return s
    result, slack = prune(s, ctx.rho if rho is None else rho, tol)
    if ledger is not None:
        ledger.add(source, slack)
    return result


__all__ = [
    "AdjointSeries",
    "SlackLedger",
    "adjoint_series",
    "moyal_bracket",
    "moyal_bracket_truncated",
    "poisson_bracket",
    "poisson_limit_residual",
    "star_product",
    "symplectic_phase",
]

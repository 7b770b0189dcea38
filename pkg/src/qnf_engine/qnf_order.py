"""Order-by-order quantum normal form."""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .core_symbols import AtomicSymbol, Context, prune, sum_symbols, weighted_norm
from .errors import BudgetExceeded, HypothesisViolated, InputError, NotReal
from .homological import DivisorModel, solve_homological
from .moyal_algebra import DEFAULT_ATOM_BUDGET, SlackLedger, moyal_bracket

logger = logging.getLogger(__name__)

MAX_ORDER = 6
NOT_REAL_RTOL = 1e-10

Bracket = Callable[..., AtomicSymbol]


@dataclass
class NormalForm:
    """
    Normal form L_omega + sum_s eps^s B_s up to order K.

    Attributes:
        order: K
        B: x-independent corrections B_1..B_K
        W: Generators W_1..W_K
        V: Right-hand sides V_1..V_K of the homological equations
        radius_schedule: Pairs (rho_s, d_s)
        norm_v: |V|_rho of the perturbation
        remainder_constant: E K of the remainder estimate
        hbar: hbar of the brackets, None on the classical track
        classical: True when built with the Poisson bracket
        checks: Per-order results of the norm checks
        slack: Weighted norm dropped by pruning
    """

    order: int
    B: List[AtomicSymbol]
    W: List[AtomicSymbol]
    V: List[AtomicSymbol]
    radius_schedule: List[Tuple[float, float]]
    norm_v: float
    remainder_constant: float
    hbar: Optional[float]
    classical: bool = False
    checks: List[Dict[str, Any]] = field(default_factory=list)
    slack: float = 0.0

    def to_report(self) -> Dict[str, Any]:
        """Structured report with per-order atom tables and norms."""
        orders = []
        for s, (b, w, v) in enumerate(zip(self.B, self.W, self.V), start=1):
            rho_s, d_s = self.radius_schedule[s - 1]
            orders.append(
                {
                    "s": s,
                    "rho_s": rho_s,
                    "d_s": d_s,
                    "norm_V": weighted_norm(v, rho_s),
                    "norm_B": weighted_norm(b, rho_s),
                    "norm_W": weighted_norm(w, rho_s - d_s),
                    "atoms_V": v.size,
                    "atoms_W": w.size,
                    "B": _atom_table(b),
                    "checks": self.checks[s - 1],
                }
            )
        return {
            "order": self.order,
            "hbar": self.hbar,
            "classical": self.classical,
            "norm_V": self.norm_v,
            "remainder_constant": self.remainder_constant,
            "slack": self.slack,
            "orders": orders,
        }


@dataclass(frozen=True)
class RemainderBound:
    """Closed-form remainder estimate of a normal form."""

    remainder: float
    b_series: float
    mu: Tuple[float, ...]
    rigorous: bool


def default_radius_schedule(rho: float, order: int) -> List[Tuple[float, float]]:
    """
    Pairs (rho_s, d_s) with d_s = (rho/2) / (s+1)^2 and rho_{s+1} = rho_s - d_s.

    Since sum_s 1/(s+1)^2 < 1, every rho_s - d_s stays above rho/2.
    """
    schedule = []
    rho_s = rho
    for s in range(1, order + 1):
        d_s = 0.5 * rho / (s + 1) ** 2
        schedule.append((rho_s, d_s))
        rho_s -= d_s
    return schedule


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Ordered tuples of `parts` positive integers summing to `total`."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for head in range(1, total - parts + 2):
        for tail in compositions(total - head, parts - 1):
            yield (head,) + tail


class _NestedBrackets:
    """Memoized ad_{W_j1} ad_{W_j2} ... ad_{W_jr}(base) by index tuple."""

    def __init__(
        self,
        base: AtomicSymbol,
        generators: Dict[int, AtomicSymbol],
        bracket: Bracket,
        ctx: Context,
        tol: float,
        ledger: SlackLedger,
    ) -> None:
        self._base = base
        self._generators = generators
        self._bracket = bracket
        self._ctx = ctx
        self._tol = tol
        self._ledger = ledger
        self._cache: Dict[Tuple[int, ...], AtomicSymbol] = {}

    def __call__(self, indices: Tuple[int, ...]) -> AtomicSymbol:
        if not indices:
            return self._base
        cached = self._cache.get(indices)
        if cached is not None:
            return cached
        inner = self(indices[1:])
        result = self._bracket(
            inner, self._generators[indices[0]], self._ctx,
            tol=self._tol, ledger=self._ledger,
        )
        self._cache[indices] = result
        return result


def qnf_construct(
    v: AtomicSymbol,
    order: int,
    ctx: Context,
    schedule: Optional[Sequence[Tuple[float, float]]] = None,
    bracket: Bracket = moyal_bracket,
    tol_prune: float = 0.0,
    atom_budget: int = DEFAULT_ATOM_BUDGET,
) -> NormalForm:
    """
    Build the normal form to order K with the identity divisor.

    With W = sum_s eps^s W_s, order s collects
    sum_{r>=2} 1/r! sum over compositions of s into r parts of
    ad_{W_j1} ... ad_{W_jr}(L_omega), plus
    sum_{r>=1} 1/r! sum over compositions of s-1 into r parts of
    ad_{W_j1} ... ad_{W_jr}(V), where ad_W(X) = {X, W}. Then
    {L_omega, W_s} + V_s = B_s is solved exactly.

    Args:
        v: Perturbation
        order: K, at most 6
        ctx: Computational context
        schedule: Radius pairs (rho_s, d_s); the default halves rho
        bracket: Moyal for the quantum track, Poisson for the classical one
        tol_prune: Pruning threshold for intermediate brackets
        atom_budget: Largest atom count allowed for any V_s

    Returns:
        The normal form

    Raises:
        ResonantMode: From the homological solves
        BudgetExceeded: If an order grows past the atom budget
    """
    if not 1 <= order <= MAX_ORDER:
        raise InputError(f"order must lie in [1, {MAX_ORDER}], got {order}")
    if v.linear != 0.0:
        raise InputError("the perturbation must be atomic")
    if schedule is None:
        schedule = default_radius_schedule(ctx.rho, order)
    schedule = list(schedule)
    if len(schedule) < order:
        raise InputError(f"radius schedule has {len(schedule)} entries, need {order}")
    classical = bracket is not moyal_bracket
    ledger = SlackLedger()
    generators: Dict[int, AtomicSymbol] = {}
    linear = AtomicSymbol.linear_symbol(ctx.l)
    from_linear = _NestedBrackets(linear, generators, bracket, ctx, tol_prune, ledger)
    from_v = _NestedBrackets(v, generators, bracket, ctx, tol_prune, ledger)

    b_list: List[AtomicSymbol] = []
    w_list: List[AtomicSymbol] = []
    v_list: List[AtomicSymbol] = []
    checks: List[Dict[str, Any]] = []
    for s in range(1, order + 1):
        rho_s, d_s = schedule[s - 1]
        if s == 1:
            v_s = v
        else:
            parts = []
            for r in range(2, s + 1):
                for comp in compositions(s, r):
                    parts.append(from_linear(comp).scaled(1.0 / math.factorial(r)))
            for r in range(1, s):
                for comp in compositions(s - 1, r):
                    parts.append(from_v(comp).scaled(1.0 / math.factorial(r)))
            v_s = sum_symbols(ctx.l, parts).without_linear()
            if tol_prune > 0.0:
                v_s, dropped = prune(v_s, rho_s, tol_prune)
                ledger.add(f"V_{s}", dropped)
        if v_s.size > atom_budget:
            raise BudgetExceeded(
                f"order {s} has {v_s.size} atoms, budget {atom_budget}", atoms=v_s.size
            )
        solution = solve_homological(v_s, DivisorModel(), ctx, rho_s, d_s)
        generators[s] = solution.W
        b_list.append(solution.N)
        w_list.append(solution.W)
        v_list.append(v_s)
        checks.append(_order_checks(v_s, solution.N, solution.W, rho_s, d_s, ctx))
        logger.debug(
            f"Order {s}: |V_s| = {checks[-1]['norm_V']:.4e}, "
            f"{v_s.size} atoms, {solution.W.size} generator atoms"
        )

    norm_v = weighted_norm(v, ctx.rho)
    return NormalForm(
        order=order,
        B=b_list,
        W=w_list,
        V=v_list,
        radius_schedule=schedule[:order],
        norm_v=norm_v,
        remainder_constant=norm_v * remainder_k(ctx),
        hbar=None if classical else ctx.hbar,
        classical=classical,
        checks=checks,
        slack=ledger.total,
    )


def qnf_eigenvalue(
    nf: NormalForm, n: Sequence[int], epsilon: float, ctx: Context
) -> float:
    """
    Evaluate hbar <omega, n> + sum_s eps^s B_s(hbar <omega, n>).

    Raises:
        NotReal: If the imaginary part exceeds 1e-10 of the magnitude
    """
    return float(qnf_eigenvalues(nf, np.asarray(n).reshape(1, -1), epsilon, ctx)[0])


def qnf_eigenvalues(
    nf: NormalForm, ns: np.ndarray, epsilon: float, ctx: Context
) -> np.ndarray:
    """Vectorized qnf_eigenvalue over the rows of ns."""
    t = ctx.hbar * (np.asarray(ns, dtype=float) @ ctx.omega_array)
    total = t.astype(complex)
    magnitude = np.abs(t)
    for s, b in enumerate(nf.B, start=1):
        weight = epsilon**s
        if weight == 0.0 or b.size == 0:
            continue
        values = b.evaluate_mean(t)
        total = total + weight * values
        magnitude = magnitude + abs(weight) * float(np.abs(b.a).sum())
    imag = np.abs(total.imag)
    bad = imag > NOT_REAL_RTOL * np.maximum(magnitude, 1e-300)
    if bad.any():
        raise NotReal(
            f"normal form eigenvalue has imaginary part {float(imag.max()):.3e}",
            imag=float(imag.max()),
        )
    return total.real


def remainder_k(ctx: Context) -> float:
    """K = 8 2^(tau+5) gamma tau^tau / rho^(2+tau)."""
    tau = ctx.tau
    return 8.0 * 2.0 ** (tau + 5) * ctx.gamma * tau**tau / ctx.rho ** (2.0 + tau)


def qnf_remainder_bound(
    nf: NormalForm, epsilon: float, ctx: Context, strict: bool = False
) -> RemainderBound:
    """
    Closed-form bounds on the remainder and on the B-series.

    remainder = (E K)^(k+1) (k+1)^((tau+2)(k+1)) eps^(k+1), and the
    B-series bound is sum_s E^s K^s s^((tau+2)s) eps^s with E = |V|_rho.
    Rigor needs mu_s = 8 gamma tau^tau E / (d_s^tau delta_s^2) < 1/2 with
    delta_s taken equal to d_s.

    Raises:
        HypothesisViolated: Only when strict is set and some mu_s >= 1/2
    """
    tau = ctx.tau
    ek = nf.remainder_constant
    k = nf.order
    eps = abs(epsilon)
    if eps == 0.0:
        remainder = 0.0
        b_series = 0.0
    else:
        remainder = _exp_or_inf(
            (k + 1) * (math.log(ek) + (tau + 2) * math.log(k + 1) + math.log(eps))
        )
        b_series = sum(
            _exp_or_inf(s * (math.log(ek) + (tau + 2) * math.log(s) + math.log(eps)))
            for s in range(1, k + 1)
        )
    mus = tuple(
        8.0 * ctx.gamma * tau**tau * nf.norm_v / (d_s**tau * d_s**2)
        for _, d_s in nf.radius_schedule
    )
    rigorous = all(mu < 0.5 for mu in mus)
    if not rigorous:
        message = (
            f"remainder bound is not rigorous: max mu_s = {max(mus):.4g} >= 1/2"
        )
        if strict:
            raise HypothesisViolated(message, mu=list(mus))
        logger.warning(message)
    return RemainderBound(remainder, b_series, mus, rigorous)


def _order_checks(
    v_s: AtomicSymbol,
    b_s: AtomicSymbol,
    w_s: AtomicSymbol,
    rho_s: float,
    d_s: float,
    ctx: Context,
) -> Dict[str, Any]:
    norm_v = weighted_norm(v_s, rho_s)
    norm_b = weighted_norm(b_s, rho_s)
    norm_w = weighted_norm(w_s, rho_s - d_s)
    w_bound = ctx.gamma * (ctx.tau / d_s) ** ctx.tau * norm_v
    return {
        "norm_V": norm_v,
        "norm_B": norm_b,
        "norm_W": norm_w,
        "W_bound": w_bound,
        "B_le_V": norm_b <= norm_v * (1 + 1e-12),
        "W_le_bound": norm_w <= w_bound * (1 + 1e-12),
    }


def _atom_table(s: AtomicSymbol) -> List[List[float]]:
    return [
        [float(a.real), float(a.imag), float(p)] + [int(v) for v in q]
        for p, q, a in zip(s.p, s.q, s.a)
    ]


def _exp_or_inf(log_value: float) -> float:
    return math.inf if log_value > 709.0 else math.exp(log_value)


__all__ = [
    "NormalForm",
    "RemainderBound",
    "compositions",
    "default_radius_schedule",
    "qnf_construct",
    "qnf_eigenvalue",
    "qnf_eigenvalues",
    "qnf_remainder_bound",
    "remainder_k",
]

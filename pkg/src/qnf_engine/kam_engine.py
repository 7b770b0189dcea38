"""Superconvergent KAM iteration on atomic symbols."""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core_symbols import (
    AtomicSymbol,
    Context,
    merge_add,
    prune,
    weighted_norm,
)
from .errors import (
    InputError,
    NotHermitian,
    StepConditionViolated,
    ThetaTooLarge,
)
from .estimates import ConstantsLedger, ledger_evaluate, log_mu
from .homological import DivisorModel, DivisorTerm, solve_homological
from .moyal_algebra import DEFAULT_ATOM_BUDGET, adjoint_series, moyal_bracket
from .weyl_matrix import ModeBox, OperatorMatrix, matrix_exponential, quantize

logger = logging.getLogger(__name__)

MAX_STEPS = 4
UNDERFLOW_GUARD = 1e-250
UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class RadiusLedger:
    """
    Radii rho_0 = rho > rho_1 > ... with losses rho_{l+1} = rho_l - d_l.

    d_l = s / (l+1)^2 where s = 1 when rho > pi^2/3, which keeps
    rho - sum d_l > rho/2; for smaller rho the scale shrinks to
    0.9 * 3 rho / pi^2 so the same bound holds.
    """

    rho0: float
    d: Tuple[float, ...]
    rho: Tuple[float, ...]
    scale: float

    @classmethod
    def schedule(cls, rho0: float, steps: int) -> "RadiusLedger":
        if rho0 <= 0.0:
            raise InputError(f"rho must be positive, got {rho0}")
        scale = 1.0 if rho0 > math.pi**2 / 3.0 else 0.9 * 3.0 * rho0 / math.pi**2
        d = tuple(scale / (ell + 1) ** 2 for ell in range(steps + 1))
        rho = [rho0]
        for d_ell in d:
            rho.append(rho[-1] - d_ell)
        return cls(rho0=rho0, d=d, rho=tuple(rho), scale=scale)

    def delta(self, ell: int) -> float:
        """delta_l = sum_{s<l} d_s."""
        return float(sum(self.d[:ell]))


@dataclass(frozen=True)
class StepRecord:
    """Norms and constants of one completed step."""

    ell: int
    eps_ell: float
    norm_V: float
    norm_W: float
    norm_N: float
    theta: float
    A: float
    E: float
    slack: float
    neumann_order: int
    series_order: int

    def row(self) -> List[float]:
        return [
            self.ell, self.eps_ell, self.norm_V, self.norm_W, self.norm_N,
            self.theta, self.A, self.E, self.slack,
        ]


@dataclass(frozen=True)
class StepProduct:
    """Generator and mean part produced at a step."""

    W: AtomicSymbol
    N: AtomicSymbol
    epsilon: float
    V_before: AtomicSymbol
    V_after: AtomicSymbol
    divisor_before: DivisorModel


@dataclass(frozen=True)
class KamState:
    """
    State H_l = F_l + eps_l V_l of the iteration.

    Attributes:
        ell: Step index
        epsilon: Base epsilon
        epsilon_ell: eps^(2^l), built by repeated squaring
        divisor: Accumulated corrections defining F_l
        V_ell: Current perturbation
        ledger: Radius schedule
        v0_norm: |V_0|_rho
        records: Per-step records
        products: Per-step generators and means
        slack: Accumulated truncation budget
    """

    ell: int
    epsilon: float
    epsilon_ell: float
    divisor: DivisorModel
    V_ell: AtomicSymbol
    ledger: RadiusLedger
    v0_norm: float
    records: Tuple[StepRecord, ...] = ()
    products: Tuple[StepProduct, ...] = ()
    slack: float = 0.0

    @classmethod
    def initial(
        cls, v: AtomicSymbol, epsilon: float, rho: float, steps: int
    ) -> "KamState":
        return cls(
            ell=0,
            epsilon=epsilon,
            epsilon_ell=epsilon,
            divisor=DivisorModel(),
            V_ell=v,
            ledger=RadiusLedger.schedule(rho, steps),
            v0_norm=weighted_norm(v, rho),
        )

    @property
    def finished(self) -> bool:
        """True once V_l vanished or eps_l |V_l| fell below machine scale."""
        if self.V_ell.size == 0:
            return True
        size = abs(self.epsilon_ell) * weighted_norm(self.V_ell, self.ledger.rho[self.ell])
        return size < UNDERFLOW_GUARD

    def normal_form_symbol(self) -> AtomicSymbol:
        """D_l = L_omega + sum_{s<l} eps_s N_s."""
        return self.divisor.symbol(self.V_ell.l)


@dataclass
class KamRun:
    """Result of kam_run."""

    final: KamState
    D: AtomicSymbol
    records: List[StepRecord]
    ledgers: List[ConstantsLedger]
    diagnostics: Dict[str, Any] = field(default_factory=dict)


def kam_step(
    state: KamState,
    ctx: Context,
    tol: float = 1e-10,
    atom_budget: int = DEFAULT_ATOM_BUDGET,
) -> KamState:
    """
    One step H_l -> H_{l+1}.

    N_l is the mean of V_l and W_l solves {F_l, W} + V_l = N_l. The next
    perturbation is the Taylor remainder
    eps_l^2 V_{l+1} = int_0^{eps_l} (eps_l - t) conj_t(Y + t Z) dt with
    Y = {N, W} + {V, W} and Z = {{V, W}, W}, integrated term by term on
    the power series of conj_t.

    Args:
        state: Current state
        ctx: Computational context
        tol: Tolerance relative to |V_l| for solves and series
        atom_budget: Largest atom count allowed in any intermediate symbol

    Returns:
        The next state

    Raises:
        ThetaTooLarge: If the divisor contraction is at least one
        StepConditionViolated: If eps_l A |V_l| / d_l >= 1
    """
    ell = state.ell
    if ell + 1 >= len(state.ledger.rho):
        raise InputError(f"radius schedule does not cover step {ell}")
    rho_ell = state.ledger.rho[ell]
    d_ell = state.ledger.d[ell]
    theta = state.divisor.theta()
    if theta >= 1.0:
        raise ThetaTooLarge(f"step {ell}: theta = {theta:.4g} >= 1", theta=theta)
    constants = ledger_evaluate(state, ctx, 0)
    if constants.step_ratio >= 1.0:
        raise StepConditionViolated(
            f"step {ell}: eps A |V| / d = {constants.step_ratio:.4g} >= 1",
            ratio=constants.step_ratio,
        )

    v = state.V_ell
    eps = state.epsilon_ell
    norm_v = weighted_norm(v, rho_ell)
    tol_abs = tol * max(norm_v, 1e-300)
    solution = solve_homological(v, state.divisor, ctx, rho_ell, d_ell, tol, atom_budget)
    w, n = solution.W, solution.N

    slack = solution.residual_bound
    series_order = 0
    if w.size == 0:
        v_next = AtomicSymbol.empty(ctx.l, hbar_tag=ctx.hbar)
    else:
        vw = moyal_bracket(v, w, ctx)
        y = merge_add(moyal_bracket(n, w, ctx), vw)
        z = moyal_bracket(vw, w, ctx)
        series_y = adjoint_series(w, y, ctx, eps, rho_ell, d_ell, tol_abs,
                                  atom_budget=atom_budget)
        series_z = adjoint_series(w, z, ctx, eps, rho_ell, d_ell, tol_abs,
                                  atom_budget=atom_budget)
        weights_y = [eps**m / ((m + 1) * (m + 2))
                     for m in range(series_y.order + 1)]
        weights_z = [eps ** (m + 1) / ((m + 2) * (m + 3))
                     for m in range(series_z.order + 1)]
        v_next = merge_add(series_y.integrate(weights_y), series_z.integrate(weights_z))
        v_next, dropped = prune(v_next, state.ledger.rho[ell + 1], tol_abs * 1e-3)
        slack += (
            0.5 * (series_y.tail_bound + series_y.pruned)
            + abs(eps) / 6.0 * (series_z.tail_bound + series_z.pruned)
            + dropped
        )
        series_order = max(series_y.order, series_z.order)

    if not v_next.is_real(rtol=1e-9):
        logger.warning(f"step {ell}: next perturbation lost Hermitian symmetry")

    record = StepRecord(
        ell=ell,
        eps_ell=eps,
        norm_V=norm_v,
        norm_W=weighted_norm(w, rho_ell),
        norm_N=weighted_norm(n, rho_ell),
        theta=theta,
        A=constants.A,
        E=constants.E,
        slack=slack,
        neumann_order=solution.neumann_order,
        series_order=series_order,
    )
    logger.debug(
        f"KAM step {ell}: eps {eps:.3e}, |V| {norm_v:.4e}, |W| {record.norm_W:.4e}, "
        f"theta {theta:.3e}, A {constants.A:.4e}, E {constants.E:.4e}, "
        f"next atoms {v_next.size}"
    )
    product = StepProduct(w, n, eps, v, v_next, state.divisor)
    return KamState(
        ell=ell + 1,
        epsilon=state.epsilon,
        epsilon_ell=eps * eps,
        divisor=state.divisor.extended(DivisorTerm(eps, n, rho_ell, d_ell)),
        V_ell=v_next,
        ledger=state.ledger,
        v0_norm=state.v0_norm,
        records=state.records + (record,),
        products=state.products + (product,),
        slack=state.slack + slack,
    )


def kam_run(
    v: AtomicSymbol,
    ctx: Context,
    epsilon: float,
    steps: int,
    tol: float = 1e-10,
    atom_budget: int = DEFAULT_ATOM_BUDGET,
) -> KamRun:
    """
    Run up to `steps` KAM steps.

    Iteration stops early when V_l vanishes or eps_l |V_l| underflows.
    The diagnostics record the contraction ratios
    eps_{l+1}|V_{l+1}| / (eps_l |V_l|)^2 against E_l and the slope of
    log(eps_l |V_l|) against 2^l.
    """
    if not 0 <= steps <= MAX_STEPS:
        raise InputError(f"steps must lie in [0, {MAX_STEPS}], got {steps}")
    state = KamState.initial(v, epsilon, ctx.rho, steps)
    ledgers: List[ConstantsLedger] = []
    while state.ell < steps and not state.finished:
        ledgers.append(ledger_evaluate(state, ctx, 0))
        state = kam_step(state, ctx, tol, atom_budget)
    diagnostics = _diagnostics(state, ctx)
    return KamRun(
        final=state,
        D=state.normal_form_symbol(),
        records=list(state.records),
        ledgers=ledgers,
        diagnostics=diagnostics,
    )


def unitary_product(
    states: Sequence[Tuple[AtomicSymbol, float]], box: ModeBox, ctx: Context
) -> OperatorMatrix:
    """
    U = prod exp(i eps_l W_l / hbar) with later steps on the left.

    Raises:
        NotHermitian: If some W_l does not quantize to a Hermitian matrix
    """
    u = np.eye(box.dimension, dtype=complex)
    for w, eps in states:
        generator = quantize(w, box, ctx)
        if not generator.hermitian:
            raise NotHermitian("KAM generators must be real-valued symbols")
        factor = matrix_exponential(generator, 1j * eps / ctx.hbar)
        u = factor.entries @ u
    defect = float(np.abs(u.conj().T @ u - np.eye(box.dimension)).max())
    if defect > UNITARY_TOL:
        logger.warning(f"unitary product deviates from unitarity by {defect:.3e}")
    return OperatorMatrix(box, u)


def step_identity_residual(
    product: StepProduct, box: ModeBox, ctx: Context, margin: int
) -> float:
    """
    Interior max-norm of U (F + eps V) U* - (F + eps N + eps^2 V_next).

    Checks one step's identity at matrix level with U = exp(i eps W / hbar).
    """
    eps = product.epsilon
    f_symbol = product.divisor_before.symbol(ctx.l)
    f_hat = quantize(f_symbol, box, ctx)
    before = f_hat + quantize(product.V_before.scaled(eps), box, ctx)
    after = (
        f_hat
        + quantize(product.N.scaled(eps), box, ctx)
        + quantize(product.V_after.scaled(eps * eps), box, ctx)
    )
    u = unitary_product([(product.W, eps)], box, ctx)
    conjugated = before.conjugated_by(u)
    mask = box.interior_mask(margin)
    diff = (conjugated.entries - after.entries)[np.ix_(mask, mask)]
    return float(np.abs(diff).max())


def superconvergence_holds(
    eps_norm: float, eps_norm_next: float, tau: float
) -> bool:
    """Check eps_{l+1}|V_{l+1}| <= (mu eps_l |V_l|)^2 / mu in log form."""
    if eps_norm_next == 0.0:
        return True
    mu = log_mu(tau)
    return math.log(eps_norm_next) <= 2.0 * (mu + math.log(eps_norm)) - mu


def _diagnostics(state: KamState, ctx: Context) -> Dict[str, Any]:
    sizes = [abs(r.eps_ell) * r.norm_V for r in state.records]
    final_norm = weighted_norm(state.V_ell, state.ledger.rho[state.ell])
    sizes_all = sizes + [abs(state.epsilon_ell) * final_norm]
    ratios: List[Optional[float]] = []
    bounded: List[bool] = []
    for i, record in enumerate(state.records):
        current, following = sizes_all[i], sizes_all[i + 1]
        ratio = following / current**2 if current > 0.0 else None
        ratios.append(ratio)
        bounded.append(ratio is None or ratio <= record.E)
    slope = None
    positive = [(2.0**i, math.log(s)) for i, s in enumerate(sizes_all) if s > 0.0]
    if len(positive) >= 2:
        xs, ys = zip(*positive)
        slope = float(np.polyfit(xs, ys, 1)[0])
    return {
        "eps_norms": sizes_all,
        "contraction_ratios": ratios,
        "contraction_bounded_by_E": bounded,
        "superconvergence": [
            superconvergence_holds(sizes_all[i], sizes_all[i + 1], ctx.tau)
            for i in range(len(state.records))
            if sizes_all[i] > 0.0
        ],
        "log_size_slope_in_2_pow_ell": slope,
        "slack": state.slack,
    }


__all__ = [
    "KamRun",
    "KamState",
    "RadiusLedger",
    "StepProduct",
    "StepRecord",
    "kam_run",
    "kam_step",
    "step_identity_residual",
    "superconvergence_holds",
    "unitary_product",
]

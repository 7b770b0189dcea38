"""Classical track: Poisson bracket, Birkhoff normal form and Hamiltonian flow."""

import logging
import math
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from .core_symbols import AtomicSymbol, Context, merge_add, weighted_norm
from .errors import InputError
from .moyal_algebra import DEFAULT_ATOM_BUDGET, adjoint_series, poisson_bracket
from .qnf_order import NormalForm, qnf_construct

logger = logging.getLogger(__name__)

DEFAULT_STEPS_PER_UNIT = 10_000
DEFAULT_POINTS_PER_AXIS = 8

Grid = Tuple[np.ndarray, np.ndarray]


def classical_birkhoff(
    v: AtomicSymbol,
    order: int,
    ctx: Context,
    tol_prune: float = 0.0,
    atom_budget: int = DEFAULT_ATOM_BUDGET,
) -> NormalForm:
    """Birkhoff normal form: the normal form recursion with the Poisson bracket."""
    return qnf_construct(
        v, order, ctx, bracket=poisson_bracket,
        tol_prune=tol_prune, atom_budget=atom_budget,
    )


def sample_grid(
    ctx: Context,
    xi_box: float = 1.0,
    points_per_axis: int = DEFAULT_POINTS_PER_AXIS,
) -> Grid:
    """
    Phase-space sample points (xi, x), points_per_axis^l of them.

    x runs over a tensor grid of [0, 2 pi)^l and xi over a tensor grid of
    [-xi_box, xi_box]^l visited in reverse order, so the two coordinates
    are not aligned point by point.
    """
    if points_per_axis < 1:
        raise InputError(f"points_per_axis must be positive, got {points_per_axis}")
    x_axis = 2.0 * math.pi * np.arange(points_per_axis) / points_per_axis
    xi_axis = np.linspace(-xi_box, xi_box, points_per_axis)
    x = np.stack(np.meshgrid(*([x_axis] * ctx.l), indexing="ij"), axis=-1)
    xi = np.stack(np.meshgrid(*([xi_axis] * ctx.l), indexing="ij"), axis=-1)
    x = x.reshape(-1, ctx.l)
    xi = xi.reshape(-1, ctx.l)[::-1].copy()
    return xi, x


def hamiltonian_flow(
    w0: AtomicSymbol,
    xi: np.ndarray,
    x: np.ndarray,
    epsilon: float,
    steps: int,
    omega: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Flow of W0 to time epsilon by fixed-step RK4.

    Integrates dx/dt = d_xi W0, dxi/dt = -d_x W0 for every start point at
    once. x is reduced mod 2 pi at the end.

    Args:
        w0: Real principal symbol
        xi: Start momenta, shape (..., l)
        x: Start angles, shape (..., l)
        epsilon: Final time
        steps: Number of RK4 steps
        omega: Frequency vector

    Returns:
        Tuple of (xi, x) at time epsilon
    """
    if steps < 0:
        raise InputError(f"steps must be nonnegative, got {steps}")
    xi = np.array(xi, dtype=float)
    x = np.array(x, dtype=float)
    if steps == 0 or epsilon == 0.0:
        return xi, np.mod(x, 2.0 * math.pi)
    h = epsilon / steps

    def field(xi_k: np.ndarray, x_k: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        grad_xi, grad_x = w0.gradient(xi_k, x_k, omega)
        return -grad_x, grad_xi

    for _ in range(steps):
        k1_xi, k1_x = field(xi, x)
        k2_xi, k2_x = field(xi + 0.5 * h * k1_xi, x + 0.5 * h * k1_x)
        k3_xi, k3_x = field(xi + 0.5 * h * k2_xi, x + 0.5 * h * k2_x)
        k4_xi, k4_x = field(xi + h * k3_xi, x + h * k3_x)
        xi = xi + h / 6.0 * (k1_xi + 2.0 * k2_xi + 2.0 * k3_xi + k4_xi)
        x = x + h / 6.0 * (k1_x + 2.0 * k2_x + 2.0 * k3_x + k4_x)
    return xi, np.mod(x, 2.0 * math.pi)


def hamiltonian_trajectory(
    w0: AtomicSymbol,
    xi: np.ndarray,
    x: np.ndarray,
    epsilon: float,
    steps: int,
    omega: np.ndarray,
) -> np.ndarray:
    """
    Single RK4 trajectory sampled at every step.

    Returns:
        Rows (step, t, xi_1..xi_l, x_1..x_l), steps + 1 of them
    """
    xi_k = np.asarray(xi, dtype=float).reshape(-1)
    x_k = np.mod(np.asarray(x, dtype=float).reshape(-1), 2.0 * math.pi)
    h = epsilon / steps if steps else 0.0
    rows = [np.concatenate(([0.0, 0.0], xi_k, x_k))]
    for step in range(1, steps + 1):
        xi_k, x_k = hamiltonian_flow(w0, xi_k, x_k, h, 1, omega)
        rows.append(np.concatenate(([float(step), step * h], xi_k, x_k)))
    return np.array(rows)


def write_trajectory_csv(path: Union[str, Path], rows: np.ndarray, l: int) -> None:
    """Write trajectory rows with columns step, t, xi_*, x_*."""
    header = ",".join(
        ["step", "t"] + [f"xi_{i + 1}" for i in range(l)] + [f"x_{i + 1}" for i in range(l)]
    )
    lines = [header]
    for row in rows:
        fields = [str(int(row[0]))] + [f"{value:.17g}" for value in row[1:]]
        lines.append(",".join(fields))
    Path(path).write_text("\n".join(lines) + "\n")


def egorov_residual(
    a: AtomicSymbol,
    w: AtomicSymbol,
    epsilon: float,
    ctx: Context,
    grid: Optional[Grid] = None,
    rho: Optional[float] = None,
    d: Optional[float] = None,
    tol: float = 1e-13,
    steps_per_unit: int = DEFAULT_STEPS_PER_UNIT,
) -> float:
    """
    Sup over the grid of |B - (L_omega + A) o flow_W^eps|.

    B is the conjugated symbol of L_omega + A under exp(i eps W / hbar),
    summed as an adjoint series at ctx.hbar; the classical side transports
    L_omega + A along the Hamiltonian flow of W.

    Args:
        a: Symbol added to L_omega
        w: Real generator, taken hbar-independent
        epsilon: Conjugation time
        ctx: Computational context
        grid: Sample points, defaults to sample_grid(ctx)
        rho: Radius of the series bounds, defaults to ctx.rho
        d: Radius loss of the series, defaults to rho / 2
        tol: Absolute series tolerance
        steps_per_unit: RK4 steps per unit time

    Raises:
        SeriesDiverges: If |eps| |W| / d is not below one
    """
    if epsilon == 0.0:
        return 0.0
    rho = ctx.rho if rho is None else rho
    d = 0.5 * rho if d is None else d
    xi, x = sample_grid(ctx) if grid is None else grid
    h0 = merge_add(AtomicSymbol.linear_symbol(ctx.l), a)
    series = adjoint_series(w, h0, ctx, epsilon, rho, d, tol)
    conjugated = series.evaluate(epsilon)
    quantum = conjugated.evaluate(xi @ ctx.omega_array, x)

    steps = max(1, int(math.ceil(abs(epsilon) * steps_per_unit)))
    xi_t, x_t = hamiltonian_flow(w, xi, x, epsilon, steps, ctx.omega_array)
    classical = h0.evaluate(xi_t @ ctx.omega_array, x_t)
    residual = float(np.abs(quantum - classical).max())
    logger.debug(
        f"Egorov residual {residual:.3e} at hbar {ctx.hbar}, eps {epsilon}, "
        f"|W| {weighted_norm(w, rho):.3e}, series order {series.order}"
    )
    return residual


__all__ = [
    "classical_birkhoff",
    "egorov_residual",
    "hamiltonian_flow",
    "hamiltonian_trajectory",
    "poisson_bracket",
    "sample_grid",
    "write_trajectory_csv",
]

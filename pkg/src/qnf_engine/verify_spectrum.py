"""Brute-force diagonalization oracle for the quantization formulas."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .classical_limit import classical_birkhoff
from .core_symbols import AtomicSymbol, Context, merge_add
from .errors import InputError
from .qnf_order import NormalForm, qnf_construct, qnf_eigenvalues
from .weyl_matrix import ModeBox, OperatorMatrix, eigensolve, quantize

logger = logging.getLogger(__name__)

AMBIGUITY_THRESHOLD = 0.5
DEFAULT_MARGIN = 2


@dataclass(frozen=True)
class SpectrumEntry:
    """One eigenpair with its lattice label."""

    n: Tuple[int, ...]
    value: float
    overlap: float
    interior: bool
    accepted: bool


@dataclass
class LabeledSpectrum:
    """
    Eigenvalues of a truncated operator labeled by lattice points.

    Attributes:
        box: Mode box of the matrix
        entries: One entry per eigenpair, ascending in value
        margin: Modes excluded from the interior beyond q_max
        q_max: Largest |q|_inf of the perturbation
    """

    box: ModeBox
    entries: List[SpectrumEntry]
    margin: int
    q_max: int

    @property
    def usable(self) -> List[SpectrumEntry]:
        """Accepted interior entries, ordered by label."""
        return sorted((e for e in self.entries if e.accepted and e.interior),
                      key=lambda e: e.n)

    @property
    def ambiguous(self) -> List[SpectrumEntry]:
        return [e for e in self.entries if not e.accepted]


@dataclass
class ErrorTable:
    """Per-label comparison of matrix eigenvalues against a formula."""

    rows: List[Tuple[Tuple[int, ...], float, float, float]] = field(default_factory=list)

    @property
    def errors(self) -> np.ndarray:
        return np.array([row[3] for row in self.rows], dtype=float)

    @property
    def max(self) -> float:
        return float(self.errors.max()) if self.rows else 0.0

    @property
    def median(self) -> float:
        return float(np.median(self.errors)) if self.rows else 0.0

    def summary(self) -> Dict[str, float]:
        return {"count": len(self.rows), "max": self.max, "median": self.median}


def build_hamiltonian(
    v: AtomicSymbol, epsilon: float, box: ModeBox, ctx: Context
) -> OperatorMatrix:
    """Matrix of L_omega + eps V on the box."""
    symbol = merge_add(AtomicSymbol.linear_symbol(ctx.l), v.scaled(epsilon))
    return quantize(symbol, box, ctx)


def label_spectrum(
    h: OperatorMatrix,
    ctx: Context,
    q_max: int = 1,
    margin: Optional[int] = None,
) -> LabeledSpectrum:
    """
    Label each eigenvector by the basis mode it overlaps most.

    An entry is accepted when its squared overlap exceeds 1/2 and no other
    eigenvector with a larger overlap claims the same label. It is interior
    when |n|_inf <= M - q_max - margin.
    """
    margin = DEFAULT_MARGIN if margin is None else margin
    box = h.box
    decomposition = eigensolve(h)
    weights = np.abs(decomposition.vectors)
    best = np.argmax(weights, axis=0)
    overlaps = weights[best, np.arange(box.dimension)]
    limit = box.M - q_max - margin

    owner: Dict[int, int] = {}
    for column in np.argsort(-overlaps, kind="stable"):
        owner.setdefault(int(best[column]), int(column))

    entries = []
    for column in range(box.dimension):
        row = int(best[column])
        n = tuple(int(c) for c in box.modes[row])
        accepted = overlaps[column] ** 2 > AMBIGUITY_THRESHOLD and owner[row] == column
        entries.append(
            SpectrumEntry(
                n=n,
                value=float(decomposition.values[column]),
                overlap=float(overlaps[column]),
                interior=max(abs(c) for c in n) <= limit,
                accepted=bool(accepted),
            )
        )
    rejected = sum(not e.accepted for e in entries)
    if rejected:
        logger.warning(f"{rejected} of {len(entries)} eigenpairs have ambiguous labels")
    return LabeledSpectrum(box, entries, margin, q_max)


def _compare(
    spectrum: LabeledSpectrum, nf: NormalForm, epsilon: float, ctx: Context
) -> ErrorTable:
    usable = spectrum.usable
    if not usable:
        return ErrorTable()
    ns = np.array([e.n for e in usable], dtype=np.int64)
    formula = qnf_eigenvalues(nf, ns, epsilon, ctx)
    rows = [
        (e.n, e.value, float(f), abs(e.value - float(f)))
        for e, f in zip(usable, formula)
    ]
    return ErrorTable(rows)


def compare_qnf(
    spectrum: LabeledSpectrum, nf: NormalForm, epsilon: float, ctx: Context
) -> ErrorTable:
    """Errors of hbar <omega, n> + sum eps^s B_s(hbar <omega, n>, hbar)."""
    if nf.classical:
        raise InputError("compare_qnf needs a quantum normal form")
    return _compare(spectrum, nf, epsilon, ctx)


def compare_ebk(
    spectrum: LabeledSpectrum, nf_classical: NormalForm, epsilon: float, ctx: Context
) -> ErrorTable:
    """Errors of the formula with the hbar-independent Birkhoff coefficients."""
    if not nf_classical.classical:
        raise InputError("compare_ebk needs a classical normal form")
    return _compare(spectrum, nf_classical, epsilon, ctx)


def fit_exponent(xs: Sequence[float], errs: Sequence[float]) -> Optional[float]:
    """Least-squares slope of log(err) against log(x); None without two positive errors."""
    pairs = [(x, e) for x, e in zip(xs, errs) if x > 0.0 and e > 0.0]
    if len(pairs) < 2:
        return None
    log_x, log_e = np.log(np.array(pairs)).T
    return float(np.polyfit(log_x, log_e, 1)[0])


def epsilon_sweep(
    v: AtomicSymbol,
    ctx: Context,
    box: ModeBox,
    order: int,
    epsilons: Sequence[float],
    margin: Optional[int] = None,
    classical: bool = False,
) -> Dict[str, object]:
    """
    Max interior errors over an epsilon sweep and the fitted exponent.

    The normal form is built once; only the matrix is rediagonalized.
    """
    nf = classical_birkhoff(v, order, ctx) if classical else qnf_construct(v, order, ctx)
    compare = compare_ebk if classical else compare_qnf
    rows = []
    for eps in epsilons:
        h = build_hamiltonian(v, eps, box, ctx)
        spectrum = label_spectrum(h, ctx, v.max_mode(), margin)
        table = compare(spectrum, nf, eps, ctx)
        rows.append({"epsilon": eps, **table.summary()})
        logger.debug(f"eps {eps:g}: max error {table.max:.3e}")
    exponent = fit_exponent(epsilons, [row["max"] for row in rows])
    return {"rows": rows, "exponent": exponent}


def hbar_sweep(
    v: AtomicSymbol,
    ctx: Context,
    box: ModeBox,
    order: int,
    epsilon: float,
    hbars: Sequence[float],
    margin: Optional[int] = None,
    classical: bool = False,
) -> Dict[str, object]:
    """Max interior errors over an hbar sweep at fixed epsilon."""
    rows = []
    for hbar in hbars:
        ctx_h = ctx.with_hbar(hbar)
        if classical:
            nf = classical_birkhoff(v, order, ctx_h)
        else:
            nf = qnf_construct(v, order, ctx_h)
        h = build_hamiltonian(v, epsilon, box, ctx_h)
        spectrum = label_spectrum(h, ctx_h, v.max_mode(), margin)
        table = (compare_ebk if classical else compare_qnf)(spectrum, nf, epsilon, ctx_h)
        rows.append({"hbar": hbar, **table.summary()})
    exponent = fit_exponent(hbars, [row["max"] for row in rows])
    return {"rows": rows, "exponent": exponent}


def rayleigh_schrodinger_second_order(
    v: AtomicSymbol, box: ModeBox, ctx: Context
) -> Tuple[np.ndarray, np.ndarray]:
    """
    First and second order perturbed eigenvalue corrections on the box.

    With unperturbed levels E_m = hbar <omega, m>, returns V_nn and
    sum_{m != n} |V_mn|^2 / (E_n - E_m) for every mode n in row order.
    """
    energies = ctx.hbar * (box.modes @ ctx.omega_array)
    matrix = quantize(v, box, ctx).entries
    first = matrix.diagonal().real.copy()
    gaps = energies[:, None] - energies[None, :]
    np.fill_diagonal(gaps, np.inf)
    second = (np.abs(matrix) ** 2 / gaps).sum(axis=1)
    return first, second


def write_error_csv(path: Union[str, Path], table: ErrorTable, l: int) -> None:
    """Write n_1..n_l, lambda_matrix, lambda_formula, abs_err."""
    header = ",".join(
        [f"n_{i + 1}" for i in range(l)] + ["lambda_matrix", "lambda_formula", "abs_err"]
    )
    lines = [header]
    for n, matrix_value, formula_value, err in table.rows:
        fields = [str(c) for c in n] + [
            f"{matrix_value:.17g}", f"{formula_value:.17g}", f"{err:.17g}"
        ]
        lines.append(",".join(fields))
    Path(path).write_text("\n".join(lines) + "\n")


__all__ = [
    "ErrorTable",
    "LabeledSpectrum",
    "SpectrumEntry",
    "build_hamiltonian",
    "compare_ebk",
    "compare_qnf",
    "epsilon_sweep",
    "fit_exponent",
    "hbar_sweep",
    "label_spectrum",
    "rayleigh_schrodinger_second_order",
    "write_error_csv",
]

"""Weyl quantization of atomic symbols on a truncated Fourier basis."""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import scipy.linalg

from .core_symbols import AtomicSymbol, Context, combine_tags, weighted_norm
from .errors import BoxMismatch, InputError, NotHermitian

logger = logging.getLogger(__name__)

HERMITIAN_RTOL = 1e-12


@dataclass(frozen=True)
class ModeBox:
    """
    Lattice modes m with |m|_inf <= M, ordered lexicographically.

    Row index of m is the mixed-radix number with digits m_k + M, most
    significant digit first, so (-M, ..., -M) is row 0.
    """

    l: int
    M: int

    def __post_init__(self) -> None:
        if self.M < 1:
            raise InputError(f"mode box radius must be at least 1, got {self.M}")
        if self.l < 1:
            raise InputError(f"mode box dimension must be positive, got {self.l}")

    @property
    def side(self) -> int:
        return 2 * self.M + 1

    @property
    def dimension(self) -> int:
        return self.side**self.l

    @cached_property
    def modes(self) -> np.ndarray:
        """All modes in row order, shape (dimension, l)."""
        axis = range(-self.M, self.M + 1)
        return np.array(list(itertools.product(axis, repeat=self.l)), dtype=np.int64)

    def indices(self, modes: np.ndarray) -> np.ndarray:
        """Row indices of modes that lie inside the box."""
        digits = np.asarray(modes, dtype=np.int64).reshape(-1, self.l) + self.M
        weights = self.side ** np.arange(self.l - 1, -1, -1)
        return digits @ weights

    def index_of(self, mode: Sequence[int]) -> int:
        """Row index of a single mode."""
        if max(abs(int(v)) for v in mode) > self.M:
            raise InputError(f"mode {tuple(mode)} lies outside the box M = {self.M}")
        return int(self.indices(np.asarray(mode))[0])

    def contains(self, modes: np.ndarray) -> np.ndarray:
        """Boolean mask of modes inside the box."""
        return np.all(np.abs(np.asarray(modes).reshape(-1, self.l)) <= self.M, axis=1)

    def interior_mask(self, margin: int) -> np.ndarray:
        """Rows whose mode satisfies |m|_inf <= M - margin."""
        return np.all(np.abs(self.modes) <= self.M - margin, axis=1)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """A dense matrix of a quantized symbol on a mode box."""

    box: ModeBox
    entries: np.ndarray
    hermitian: bool = False

    def __post_init__(self) -> None:
        shape = (self.box.dimension, self.box.dimension)
        if self.entries.shape != shape:
            raise InputError(f"matrix shape {self.entries.shape} does not match {shape}")
        if self.hermitian:
            scale = float(np.abs(self.entries).max()) if self.entries.size else 0.0
            defect = float(np.abs(self.entries - self.entries.conj().T).max())
            if defect > HERMITIAN_RTOL * max(scale, 1e-300):
                raise NotHermitian(
                    f"matrix flagged Hermitian has defect {defect:.3e} "
                    f"against scale {scale:.3e}"
                )

    def interior_block(self, margin: int) -> np.ndarray:
        """Sub-matrix on rows and columns at least margin away from the edge."""
        mask = self.box.interior_mask(margin)
        return self.entries[np.ix_(mask, mask)]

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _check_box(self, other)
        return OperatorMatrix(self.box, self.entries + other.entries,
                              self.hermitian and other.hermitian)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _check_box(self, other)
        return OperatorMatrix(self.box, self.entries - other.entries,
                              self.hermitian and other.hermitian)

    def scaled(self, factor: float) -> "OperatorMatrix":
        return OperatorMatrix(self.box, self.entries * factor,
                              self.hermitian and float(np.imag(factor)) == 0.0)

    def conjugated_by(self, unitary: "OperatorMatrix") -> "OperatorMatrix":
        """Return U A U^*."""
        _check_box(self, unitary)
        entries = unitary.entries @ self.entries @ unitary.entries.conj().T
        if self.hermitian:
            entries = 0.5 * (entries + entries.conj().T)
        return OperatorMatrix(self.box, entries, self.hermitian)


@dataclass(frozen=True)
class EigenDecomposition:
    """Sorted eigenvalues with eigenvectors in the columns."""

    values: np.ndarray
    vectors: np.ndarray


def quantize(s: AtomicSymbol, box: ModeBox, ctx: Context) -> OperatorMatrix:
    """
    Weyl quantization of a symbol on the mode box.

    Entry (m + q, m) is sum over atoms of mode q of
    a exp(i hbar p <omega, m + q/2>). Entries whose row m + q leaves the box
    are dropped, so products of quantized symbols are exact only on columns
    at least max|q|_inf away from the edge.
    """
    if s.l != box.l:
        raise BoxMismatch(f"symbol dimension {s.l} does not match box dimension {box.l}")
    combine_tags(s.hbar_tag, ctx.hbar)
    omega = ctx.omega_array
    modes = box.modes
    wm = modes @ omega
    entries = np.zeros((box.dimension, box.dimension), dtype=complex)
    for q in s.modes():
        select = np.all(s.q == q, axis=1)
        p_q, a_q = s.p[select], s.a[select]
        targets = modes + q
        valid = box.contains(targets)
        cols = np.nonzero(valid)[0]
        rows = box.indices(targets[valid])
        arg = ctx.hbar * (wm[cols] + 0.5 * float(q @ omega))
        entries[rows, cols] += np.exp(1j * np.outer(arg, p_q)) @ a_q
    if s.linear != 0.0:
        entries[np.diag_indices(box.dimension)] += s.linear * ctx.hbar * wm
    hermitian = s.is_real()
    if hermitian:
        entries = 0.5 * (entries + entries.conj().T)
    return OperatorMatrix(box, entries, hermitian)


def eigensolve(a: OperatorMatrix) -> EigenDecomposition:
    """
    Dense Hermitian eigendecomposition with ascending eigenvalues.

    Raises:
        NotHermitian: If the matrix is not flagged Hermitian
    """
    if not a.hermitian:
        raise NotHermitian("eigensolve needs a Hermitian matrix")
    values, vectors = scipy.linalg.eigh(a.entries)
    logger.debug(f"Eigensolve of dimension {a.box.dimension}")
    return EigenDecomposition(values, vectors)


def commutator_over_ihbar(
    a: OperatorMatrix, b: OperatorMatrix, ctx: Context
) -> OperatorMatrix:
    """Return (AB - BA) / (i hbar)."""
    _check_box(a, b)
    entries = (a.entries @ b.entries - b.entries @ a.entries) / (1j * ctx.hbar)
    hermitian = a.hermitian and b.hermitian
    if hermitian:
        entries = 0.5 * (entries + entries.conj().T)
    return OperatorMatrix(a.box, entries, hermitian)


def operator_norm_bound(s: AtomicSymbol, rho: float) -> float:
    """
    Upper bound on the operator norm of the quantized symbol.

    The weighted norm at any rho >= 0 dominates the spectral norm of every
    box truncation; an L_omega part makes the operator unbounded.
    """
    if s.linear != 0.0:
        return float("inf")
    return weighted_norm(s, rho)


def matrix_exponential(
    generator: OperatorMatrix, scale: complex
) -> OperatorMatrix:
    """Return exp(scale * A) via scaling and squaring."""
    return OperatorMatrix(generator.box, scipy.linalg.expm(scale * generator.entries))


def dump_matrix(path: Union[str, Path], a: OperatorMatrix, ctx: Context) -> None:
    """
    Write a matrix as text: header then row-major (re, im) pairs.

    The header records l, M, hbar and the lexicographic mode ordering.
    """
    header = (
        f"qnf-engine matrix l={a.box.l} M={a.box.M} hbar={ctx.hbar!r} "
        f"ordering=lexicographic dimension={a.box.dimension}"
    )
    flat = a.entries.reshape(-1)
    np.savetxt(Path(path), np.column_stack((flat.real, flat.imag)),
               fmt="%.17g", header=header)


def write_eigenvalue_csv(
    path: Union[str, Path],
    values: np.ndarray,
    labels: Optional[np.ndarray] = None,
    l: Optional[int] = None,
) -> None:
    """
    Write eigenvalues with columns index, m_1..m_l, lambda.

    Args:
        path: Output file
        values: Eigenvalues
        labels: Lattice labels per eigenvalue, shape (n, l)
        l: Dimension, needed when labels are omitted
    """
    values = np.asarray(values, dtype=float)
    if labels is None:
        if l is None:
            raise InputError("either labels or l must be given")
        labels = np.zeros((len(values), l), dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    dim = labels.shape[1]
    header = ",".join(["index"] + [f"m_{i + 1}" for i in range(dim)] + ["lambda"])
    lines = [header]
    for index, (label, value) in enumerate(zip(labels, values)):
        fields = [str(index)] + [str(int(v)) for v in label] + [f"{value:.17g}"]
        lines.append(",".join(fields))
    Path(path).write_text("\n".join(lines) + "\n")


def _check_box(a: OperatorMatrix, b: OperatorMatrix) -> None:
    if a.box != b.box:
        raise BoxMismatch(f"matrices live on different boxes: {a.box} vs {b.box}")


def spectral_norm(a: OperatorMatrix) -> float:
    """Largest singular value of the matrix."""
    return float(scipy.linalg.norm(a.entries, 2))


def residuals(a: OperatorMatrix, decomposition: EigenDecomposition) -> np.ndarray:
    """Per-pair residual |A v - lambda v|_2."""
    av = a.entries @ decomposition.vectors
    return np.linalg.norm(av - decomposition.vectors * decomposition.values, axis=0)


__all__ = [
    "EigenDecomposition",
    "ModeBox",
    "OperatorMatrix",
    "commutator_over_ihbar",
    "dump_matrix",
    "eigensolve",
    "matrix_exponential",
    "operator_norm_bound",
    "quantize",
    "residuals",
    "spectral_norm",
    "write_eigenvalue_csv",
]

"""Atomic Fourier symbols, the computational context and weighted norms."""

import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import (
    TYPE_CHECKING,
    Dict,
    Iterable,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from .errors import IncompatibleHbarTag, InputError, InsufficientGrid, NotAtomic

if TYPE_CHECKING:
    from .estimates import DiophantineCertificate

logger = logging.getLogger(__name__)

# p values are keyed on this grid so sums of irrational frequencies merge
P_KEY_SCALE = 2.0**30
# an amplitude below this fraction of the summed magnitudes is roundoff
CANCEL_RTOL = 16 * np.finfo(float).eps
HBAR_TAG_RTOL = 1e-12


@dataclass(frozen=True)
class Context:
    """
    Everything an hbar- or omega-dependent operation needs to know.

    Attributes:
        l: Torus dimension
        omega: Frequency vector
        hbar: Planck constant in (0, 1]
        gamma: Diophantine constant
        tau: Diophantine exponent, larger than l - 1
        rho: Analyticity radius of the perturbation
        epsilon_factor: Factor applied to epsilon when omega was normalized
        certificate: Optional Diophantine certificate backing gamma and tau
    """

    l: int
    omega: Tuple[float, ...]
    hbar: float
    gamma: float
    tau: float
    rho: float
    epsilon_factor: float = 1.0
    certificate: Optional["DiophantineCertificate"] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "omega", tuple(float(w) for w in self.omega))
        if self.l < 2:
            raise InputError(f"dimension l must be at least 2, got {self.l}")
        if len(self.omega) != self.l:
            raise InputError(
                f"omega has {len(self.omega)} entries but l = {self.l}"
            )
        if not 0.0 < self.hbar <= 1.0:
            raise InputError(f"hbar must lie in (0, 1], got {self.hbar}")
        if self.tau <= self.l - 1:
            raise InputError(f"tau must exceed l - 1 = {self.l - 1}, got {self.tau}")
        if self.gamma <= 0.0:
            raise InputError(f"gamma must be positive, got {self.gamma}")
        if self.rho <= 0.0:
            raise InputError(f"rho must be positive, got {self.rho}")
        cert = self.certificate
        if cert is not None:
            if not np.allclose(cert.omega, self.omega, rtol=1e-14, atol=0.0):
                raise InputError("certificate was issued for a different omega")
            if cert.gamma_measured > self.gamma * (1 + 1e-12):
                raise InputError(
                    f"gamma = {self.gamma} is below the measured constant "
                    f"{cert.gamma_measured:.6g} up to |q|_1 <= {cert.q_max}"
                )

    @classmethod
    def create(
        cls,
        omega: Sequence[float],
        hbar: float,
        gamma: float,
        tau: float,
        rho: float,
        normalize: bool = False,
    ) -> "Context":
        """
        Build a context, optionally rescaling omega so that |omega|_1 <= 1.

        Dividing H by s = |omega|_1 maps L_omega + eps V to
        L_{omega/s} + (eps/s) V, so the rescale is recorded as the factor
        1/s on epsilon. Spectra of the rescaled problem are those of the
        original divided by s.

        Args:
            omega: Frequency vector
            hbar: Planck constant
            gamma: Diophantine constant
            tau: Diophantine exponent
            rho: Analyticity radius
            normalize: Rescale omega when its l1 norm exceeds one

        Returns:
            Validated context
        """
        omega_arr = np.asarray(omega, dtype=float)
        factor = 1.0
        if normalize:
            s = float(np.abs(omega_arr).sum())
            if s > 1.0:
                omega_arr = omega_arr / s
                factor = 1.0 / s
                logger.debug(f"Normalized omega by {s:.6g}; epsilon factor {factor}")
        return cls(
            l=len(omega_arr),
            omega=tuple(omega_arr.tolist()),
            hbar=hbar,
            gamma=gamma,
            tau=tau,
            rho=rho,
            epsilon_factor=factor,
        )

    @property
    def omega_array(self) -> np.ndarray:
        """Frequency vector as a numpy array."""
        return np.asarray(self.omega, dtype=float)

    @property
    def kappa(self) -> float:
        """Factor max(1, |omega|_inf) applied to bracket bounds."""
        return max(1.0, float(np.max(np.abs(self.omega_array))))

    def with_hbar(self, hbar: float) -> "Context":
        """Return a copy of this context at another value of hbar."""
        return replace(self, hbar=hbar)

    def frequencies(self, q: np.ndarray) -> np.ndarray:
        """Return <omega, q> for every row of q."""
        return np.asarray(q, dtype=float) @ self.omega_array


@dataclass(frozen=True)
class Atom:
    """A single Fourier component a * exp(i(p t + q.x))."""

    p: float
    q: Tuple[int, ...]
    a: complex


@dataclass(frozen=True, eq=False)
class AtomicSymbol:
    """
    A finite sum of Fourier atoms in (t, x) with t = <omega, xi>.

    The symbol evaluates as sum a * exp(i(p t + q.x)) + linear * t, where
    the optional linear coefficient carries a multiple of L_omega. Atoms are
    always stored merged: keys (p, q) are unique, sorted, and no stored
    amplitude is zero.

    Attributes:
        l: Torus dimension
        p: Dual frequencies of t, shape (n,)
        q: Torus modes, shape (n, l)
        a: Complex amplitudes, shape (n,)
        linear: Coefficient of L_omega
        hbar_tag: hbar at which post-Moyal amplitudes were produced
    """

    l: int
    p: np.ndarray
    q: np.ndarray
    a: np.ndarray
    linear: float = 0.0
    hbar_tag: Optional[float] = None

    def __post_init__(self) -> None:
        p, q, a = _canonical_arrays(self.l, self.p, self.q, self.a)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "linear", float(self.linear))
        if self.hbar_tag is not None:
            object.__setattr__(self, "hbar_tag", float(self.hbar_tag))

    @classmethod
    def empty(cls, l: int, hbar_tag: Optional[float] = None) -> "AtomicSymbol":
        """Return the zero symbol."""
        return cls(l, np.zeros(0), np.zeros((0, l), dtype=np.int64),
                   np.zeros(0, dtype=complex), hbar_tag=hbar_tag)

    @classmethod
    def unit(cls, l: int) -> "AtomicSymbol":
        """Return the constant symbol 1."""
        return cls.from_atoms(l, [Atom(0.0, (0,) * l, 1.0)])

    @classmethod
    def linear_symbol(cls, l: int, coefficient: float = 1.0) -> "AtomicSymbol":
        """Return coefficient * L_omega."""
        return replace(cls.empty(l), linear=coefficient)

    @classmethod
    def from_atoms(
        cls,
        l: int,
        atoms: Iterable[Atom],
        hbar_tag: Optional[float] = None,
    ) -> "AtomicSymbol":
        """Build a symbol from a list of atoms, merging equal keys."""
        atoms = list(atoms)
        for atom in atoms:
            if len(atom.q) != l:
                raise InputError(f"atom mode {atom.q} does not have length {l}")
        return cls(
            l,
            np.array([atom.p for atom in atoms], dtype=float),
            np.array([atom.q for atom in atoms], dtype=np.int64).reshape(-1, l),
            np.array([atom.a for atom in atoms], dtype=complex),
            hbar_tag=hbar_tag,
        )

    @classmethod
    def from_records(
        cls, records: Sequence[Sequence[float]], l: int
    ) -> "AtomicSymbol":
        """
        Build a symbol from literal records [re, im, p, q_1, ..., q_l].

        Args:
            records: Atom records
            l: Torus dimension

        Returns:
            Merged symbol

        Raises:
            InputError: If a record has the wrong length or a fractional mode
        """
        atoms = []
        for record in records:
            if len(record) != 3 + l:
                raise InputError(
                    f"symbol record {list(record)} must have {3 + l} fields"
                )
            modes = record[3:]
            if any(float(v) != int(v) for v in modes):
                raise InputError(f"lattice entries must be integers: {list(modes)}")
            atoms.append(
                Atom(
                    p=float(record[2]),
                    q=tuple(int(v) for v in modes),
                    a=complex(record[0], record[1]),
                )
            )
        return cls.from_atoms(l, atoms)

    @property
    def size(self) -> int:
        """Number of stored atoms."""
        return int(self.p.shape[0])

    @property
    def is_empty(self) -> bool:
        """True for the zero symbol."""
        return self.size == 0 and self.linear == 0.0

    def atoms(self) -> List[Atom]:
        """Return the atoms as a list of records."""
        return [
            Atom(float(p), tuple(int(v) for v in q), complex(a))
            for p, q, a in zip(self.p, self.q, self.a)
        ]

    def select(self, mask: np.ndarray) -> "AtomicSymbol":
        """Return the atoms picked by a boolean mask, keeping the linear part."""
        return AtomicSymbol(
            self.l, self.p[mask], self.q[mask], self.a[mask],
            linear=self.linear, hbar_tag=self.hbar_tag,
        )

    def scaled(self, factor: Union[float, complex]) -> "AtomicSymbol":
        """Multiply the symbol by a scalar."""
        linear = self.linear
        if linear != 0.0:
            if complex(factor).imag != 0.0:
                raise NotAtomic("cannot scale an L_omega part by a complex factor")
            linear = linear * complex(factor).real
        return AtomicSymbol(
            self.l, self.p, self.q, self.a * factor,
            linear=linear, hbar_tag=self.hbar_tag,
        )

    def without_linear(self) -> "AtomicSymbol":
        """Drop the L_omega part."""
        return replace(self, linear=0.0)

    def with_tag(self, hbar_tag: Optional[float]) -> "AtomicSymbol":
        """Return the same atoms under another hbar tag."""
        return replace(self, hbar_tag=hbar_tag)

    def __add__(self, other: "AtomicSymbol") -> "AtomicSymbol":
        return merge_add(self, other)

    def __neg__(self) -> "AtomicSymbol":
        return self.scaled(-1.0)

    def __sub__(self, other: "AtomicSymbol") -> "AtomicSymbol":
        return merge_add(self, -other)

    def modes(self) -> np.ndarray:
        """Distinct torus modes carried by the atoms, shape (k, l)."""
        if self.size == 0:
            return np.zeros((0, self.l), dtype=np.int64)
        return np.unique(self.q, axis=0)

    def max_mode(self) -> int:
        """Largest |q|_inf over the atoms."""
        if self.size == 0:
            return 0
        return int(np.abs(self.q).max())

    def is_x_independent(self) -> bool:
        """True when every atom has q = 0."""
        return bool(np.all(self.q == 0))

    def is_real(self, rtol: float = 1e-12) -> bool:
        """
        Check the Hermitian symmetry a(-p, -q) = conj(a(p, q)).

        Args:
            rtol: Tolerance relative to the largest amplitude

        Returns:
            True when every atom has a matching conjugate partner
        """
        if self.size == 0:
            return True
        scale = float(np.abs(self.a).max())
        index: Dict[Tuple[int, ...], int] = {
            key: i for i, key in enumerate(_key_tuples(self.p, self.q))
        }
        for i, key in enumerate(_key_tuples(-self.p, -self.q)):
            j = index.get(key)
            if j is None:
                if abs(self.a[i]) > rtol * scale:
                    return False
                continue
            if abs(self.a[j] - np.conj(self.a[i])) > rtol * scale:
                return False
        return True

    def evaluate(self, t: np.ndarray, x: np.ndarray) -> np.ndarray:
        """
        Evaluate the symbol pointwise.

        Args:
            t: Values of L_omega(xi), any shape
            x: Torus points with shape t.shape + (l,)

        Returns:
            Complex values with the shape of t
        """
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        phase = np.multiply.outer(t, self.p) + x @ self.q.T
        return np.exp(1j * phase) @ self.a + self.linear * t

    def evaluate_mean(self, t: np.ndarray) -> np.ndarray:
        """Evaluate the q = 0 atoms (and the linear part) at t."""
        mean = x_average(self)
        t = np.asarray(t, dtype=float)
        return np.exp(1j * np.multiply.outer(t, mean.p)) @ mean.a + self.linear * t

    def gradient(
        self, xi: np.ndarray, x: np.ndarray, omega: np.ndarray
    ) -> Tuple[np.ndarray, np.ndarray]:
        """
        Exact phase-space gradient of a real symbol.

        Args:
            xi: Momenta, shape (..., l)
            x: Torus points, shape (..., l)
            omega: Frequency vector

        Returns:
            Tuple of (d/dxi, d/dx), real parts, each with the shape of xi
        """
        omega = np.asarray(omega, dtype=float)
        xi = np.asarray(xi, dtype=float)
        x = np.asarray(x, dtype=float)
        t = xi @ omega
        terms = np.exp(1j * (np.multiply.outer(t, self.p) + x @ self.q.T)) * self.a
        d_t = (terms * (1j * self.p)).sum(axis=-1).real + self.linear
        grad_xi = np.multiply.outer(d_t, omega)
        grad_x = ((1j * terms) @ self.q).real
        return grad_xi, grad_x


def combine_tags(*tags: Optional[float]) -> Optional[float]:
    """
    Merge hbar tags of several symbols.

    Returns:
        The common tag, or None when no symbol is tagged

    Raises:
        IncompatibleHbarTag: If two tags differ
    """
    present = [t for t in tags if t is not None]
    if not present:
        return None
    first = present[0]
    for tag in present[1:]:
        if abs(tag - first) > HBAR_TAG_RTOL * max(abs(first), abs(tag)):
            raise IncompatibleHbarTag(
                f"symbols were produced at hbar = {first} and hbar = {tag}",
                tags=present,
            )
    return first


def merge_add(s1: AtomicSymbol, s2: AtomicSymbol) -> AtomicSymbol:
    """
    Keywise sum of two symbols.

    Raises:
        IncompatibleHbarTag: If both symbols are tagged at different hbar
        InputError: If the dimensions differ
    """
    if s1.l != s2.l:
        raise InputError(f"cannot add symbols of dimension {s1.l} and {s2.l}")
    tag = combine_tags(s1.hbar_tag, s2.hbar_tag)
    return AtomicSymbol(
        s1.l,
        np.concatenate((s1.p, s2.p)),
        np.concatenate((s1.q, s2.q)),
        np.concatenate((s1.a, s2.a)),
        linear=s1.linear + s2.linear,
        hbar_tag=tag,
    )


def sum_symbols(l: int, symbols: Iterable[AtomicSymbol]) -> AtomicSymbol:
    """Add many symbols with a single merge."""
    symbols = list(symbols)
    if not symbols:
        return AtomicSymbol.empty(l)
    tag = combine_tags(*(s.hbar_tag for s in symbols))
    return AtomicSymbol(
        l,
        np.concatenate([s.p for s in symbols]),
        np.concatenate([s.q for s in symbols]),
        np.concatenate([s.a for s in symbols]),
        linear=sum(s.linear for s in symbols),
        hbar_tag=tag,
    )


def atom_weights(s: AtomicSymbol, rho: float) -> np.ndarray:
    """Per-atom contributions |a| exp(rho (|p| + |q|_1))."""
    return np.abs(s.a) * np.exp(rho * (np.abs(s.p) + np.abs(s.q).sum(axis=1)))


def weighted_norm(s: AtomicSymbol, rho: float) -> float:
    """
    The k = 0 weighted norm: sum |a| exp(rho (|p| + |q|_1)).

    The L_omega part is unbounded and does not contribute.
    """
    if rho < 0:
        raise InputError(f"rho must be nonnegative, got {rho}")
    return float(atom_weights(s, rho).sum())


def mu_weight(p: np.ndarray, q: np.ndarray, omega: np.ndarray, k: int) -> np.ndarray:
    """Return mu_k(p omega, q) = (1 + |p omega|^2 + |q|^2)^(k/2)."""
    omega_sq = float(np.dot(omega, omega))
    base = 1.0 + np.asarray(p) ** 2 * omega_sq + (np.asarray(q) ** 2).sum(axis=1)
    return base ** (k / 2.0)


def weighted_norm_k(
    family: Sequence[Tuple[float, AtomicSymbol]],
    rho: float,
    k: int,
    omega: Sequence[float],
) -> float:
    """
    Finite-difference diagnostic of the order-k weighted norm.

    The hbar derivatives of the amplitudes are replaced by centered
    differences over the uniform hbar grid of the family. For every window
    of k + 1 consecutive samples the sum over gamma <= k of
    mu_{k-gamma} |Delta^gamma a| exp(rho(|p| + |q|_1)) is formed; the
    maximum over windows is returned.

    Args:
        family: Pairs (hbar, symbol) on a uniform increasing grid
        rho: Radius
        k: Derivative order, 0 <= k <= 4
        omega: Frequency vector

    Returns:
        Norm value

    Raises:
        InsufficientGrid: If the family has fewer than k + 1 samples
        InputError: If k is out of range or the grid is not uniform
    """
    if not 0 <= k <= 4:
        raise InputError(f"k must lie in [0, 4], got {k}")
    if len(family) < k + 1:
        raise InsufficientGrid(
            f"order {k} needs {k + 1} hbar samples, got {len(family)}"
        )
    hbars = np.array([h for h, _ in family], dtype=float)
    step = 1.0
    if len(hbars) > 1:
        steps = np.diff(hbars)
        if steps[0] <= 0 or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise InputError("hbar samples must form a uniform increasing grid")
        step = float(steps[0])

    symbols = [s for _, s in family]
    l = symbols[0].l
    p_all = np.concatenate([s.p for s in symbols])
    q_all = np.concatenate([s.q for s in symbols]).reshape(-1, l)
    if p_all.size == 0:
        return 0.0
    keys = np.column_stack((_p_keys(p_all), q_all))
    uniq, first, inverse = np.unique(keys, axis=0, return_index=True,
                                     return_inverse=True)
    inverse = inverse.reshape(-1)
    amps = np.zeros((len(symbols), uniq.shape[0]), dtype=complex)
    start = 0
    for i, s in enumerate(symbols):
        amps[i, inverse[start:start + s.size]] = s.a
        start += s.size

    p = p_all[first]
    q = uniq[:, 1:]
    omega_arr = np.asarray(omega, dtype=float)
    weight = np.exp(rho * (np.abs(p) + np.abs(q).sum(axis=1)))
    mus = [mu_weight(p, q, omega_arr, j) for j in range(k + 1)]

    best = 0.0
    for window in range(len(symbols) - k):
        total = 0.0
        for order in range(k + 1):
            offset = window + (k - order) // 2
            block = amps[offset:offset + order + 1]
            delta = np.diff(block, n=order, axis=0)[0] / step**order
            total += float((mus[k - order] * np.abs(delta) * weight).sum())
        best = max(best, total)
    return best


def prune(s: AtomicSymbol, rho: float, tol: float) -> Tuple[AtomicSymbol, float]:
    """
    Drop atoms whose weighted contribution is below tol.

    Returns:
        Tuple of (pruned symbol, weighted norm of the removed atoms)
    """
    if tol < 0:
        raise InputError(f"tol must be nonnegative, got {tol}")
    if tol == 0 or s.size == 0:
        return s, 0.0
    weights = atom_weights(s, rho)
    keep = weights >= tol
    if keep.all():
        return s, 0.0
    return s.select(keep), float(weights[~keep].sum())


def x_average(s: AtomicSymbol) -> AtomicSymbol:
    """The q = 0 part of a symbol, without the L_omega part."""
    mask = np.all(s.q == 0, axis=1)
    return s.select(mask).without_linear()


def oscillating_part(s: AtomicSymbol) -> AtomicSymbol:
    """The q != 0 part of a symbol."""
    mask = np.any(s.q != 0, axis=1)
    return s.select(mask).without_linear()


def pointwise_product(f: AtomicSymbol, g: AtomicSymbol) -> AtomicSymbol:
    """
    Ordinary product of two functions of (t, x).

    Raises:
        NotAtomic: If either factor carries an L_omega part
    """
    if f.linear != 0.0 or g.linear != 0.0:
        raise NotAtomic("pointwise product is defined on atoms only")
    tag = combine_tags(f.hbar_tag, g.hbar_tag)
    return AtomicSymbol(
        f.l,
        np.add.outer(f.p, g.p).ravel(),
        (f.q[:, None, :] + g.q[None, :, :]).reshape(-1, f.l),
        np.outer(f.a, g.a).ravel(),
        hbar_tag=tag,
    )


def canonical_potential(l: int = 2) -> AtomicSymbol:
    """
    Return V = 2 cos(t) * sum_k cos(x_k).

    Each cos(t) cos(x_k) contributes four atoms of amplitude 1/2 with
    p = +-1 and q = +-e_k.
    """
    atoms = []
    for k in range(l):
        for p in (1.0, -1.0):
            for sign in (1, -1):
                q = [0] * l
                q[k] = sign
                atoms.append(Atom(p, tuple(q), 0.5))
    return AtomicSymbol.from_atoms(l, atoms)


def dump_symbol(path: Union[str, Path], s: AtomicSymbol) -> None:
    """
    Write a symbol in the literal format: one atom per line.

    Columns are re(a), im(a), p, q_1 .. q_l; the header records l.
    """
    if s.linear != 0.0:
        raise NotAtomic("the literal format stores atoms only")
    data = np.column_stack((s.a.real, s.a.imag, s.p, s.q.astype(float)))
    fmt = ["%.17g"] * 3 + ["%d"] * s.l
    header = f"qnf-engine symbol l={s.l}\nre im p " + " ".join(
        f"q_{i + 1}" for i in range(s.l)
    )
    np.savetxt(Path(path), data.reshape(-1, 3 + s.l), fmt=fmt, header=header)


def load_symbol(path: Union[str, Path], l: Optional[int] = None) -> AtomicSymbol:
    """
    Read a symbol written by dump_symbol or by hand.

    Args:
        path: Literal file
        l: Dimension, taken from the header when omitted

    Returns:
        Merged symbol
    """
    path = Path(path)
    header_l = None
    with path.open() as handle:
        for line in handle:
            if line.startswith("#") and "l=" in line:
                header_l = int(line.split("l=")[1].split()[0])
                break
    rows = [
        [float(v) for v in line.split()]
        for line in path.read_text().splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if l is None:
        l = header_l if header_l is not None else (len(rows[0]) - 3 if rows else None)
    if l is None:
        raise InputError(f"cannot infer the dimension of {path}")
    logger.debug(f"Loaded {len(rows)} atoms from {path}")
    return AtomicSymbol.from_records(rows, l)


def _p_keys(p: np.ndarray) -> np.ndarray:
    return np.rint(np.asarray(p, dtype=float) * P_KEY_SCALE).astype(np.int64)


def _key_tuples(p: np.ndarray, q: np.ndarray) -> List[Tuple[int, ...]]:
    keys = np.column_stack((_p_keys(p), q))
    return [tuple(row) for row in keys.tolist()]


def _canonical_arrays(
    l: int, p: np.ndarray, q: np.ndarray, a: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Merge equal keys, drop cancelled amplitudes and sort by key."""
    p = np.asarray(p, dtype=float).reshape(-1)
    q = np.asarray(q, dtype=np.int64).reshape(-1, l)
    a = np.asarray(a, dtype=complex).reshape(-1)
    if not p.shape[0] == q.shape[0] == a.shape[0]:
        raise InputError(
            f"atom arrays disagree in length: {p.shape[0]}, {q.shape[0]}, {a.shape[0]}"
        )
    if p.size == 0:
        return p, q, a
    keys = np.column_stack((_p_keys(p), q))
    uniq, first, inverse = np.unique(keys, axis=0, return_index=True,
                                     return_inverse=True)
    inverse = inverse.reshape(-1)
    n = uniq.shape[0]
    amp = np.bincount(inverse, weights=a.real, minlength=n) + 1j * np.bincount(
        inverse, weights=a.imag, minlength=n
    )
    scale = np.bincount(inverse, weights=np.abs(a), minlength=n)
    keep = np.abs(amp) > CANCEL_RTOL * scale
    return p[first][keep], np.ascontiguousarray(uniq[keep, 1:]), amp[keep]


__all__ = [
    "Atom",
    "AtomicSymbol",
    "Context",
    "atom_weights",
    "canonical_potential",
    "combine_tags",
    "dump_symbol",
    "load_symbol",
    "merge_add",
    "mu_weight",
    "oscillating_part",
    "pointwise_product",
    "prune",
    "sum_symbols",
    "weighted_norm",
    "weighted_norm_k",
    "x_average",
]

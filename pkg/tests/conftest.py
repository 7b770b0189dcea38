"""Shared fixtures for the engine tests."""

import numpy as np
import pytest

from qnf_engine.core_symbols import AtomicSymbol, Context, canonical_potential

GOLDEN = (1.0 + 5.0**0.5) / 2.0


def make_context(hbar: float = 0.1, rho: float = 1.0) -> Context:
    """Golden-mean frequencies in two dimensions."""
    return Context.create(omega=(1.0, GOLDEN), hbar=hbar, gamma=2.0, tau=1.5, rho=rho)


def random_symbol(
    rng: np.random.Generator,
    atoms: int = 4,
    q_range: int = 1,
    p_values=(-2.0, -1.0, 0.0, 0.5, 1.0, 2.0),
    real: bool = False,
    l: int = 2,
) -> AtomicSymbol:
    """Random atomic symbol with small keys, optionally Hermitian-symmetric."""
    p = rng.choice(np.asarray(p_values, dtype=float), size=atoms)
    q = rng.integers(-q_range, q_range + 1, size=(atoms, l))
    a = rng.normal(size=atoms) + 1j * rng.normal(size=atoms)
    if real:
        p = np.concatenate((p, -p))
        q = np.concatenate((q, -q))
        a = np.concatenate((a, np.conj(a)))
    return AtomicSymbol(l, p, q, a)


@pytest.fixture
def ctx() -> Context:
    """Canonical context: omega = (1, golden), hbar = 0.1, tau = 1.5, gamma = 2."""
    return make_context()


@pytest.fixture
def potential() -> AtomicSymbol:
    """V = 2 cos t (cos x_1 + cos x_2)."""
    return canonical_potential(2)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for the randomized property tests."""
    return np.random.default_rng(1234)

"""Seeded random objects: pure states, density matrices, unitaries, bases.

Every draw is a pure function of (seed, kind, dim, index), so property
suites can be re-run bit-for-bit and split across workers by index.
"""

from __future__ import annotations

import numpy as np

from .linalg import dagger

_KIND_CODES = {"pure_state": 0, "density_matrix": 1, "unitary": 2, "basis": 3}


def stream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator derived from a base seed and integer key."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=tuple(key)))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-like unitary: QR of a complex Gaussian with phase-fixed diagonal."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diag(r).copy()
    phases = phases / np.abs(phases)
    return q * phases


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Normalized G G^dag of a complex Gaussian G (full rank by default)."""
    r = rank if rank is not None else dim
    g = rng.normal(size=(dim, r)) + 1j * rng.normal(size=(dim, r))
    rho = g @ dagger(g)
    return rho / np.real(np.trace(rho))


def draw(seed: int, kind: str, dim: int, index: int = 0):
    """Spec sampler entry point; deterministic in (seed, kind, dim, index)."""
    if dim < 2:
        raise ValueError("dimension must be >= 2")
    rng = stream(seed, _KIND_CODES[kind], dim, index)
    if kind == "pure_state":
        return random_pure_state(dim, rng)
    if kind == "density_matrix":
        return random_density_matrix(dim, rng)
    if kind in ("unitary", "basis"):
        return random_unitary(dim, rng)
    raise ValueError(f"unknown kind {kind!r}")

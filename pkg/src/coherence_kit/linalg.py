"""Dense complex linear algebra and entropic functionals.

All quantum objects are plain ``numpy`` arrays of ``complex``.  Logarithms
are base 2 throughout, so every entropy-like quantity is in bits.

Tolerance ladder used across the package: 1e-12 for constructions,
1e-10 for state/channel validation, 1e-8 for derived-quantity comparisons.
"""

from __future__ import annotations

import math

import numpy as np

HERMITIAN_TOL = 1e-10
EIGENVALUE_TOL = 1e-10
TRACE_TOL = 1e-10
SUPPORT_CUTOFF = 1e-12


class DimensionError(ValueError):
    """Operands have incompatible or non-factorizable dimensions."""


class NotHermitianError(ValueError):
    """A matrix required to be Hermitian is not, within tolerance."""


class InvalidStateError(ValueError):
    """A matrix fails the density-matrix invariants."""


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; dimensions multiply."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(vec: np.ndarray) -> np.ndarray:
    v = np.asarray(vec, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def assert_hermitian(m: np.ndarray, tol: float = 1e-8) -> None:
    dev = np.max(np.abs(m - dagger(m)))
    if dev > tol:
        raise NotHermitianError(f"max |M - M^dag| = {dev:.3e} > {tol:.1e}")


def validate_density_matrix(rho: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    """Check Hermiticity, positivity and unit trace of a density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"not a square matrix: shape {rho.shape}")
    dev = np.max(np.abs(rho - dagger(rho)))
    if dev > tol:
        raise InvalidStateError(f"not Hermitian: deviation {dev:.3e}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise InvalidStateError(f"trace {tr} not 1 within {tol:.1e}")
    lam = eigvals_hermitian(rho)
    if lam[0] < -EIGENVALUE_TOL:
        raise InvalidStateError(f"negative eigenvalue {lam[0]:.3e}")


def is_density_matrix(rho: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    try:
        validate_density_matrix(rho, tol)
    except InvalidStateError:
        return False
    return True


def partial_trace(mat: np.ndarray, dims: tuple[int, int], keep: str) -> np.ndarray:
    """Trace out one side of a bipartite operator.

    ``keep`` selects the surviving subsystem: "A" traces out B and
    vice versa.  ``dims = (d_a, d_b)`` must factor the matrix dimension.
    """
    mat = np.asarray(mat, dtype=complex)
    da, db = dims
    if mat.shape != (da * db, da * db):
        raise DimensionError(f"dims {dims} do not factor shape {mat.shape}")
    t = mat.reshape(da, db, da, db)
    if keep == "A":
        return np.einsum("ajbj->ab", t)
    if keep == "B":
        return np.einsum("jajb->ab", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def _jacobi_rotate(a: np.ndarray, v: np.ndarray | None, p: int, q: int) -> None:
    """Annihilate a[p, q] by a complex Jacobi rotation, in place."""
    g = a[p, q]
    ag = abs(g)
    if ag == 0.0:
        return
    w = g / ag
    tau = (a[q, q].real - a[p, p].real) / (2.0 * ag)
    if abs(tau) > 1.0e8:
        t = 1.0 / (2.0 * tau)
    elif tau >= 0.0:
        t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c
    # Unitary R = [[c, s], [-s*conj(w), c*conj(w)]] on the (p, q) plane;
    # update A <- R^dag A R and accumulate V <- V R.
    colp = a[:, p].copy()
    colq = a[:, q].copy()
    a[:, p] = c * colp - s * np.conj(w) * colq
    a[:, q] = s * colp + c * np.conj(w) * colq
    rowp = a[p, :].copy()
    rowq = a[q, :].copy()
    a[p, :] = c * rowp - s * w * rowq
    a[q, :] = s * rowp + c * w * rowq
    # Keep the (tiny) computed residual at (p, q): zeroing it by hand lets
    # the iterate drift from the transform accumulated in v.
    a[q, p] = np.conj(a[p, q])
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    if v is not None:
        colp = v[:, p].copy()
        colq = v[:, q].copy()
        v[:, p] = c * colp - s * np.conj(w) * colq
        v[:, q] = s * colp + c * np.conj(w) * colq


def _jacobi_sweeps(m: np.ndarray, vectors: bool, off_tol: float, max_sweeps: int = 60):
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex) if vectors else None
    for _ in range(max_sweeps):
        sq = np.abs(a) ** 2
        np.fill_diagonal(sq, 0.0)
        off = math.sqrt(float(np.sum(sq)))
        if off < off_tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > 0.0:
                    _jacobi_rotate(a, v, p, q)
    lam = np.real(np.diag(a))
    return lam, v


def eig_hermitian(m: np.ndarray, tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi.

    Returns eigenvalues in descending order and the matching unitary of
    eigenvector columns.  Sweeps run until the off-diagonal Frobenius
    norm drops below 1e-12 (scaled by the matrix norm).
    """
    m = np.asarray(m, dtype=complex)
    assert_hermitian(m, tol)
    scale = max(1.0, float(np.max(np.abs(m))))
    lam, v = _jacobi_sweeps((m + dagger(m)) / 2.0, True, 1e-12 * scale)
    order = np.argsort(-lam)
    return lam[order], v[:, order]


def eigvals_hermitian(m: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Eigenvalues only (ascending), same Jacobi iteration as eig_hermitian."""
    m = np.asarray(m, dtype=complex)
    assert_hermitian(m, tol)
    scale = max(1.0, float(np.max(np.abs(m))))
    lam, _ = _jacobi_sweeps((m + dagger(m)) / 2.0, False, 1e-12 * scale)
    return np.sort(lam)


def matrix_function(m: np.ndarray, kind: str) -> np.ndarray:
    """Apply sqrt, log2 or inv_sqrt to a Hermitian PSD matrix spectrally.

    For log2 and inv_sqrt the function acts on the support only
    (eigenvalues > 1e-12); the kernel is mapped to zero.
    """
    lam, v = eig_hermitian(m)
    if lam[-1] < -1e-8:
        raise ValueError(f"matrix not PSD: eigenvalue {lam[-1]:.3e}")
    lam = np.clip(lam, 0.0, None)
    out = np.zeros_like(lam)
    support = lam > SUPPORT_CUTOFF
    if kind == "sqrt":
        out = np.sqrt(lam)
    elif kind == "log2":
        out[support] = np.log2(lam[support])
    elif kind == "inv_sqrt":
        out[support] = 1.0 / np.sqrt(lam[support])
    else:
        raise ValueError(f"unknown matrix function {kind!r}")
    return (v * out) @ dagger(v)


def entropy(rho: np.ndarray) -> float:
    """von Neumann entropy in bits, with 0 log 0 = 0."""
    lam = eigvals_hermitian(rho)
    lam = lam[lam > SUPPORT_CUTOFF]
    return float(-np.sum(lam * np.log2(lam)))


def shannon_entropy(p) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > SUPPORT_CUTOFF]
    return float(-np.sum(p * np.log2(p)))


def relative_entropy(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Quantum relative entropy S(rho || sigma) in bits.

    Returns ``math.inf`` when the support of rho leaks into the kernel
    of sigma by more than 1e-10.
    """
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise DimensionError("relative entropy needs equal dimensions")
    slam, svec = eig_hermitian(sigma)
    kernel = slam <= SUPPORT_CUTOFF
    if np.any(kernel):
        pk = svec[:, kernel]
        overlap = float(np.real(np.trace(dagger(pk) @ rho @ pk)))
        if overlap > 1e-10:
            return math.inf
    support = ~kernel
    diag_in_sigma = np.real(np.einsum("ia,ij,ja->a", svec.conj(), rho, svec))
    cross = float(np.sum(diag_in_sigma[support] * np.log2(slam[support])))
    return -entropy(rho) - cross


def trace_norm(m: np.ndarray) -> float:
    """Trace norm of a Hermitian matrix via its eigenvalues."""
    return float(np.sum(np.abs(eigvals_hermitian(m))))


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    return 0.5 * trace_norm(np.asarray(rho) - np.asarray(sigma))


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho))."""
    if np.asarray(rho).shape != np.asarray(sigma).shape:
        raise DimensionError("fidelity needs equal dimensions")
    root = matrix_function(rho, "sqrt")
    inner = root @ np.asarray(sigma, dtype=complex) @ root
    lam = eigvals_hermitian((inner + dagger(inner)) / 2.0)
    lam = np.clip(lam, 0.0, None)
    return float(np.sum(np.sqrt(lam)))


METRICS = ("trace", "one_minus_fidelity", "rel_ent")


def distance(metric: str, rho: np.ndarray, sigma: np.ndarray) -> float:
    """Contractive distance between states: trace, 1-fidelity or rel. entropy."""
    if metric == "trace":
        return trace_distance(rho, sigma)
    if metric == "one_minus_fidelity":
        return 1.0 - min(1.0, fidelity(rho, sigma))
    if metric == "rel_ent":
        return relative_entropy(rho, sigma)
    raise ValueError(f"unknown metric {metric!r}")


def dephase_subsystem(mat: np.ndarray, dims: tuple[int, ...], which: int) -> np.ndarray:
    """Zero every element whose bra/ket indices differ on subsystem ``which``.

    The dephasing basis is the computational basis of that tensor factor.
    """
    mat = np.asarray(mat, dtype=complex)
    total = int(np.prod(dims))
    if mat.shape != (total, total):
        raise DimensionError(f"dims {dims} do not factor shape {mat.shape}")
    t = mat.reshape(*dims, *dims).copy()
    n = len(dims)
    idx = np.arange(dims[which])
    mask = np.zeros((dims[which], dims[which]), dtype=bool)
    mask[idx, idx] = True
    shape = [1] * (2 * n)
    shape[which] = dims[which]
    shape[n + which] = dims[which]
    t *= mask.reshape(shape)
    return t.reshape(total, total)

"""Basis-dependent machinery: dephasing, the incoherent-operation hierarchy,
ancilla dilation of strictly incoherent channels, and coherence measures.

Classification is always of the *given* Kraus representation.  A true flag
certifies membership; a false flag does not rule out another representation
of the same channel being incoherent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .channels import ChannelError, KrausChannel, apply, pad_trace_preserving
from .linalg import (
    DimensionError,
    dagger,
    entropy,
    fidelity,
    ket,
    tensor_product,
    trace_distance,
    trace_norm,
)
from .sampling import random_pure_state, stream

STRUCTURE_TOL = 1e-8
COVARIANCE_TOL = 1e-8


@dataclass(frozen=True)
class Basis:
    """Unitary whose columns are the incoherent basis vectors."""

    columns: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.columns, dtype=complex)
        object.__setattr__(self, "columns", c)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise DimensionError("basis must be a square matrix of column vectors")
        if np.max(np.abs(dagger(c) @ c - np.eye(c.shape[0]))) > 1e-10:
            raise ValueError("basis columns are not unitary within 1e-10")

    @classmethod
    def computational(cls, dim: int) -> "Basis":
        return cls(np.eye(dim, dtype=complex))

    @property
    def dim(self) -> int:
        return self.columns.shape[0]

    def to_coords(self, m: np.ndarray) -> np.ndarray:
        """Matrix coordinates in this basis."""
        return dagger(self.columns) @ np.asarray(m, dtype=complex) @ self.columns

    def from_coords(self, m: np.ndarray) -> np.ndarray:
        return self.columns @ np.asarray(m, dtype=complex) @ dagger(self.columns)

    def is_computational(self) -> bool:
        return bool(np.max(np.abs(self.columns - np.eye(self.dim))) < 1e-14)


def dephase(rho: np.ndarray, basis: Basis | None = None) -> np.ndarray:
    """Erase off-diagonal elements in the incoherent basis."""
    rho = np.asarray(rho, dtype=complex)
    if basis is None or basis.is_computational():
        return np.diag(np.diag(rho))
    coords = basis.to_coords(rho)
    return basis.from_coords(np.diag(np.diag(coords)))


@dataclass(frozen=True)
class KrausSymbolicForm:
    """Structure K = sum_i c_i |f(i)><i| read off a (near-)incoherent operator.

    ``target`` maps each column to its single significant row, or -1 for a
    zero column.  For SI operators the completed permutation fills the zero
    columns with the unused rows in lexicographic order.
    """

    target: tuple[int, ...]
    coefficients: tuple[complex, ...]
    zero_columns: tuple[bool, ...]
    permutation: tuple[int, ...] | None

    incoherent: bool = False
    strictly_incoherent: bool = False
    genuinely_incoherent: bool = False
    violation: float = 0.0


def classify_kraus(k: np.ndarray, basis: Basis | None = None, tol: float = STRUCTURE_TOL) -> KrausSymbolicForm:
    """Classify one Kraus operator as incoherent / SI / GI in the basis.

    The significance threshold is ``tol`` relative to the largest entry.
    Incoherent: at most one significant entry per column.  SI: additionally
    at most one per row (subpermutation pattern).  GI: diagonal.
    """
    k = np.asarray(k, dtype=complex)
    if basis is not None and not basis.is_computational():
        k = basis.to_coords(k)
    if k.shape[0] != k.shape[1]:
        raise DimensionError("classification needs a square Kraus operator")
    d = k.shape[0]
    mag = np.abs(k)
    scale = float(mag.max())
    if scale == 0.0:
        zeros = (True,) * d
        return KrausSymbolicForm(
            target=(-1,) * d,
            coefficients=(0j,) * d,
            zero_columns=zeros,
            permutation=tuple(range(d)),
            incoherent=True,
            strictly_incoherent=True,
            genuinely_incoherent=True,
        )
    cutoff = tol * scale

    target = []
    coeffs = []
    zero_cols = []
    col_violation = 0.0
    for j in range(d):
        col = mag[:, j]
        top = int(np.argmax(col))
        rest = float(np.sum(col)) - float(col[top])
        second = float(np.partition(col, -2)[-2]) if d > 1 else 0.0
        col_violation = max(col_violation, second)
        if col[top] <= cutoff:
            target.append(-1)
            coeffs.append(0j)
            zero_cols.append(True)
        else:
            target.append(top)
            coeffs.append(complex(k[top, j]))
            zero_cols.append(False)
    incoherent = col_violation <= cutoff

    # SI needs the significant pattern to be a subpermutation: no row hit twice.
    row_hits = [t for t, z in zip(target, zero_cols) if not z]
    subpermutation = incoherent and len(set(row_hits)) == len(row_hits)
    row_violation = 0.0
    for i in range(d):
        row = np.sort(mag[i, :])
        if d > 1:
            row_violation = max(row_violation, float(row[-2]))
    strictly = incoherent and subpermutation and row_violation <= cutoff

    diag_violation = float(np.max(mag - np.diag(np.diag(mag))))
    genuinely = diag_violation <= cutoff

    permutation = None
    if strictly:
        used = set(row_hits)
        free_rows = [i for i in range(d) if i not in used]
        perm = []
        it = iter(free_rows)
        for t, z in zip(target, zero_cols):
            perm.append(next(it) if z else t)
        permutation = tuple(perm)

    violation = max(col_violation, row_violation if not strictly else 0.0) / scale
    return KrausSymbolicForm(
        target=tuple(target),
        coefficients=tuple(coeffs),
        zero_columns=tuple(zero_cols),
        permutation=permutation,
        incoherent=incoherent,
        strictly_incoherent=strictly,
        genuinely_incoherent=genuinely and strictly,
        violation=violation,
    )


@dataclass(frozen=True)
class ClassificationReport:
    incoherent: bool
    strictly_incoherent: bool
    genuinely_incoherent: bool
    covariant: bool | None
    commutes_with_dephasing: bool
    kraus_forms: tuple[KrausSymbolicForm, ...]
    max_violation: float
    dephasing_deviation: float

    def to_dict(self) -> dict:
        return {
            "incoherent": self.incoherent,
            "strictly_incoherent": self.strictly_incoherent,
            "genuinely_incoherent": self.genuinely_incoherent,
            "covariant": self.covariant,
            "commutes_with_dephasing": self.commutes_with_dephasing,
            "max_violation": self.max_violation,
            "dephasing_deviation": self.dephasing_deviation,
        }


def _kraus_covariant(k: np.ndarray, eigenvalues: np.ndarray, tol: float) -> bool:
    """All significant entries (i, j) must share one shift a_i - a_j."""
    mag = np.abs(k)
    scale = float(mag.max())
    if scale == 0.0:
        return True
    shifts = [
        eigenvalues[i] - eigenvalues[j]
        for i in range(k.shape[0])
        for j in range(k.shape[1])
        if mag[i, j] > STRUCTURE_TOL * scale
    ]
    if not shifts:
        return True
    return max(shifts) - min(shifts) <= tol


def dephasing_commutant_deviation(channel: KrausChannel, basis: Basis | None = None) -> float:
    """max |Phi(E(X)) - E(Phi(X))| over the matrix units X of the basis."""
    d = channel.dim_in
    b = basis if basis is not None else Basis.computational(d)
    dev = 0.0
    for i in range(d):
        for j in range(d):
            unit = np.outer(b.columns[:, i], b.columns[:, j].conj())
            lhs = dephase(apply(channel, unit), b)
            rhs = apply(channel, dephase(unit, b))
            dev = max(dev, float(np.max(np.abs(lhs - rhs))))
    return dev


def classify_channel(
    channel: KrausChannel,
    basis: Basis | None = None,
    observable: np.ndarray | None = None,
    tol: float = STRUCTURE_TOL,
) -> ClassificationReport:
    """Classify every Kraus operator and aggregate into the hierarchy flags.

    ``observable`` is an optional list of real eigenvalues attached to the
    basis states; when given, the covariance flag tests whether each Kraus
    operator shifts all basis states by one fixed eigenvalue difference.
    """
    if channel.dim_in != channel.dim_out:
        raise DimensionError("classification needs a square channel")
    forms = tuple(classify_kraus(k, basis, tol) for k in channel.kraus)
    incoherent = all(f.incoherent for f in forms)
    strictly = all(f.strictly_incoherent for f in forms)
    genuinely = all(f.genuinely_incoherent for f in forms)

    covariant: bool | None = None
    if observable is not None:
        a = np.asarray(observable, dtype=float)
        coords = [
            k if basis is None or basis.is_computational() else basis.to_coords(k)
            for k in channel.kraus
        ]
        covariant = all(_kraus_covariant(k, a, COVARIANCE_TOL) for k in coords)

    deviation = dephasing_commutant_deviation(channel, basis)
    commutes = deviation <= tol

    report = ClassificationReport(
        incoherent=incoherent,
        strictly_incoherent=strictly,
        genuinely_incoherent=genuinely,
        covariant=covariant,
        commutes_with_dephasing=commutes,
        kraus_forms=forms,
        max_violation=max(f.violation for f in forms),
        dephasing_deviation=deviation,
    )
    _assert_hierarchy(report, observable)
    return report


def _assert_hierarchy(report: ClassificationReport, observable) -> None:
    if report.genuinely_incoherent and not report.strictly_incoherent:
        raise AssertionError("hierarchy violated: GI without SI")
    if report.strictly_incoherent and not report.incoherent:
        raise AssertionError("hierarchy violated: SI without incoherent")
    if report.covariant and observable is not None:
        a = np.asarray(observable, dtype=float)
        nondegenerate = np.min(np.abs(np.diff(np.sort(a)))) > COVARIANCE_TOL if len(a) > 1 else True
        if nondegenerate and not report.strictly_incoherent:
            raise AssertionError("hierarchy violated: covariant (nondegenerate) without SI")


@dataclass(frozen=True)
class DilationSpec:
    """Ancilla realization of an SI channel: controlled unitaries on the
    ancilla, a measurement basis, and conditional permutation unitaries."""

    control_unitaries: tuple[np.ndarray, ...]
    ancilla_dim: int
    measurement_basis: np.ndarray
    conditional_unitaries: tuple[np.ndarray, ...]
    basis: Basis


def dilation_construct(channel: KrausChannel, basis: Basis | None = None) -> DilationSpec:
    """Build the ancilla dilation of a strictly incoherent channel.

    The channel is first padded to trace preservation with a diagonal Kraus
    operator if needed; with k Kraus operators the ancilla has dimension
    k + 1 and U_i's first column carries the coefficients (c^mu_i, r_i).
    """
    b = basis if basis is not None else Basis.computational(channel.dim_in)
    report = classify_channel(channel, b)
    if not report.strictly_incoherent:
        raise ChannelError("dilation requires a strictly incoherent channel")
    padded = pad_trace_preserving(channel)
    if len(padded) > len(channel):
        report = classify_channel(padded, b)
        if not report.strictly_incoherent:
            raise ChannelError("trace-preserving completion broke SI structure")

    d = channel.dim_in
    k = len(padded)
    anc = k + 1
    coeff = np.zeros((k, d), dtype=complex)
    perms = []
    for mu, form in enumerate(report.kraus_forms):
        perms.append(form.permutation)
        for i in range(d):
            coeff[mu, i] = form.coefficients[i]

    controls = []
    for i in range(d):
        first = np.zeros(anc, dtype=complex)
        first[:k] = coeff[:, i]
        residual = 1.0 - float(np.sum(np.abs(first) ** 2))
        first[k] = np.sqrt(max(0.0, residual))
        controls.append(_complete_unitary(first))

    conditionals = []
    for perm in perms:
        v = np.zeros((d, d), dtype=complex)
        for i in range(d):
            v[perm[i], i] = 1.0
        conditionals.append(v)

    return DilationSpec(
        control_unitaries=tuple(controls),
        ancilla_dim=anc,
        measurement_basis=np.eye(anc, dtype=complex),
        conditional_unitaries=tuple(conditionals),
        basis=b,
    )


def _complete_unitary(first_column: np.ndarray) -> np.ndarray:
    """Deterministic unitary completion of a unit vector by Gram-Schmidt
    against the computational basis."""
    n = first_column.shape[0]
    cols = [first_column / np.linalg.norm(first_column)]
    for j in range(n):
        v = ket(j, n)
        for c in cols:
            v = v - c * np.vdot(c, v)
        norm = np.linalg.norm(v)
        if norm > 1e-10:
            cols.append(v / norm)
        if len(cols) == n:
            break
    return np.stack(cols, axis=1)


def dilation_apply(spec: DilationSpec, rho: np.ndarray) -> list[np.ndarray]:
    """Run the dilation circuit; returns the unnormalized outcome states."""
    b = spec.basis
    d = b.dim
    rho = b.to_coords(rho)
    anc = spec.ancilla_dim
    zero = np.outer(ket(0, anc), ket(0, anc))
    total = tensor_product(rho, zero)
    u = np.zeros((d * anc, d * anc), dtype=complex)
    for i in range(d):
        u += tensor_product(np.outer(ket(i, d), ket(i, d)), spec.control_unitaries[i])
    total = u @ total @ dagger(u)
    outcomes = []
    for mu, v in enumerate(spec.conditional_unitaries):
        phi = spec.measurement_basis[:, mu]
        proj = tensor_product(np.eye(d, dtype=complex), phi.conj().reshape(1, anc))
        selected = proj @ total @ dagger(proj)
        outcomes.append(b.from_coords(v @ selected @ dagger(v)))
    return outcomes


def dilation_verify(spec: DilationSpec, channel: KrausChannel, n_states: int = 20, seed: int = 0) -> float:
    """Max trace-norm deviation between dilation outcomes and K rho K^dag."""
    padded = pad_trace_preserving(channel)
    d = channel.dim_in
    worst = 0.0
    rng = stream(seed, 71, d)
    for _ in range(n_states):
        psi = random_pure_state(d, rng)
        rho = np.outer(psi, psi.conj())
        outcomes = dilation_apply(spec, rho)
        for mu, k in enumerate(padded.kraus):
            expect = k @ rho @ dagger(k)
            worst = max(worst, trace_norm(outcomes[mu] - expect))
    return worst


def rel_ent_coherence(rho: np.ndarray, basis: Basis | None = None) -> float:
    """Relative entropy of coherence S(Phi(rho)) - S(rho), in bits."""
    return entropy(dephase(rho, basis)) - entropy(rho)


def _diagonal_state(weights: np.ndarray, basis: Basis | None) -> np.ndarray:
    d = len(weights)
    diag = np.diag(weights.astype(complex))
    if basis is None or basis.is_computational():
        return diag
    return basis.from_coords(diag)


def fidelity_coherence(
    rho: np.ndarray,
    basis: Basis | None = None,
    restarts: int = 20,
    seed: int = 0,
    tol: float = 1e-9,
) -> float:
    """Fidelity measure of coherence: min over incoherent sigma of 1 - F.

    Optimized over the probability simplex through a softmax chart with
    Nelder-Mead descent from seeded interior samples plus the dephased
    diagonal.  The result is an upper bound on the true minimum.
    """
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]

    def objective(x):
        w = np.exp(x - np.max(x))
        w = w / np.sum(w)
        return 1.0 - fidelity(rho, _diagonal_state(w, basis))

    diag = np.real(np.diag(dephase(rho, basis) if basis is None else (basis.to_coords(rho))))
    diag = np.clip(diag, 1e-6, None)
    starts = [np.log(diag / np.sum(diag))]
    rng = stream(seed, 91, d)
    for _ in range(restarts - 1):
        w = rng.dirichlet(np.ones(d))
        starts.append(np.log(np.clip(w, 1e-6, None)))

    best = np.inf
    for x0 in starts:
        res = minimize(objective, x0, method="Nelder-Mead", options={"xatol": tol, "fatol": tol, "maxiter": 400 * d})
        best = min(best, float(res.fun))
    return max(0.0, best)


def coherence_measures(rho: np.ndarray, basis: Basis | None = None, seed: int = 0) -> dict:
    """All single-system coherence measures: relative entropy C, the dephased
    distances C'_tr and C'_f, and the optimized fidelity measure C_f."""
    phi = dephase(rho, basis)
    return {
        "C": rel_ent_coherence(rho, basis),
        "C_tr": trace_distance(rho, phi),
        "C_f_dephased": 1.0 - min(1.0, fidelity(rho, phi)),
        "C_f": fidelity_coherence(rho, basis, seed=seed),
    }


def random_si_channel(
    d: int, n_kraus: int, seed: int = 0, basis: Basis | None = None, index: int = 0
) -> KrausChannel:
    """Trace-preserving strictly incoherent channel: uniform permutations and
    per-column normalized complex coefficients."""
    if d < 2 or n_kraus < 1:
        raise ValueError("need d >= 2 and n_kraus >= 1")
    rng = stream(seed, 23, d, n_kraus, index)
    coeff = rng.normal(size=(n_kraus, d)) + 1j * rng.normal(size=(n_kraus, d))
    coeff /= np.linalg.norm(coeff, axis=0, keepdims=True)
    ops = []
    for mu in range(n_kraus):
        perm = rng.permutation(d)
        k = np.zeros((d, d), dtype=complex)
        for i in range(d):
            k[perm[i], i] = coeff[mu, i]
        ops.append(k)
    channel = KrausChannel(tuple(ops))
    if basis is not None and not basis.is_computational():
        channel = KrausChannel(tuple(basis.from_coords(k) for k in channel.kraus))
    return channel


def random_gi_channel(d: int, n_kraus: int, seed: int = 0, index: int = 0) -> KrausChannel:
    """Trace-preserving genuinely incoherent channel (diagonal Kraus set)."""
    rng = stream(seed, 29, d, n_kraus, index)
    coeff = rng.normal(size=(n_kraus, d)) + 1j * rng.normal(size=(n_kraus, d))
    coeff /= np.linalg.norm(coeff, axis=0, keepdims=True)
    return KrausChannel(tuple(np.diag(coeff[mu]) for mu in range(n_kraus)))


def random_incoherent_not_si_channel(d: int, seed: int = 0, index: int = 0) -> KrausChannel:
    """Incoherent channel that measures a coherent basis on one 2d subspace.

    Two rank-one Kraus operators |i><u| and |j><v| with {u, v} a rotated
    basis of span{|i>, |j>}, completed by the projectors onto the rest.
    The rotation is resampled until all overlaps are well away from zero,
    which guarantees a dephasing-commutation violation of useful size.
    """
    rng = stream(seed, 31, d, index)
    i, j = sorted(rng.choice(d, size=2, replace=False))
    while True:
        from .sampling import random_unitary

        u2 = random_unitary(2, rng)
        if np.min(np.abs(u2)) > 0.25:
            break
    u = np.zeros(d, dtype=complex)
    v = np.zeros(d, dtype=complex)
    u[[i, j]] = u2[:, 0]
    v[[i, j]] = u2[:, 1]
    ops = [np.outer(ket(i, d), u.conj()), np.outer(ket(j, d), v.conj())]
    for m in range(d):
        if m not in (i, j):
            ops.append(np.outer(ket(m, d), ket(m, d)))
    return KrausChannel(tuple(ops))

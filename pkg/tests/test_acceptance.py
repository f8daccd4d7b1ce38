"""Acceptance gate: the nine headline checks, one pass/fail line each.

Run with ``pytest -v -s tests/test_acceptance.py`` to see the lines; every
check also asserts, so a FAIL line comes with a test failure.
"""

import time

import numpy as np
from scipy.optimize import minimize

from coherence_kit.channels import BipartiteState, KrausChannel, choi, local_apply
from coherence_kit.coherence import (
    dilation_construct,
    dilation_verify,
    random_incoherent_not_si_channel,
    random_si_channel,
    rel_ent_coherence,
)
from coherence_kit.discord import (
    basis_discord,
    delta_creation_demo,
    j_increase_witness,
    petz_recover,
    random_zero_discord_state,
    recoverability,
    zero_discord_decompose,
    zero_discord_example,
)
from coherence_kit.linalg import eigvals_hermitian, relative_entropy, trace_distance
from coherence_kit.sampling import random_density_matrix, random_unitary, stream
from coherence_kit.suites import run_suite
from coherence_kit.universal import (
    bell_basis,
    channel_zoo,
    depolarizing_channel,
    every_basis_falsifier,
    is_depolarizing,
    isotropic_channel,
    isotropic_decompose,
    p_range,
)


def report(number, name, ok, detail=""):
    line = f"ACCEPTANCE {number} ({name}): {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  [{detail}]"
    print(line)
    assert ok, line


def test_acceptance_1_delta_creation():
    start = time.time()
    demo = delta_creation_demo()
    ok = abs(demo["before"]) < 1e-9 and abs(demo["after"] - 0.1887) < 5e-4
    elapsed = time.time() - start
    report(
        1,
        "delta-creation",
        ok and elapsed < 1.0,
        f"before={demo['before']:.2e} after={demo['after']:.6f} in {elapsed:.2f}s",
    )


def test_acceptance_2_zero_discord_equivalence():
    start = time.time()
    disagreements = 0
    for t in range(500):
        rng = stream(2, 200, t)
        da = int(rng.integers(2, 4))
        db = int(rng.integers(2, 4))
        if t < 100:
            rho = random_zero_discord_state(da, db, seed=2, index=t)
        else:
            rho = BipartiteState(random_density_matrix(da * db, rng), da, db)
        delta = basis_discord(rho).basis_discord
        _, recovered = petz_recover(rho)
        flags = (
            delta < 1e-8,
            trace_distance(recovered.state, rho.state) < 1e-7,
            zero_discord_decompose(rho).success,
        )
        if len(set(flags)) != 1:
            disagreements += 1
    elapsed = time.time() - start
    report(
        2,
        "zero-discord-equivalence",
        disagreements == 0 and elapsed < 60,
        f"{disagreements} disagreements over 500 states in {elapsed:.1f}s",
    )


def test_acceptance_3_dilation_round_trip():
    start = time.time()
    worst = 0.0
    for t in range(200):
        rng = stream(3, 300, t)
        d = int(rng.integers(2, 5))
        n = int(rng.integers(1, 5))
        e = random_si_channel(d, n, seed=3, index=t)
        spec = dilation_construct(e)
        worst = max(worst, dilation_verify(spec, e, n_states=5, seed=t))
    elapsed = time.time() - start
    report(
        3,
        "dilation-round-trip",
        worst <= 1e-10 and elapsed < 30,
        f"worst deviation {worst:.2e} over 200 channels in {elapsed:.1f}s",
    )


def test_acceptance_4_monotone_suites():
    start = time.time()
    failures = 0
    for name, trials in (
        ("cprime-monotone", 1000),
        ("j-ensemble", 1000),
        ("delta-ensemble", 1000),
        ("gi-deterministic", 500),
    ):
        failures += len(run_suite(name, trials=trials, seed=4)["failures"])
    elapsed = time.time() - start
    report(
        4,
        "monotone-suites",
        failures == 0 and elapsed < 300,
        f"{failures} failures in {elapsed:.1f}s",
    )


def test_acceptance_5_j_witness():
    start = time.time()
    k0 = np.array([[1, 1], [0, 0]], dtype=complex) / np.sqrt(2)
    k1 = np.array([[0, 0], [1, -1]], dtype=complex) / np.sqrt(2)
    channels = [KrausChannel((k0, k1))]
    for t in range(50):
        rng = stream(5, 500, t)
        d = int(rng.integers(2, 5))
        channels.append(random_incoherent_not_si_channel(d, seed=5, index=t))
    failures = 0
    for e in channels:
        _, _, before, after = j_increase_witness(e)
        if not (before <= 1e-10 and after > 1e-4):
            failures += 1
    elapsed = time.time() - start
    report(
        5,
        "j-increase-witness",
        failures == 0 and elapsed < 30,
        f"{failures} failures over {len(channels)} channels in {elapsed:.1f}s",
    )


def test_acceptance_6_cp_boundary():
    ok = p_range(2) == (-1 / 3, 1.0)
    detail = []
    for d in (2, 3, 4):
        lo, _ = p_range(d)
        at = float(eigvals_hermitian(choi(depolarizing_channel(d, lo)))[0])
        below_p = lo - 1e-3
        alpha = bell_basis(d)[0]
        model = below_p * np.outer(alpha, alpha.conj()) + (1 - below_p) / (d * d) * np.eye(d * d)
        below = float(eigvals_hermitian(model)[0])
        ok = ok and abs(at) < 1e-10 and below < -1e-5
        detail.append(f"d={d}: {at:.1e}/{below:.1e}")
    report(6, "cp-boundary", ok, "; ".join(detail))


def test_acceptance_7_zoo_consistency():
    start = time.time()
    mismatches = 0
    for name, e in channel_zoo(7).items():
        p = is_depolarizing(e)
        violating = every_basis_falsifier(e, n_bases=200, seed=7)
        if (p is not None) != (violating is None):
            mismatches += 1
    planted_ok = True
    for t in range(10):
        rng = stream(7, 700, t)
        d = int(rng.integers(2, 4))
        lo, _ = p_range(d)
        p = float(rng.uniform(lo + 0.05, 0.95))
        u = random_unitary(d, rng)
        got = isotropic_decompose(isotropic_channel(u, p))
        if got is None:
            planted_ok = False
            continue
        u_est, p_est = got
        phase = u_est[np.nonzero(np.abs(u) > 1e-8)][0] / u[np.nonzero(np.abs(u) > 1e-8)][0]
        planted_ok = planted_ok and abs(p_est - p) < 1e-9
        planted_ok = planted_ok and np.max(np.abs(u_est - phase * u)) < 1e-8
    elapsed = time.time() - start
    report(
        7,
        "zoo-consistency",
        mismatches == 0 and planted_ok and elapsed < 120,
        f"{mismatches} falsifier mismatches, planted ok={planted_ok}, {elapsed:.1f}s",
    )


def test_acceptance_8_recoverability():
    start = time.time()
    zero_ok = True
    for t in range(5):
        rho = random_zero_discord_state(2, 2, seed=8, index=t)
        zero_ok = zero_ok and recoverability(rho, budget=0)["value"] < 1e-6
    zero_ok = zero_ok and recoverability(zero_discord_example(), budget=0)["value"] < 1e-6
    mixed = delta_creation_demo()["state"]
    positive_ok = recoverability(mixed, budget=0)["value"] > 1e-3
    failures = len(run_suite("recover-memory", trials=200, seed=8)["failures"])
    elapsed = time.time() - start
    report(
        8,
        "recoverability",
        zero_ok and positive_ok and failures == 0 and elapsed < 600,
        f"zero_ok={zero_ok} positive_ok={positive_ok} memory failures={failures} in {elapsed:.0f}s",
    )


def _min_over_diagonal(rho, starts, rng):
    d = rho.shape[0]

    def objective(x):
        w = np.exp(x - np.max(x))
        w = w / np.sum(w)
        return relative_entropy(rho, np.diag(w).astype(complex))

    best = np.inf
    for x0 in starts:
        res = minimize(objective, x0, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12})
        best = min(best, float(res.fun))
    for _ in range(5):
        w = rng.dirichlet(np.ones(d))
        res = minimize(objective, np.log(w + 1e-9), method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12})
        best = min(best, float(res.fun))
    return best


def test_acceptance_9_closed_form_cross_checks():
    # Relative entropy of coherence against direct diagonal minimization.
    rel_ok = True
    worst_rel = 0.0
    for t in range(50):
        rng = stream(9, 900, t)
        d = int(rng.integers(2, 4))
        rho = random_density_matrix(d, rng)
        closed = rel_ent_coherence(rho)
        diag = np.clip(np.real(np.diag(rho)), 1e-9, None)
        brute = _min_over_diagonal(rho, [np.log(diag)], rng)
        worst_rel = max(worst_rel, abs(brute - closed))
        rel_ok = rel_ok and abs(brute - closed) < 1e-6

    # Conditional coherence against minimization over IQ states.
    cond_ok = True
    worst_cond = 0.0
    for t in range(20):
        rng = stream(9, 901, t)
        rho = BipartiteState(random_density_matrix(4, rng), 2, 2)
        closed = basis_discord(rho).conditional_coherence
        sigma = local_apply(
            KrausChannel(tuple(np.diag(row).astype(complex) for row in np.eye(2))), rho, "A"
        ).state
        conds = []
        probs = []
        for i in range(2):
            block = sigma[i * 2 : (i + 1) * 2, i * 2 : (i + 1) * 2]
            p = float(np.real(np.trace(block)))
            probs.append(p)
            conds.append(block / p if p > 1e-12 else np.eye(2) / 2)

        def objective(x):
            w = np.exp(x - np.max(x))
            w = w / np.sum(w)
            chi = np.zeros((4, 4), dtype=complex)
            for i in range(2):
                chi[i * 2 : (i + 1) * 2, i * 2 : (i + 1) * 2] = w[i] * conds[i]
            return relative_entropy(rho.state, chi)

        res = minimize(
            objective,
            np.log(np.clip(probs, 1e-9, None)),
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-12},
        )
        brute = float(res.fun)
        worst_cond = max(worst_cond, abs(brute - closed))
        cond_ok = cond_ok and abs(brute - closed) < 1e-5
    report(
        9,
        "closed-form-cross-checks",
        rel_ok and cond_ok,
        f"worst rel-ent gap {worst_rel:.1e}, worst conditional gap {worst_cond:.1e}",
    )

import numpy as np
import pytest

from coherence_kit.channels import ChannelError, KrausChannel, apply, unitary_channel
from coherence_kit.coherence import (
    Basis,
    classify_channel,
    classify_kraus,
    coherence_measures,
    dephase,
    dephasing_commutant_deviation,
    dilation_apply,
    dilation_construct,
    dilation_verify,
    fidelity_coherence,
    random_gi_channel,
    random_incoherent_not_si_channel,
    random_si_channel,
    rel_ent_coherence,
)
from coherence_kit.linalg import dagger
from coherence_kit.sampling import random_density_matrix, random_unitary, stream

NON_SI = KrausChannel(
    (
        np.array([[1, 1], [0, 0]], dtype=complex) / np.sqrt(2),
        np.array([[0, 0], [1, -1]], dtype=complex) / np.sqrt(2),
    )
)


def test_dephase_computational_and_rotated():
    rho = np.full((2, 2), 0.5, dtype=complex)
    np.testing.assert_allclose(dephase(rho), np.eye(2) / 2, atol=1e-12)
    rng = stream(37, 0)
    b = Basis(random_unitary(2, rng))
    out = dephase(rho, b)
    coords = b.to_coords(out)
    assert np.max(np.abs(coords - np.diag(np.diag(coords)))) < 1e-12
    # Idempotent.
    np.testing.assert_allclose(dephase(out, b), out, atol=1e-12)


def test_classify_kraus_patterns():
    diag = classify_kraus(np.diag([0.3, 0.7j]))
    assert diag.genuinely_incoherent and diag.strictly_incoherent and diag.incoherent
    perm = classify_kraus(np.array([[0, 0.5], [0.5, 0]], dtype=complex))
    assert perm.strictly_incoherent and not perm.genuinely_incoherent
    assert perm.permutation == (1, 0)
    # Two entries in one row: incoherent but not SI.
    row = classify_kraus(np.array([[0.5, 0.5], [0, 0]], dtype=complex))
    assert row.incoherent and not row.strictly_incoherent
    # Two entries in one column: not incoherent at all.
    col = classify_kraus(np.array([[0.5, 0], [0.5, 0]], dtype=complex))
    assert not col.incoherent


def test_classify_channel_hierarchy_flags():
    rep = classify_channel(NON_SI)
    assert rep.incoherent and not rep.strictly_incoherent
    assert not rep.commutes_with_dephasing

    si = random_si_channel(3, 2, seed=41)
    rep = classify_channel(si)
    assert rep.strictly_incoherent and rep.commutes_with_dephasing

    gi = random_gi_channel(3, 2, seed=41)
    rep = classify_channel(gi)
    assert rep.genuinely_incoherent and rep.strictly_incoherent


def test_classify_unitary_not_incoherent():
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    rep = classify_channel(unitary_channel(h))
    assert not rep.incoherent


def test_covariance_flag():
    # Lowering-style operator shifts every basis state by the same amount.
    lower = KrausChannel(
        (np.diag([1.0, 0.0]).astype(complex), np.array([[0, 1], [0, 0]], dtype=complex))
    )
    rep = classify_channel(lower, observable=np.array([0.0, 1.0]))
    assert rep.covariant
    rep = classify_channel(NON_SI, observable=np.array([0.0, 1.0]))
    assert not rep.covariant


def test_classification_in_rotated_basis():
    rng = stream(43, 0)
    u = random_unitary(3, rng)
    b = Basis(u)
    si = random_si_channel(3, 2, seed=43)
    rotated = KrausChannel(tuple(u @ k @ dagger(u) for k in si.kraus))
    assert classify_channel(rotated, b).strictly_incoherent
    assert not classify_channel(rotated).strictly_incoherent


def test_dilation_reproduces_selected_outcomes():
    for t in range(10):
        rng = stream(47, t)
        d = int(rng.integers(2, 5))
        n = int(rng.integers(1, 5))
        e = random_si_channel(d, n, seed=47, index=t)
        spec = dilation_construct(e)
        assert spec.ancilla_dim == len(e) + 1
        assert dilation_verify(spec, e, n_states=5, seed=t) < 1e-10


def test_dilation_outcomes_sum_to_channel_action():
    e = random_si_channel(3, 2, seed=53)
    spec = dilation_construct(e)
    rng = stream(53, 1)
    rho = random_density_matrix(3, rng)
    outcomes = dilation_apply(spec, rho)
    np.testing.assert_allclose(sum(outcomes), apply(e, rho), atol=1e-10)


def test_dilation_rejects_non_si():
    with pytest.raises(ChannelError):
        dilation_construct(NON_SI)


def test_rel_ent_coherence_known_values():
    plus = np.full((2, 2), 0.5, dtype=complex)
    assert rel_ent_coherence(plus) == pytest.approx(1.0, abs=1e-10)
    assert rel_ent_coherence(np.eye(2) / 2) == pytest.approx(0.0, abs=1e-10)


def test_rel_ent_coherence_vanishes_in_own_eigenbasis():
    rng = stream(59, 0)
    rho = random_density_matrix(3, rng)
    from coherence_kit.linalg import eig_hermitian

    _, v = eig_hermitian(rho)
    assert rel_ent_coherence(rho, Basis(v)) == pytest.approx(0.0, abs=1e-8)


def test_fidelity_coherence_plus_state():
    plus = np.full((2, 2), 0.5, dtype=complex)
    got = fidelity_coherence(plus, restarts=8)
    assert got == pytest.approx(1 - np.sqrt(0.5), abs=1e-6)


def test_coherence_measures_bounds():
    rng = stream(61, 0)
    for t in range(5):
        rho = random_density_matrix(3, rng)
        m = coherence_measures(rho, seed=t)
        assert m["C"] >= -1e-10
        # The optimized fidelity measure never exceeds the dephased one.
        assert m["C_f"] <= m["C_f_dephased"] + 1e-8


def test_random_si_channel_is_tp_and_si():
    for t in range(10):
        e = random_si_channel(2 + t % 3, 1 + t % 4, seed=67, index=t)
        assert e.trace_preserving
        assert classify_channel(e).strictly_incoherent


def test_random_incoherent_not_si_violates_commutation():
    for t in range(10):
        e = random_incoherent_not_si_channel(2 + t % 3, seed=71, index=t)
        rep = classify_channel(e)
        assert e.trace_preserving
        assert rep.incoherent and not rep.strictly_incoherent
        assert dephasing_commutant_deviation(e) > 1e-4


def test_si_channels_commute_with_dephasing():
    for t in range(10):
        e = random_si_channel(2 + t % 3, 2, seed=73, index=t)
        assert dephasing_commutant_deviation(e) < 1e-10

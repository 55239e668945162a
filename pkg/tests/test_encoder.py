"""Logical-state encoding: matrix units, round trips, POVMs, HWS pairs."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rffqudit.channel import random_density, random_povm
from rffqudit.coupling import build_coupled_basis
from rffqudit.encoder import (
    EncodedOperator,
    HwsPair,
    QuditPovm,
    QuditState,
    build_hws,
    build_q_set,
    decode_matrix,
    decode_payload,
    decode_state,
    encode_matrix,
    encode_povm,
    encode_state,
    encoded_entropy_check,
    hws_commutation_residual,
    sector_support_residual,
)
from rffqudit.errors import ValidationError
from rffqudit.linalg import dagger, identity, max_abs_diff
from rffqudit.spinsys import SpinRegister, collective_rotation

SEED = 20260819


def qset(n):
    return build_q_set(build_coupled_basis(SpinRegister(n)))


@pytest.fixture(scope="module")
def qs3():
    return qset(3)


@pytest.fixture(scope="module")
def qs4():
    return qset(4)


def test_qudit_state_accepts_valid_density():
    rho = np.array([[0.75, 0.25], [0.25, 0.25]], dtype=complex)
    state = QuditState(2, rho)
    np.testing.assert_array_equal(state.rho, rho)


def test_qudit_state_rejects_bad_inputs():
    with pytest.raises(ValidationError, match="hermitian"):
        QuditState(2, np.array([[1, 1], [0, 0]], dtype=complex))
    with pytest.raises(ValidationError, match="trace"):
        QuditState(2, np.diag([0.6, 0.6]).astype(complex))
    with pytest.raises(ValidationError, match="PSD"):
        QuditState(2, np.diag([1.5, -0.5]).astype(complex))
    with pytest.raises(ValidationError, match="2x2"):
        QuditState(2, np.eye(3, dtype=complex) / 3)


def test_qudit_state_tolerates_roundoff_negativity():
    rho = np.diag([1.0 + 5e-11, -5e-11]).astype(complex)
    rho /= np.trace(rho)
    QuditState(2, rho)  # within the PSD tolerance; must not raise


def test_qudit_povm_validation():
    third = identity(2) / 3
    QuditPovm(2, (third, third, third))
    with pytest.raises(ValidationError, match="identity"):
        QuditPovm(2, (third, third))
    with pytest.raises(ValidationError, match="at least one"):
        QuditPovm(2, ())
    with pytest.raises(ValidationError, match="not PSD"):
        QuditPovm(2, (np.diag([1.5, 1.0]), np.diag([-0.5, 0.0])))


def test_q_set_basic_shape(qs3):
    assert qs3.n == 3 and qs3.d == 2
    assert qs3(1, 2).shape == (8, 8)
    np.testing.assert_allclose(
        qs3.sector_projector, qs3(1, 1) + qs3(2, 2), atol=1e-14
    )


def test_q_set_matrix_unit_algebra(qs4):
    d = qs4.d
    for lam in range(1, d + 1):
        for lamp in range(1, d + 1):
            np.testing.assert_allclose(
                dagger(qs4(lam, lamp)), qs4(lamp, lam), atol=1e-13
            )
            assert np.trace(qs4(lam, lamp)) == pytest.approx(
                d if lam == lamp else 0.0, abs=1e-12
            )
    np.testing.assert_allclose(
        qs4(1, 2) @ qs4(2, 3), qs4(1, 3), atol=1e-12
    )
    assert max_abs_diff(qs4(1, 2) @ qs4(1, 3), np.zeros((16, 16))) < 1e-12


def test_sector_projector_is_projector(qs4):
    p = qs4.sector_projector
    np.testing.assert_allclose(p @ p, p, atol=1e-12)
    assert np.trace(p).real == pytest.approx(qs4.d ** 2)


def test_encode_completely_mixed_state(qs3):
    # The maximally mixed logical state lands on sector_projector / d^2.
    enc = encode_state(qs3, QuditState(2, identity(2) / 2))
    np.testing.assert_allclose(
        enc.payload, qs3.sector_projector / 4, atol=1e-13
    )
    assert np.trace(enc.payload) == pytest.approx(1.0, abs=1e-12)


def test_encode_matrix_scaling(qs3):
    m = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    np.testing.assert_allclose(encode_matrix(qs3, m), qs3(1, 2) / 2, atol=1e-13)
    np.testing.assert_allclose(
        decode_matrix(qs3, encode_matrix(qs3, m)), m, atol=1e-12
    )


def test_encode_matrix_rejects_wrong_shape(qs3):
    with pytest.raises(ValidationError):
        encode_matrix(qs3, np.eye(3))


@pytest.mark.parametrize("n", (3, 4, 5))
def test_state_round_trip_random(n):
    qs = qset(n)
    rng = np.random.default_rng(SEED + n)
    for _ in range(5):
        state = QuditState(qs.d, random_density(rng, qs.d))
        enc = encode_state(qs, state)
        assert enc.kind == "state"
        assert np.trace(enc.payload) == pytest.approx(1.0, abs=1e-12)
        assert sector_support_residual(qs, enc.payload) < 1e-12
        back = decode_state(qs, enc)
        assert max_abs_diff(back.rho, state.rho) < 1e-12


def test_decode_payload_rejects_out_of_sector_support(qs3):
    stray = np.zeros((8, 8), dtype=complex)
    stray[0, 0] = 1.0  # the all-up ket lives in the largest-j sector
    with pytest.raises(ValidationError, match="sector"):
        decode_payload(qs3, 0.9 * qs3.sector_projector / 4 + 0.1 * stray)


def test_decode_state_checks_fingerprint(qs3):
    enc = encode_state(qs3, QuditState(2, identity(2) / 2))
    impostor = EncodedOperator(
        n=enc.n, d=enc.d, kind=enc.kind, fingerprint="0" * 16, payload=enc.payload
    )
    with pytest.raises(ValidationError, match="fingerprint"):
        decode_state(qs3, impostor)


def test_encode_povm_sums_to_sector_projector(qs4):
    rng = np.random.default_rng(SEED)
    povm = random_povm(rng, qs4.d, 4)
    encoded = encode_povm(qs4, povm)
    assert [e.kind for e in encoded] == ["povm-element"] * 4
    total = sum(e.payload for e in encoded)
    np.testing.assert_allclose(total, qs4.sector_projector, atol=1e-11)


def test_encoded_probabilities_match_logical(qs3):
    rng = np.random.default_rng(SEED + 1)
    state = QuditState(2, random_density(rng, 2))
    povm = random_povm(rng, 2, 3)
    enc = encode_state(qs3, state)
    for element, encoded in zip(povm.elements, encode_povm(qs3, povm)):
        logical = np.trace(state.rho @ element).real
        physical = np.trace(enc.payload @ encoded.payload).real
        assert physical == pytest.approx(logical, abs=1e-12)


def test_encoded_state_is_rotation_invariant(qs3):
    rng = np.random.default_rng(SEED + 2)
    state = QuditState(2, random_density(rng, 2))
    enc = encode_state(qs3, state)
    reg = SpinRegister(3)
    u = collective_rotation(reg, (0.6, 0.0, 0.8), 1.3)
    np.testing.assert_allclose(
        u @ enc.payload @ dagger(u), enc.payload, atol=1e-12
    )


def test_entropy_check_reports_offset(qs4):
    rng = np.random.default_rng(SEED + 3)
    state = QuditState(3, random_density(rng, 3))
    enc = encode_state(qs4, state)
    check = encoded_entropy_check(state, enc)
    assert check.defect == pytest.approx(0.0, abs=1e-10)
    assert check.s_encoded == pytest.approx(check.s_logical + np.log2(3), abs=1e-10)


@pytest.mark.parametrize("n", (3, 4, 5))
def test_hws_pair_relations(n):
    qs = qset(n)
    pair = build_hws(qs)
    assert isinstance(pair, HwsPair)
    d = qs.d
    u_power = np.linalg.matrix_power(pair.u, d)
    v_power = np.linalg.matrix_power(pair.v, d)
    np.testing.assert_allclose(u_power, qs.sector_projector, atol=1e-11)
    np.testing.assert_allclose(v_power, qs.sector_projector, atol=1e-11)
    assert hws_commutation_residual(pair) < 1e-11


def test_hws_qubit_pair_is_pauli_pair(qs3):
    pair = build_hws(qs3)
    sx = qs3(1, 2) + qs3(2, 1)
    sz = qs3(1, 1) - qs3(2, 2)
    np.testing.assert_allclose(pair.u, -sz, atol=1e-12)
    np.testing.assert_allclose(pair.v, sx, atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(
    theta=st.floats(min_value=0.0, max_value=np.pi),
    phi=st.floats(min_value=0.0, max_value=2 * np.pi),
    angle=st.floats(min_value=-2 * np.pi, max_value=2 * np.pi),
    seed=st.integers(min_value=0, max_value=2**31 - 1),
)
def test_any_collective_rotation_fixes_any_payload(theta, phi, angle, seed):
    """Rotation invariance holds for every axis and angle, not just Haar draws."""
    qs = qset(3)
    rng = np.random.default_rng(seed)
    state = QuditState(2, random_density(rng, 2))
    payload = encode_state(qs, state).payload
    axis = (
        np.sin(theta) * np.cos(phi),
        np.sin(theta) * np.sin(phi),
        np.cos(theta),
    )
    u = collective_rotation(SpinRegister(3), axis, angle)
    assert max_abs_diff(u @ payload @ dagger(u), payload) < 1e-11

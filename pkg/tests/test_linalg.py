"""Dense linear-algebra helpers: tensor products, spectra, and serialization."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rffqudit.errors import ContractViolationError, SizeLimitError, ValidationError
from rffqudit.linalg import (
    dagger,
    dimension_ceiling,
    eigenvalue_groups,
    entropy_bits,
    get_max_constituents,
    hermitian_eig,
    identity,
    is_close,
    is_hermitian,
    kron,
    kron_all,
    log2_int,
    mat_exp_hermitian_generator,
    matrix_from_json,
    matrix_from_json_dict,
    matrix_to_json,
    matrix_to_json_dict,
    max_abs_diff,
    partial_trace,
    set_max_constituents,
    sqrtm_psd,
    trace_distance,
    uhlmann_fidelity,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


@pytest.fixture
def restore_ceiling():
    before = get_max_constituents()
    yield
    set_max_constituents(before)


def random_hermitian(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (g + g.conj().T) / 2


def random_density(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def test_kron_matches_manual_2x2():
    a = np.array([[1, 2], [3, 4]], dtype=complex)
    b = np.array([[0, 1j], [-1j, 0]], dtype=complex)
    expected = np.block([[1 * b, 2 * b], [3 * b, 4 * b]])
    np.testing.assert_allclose(kron(a, b), expected)


def test_kron_all_associative_and_ordered():
    rng = np.random.default_rng(11)
    mats = [random_hermitian(rng, 2) for _ in range(3)]
    left = kron(kron(mats[0], mats[1]), mats[2])
    np.testing.assert_allclose(kron_all(mats), left, atol=1e-14)


def test_kron_all_respects_dimension_ceiling(restore_ceiling):
    set_max_constituents(3)
    assert dimension_ceiling() == 8
    with pytest.raises(SizeLimitError):
        kron_all([identity(2)] * 4)


def test_set_max_constituents_rejects_out_of_range():
    for bad in (1, 15, 0):
        with pytest.raises(ValidationError):
            set_max_constituents(bad)


def test_dagger_is_conjugate_transpose():
    a = np.array([[1 + 1j, 2], [3j, 4]], dtype=complex)
    np.testing.assert_allclose(dagger(a), a.conj().T)


def test_max_abs_diff_and_is_close():
    a = identity(3)
    b = a.copy()
    b[0, 1] = 1e-12
    assert max_abs_diff(a, b) == pytest.approx(1e-12)
    assert is_close(a, b, tol=1e-10)
    assert not is_close(a, b, tol=1e-13)


def test_partial_trace_of_product_operator():
    rng = np.random.default_rng(5)
    a, b, c = (random_hermitian(rng, 2) for _ in range(3))
    full = kron_all([a, b, c])
    reduced = partial_trace(full, n_factors=3, traced_factor=2)
    np.testing.assert_allclose(reduced, np.trace(b) * kron(a, c), atol=1e-12)


def test_partial_trace_preserves_trace():
    rng = np.random.default_rng(6)
    rho = random_density(rng, 8)
    for site in (1, 2, 3):
        reduced = partial_trace(rho, n_factors=3, traced_factor=site)
        assert np.trace(reduced) == pytest.approx(1.0)


def test_partial_trace_rejects_bad_factor():
    with pytest.raises(ContractViolationError):
        partial_trace(identity(8), n_factors=3, traced_factor=4)


def test_hermitian_eig_reconstructs_input():
    rng = np.random.default_rng(7)
    h = random_hermitian(rng, 6)
    w, v = hermitian_eig(h)
    np.testing.assert_allclose(v @ np.diag(w) @ dagger(v), h, atol=1e-12)
    assert np.all(np.diff(w) >= 0)


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(ContractViolationError):
        hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))


def test_is_hermitian():
    assert is_hermitian(SY)
    assert not is_hermitian(SY + 1e-6 * np.array([[0, 1], [0, 0]]))


def test_mat_exp_rotates_pauli():
    # exp(-i (pi/2) sz/2) conjugation carries sx onto sy.
    u = mat_exp_hermitian_generator(SZ / 2, np.pi / 2)
    np.testing.assert_allclose(u @ dagger(u), identity(2), atol=1e-14)
    rotated = u @ SX @ dagger(u)
    np.testing.assert_allclose(rotated, SY, atol=1e-14)


def test_eigenvalue_groups_counts_degeneracies():
    values = np.array([0.0, 0.0 + 3e-9, 1.0, 2.0, 2.0, 2.0])
    groups = eigenvalue_groups(values, tol=1e-8)
    assert [(round(v, 6), c) for v, c in groups] == [(0.0, 2), (1.0, 1), (2.0, 3)]


def test_entropy_bits_pure_and_mixed():
    pure = np.diag([1.0, 0.0]).astype(complex)
    assert entropy_bits(pure) == pytest.approx(0.0, abs=1e-12)
    assert entropy_bits(identity(2) / 2) == pytest.approx(1.0, abs=1e-12)
    assert entropy_bits(identity(4) / 4) == pytest.approx(2.0, abs=1e-12)


def test_sqrtm_psd_squares_back():
    rng = np.random.default_rng(8)
    rho = random_density(rng, 5)
    root = sqrtm_psd(rho)
    np.testing.assert_allclose(root @ root, rho, atol=1e-12)


def test_uhlmann_fidelity_pure_states():
    psi = np.array([1, 0], dtype=complex)
    phi = np.array([1, 1], dtype=complex) / np.sqrt(2)
    rho, sig = np.outer(psi, psi.conj()), np.outer(phi, phi.conj())
    assert uhlmann_fidelity(rho, rho) == pytest.approx(1.0, abs=1e-12)
    assert uhlmann_fidelity(rho, sig) == pytest.approx(0.5, abs=1e-12)


def test_trace_distance_extremes():
    zero = np.diag([1.0, 0.0]).astype(complex)
    one = np.diag([0.0, 1.0]).astype(complex)
    assert trace_distance(zero, one) == pytest.approx(1.0, abs=1e-12)
    assert trace_distance(zero, zero) == pytest.approx(0.0, abs=1e-12)


def test_fidelity_distance_fuchs_van_de_graaf():
    rng = np.random.default_rng(9)
    for _ in range(10):
        rho, sig = random_density(rng, 4), random_density(rng, 4)
        f, t = uhlmann_fidelity(rho, sig), trace_distance(rho, sig)
        assert 1 - np.sqrt(f) <= t + 1e-10
        assert t <= np.sqrt(1 - f) + 1e-10


def test_matrix_json_round_trip():
    rng = np.random.default_rng(10)
    a = rng.normal(size=(3, 5)) + 1j * rng.normal(size=(3, 5))
    obj = matrix_to_json_dict(a)
    assert obj["rows"] == 3 and obj["cols"] == 5
    np.testing.assert_array_equal(matrix_from_json_dict(obj), a)


def test_matrix_json_text_round_trip_is_stable():
    a = np.array([[1 / 3, -2.5e-17], [1e300, 0.1]], dtype=complex)
    text = matrix_to_json(a)
    again = matrix_to_json(matrix_from_json(text))
    assert text == again
    assert json.loads(text)["rows"] == 2


def test_matrix_from_json_dict_rejects_bad_shape():
    with pytest.raises(ValidationError):
        matrix_from_json_dict({"rows": 2, "cols": 2, "data": [[1.0, 0.0]]})
    with pytest.raises(ValidationError):
        matrix_from_json_dict({"rows": 1, "cols": 1, "data": [[1.0]]})


def test_log2_int():
    assert log2_int(8) == 3
    assert log2_int(1) == 0
    with pytest.raises(ContractViolationError):
        log2_int(6)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**31 - 1))
def test_fidelity_is_symmetric_and_bounded(seed):
    rng = np.random.default_rng(seed)
    rho, sig = random_density(rng, 3), random_density(rng, 3)
    f_ab = uhlmann_fidelity(rho, sig)
    f_ba = uhlmann_fidelity(sig, rho)
    assert f_ab == pytest.approx(f_ba, abs=1e-10)
    assert -1e-12 <= f_ab <= 1 + 1e-12
    assert uhlmann_fidelity(rho, rho) == pytest.approx(1.0, abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**31 - 1),
    t=st.floats(min_value=-10.0, max_value=10.0),
)
def test_mat_exp_is_unitary_for_any_time(seed, t):
    rng = np.random.default_rng(seed)
    h = random_hermitian(rng, 4)
    u = mat_exp_hermitian_generator(h, t)
    np.testing.assert_allclose(u @ dagger(u), identity(4), atol=1e-11)

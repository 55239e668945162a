"""Symmetric coupling: sector combinatorics, coupled kets, singlet bases."""

from fractions import Fraction
from math import factorial

import numpy as np
import pytest

from rffqudit.coupling import (
    basis_overlap_blocks,
    build_coupled_basis,
    cg_singlets,
    coupling_fingerprint,
    fourier_coupling,
    gram_residual,
    is_block_unitary_mixing,
    multiplicity,
    omega_minus,
    sector_census,
    sector_index_set,
    sector_membership_residual,
    symmetric_singlets,
    validate_coupling,
)
from rffqudit.errors import ContractViolationError, ValidationError
from rffqudit.linalg import dagger, identity, max_abs_diff
from rffqudit.spinsys import SpinRegister, product_ket, total_J

W4 = 1j  # exp(2 pi i / 4)


def test_sector_index_set():
    assert sector_index_set(3) == [Fraction(3, 2), Fraction(1, 2)]
    assert sector_index_set(4) == [Fraction(2), Fraction(1), Fraction(0)]


def test_multiplicity_closed_form():
    # c_j = n! (2j+1) / ((n/2+j+1)! (n/2-j)!)
    assert multiplicity(3, Fraction(3, 2)) == 1
    assert multiplicity(3, Fraction(1, 2)) == 2
    assert multiplicity(4, 2) == 1
    assert multiplicity(4, 1) == 3
    assert multiplicity(4, 0) == 2
    assert multiplicity(6, 2) == 5
    # The second-largest sector always has multiplicity n - 1.
    for n in range(3, 9):
        assert multiplicity(n, Fraction(n, 2) - 1) == n - 1


@pytest.mark.parametrize("n", range(2, 9))
def test_multiplicities_fill_the_register(n):
    total = sum(
        multiplicity(n, j) * (int(2 * j) + 1) for j in sector_index_set(n)
    )
    assert total == 2 ** n


def test_multiplicity_matches_factorial_formula():
    for n in (3, 4, 5, 6):
        for j in sector_index_set(n):
            half = Fraction(n, 2)
            expected = (
                factorial(n) * (int(2 * j) + 1)
                // (factorial(int(half + j) + 1) * factorial(int(half - j)))
            )
            assert multiplicity(n, j) == expected


@pytest.mark.parametrize("n", (3, 4, 5, 6))
def test_fourier_coupling_is_unitary_with_symmetric_last_row(n):
    u = fourier_coupling(n)
    np.testing.assert_allclose(u @ dagger(u), identity(n), atol=1e-13)
    np.testing.assert_allclose(u[n - 1], np.full(n, n ** -0.5), atol=1e-13)
    validate_coupling(u, n)


def test_validate_coupling_names_the_defect():
    bad = np.eye(3, dtype=complex)
    bad[0, 0] = 2.0
    with pytest.raises(ValidationError, match="unitary"):
        validate_coupling(bad, 3)
    # Unitary but with a non-symmetric final row.
    with pytest.raises(ValidationError, match="row"):
        validate_coupling(np.eye(3, dtype=complex), 3)
    with pytest.raises(ValidationError, match="3x3"):
        validate_coupling(fourier_coupling(4), 3)


def test_omega_minus_last_label_is_collective_lowering():
    reg = SpinRegister(4)
    J = total_J(reg)
    om = omega_minus(reg, fourier_coupling(4), lam=4)
    np.testing.assert_allclose(om, J.j_minus / 2.0, atol=1e-13)


def test_omega_minus_rejects_out_of_range_label():
    reg = SpinRegister(3)
    with pytest.raises(ContractViolationError):
        omega_minus(reg, fourier_coupling(3), lam=4)


@pytest.mark.parametrize("n", (3, 4, 5))
def test_coupled_basis_shape_and_quality(n):
    basis = build_coupled_basis(SpinRegister(n))
    assert basis.d == n - 1
    assert basis.j2 == Fraction(n, 2) - 1
    assert len(basis.kets) == (n - 1) * (int(2 * basis.j2) + 1)
    assert gram_residual(basis) < 1e-12
    assert sector_membership_residual(basis) < 1e-12


def test_coupled_basis_m2_values_descend():
    basis = build_coupled_basis(SpinRegister(4))
    assert basis.m2_values() == [Fraction(1), Fraction(0), Fraction(-1)]


def test_build_coupled_basis_needs_three_constituents():
    with pytest.raises(ContractViolationError):
        build_coupled_basis(SpinRegister(2))


def test_coupled_kets_match_construction_formula():
    # |j2, m2; lam> = sqrt((j2+m2)!/((2 j2)! (j2-m2)!)) Omega_-(lam) J_-^(j2-m2) |0...0>
    for n in (3, 4, 5):
        reg = SpinRegister(n)
        basis = build_coupled_basis(reg)
        J = total_J(reg)
        coupling = fourier_coupling(n)
        fiducial = product_ket("0" * n)
        j2 = basis.j2
        for lam in range(1, n):
            om = omega_minus(reg, coupling, lam)
            for m2 in basis.m2_values():
                k = int(j2 - m2)
                coeff = np.sqrt(
                    factorial(int(j2 + m2))
                    / (factorial(int(2 * j2)) * factorial(k))
                )
                vec = fiducial
                for _ in range(k):
                    vec = J.j_minus @ vec
                expected = coeff * (om @ vec)
                np.testing.assert_allclose(
                    basis.ket(m2, lam), expected, atol=1e-12
                )


def test_four_constituent_kets_match_explicit_superpositions():
    """The n=4 coupled kets in their exact product-state expansions."""
    basis = build_coupled_basis(SpinRegister(4))
    pk = product_ket
    for lam in (1, 2, 3):
        top = 0.5 * (
            W4 ** lam * pk("1000")
            + W4 ** (2 * lam) * pk("0100")
            + W4 ** (3 * lam) * pk("0010")
            + pk("0001")
        )
        middle = (1 / np.sqrt(8)) * (
            (W4 ** lam + 1) * (pk("1001") - pk("0110"))
            + (W4 ** (2 * lam) + 1) * (pk("0101") - pk("1010"))
            + (W4 ** (3 * lam) + 1) * (pk("0011") - pk("1100"))
        )
        bottom = -0.5 * (
            W4 ** lam * pk("0111")
            + W4 ** (2 * lam) * pk("1011")
            + W4 ** (3 * lam) * pk("1101")
            + pk("1110")
        )
        np.testing.assert_allclose(basis.ket(1, lam), top, atol=1e-13)
        np.testing.assert_allclose(basis.ket(0, lam), middle, atol=1e-13)
        np.testing.assert_allclose(basis.ket(-1, lam), bottom, atol=1e-13)


def test_coupling_fingerprint_is_stable_and_discriminating():
    u3 = fourier_coupling(3)
    assert coupling_fingerprint(u3) == coupling_fingerprint(u3.copy())
    assert coupling_fingerprint(u3) != coupling_fingerprint(fourier_coupling(4))
    tweaked = u3.copy()
    tweaked[0] *= np.exp(0.25j)
    assert coupling_fingerprint(u3) != coupling_fingerprint(tweaked)


def alternative_coupling(n):
    """A valid non-Fourier coupling: remix the first n-1 rows unitarily."""
    u = fourier_coupling(n)
    mix = np.eye(n, dtype=complex)
    block = fourier_coupling(n - 1) if n - 1 >= 2 else np.eye(1)
    mix[: n - 1, : n - 1] = block
    return mix @ u


def test_alternative_coupling_mixes_block_unitarily():
    reg = SpinRegister(4)
    a = build_coupled_basis(reg)
    b = build_coupled_basis(reg, coupling=alternative_coupling(4))
    assert is_block_unitary_mixing(a, b)
    blocks = basis_overlap_blocks(a, b)
    for m2, block in blocks.items():
        np.testing.assert_allclose(
            block @ dagger(block), identity(a.d), atol=1e-12
        )
    # Every m2 carries the same mixing matrix.
    reference = blocks[a.m2_values()[0]]
    for block in blocks.values():
        np.testing.assert_allclose(block, reference, atol=1e-12)


def test_symmetric_singlets_are_orthonormal_null_states():
    reg = SpinRegister(4)
    singlets = symmetric_singlets(reg)
    assert len(singlets) == 2
    J = total_J(reg)
    for i, s in enumerate(singlets):
        assert np.vdot(s, s) == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.norm(J.j_squared @ s) < 1e-12
        for j in range(i):
            assert abs(np.vdot(singlets[j], s)) < 1e-12


def test_cg_singlets_first_is_pair_singlet_product():
    # |S1> = (|01> - |10>)(|01> - |10>)/2 on the pairs (1,2) and (3,4).
    pk = product_ket
    expected = 0.5 * (
        pk("0101") - pk("0110") - pk("1001") + pk("1010")
    )
    s1, s2 = cg_singlets(SpinRegister(4))
    np.testing.assert_allclose(s1, expected, atol=1e-13)
    assert np.vdot(s2, s2) == pytest.approx(1.0, abs=1e-12)
    assert abs(np.vdot(s1, s2)) < 1e-12


def test_singlet_families_span_the_same_subspace():
    reg = SpinRegister(4)
    sym = symmetric_singlets(reg)
    cg = cg_singlets(reg)
    proj_sym = sum(np.outer(s, s.conj()) for s in sym)
    proj_cg = sum(np.outer(s, s.conj()) for s in cg)
    assert max_abs_diff(proj_sym, proj_cg) < 1e-12


@pytest.mark.parametrize("n", (2, 3, 4, 5))
def test_sector_census_agrees_with_spectrum(n):
    specs = sector_census(SpinRegister(n))
    assert [s.j for s in specs] == sector_index_set(n)
    for spec in specs:
        assert spec.multiplicity == multiplicity(n, spec.j)
        assert spec.dimension == int(2 * spec.j) + 1
    assert sum(s.multiplicity * s.dimension for s in specs) == 2 ** n

"""The symmetric coupling scheme.

A register of n spin-1/2 constituents decomposes into total-angular-momentum
sectors j = n/2, n/2-1, ... with multiplicities

    c_j = n! (2j+1) / ((n/2+j+1)! (n/2-j)!),

so the second-largest sector j2 = n/2 - 1 is (n-1)-fold degenerate: it hosts
a logical qudit of dimension d = n - 1. The degeneracy label lambda is carved
out by the lowering operators

    Omega_minus(lambda) = sum_l U_{lambda,l} sigma_minus^(l),

where U is any n-by-n unitary whose last row is identically n**-1/2 (the
default is the discrete Fourier matrix U_{lambda,l} = omega_n**(lambda*l) /
sqrt(n) with omega_n = exp(2*pi*i/n)). The orthonormal sector basis is

    |j2, m2; lambda> = sqrt((j2+m2)! / ((2 j2)! (j2-m2)!))
                       * Omega_minus(lambda) J_minus**(j2-m2) |0...0>,

built exactly in this phase convention (no re-phasing), with lambda = 1..n-1
and m2 = j2, j2-1, ..., -j2. For n = 4 the module also provides the two
explicit j=0 bases: the symmetric-coupling singlets (Fourier phases omega_3)
and the successively-coupled (pairwise) singlets.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, sqrt

import numpy as np

from .errors import ConsistencyError, ContractViolationError, ValidationError
from .linalg import (
    eigenvalue_groups,
    identity,
    is_close,
    max_abs_diff,
)
from .spinsys import SpinRegister, product_ket, sigma, total_J


@dataclass(frozen=True)
class SectorSpec:
    """One total-angular-momentum sector of an n-constituent register."""

    n: int
    j: Fraction
    multiplicity: int
    dimension: int  # 2j + 1


def sector_index_set(n: int) -> list[Fraction]:
    """All j values for n constituents: n/2, n/2-1, ..., down to 0 or 1/2."""
    j = Fraction(n, 2)
    out = []
    while j >= 0:
        out.append(j)
        j -= 1
    return out


def multiplicity(n: int, j) -> int:
    """Exact sector multiplicity c_j = n!(2j+1)/((n/2+j+1)!(n/2-j)!)."""
    j = Fraction(j)
    if j not in sector_index_set(n):
        raise ContractViolationError(
            f"j={j} is not in the sector index set for n={n}"
        )
    upper = Fraction(n, 2) + j + 1
    lower = Fraction(n, 2) - j
    assert upper.denominator == 1 and lower.denominator == 1
    num = factorial(n) * int(2 * j + 1)
    den = factorial(int(upper)) * factorial(int(lower))
    if num % den:
        raise ConsistencyError(f"multiplicity for n={n}, j={j} is not an integer")
    return num // den


def fourier_coupling(n: int) -> np.ndarray:
    """The default coupling: U_{lambda,l} = omega_n**(lambda*l)/sqrt(n)."""
    omega = np.exp(2j * np.pi / n)
    lam = np.arange(1, n + 1).reshape(-1, 1)
    ell = np.arange(1, n + 1).reshape(1, -1)
    return omega ** (lam * ell) / sqrt(n)


def validate_coupling(u, n: int, tol: float = 1e-12) -> np.ndarray:
    """Check an n-by-n coupling matrix: unitary, symmetric last row."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (n, n):
        raise ValidationError(
            f"coupling matrix must be {n}x{n}, got {u.shape}"
        )
    unitarity = max_abs_diff(u @ u.conj().T, identity(n))
    if unitarity > tol:
        raise ValidationError(
            f"coupling matrix is not unitary within {tol:g} "
            f"(deviation {unitarity:.3e})"
        )
    symmetric_row = np.full(n, 1 / sqrt(n), dtype=complex)
    row_dev = max_abs_diff(u[n - 1], symmetric_row)
    if row_dev > tol:
        raise ValidationError(
            f"coupling matrix row {n} must be identically {n}**-1/2 "
            f"(deviation {row_dev:.3e})"
        )
    return u


def coupling_fingerprint(u) -> str:
    """Stable short hash of a coupling matrix (rounded to 12 decimals)."""
    u = np.asarray(u, dtype=complex)
    rounded = np.round(u, 12) + 0.0  # normalize -0.0
    return hashlib.sha256(rounded.tobytes()).hexdigest()[:16]


def omega_minus(reg: SpinRegister, coupling, lam: int) -> np.ndarray:
    """Omega_minus(lambda) = sum_l U_{lambda,l} sigma_minus^(l).

    lambda = n (the symmetric row) is accepted too; for the Fourier coupling
    it equals J_minus/sqrt(n).
    """
    u = validate_coupling(coupling, reg.n)
    if not 1 <= lam <= reg.n:
        raise ContractViolationError(f"lambda {lam} out of range 1..{reg.n}")
    terms = (u[lam - 1, ell - 1] * sigma(reg, ell, "-") for ell in range(1, reg.n + 1))
    return sum(terms)


@dataclass(frozen=True)
class CoupledBasis:
    """Orthonormal basis of the j2 = n/2 - 1 sector, plus the maximal sector.

    kets is keyed by (m2, lambda) with m2 a Fraction and lambda in 1..d;
    top_sector is keyed by m1 for the j1 = n/2 ladder.
    """

    n: int
    j2: Fraction
    d: int
    coupling: np.ndarray = field(repr=False)
    fingerprint: str
    kets: dict = field(repr=False)
    top_sector: dict = field(repr=False)

    def m2_values(self) -> list[Fraction]:
        return [self.j2 - k for k in range(int(2 * self.j2) + 1)]

    def ket(self, m2, lam: int) -> np.ndarray:
        return self.kets[(Fraction(m2), lam)]


def build_coupled_basis(reg: SpinRegister, coupling=None) -> CoupledBasis:
    """Construct |j2, m2; lambda> for all m2 and lambda = 1..n-1."""
    n = reg.n
    if n < 3:
        raise ContractViolationError(
            f"the coupled basis needs n >= 3 (so d >= 2), got n={n}"
        )
    u = fourier_coupling(n) if coupling is None else validate_coupling(coupling, n)
    j2 = Fraction(n, 2) - 1
    d = n - 1

    highest = product_ket("0" * n)
    j_minus = total_J(reg).j_minus
    lowered = [highest]  # lowered[k] = J_minus**k |0...0>
    for _ in range(int(2 * j2)):
        lowered.append(j_minus @ lowered[-1])

    omegas = [omega_minus(reg, u, lam) for lam in range(1, d + 1)]
    two_j2 = int(2 * j2)
    kets: dict = {}
    for k in range(two_j2 + 1):
        m2 = j2 - k
        prefactor = sqrt(Fraction(factorial(two_j2 - k), factorial(two_j2) * factorial(k)))
        for lam in range(1, d + 1):
            ket = prefactor * (omegas[lam - 1] @ lowered[k])
            norm = float(np.linalg.norm(ket))
            if abs(norm - 1.0) > 1e-9:
                raise ConsistencyError(
                    f"ket (m2={m2}, lambda={lam}) has norm {norm:.12f}, expected 1"
                )
            kets[(m2, lam)] = ket

    j1 = Fraction(n, 2)
    top: dict = {}
    vec = highest
    for k in range(int(2 * j1) + 1):
        if k:
            vec = j_minus @ vec
        top[j1 - k] = vec / np.linalg.norm(vec)

    return CoupledBasis(
        n=n,
        j2=j2,
        d=d,
        coupling=u,
        fingerprint=coupling_fingerprint(u),
        kets=kets,
        top_sector=top,
    )


def gram_residual(basis: CoupledBasis) -> float:
    """Max-norm deviation of the sector-basis Gram matrix from identity."""
    vecs = [basis.ket(m2, lam) for m2 in basis.m2_values() for lam in range(1, basis.d + 1)]
    stacked = np.column_stack(vecs)
    gram = stacked.conj().T @ stacked
    return max_abs_diff(gram, identity(len(vecs)))


def sector_membership_residual(basis: CoupledBasis) -> float:
    """Max residual of J^2 and Jz eigenvalue equations over all kets."""
    reg = SpinRegister(basis.n)
    js = total_J(reg)
    jj = float(basis.j2 * (basis.j2 + 1))
    worst = 0.0
    for m2 in basis.m2_values():
        for lam in range(1, basis.d + 1):
            ket = basis.ket(m2, lam)
            worst = max(worst, float(np.max(np.abs(js.j_squared @ ket - jj * ket))))
            worst = max(worst, float(np.max(np.abs(js.jz @ ket - float(m2) * ket))))
    return worst


def symmetric_singlets(reg: SpinRegister) -> list[np.ndarray]:
    """The two n=4 j=0 states of the symmetric coupling (lambda = 1, 2)."""
    if reg.n != 4:
        raise ContractViolationError(
            f"symmetric singlets are defined for n=4 only, got n={reg.n}"
        )
    w3 = np.exp(2j * np.pi / 3)
    out = []
    for lam in (1, 2):
        vec = (
            w3**lam * (product_ket("1001") + product_ket("0110"))
            + w3 ** (2 * lam) * (product_ket("0101") + product_ket("1010"))
            + (product_ket("0011") + product_ket("1100"))
        ) / sqrt(6)
        out.append(vec)
    return out


def cg_singlets(reg: SpinRegister) -> list[np.ndarray]:
    """The two n=4 j=0 states of the standard successive coupling."""
    if reg.n != 4:
        raise ContractViolationError(
            f"successive-coupling singlets are defined for n=4 only, got n={reg.n}"
        )
    s1 = (
        product_ket("0101") + product_ket("1010")
        - product_ket("1001") - product_ket("0110")
    ) / 2
    s2 = (
        2 * product_ket("0011") + 2 * product_ket("1100")
        - product_ket("0101") - product_ket("1010")
        - product_ket("0110") - product_ket("1001")
    ) / sqrt(12)
    return [s1, s2]


def sector_census(reg: SpinRegister, degeneracy_tol: float = 1e-8) -> list[SectorSpec]:
    """Enumerate sectors by the multiplicity formula and cross-check against

    brute-force J^2 diagonalization (integer equality of eigenspace counts
    after degeneracy grouping). Raises ConsistencyError on any mismatch.
    """
    n = reg.n
    specs = [
        SectorSpec(n=n, j=j, multiplicity=multiplicity(n, j), dimension=int(2 * j + 1))
        for j in sector_index_set(n)
    ]
    total = sum(s.multiplicity * s.dimension for s in specs)
    if total != reg.dim:
        raise ConsistencyError(
            f"census total {total} != 2**{n}; the multiplicity formula is broken"
        )

    from .linalg import hermitian_eig

    eigenvalues, _ = hermitian_eig(total_J(reg).j_squared)
    groups = eigenvalue_groups(eigenvalues, tol=degeneracy_tol)
    if len(groups) != len(specs):
        raise ConsistencyError(
            f"J^2 has {len(groups)} distinct eigenvalues, census predicts {len(specs)}"
        )
    # specs run from the largest j down; the eigenvalue groups sort ascending.
    for spec, (value, count) in zip(specs, sorted(groups, reverse=True)):
        expected_value = float(spec.j * (spec.j + 1))
        expected_count = spec.multiplicity * spec.dimension
        if abs(value - expected_value) > degeneracy_tol or count != expected_count:
            raise ConsistencyError(
                f"sector j={spec.j}: predicted eigenvalue {expected_value} with "
                f"count {expected_count}, diagonalization found {value:.10f} x{count}"
            )
    return specs


def basis_overlap_blocks(a: CoupledBasis, b: CoupledBasis) -> dict:
    """Overlap matrices <a(m2, lam) | b(m2, lam')> keyed by m2.

    For two valid couplings these blocks are unitary and identical across m2
    (the coupling choice mixes only the lambda label).
    """
    if a.n != b.n:
        raise ContractViolationError("bases live on different registers")
    blocks = {}
    for m2 in a.m2_values():
        block = np.array(
            [
                [np.vdot(a.ket(m2, lam), b.ket(m2, lamp)) for lamp in range(1, b.d + 1)]
                for lam in range(1, a.d + 1)
            ]
        )
        blocks[m2] = block
    return blocks


def is_block_unitary_mixing(a: CoupledBasis, b: CoupledBasis, tol: float = 1e-10) -> bool:
    """True if b's kets are a lambda-only unitary remix of a's kets."""
    blocks = basis_overlap_blocks(a, b)
    first = None
    for block in blocks.values():
        if not is_close(block @ block.conj().T, identity(a.d), tol):
            return False
        if first is None:
            first = block
        elif not is_close(block, first, tol):
            return False
    return True

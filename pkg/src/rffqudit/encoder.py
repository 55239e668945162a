"""The logical-qudit layer: Q operators, encoding, decoding, HWS unitaries.

The d**2 operators

    Q_{lambda, lambda'} = sum_{m2} |j2, m2; lambda> <j2, m2; lambda'|

form a matrix-unit algebra that commutes with every component of the total
angular momentum. A logical d-dimensional state rho encodes into the
2**n-dimensional, collective-rotation-invariant payload

    payload = (1/d) * sum_{lambda, lambda'} rho_{lambda lambda'} Q_{lambda lambda'},

(trace one: the rotation-sensitive degree of freedom is held maximally
mixed), and POVM elements encode without the 1/d so that a logical POVM sums
to the sector projector sum_lambda Q_{lambda lambda}. Decoding inverts both:
rho_{lambda lambda'} = Tr(Q_{lambda' lambda} payload). Outcome probabilities
and (up to the additive log2(d) from the mixed factor) entropies survive the
round trip, which is what makes the construction a faithful qudit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import log2
from typing import NamedTuple

import numpy as np

from .coupling import CoupledBasis
from .errors import ConsistencyError, ContractViolationError, ValidationError
from .linalg import (
    dagger,
    hermitian_eig,
    identity,
    max_abs_diff,
    entropy_bits,
)
from .spinsys import SpinRegister, total_J

PSD_TOL = 1e-10


@dataclass(frozen=True)
class QOperatorSet:
    """The verified matrix-unit family Q_{lambda lambda'} for one register."""

    n: int
    d: int
    fingerprint: str
    q: dict = field(repr=False)
    sector_projector: np.ndarray = field(repr=False)

    def __call__(self, lam: int, lamp: int) -> np.ndarray:
        return self.q[(lam, lamp)]


def build_q_set(basis: CoupledBasis) -> QOperatorSet:
    """Build all Q operators from a coupled basis and verify their algebra."""
    d = basis.d
    dim = 2 ** basis.n
    q: dict = {}
    for lam in range(1, d + 1):
        for lamp in range(1, d + 1):
            acc = np.zeros((dim, dim), dtype=complex)
            for m2 in basis.m2_values():
                acc += np.outer(basis.ket(m2, lam), basis.ket(m2, lamp).conj())
            q[(lam, lamp)] = acc

    _verify_q_algebra(basis, q)
    sector = sum(q[(lam, lam)] for lam in range(1, d + 1))
    return QOperatorSet(
        n=basis.n, d=d, fingerprint=basis.fingerprint, q=q, sector_projector=sector
    )


def _verify_q_algebra(basis: CoupledBasis, q: dict) -> None:
    d = basis.d
    pairs = [(lam, lamp) for lam in range(1, d + 1) for lamp in range(1, d + 1)]

    for lam, lamp in pairs:
        if max_abs_diff(dagger(q[(lam, lamp)]), q[(lamp, lam)]) > 1e-12:
            raise ConsistencyError(
                f"dagger symmetry violated: Q({lam},{lamp})^† != Q({lamp},{lam})"
            )

    for lam, lamp in pairs:
        trace = np.trace(q[(lam, lamp)])
        expected = d if lam == lamp else 0.0
        if abs(trace - expected) > 1e-10:
            raise ConsistencyError(
                f"trace violated: Tr Q({lam},{lamp}) = {trace:.3e}, expected {expected}"
            )

    zero = np.zeros_like(q[(1, 1)])
    for lam, lamp in pairs:
        for mu, mup in pairs:
            product = q[(lam, lamp)] @ q[(mu, mup)]
            expected = q[(lam, mup)] if lamp == mu else zero
            if max_abs_diff(product, expected) > 1e-10:
                raise ConsistencyError(
                    f"closure violated: Q({lam},{lamp})Q({mu},{mup}) "
                    f"!= delta*Q({lam},{mup})"
                )

    js = total_J(SpinRegister(basis.n))
    for lam, lamp in pairs:
        for name, j_op in (("Jx", js.jx), ("Jy", js.jy), ("Jz", js.jz)):
            if max_abs_diff(q[(lam, lamp)] @ j_op, j_op @ q[(lam, lamp)]) > 1e-10:
                raise ConsistencyError(
                    f"[Q({lam},{lamp}), {name}] != 0"
                )


@dataclass(frozen=True)
class QuditState:
    """A d-dimensional density matrix (hermitian, PSD, trace one)."""

    d: int
    rho: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (self.d, self.d):
            raise ValidationError(
                f"state must be {self.d}x{self.d}, got {rho.shape}"
            )
        if max_abs_diff(rho, dagger(rho)) > 1e-12:
            raise ValidationError(
                f"state is not hermitian (deviation "
                f"{max_abs_diff(rho, dagger(rho)):.3e})"
            )
        trace = np.trace(rho)
        if abs(trace - 1) > 1e-12:
            raise ValidationError(f"state trace is {trace:.15g}, expected 1")
        w, _ = hermitian_eig(rho)
        if w.min() < -PSD_TOL:
            raise ValidationError(
                f"state is not PSD: min eigenvalue {w.min():.3e}"
            )
        object.__setattr__(self, "rho", rho)


@dataclass(frozen=True)
class QuditPovm:
    """A list of d x d PSD elements summing to the d-dimensional identity."""

    d: int
    elements: tuple = field(repr=False)

    def __post_init__(self):
        elems = tuple(np.asarray(e, dtype=complex) for e in self.elements)
        if not elems:
            raise ValidationError("POVM needs at least one element")
        total = np.zeros((self.d, self.d), dtype=complex)
        for k, e in enumerate(elems):
            if e.shape != (self.d, self.d):
                raise ValidationError(
                    f"POVM element {k} must be {self.d}x{self.d}, got {e.shape}"
                )
            if max_abs_diff(e, dagger(e)) > 1e-12:
                raise ValidationError(f"POVM element {k} is not hermitian")
            w, _ = hermitian_eig(e)
            if w.min() < -PSD_TOL:
                raise ValidationError(
                    f"POVM element {k} is not PSD: min eigenvalue {w.min():.3e}"
                )
            total += e
        if max_abs_diff(total, identity(self.d)) > 1e-10:
            raise ValidationError(
                f"POVM elements sum to the identity only within "
                f"{max_abs_diff(total, identity(self.d)):.3e} (> 1e-10)"
            )
        object.__setattr__(self, "elements", elems)


@dataclass(frozen=True)
class EncodedOperator:
    """A 2**n-dimensional payload carrying a logical state or POVM element."""

    n: int
    d: int
    kind: str  # "state" | "povm-element"
    fingerprint: str
    payload: np.ndarray = field(repr=False)


def encode_matrix(qs: QOperatorSet, m) -> np.ndarray:
    """The state-normalized linear encoding (1/d) sum m_{ll'} Q_{ll'}."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (qs.d, qs.d):
        raise ValidationError(f"expected a {qs.d}x{qs.d} matrix, got {m.shape}")
    dim = 2 ** qs.n
    acc = np.zeros((dim, dim), dtype=complex)
    for lam in range(1, qs.d + 1):
        for lamp in range(1, qs.d + 1):
            acc += m[lam - 1, lamp - 1] * qs(lam, lamp)
    return acc / qs.d


def decode_matrix(qs: QOperatorSet, payload) -> np.ndarray:
    """Inverse of encode_matrix: m_{ll'} = Tr(Q_{l'l} payload)."""
    payload = np.asarray(payload, dtype=complex)
    return np.array(
        [
            [np.trace(qs(lamp, lam) @ payload) for lamp in range(1, qs.d + 1)]
            for lam in range(1, qs.d + 1)
        ]
    )


def sector_support_residual(qs: QOperatorSet, payload) -> float:
    """How far the payload sticks out of the logical sector."""
    p = qs.sector_projector
    return max_abs_diff(p @ payload @ p, payload)


def encode_state(qs: QOperatorSet, state: QuditState) -> EncodedOperator:
    if state.d != qs.d:
        raise ValidationError(
            f"state dimension {state.d} does not match qudit dimension {qs.d}"
        )
    payload = encode_matrix(qs, state.rho)
    trace = np.trace(payload)
    if abs(trace - 1) > 1e-10:
        raise ConsistencyError(f"encoded state trace {trace:.15g} != 1")
    w, _ = hermitian_eig(payload)
    if w.min() < -PSD_TOL:
        raise ConsistencyError(
            f"encoded state is not PSD: min eigenvalue {w.min():.3e}"
        )
    if sector_support_residual(qs, payload) > 1e-10:
        raise ConsistencyError("encoded state leaks out of the logical sector")
    return EncodedOperator(
        n=qs.n, d=qs.d, kind="state", fingerprint=qs.fingerprint, payload=payload
    )


def decode_state(qs: QOperatorSet, enc: EncodedOperator) -> QuditState:
    if enc.fingerprint != qs.fingerprint:
        raise ValidationError(
            "encoded operator was built with a different coupling "
            f"(fingerprint {enc.fingerprint} != {qs.fingerprint})"
        )
    return decode_payload(qs, enc.payload)


def decode_payload(qs: QOperatorSet, payload, sector_tol: float = 1e-9) -> QuditState:
    """Decode a raw payload matrix, insisting it lives on the logical sector."""
    residual = sector_support_residual(qs, payload)
    if residual > sector_tol:
        raise ValidationError(
            f"payload is not supported on the logical sector "
            f"(residual {residual:.3e} > {sector_tol:g})"
        )
    rho = decode_matrix(qs, payload)
    rho = (rho + dagger(rho)) / 2
    return QuditState(d=qs.d, rho=rho)


def encode_povm(qs: QOperatorSet, povm: QuditPovm) -> list[EncodedOperator]:
    if povm.d != qs.d:
        raise ValidationError(
            f"POVM dimension {povm.d} does not match qudit dimension {qs.d}"
        )
    encoded = []
    total = np.zeros_like(qs.sector_projector)
    for element in povm.elements:
        payload = qs.d * encode_matrix(qs, element)  # no 1/d for POVM elements
        w, _ = hermitian_eig(payload)
        if w.min() < -PSD_TOL:
            raise ConsistencyError(
                f"encoded POVM element is not PSD: min eigenvalue {w.min():.3e}"
            )
        total += payload
        encoded.append(
            EncodedOperator(
                n=qs.n,
                d=qs.d,
                kind="povm-element",
                fingerprint=qs.fingerprint,
                payload=payload,
            )
        )
    if max_abs_diff(total, qs.sector_projector) > 1e-10:
        raise ConsistencyError(
            "encoded POVM elements do not sum to the sector projector"
        )
    return encoded


class EntropyCheck(NamedTuple):
    s_logical: float
    s_encoded: float
    defect: float  # s_encoded - s_logical - log2(d)


def encoded_entropy_check(state: QuditState, enc: EncodedOperator) -> EntropyCheck:
    """Entropies in bits; the encoding adds exactly log2(d) of idler mixing."""
    s_logical = entropy_bits(state.rho)
    s_encoded = entropy_bits(enc.payload)
    return EntropyCheck(s_logical, s_encoded, s_encoded - s_logical - log2(enc.d))


@dataclass(frozen=True)
class HwsPair:
    """The unitary clock/shift pair on the logical sector."""

    d: int
    omega: complex
    u: np.ndarray = field(repr=False)
    v: np.ndarray = field(repr=False)
    sector_projector: np.ndarray = field(repr=False)


def build_hws(qs: QOperatorSet) -> HwsPair:
    """U = sum omega_d**lambda Q_ll, V = sum Q_{l,l+1} + Q_{d,1}, verified."""
    d = qs.d
    if d < 2:
        raise ContractViolationError(f"the HWS pair needs d >= 2, got d={d}")
    omega = np.exp(2j * np.pi / d)
    u = sum(omega**lam * qs(lam, lam) for lam in range(1, d + 1))
    v = sum(qs(lam, lam + 1) for lam in range(1, d)) + qs(d, 1)
    pair = HwsPair(d=d, omega=omega, u=u, v=v, sector_projector=qs.sector_projector)
    _verify_hws(pair)
    return pair


def _matrix_power(m: np.ndarray, k: int) -> np.ndarray:
    out = np.eye(m.shape[0], dtype=complex)
    for _ in range(k):
        out = out @ m
    return out


def _verify_hws(pair: HwsPair, tol: float = 1e-10) -> None:
    sector = pair.sector_projector
    if max_abs_diff(_matrix_power(pair.u, pair.d), sector) > tol:
        raise ConsistencyError(f"U**{pair.d} != sector identity")
    if max_abs_diff(_matrix_power(pair.v, pair.d), sector) > tol:
        raise ConsistencyError(f"V**{pair.d} != sector identity")
    for j in range(1, pair.d + 1):
        for k in range(1, pair.d + 1):
            uj = _matrix_power(pair.u, j)
            vk = _matrix_power(pair.v, k)
            lhs = uj @ vk
            rhs = pair.omega ** (-j * k) * (vk @ uj)
            if max_abs_diff(lhs, rhs) > tol:
                raise ConsistencyError(
                    f"U^{j} V^{k} != omega^(-{j}*{k}) V^{k} U^{j}"
                )


def hws_commutation_residual(pair: HwsPair) -> float:
    """Worst-case residual of the omega-commutation relation (diagnostics)."""
    worst = 0.0
    for j in range(1, pair.d + 1):
        for k in range(1, pair.d + 1):
            uj = _matrix_power(pair.u, j)
            vk = _matrix_power(pair.v, k)
            worst = max(
                worst,
                max_abs_diff(uj @ vk, pair.omega ** (-j * k) * (vk @ uj)),
            )
    return worst

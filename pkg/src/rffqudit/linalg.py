"""Dense complex linear algebra kernel.

All operators and kets in the package are dense row-major complex128 numpy
arrays. This module provides construction, tensor products, adjoints,
hermitian eigendecomposition, partial traces, matrix exponentials of
hermitian generators, max-norm comparisons, entropy/fidelity helpers, and
the JSON interchange format shared by every module and the CLI.

Everything here is a pure function of its inputs; the only module state is
the dimension ceiling, read once from the RFF_MAX_N environment variable at
import and adjustable through set_max_constituents().
"""

from __future__ import annotations

import json
import math
import os
from typing import Iterable

import numpy as np

from .errors import (
    ContractViolationError,
    NumericalError,
    SizeLimitError,
    ValidationError,
)

DEFAULT_MAX_CONSTITUENTS = 12
HERMITICITY_TOL = 1e-12

_max_constituents = DEFAULT_MAX_CONSTITUENTS


def _read_env_ceiling() -> None:
    global _max_constituents
    raw = os.environ.get("RFF_MAX_N")
    if raw is None:
        return
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValidationError(f"RFF_MAX_N must be an integer, got {raw!r}") from exc
    set_max_constituents(value)


def set_max_constituents(n: int) -> None:
    """Set the largest supported register size (dimension ceiling 2**n)."""
    global _max_constituents
    if not 2 <= n <= 14:
        raise ValidationError(f"max constituents must be in 2..14, got {n}")
    _max_constituents = n


def get_max_constituents() -> int:
    return _max_constituents


def dimension_ceiling() -> int:
    return 2 ** _max_constituents


def as_matrix(a) -> np.ndarray:
    """Coerce input to a 2-D complex128 array, rejecting non-finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise ContractViolationError(f"expected a matrix, got ndim={m.ndim}")
    if not np.isfinite(m).all():
        raise ContractViolationError("matrix contains NaN/Inf entries")
    return m


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def kron(a, b) -> np.ndarray:
    """Kronecker product with the configured dimension ceiling enforced."""
    a = as_matrix(a)
    b = as_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    limit = dimension_ceiling()
    if max(rows, cols) > limit:
        raise SizeLimitError(
            f"requested {rows}x{cols} matrix exceeds the ceiling {limit}"
        )
    return np.kron(a, b)


def kron_all(factors: Iterable[np.ndarray]) -> np.ndarray:
    """Kronecker product of a sequence (left factor most significant)."""
    result = None
    for f in factors:
        result = as_matrix(f) if result is None else kron(result, f)
    if result is None:
        raise ContractViolationError("kron_all needs at least one factor")
    return result


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def max_abs_diff(a, b) -> float:
    """Max-norm of the entrywise difference (the package-wide comparison)."""
    return float(np.max(np.abs(np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex))))


def is_close(a, b, tol: float = 1e-10) -> bool:
    return max_abs_diff(a, b) <= tol


def is_hermitian(a, tol: float = HERMITICITY_TOL) -> bool:
    a = as_matrix(a)
    return a.shape[0] == a.shape[1] and max_abs_diff(a, a.conj().T) <= tol


def hermitian_eig(a, tol: float = HERMITICITY_TOL):
    """Eigendecomposition of a hermitian matrix.

    Returns (eigenvalues ascending as a real 1-D array, eigenvector matrix V
    with columns matching the eigenvalue order), so that a @ V = V @ diag(w).
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ContractViolationError(f"matrix is not square: {a.shape}")
    if not is_hermitian(a, tol):
        raise ContractViolationError(
            f"matrix is not hermitian within {tol:g} "
            f"(deviation {max_abs_diff(a, a.conj().T):.3e})"
        )
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc
    if not (np.isfinite(w).all() and np.isfinite(v).all()):
        raise NumericalError("eigendecomposition produced non-finite output")
    return w, v


def mat_exp_hermitian_generator(h, t: float) -> np.ndarray:
    """exp(-i*t*h) for hermitian h, via spectral decomposition."""
    w, v = hermitian_eig(h)
    phases = np.exp(-1j * t * w)
    return (v * phases) @ v.conj().T


def partial_trace(a, n_factors: int, traced_factor: int) -> np.ndarray:
    """Trace out one qubit factor of a 2**n-dimensional operator.

    Factors are numbered 1..n with factor 1 the leftmost (most significant)
    tensor slot; the remaining factors keep their relative order.
    """
    a = as_matrix(a)
    dim = 2 ** n_factors
    if a.shape != (dim, dim):
        raise ContractViolationError(
            f"expected {dim}x{dim} for {n_factors} factors, got {a.shape}"
        )
    if not 1 <= traced_factor <= n_factors:
        raise ContractViolationError(
            f"traced factor {traced_factor} out of range 1..{n_factors}"
        )
    tens = a.reshape([2] * (2 * n_factors))
    tens = np.trace(tens, axis1=traced_factor - 1, axis2=n_factors + traced_factor - 1)
    half = dim // 2
    return tens.reshape(half, half)


def eigenvalue_groups(values: np.ndarray, tol: float = 1e-8):
    """Group sorted eigenvalues into (representative, count) degeneracy runs."""
    groups: list[tuple[float, int]] = []
    for x in np.sort(np.asarray(values, dtype=float)):
        if groups and abs(x - groups[-1][0]) <= tol:
            rep, cnt = groups[-1]
            groups[-1] = (rep, cnt + 1)
        else:
            groups.append((float(x), 1))
    return groups


def entropy_bits(rho, clip_tol: float = 1e-10) -> float:
    """Von Neumann entropy in bits, with 0*log(0) = 0.

    Eigenvalues in [-clip_tol, 0) are clipped to 0; anything more negative is
    a contract violation (the input was not positive semidefinite).
    """
    w, _ = hermitian_eig(rho)
    if w.min() < -clip_tol:
        raise ContractViolationError(
            f"matrix is not PSD: min eigenvalue {w.min():.3e}"
        )
    w = np.clip(w, 0.0, None)
    nz = w[w > 0]
    return float(-(nz * np.log2(nz)).sum())


def sqrtm_psd(a, clip_tol: float = 1e-10) -> np.ndarray:
    """Principal square root of a PSD hermitian matrix."""
    w, v = hermitian_eig(a)
    if w.min() < -clip_tol:
        raise ContractViolationError(
            f"matrix is not PSD: min eigenvalue {w.min():.3e}"
        )
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def uhlmann_fidelity(rho, sigma) -> float:
    """F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))**2."""
    r = sqrtm_psd(rho)
    inner = r @ as_matrix(sigma) @ r
    # Round-off can leave tiny negative eigenvalues in the product.
    w, _ = hermitian_eig((inner + inner.conj().T) / 2)
    w = np.clip(w, 0.0, None)
    return float(np.sqrt(w).sum() ** 2)


def trace_distance(rho, sigma) -> float:
    """(1/2) * trace norm of (rho - sigma) for hermitian inputs."""
    w, _ = hermitian_eig(as_matrix(rho) - as_matrix(sigma))
    return float(np.abs(w).sum() / 2)


def matrix_to_json_dict(a) -> dict:
    """Encode a matrix as {"rows", "cols", "data": [[re, im], ...]} row-major."""
    a = as_matrix(a)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in a.reshape(-1)],
    }


def matrix_from_json_dict(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise ValidationError("matrix JSON must be an object")
    missing = {"rows", "cols", "data"} - set(obj)
    if missing:
        raise ValidationError(f"matrix JSON missing fields: {sorted(missing)}")
    rows, cols = obj["rows"], obj["cols"]
    if not (isinstance(rows, int) and isinstance(cols, int) and rows > 0 and cols > 0):
        raise ValidationError("matrix JSON rows/cols must be positive integers")
    data = obj["data"]
    if len(data) != rows * cols:
        raise ValidationError(
            f"matrix JSON data length {len(data)} != rows*cols = {rows * cols}"
        )
    try:
        flat = [complex(float(re), float(im)) for re, im in data]
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"matrix JSON entries must be [re, im] pairs: {exc}") from exc
    m = np.array(flat, dtype=complex).reshape(rows, cols)
    if not np.isfinite(m).all():
        raise ValidationError("matrix JSON contains non-finite entries")
    return m


def matrix_to_json(a, **dumps_kwargs) -> str:
    return json.dumps(matrix_to_json_dict(a), **dumps_kwargs)


def matrix_from_json(text: str) -> np.ndarray:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc
    return matrix_from_json_dict(obj)


def log2_int(x: int) -> int:
    """Exact base-2 log of a power of two (used for register sizing)."""
    n = int(math.log2(x))
    if 2 ** n != x:
        raise ContractViolationError(f"{x} is not a power of two")
    return n


_read_env_ceiling()

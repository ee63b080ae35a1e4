"""Dense complex matrix utilities for pair-coupled spin systems.

Tensor-product bases are ordered lexicographically with the first factor most
significant: the flat index of e_{a1} x ... x e_{aN} is sum_j a_j * n**(N-j)
for 0-based component labels a_j.  Particle/slot indices in the public API are
1-based, matching the physics conventions used throughout the package.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-10
SINGULARITY_RTOL = 1e-12

__all__ = [
    "DEFAULT_TOL",
    "SINGULARITY_RTOL",
    "SingularMatrixError",
    "SpinDims",
    "as_operator",
    "max_abs",
    "kron",
    "swap_pair",
    "exchange_operator",
    "embed_pair",
    "inverse",
    "eig",
    "complex_to_json",
    "complex_from_json",
    "vector_to_json",
    "vector_from_json",
    "matrix_to_json",
    "matrix_from_json",
]


class SingularMatrixError(ValueError):
    """Inversion refused: smallest singular value below rtol times the largest."""

    def __init__(self, message: str, role: str = "matrix"):
        super().__init__(message)
        self.role = role


@dataclass(frozen=True)
class SpinDims:
    """Spin multiplicity n per particle and particle count N."""

    n: int
    N: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"spin dimension must be positive, got n={self.n}")
        if self.N < 1:
            raise ValueError(f"particle count must be positive, got N={self.N}")

    @property
    def pair_dim(self) -> int:
        return self.n * self.n

    @property
    def total_dim(self) -> int:
        return self.n**self.N


def as_operator(values, role: str = "matrix") -> np.ndarray:
    """Coerce to a square complex128 matrix with finite entries."""
    m = np.asarray(values, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{role} must be square, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError(f"{role} has non-finite entries")
    return m


def max_abs(m) -> float:
    """Entrywise max-abs norm, the residual norm used across the package."""
    a = np.asarray(m)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a)))


def kron(a, b) -> np.ndarray:
    """Kronecker product of two square operators (first factor most significant)."""
    a = as_operator(a, "kron left factor")
    b = as_operator(b, "kron right factor")
    return np.kron(a, b)


def swap_pair(n: int) -> np.ndarray:
    """Permutation operator p on C^n x C^n with p(e_a x e_b) = e_b x e_a."""
    if n < 1:
        raise ValueError(f"spin dimension must be positive, got n={n}")
    p = np.zeros((n * n, n * n), dtype=np.complex128)
    for a in range(n):
        for b in range(n):
            p[b * n + a, a * n + b] = 1.0
    return p


def exchange_operator(i: int, j: int, dims: SpinDims) -> np.ndarray:
    """Operator exchanging tensor factors i and j (1-based, any distinct pair)."""
    if not (1 <= i <= dims.N and 1 <= j <= dims.N):
        raise IndexError(f"factor indices ({i},{j}) out of range for N={dims.N}")
    if i == j:
        raise ValueError("exchange requires two distinct factors")
    idx = np.arange(dims.total_dim).reshape((dims.n,) * dims.N)
    swapped = np.swapaxes(idx, i - 1, j - 1)
    op = np.zeros((dims.total_dim, dims.total_dim), dtype=np.complex128)
    op[swapped.ravel(), idx.ravel()] = 1.0
    return op


def embed_pair(m, j: int, dims: SpinDims) -> np.ndarray:
    """Embed a pair operator m into factors (j, j+1) of an N-fold product.

    m acts on C^n x C^n; the result acts on (C^n)^N as identity elsewhere.
    j is 1-based with 1 <= j <= N-1.
    """
    m = as_operator(m, "pair operator")
    if m.shape[0] != dims.pair_dim:
        raise ValueError(
            f"pair operator must be {dims.pair_dim}x{dims.pair_dim} for n={dims.n}, "
            f"got shape {m.shape}"
        )
    if not (1 <= j <= dims.N - 1):
        raise IndexError(f"pair slot j={j} out of range for N={dims.N}")
    left = np.eye(dims.n ** (j - 1), dtype=np.complex128)
    right = np.eye(dims.n ** (dims.N - j - 1), dtype=np.complex128)
    return np.kron(np.kron(left, m), right)


def inverse(m, role: str = "matrix", rtol: float = SINGULARITY_RTOL) -> np.ndarray:
    """Matrix inverse guarded by a singular-value ratio check."""
    m = as_operator(m, role)
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] < rtol * sv[0]:
        raise SingularMatrixError(
            f"{role} is singular or near-singular "
            f"(smallest/largest singular value {sv[-1]:.3e}/{sv[0]:.3e})",
            role=role,
        )
    return np.linalg.inv(m)


def eig(m) -> tuple[np.ndarray, np.ndarray]:
    """All eigenpairs of a square matrix: (values, column eigenvectors)."""
    m = as_operator(m)
    return np.linalg.eig(m)


def complex_to_json(z) -> list[float]:
    """Encode one complex scalar as [re, im]."""
    z = complex(z)
    return [float(z.real), float(z.imag)]


def complex_from_json(obj) -> complex:
    """Decode a [re, im] pair into a complex scalar."""
    if (
        not isinstance(obj, (list, tuple))
        or len(obj) != 2
        or not all(isinstance(part, (int, float)) and not isinstance(part, bool) for part in obj)
    ):
        raise ValueError(f"complex scalar must be a [re, im] number pair, got {obj!r}")
    return complex(float(obj[0]), float(obj[1]))


def vector_to_json(v) -> list[list[float]]:
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1:
        raise ValueError(f"vector must be 1-dimensional, got shape {v.shape}")
    return [complex_to_json(z) for z in v]


def vector_from_json(obj) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise ValueError("vector must be a non-empty array of [re, im] pairs")
    return np.array([complex_from_json(entry) for entry in obj], dtype=np.complex128)


def matrix_to_json(m) -> list[list[list[float]]]:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"matrix must be 2-dimensional, got shape {m.shape}")
    return [[complex_to_json(z) for z in row] for row in m]


def matrix_from_json(obj) -> np.ndarray:
    """Decode an array of rows of [re, im] pairs; rows must be equal length."""
    if not isinstance(obj, list) or not obj:
        raise ValueError("matrix must be a non-empty array of rows")
    rows = []
    for row in obj:
        if not isinstance(row, list) or not row:
            raise ValueError("matrix rows must be non-empty arrays")
        rows.append([complex_from_json(entry) for entry in row])
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise ValueError("matrix rows have inconsistent lengths")
    return np.array(rows, dtype=np.complex128)

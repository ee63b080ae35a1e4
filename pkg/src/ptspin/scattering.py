"""Two-particle exchange operators and the numerical Yang-Baxter check.

The exchange operator Y maps the incoming spin coefficient of a two-particle
plane-wave state to the reflected/transmitted one across the coincidence
plane.  Separated couplings give Y(k) = (ik - F)^-1 (ik + F); the general
connection-matrix form is obtained by eliminating the outgoing coefficient
from the two interface conditions.

Whether Y satisfies the Yang-Baxter equation for a given coupling family is
measured, not assumed: `ybe_residual` reports the defect for any factory.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .boundary import NonseparatedBC, SeparatedBC
from .linalg import SingularMatrixError, SpinDims, embed_pair, inverse, max_abs, swap_pair

__all__ = [
    "Statistics",
    "Kinematics",
    "statistics_swap",
    "y_separated",
    "y_nonseparated",
    "y_inverse_residual",
    "make_y_factory",
    "ybe_residual",
]


class Statistics(enum.Enum):
    """Exchange statistics of the identical particles."""

    BOSON = "boson"
    FERMION = "fermion"

    @property
    def sign(self) -> float:
        return 1.0 if self is Statistics.BOSON else -1.0


def as_statistics(statistics) -> Statistics:
    if isinstance(statistics, Statistics):
        return statistics
    try:
        return Statistics(statistics)
    except ValueError:
        raise ValueError(
            f"unknown statistics {statistics!r}; expected 'boson' or 'fermion'"
        ) from None


@dataclass(frozen=True)
class Kinematics:
    """Momentum pair (k1, k2); derived quantities recompute from the inputs."""

    k1: float
    k2: float

    @property
    def total(self) -> float:
        return self.k1 + self.k2

    @property
    def relative(self) -> float:
        return 0.5 * (self.k1 - self.k2)


def statistics_swap(n: int, statistics) -> np.ndarray:
    """Statistics-signed pair exchange: +p for bosons, -p for fermions."""
    return as_statistics(statistics).sign * swap_pair(n)


def y_separated(bc: SeparatedBC, k12: float) -> np.ndarray:
    """Exchange operator (ik - F)^-1 (ik + F) at relative momentum k12.

    The Dirichlet member has no finite coupling matrix and yields the constant
    limit Y = -identity.
    """
    d = bc.n * bc.n
    if bc.dirichlet:
        return -np.eye(d, dtype=np.complex128)
    ik = 1j * float(k12)
    eye = np.eye(d, dtype=np.complex128)
    try:
        resolvent = inverse(ik * eye - bc.F, role="ik-F")
    except SingularMatrixError:
        eigenvalues = np.linalg.eigvals(bc.F)
        nearest = complex(eigenvalues[int(np.argmin(np.abs(eigenvalues - ik)))])
        raise SingularMatrixError(
            f"relative momentum k12={k12!r} makes ik collide with coupling "
            f"eigenvalue {nearest!r}",
            role="ik-F",
        ) from None
    return resolvent @ (ik * eye + bc.F)


def y_nonseparated(bc: NonseparatedBC, k12: float, statistics) -> np.ndarray:
    """Exchange operator for connection-matrix boundary conditions.

    Eliminating the outgoing coefficient from the two interface conditions
    gives, with R_A = (A - ik B)^-1 and R_C = (C - ik D)^-1 and the
    statistics-signed exchange P,

        Y = [R_A - ik R_C]^-1 [R_A (A + ik B) P - R_C (C + ik D) P - R_A - ik R_C].
    """
    ik = 1j * float(k12)
    p = statistics_swap(bc.n, statistics)
    r_a = inverse(bc.A - ik * bc.B, role="A-ik*B")
    r_c = inverse(bc.C - ik * bc.D, role="C-ik*D")
    outer = inverse(r_a - ik * r_c, role="outer bracket")
    bracket = (
        r_a @ (bc.A + ik * bc.B) @ p
        - r_c @ (bc.C + ik * bc.D) @ p
        - r_a
        - ik * r_c
    )
    return outer @ bracket


def y_inverse_residual(bc: SeparatedBC, k12: float) -> float:
    """Defect of the exchange inversion identity Y(k) Y(-k) = identity."""
    d = bc.n * bc.n
    product = y_separated(bc, k12) @ y_separated(bc, -k12)
    return max_abs(product - np.eye(d))


def make_y_factory(bc, statistics=Statistics.BOSON) -> Callable[[float], np.ndarray]:
    """Uniform factory interface k12 -> Y for either boundary-condition form."""
    if isinstance(bc, SeparatedBC):
        return lambda k12: y_separated(bc, k12)
    if isinstance(bc, NonseparatedBC):
        stats = as_statistics(statistics)
        return lambda k12: y_nonseparated(bc, k12, stats)
    raise TypeError(f"no exchange-operator factory for {type(bc).__name__}")


def ybe_residual(yfactory: Callable[[float], np.ndarray], k1: float, k2: float,
                 k3: float, dims: SpinDims) -> float:
    """Yang-Baxter defect of a pair-exchange factory on three particles.

    With Y^m(k) the factory output embedded at adjacent slot m and
    kij = (ki - kj)/2, returns the entrywise max-abs of

        Y^1(k12) Y^2(k13) Y^1(k23) - Y^2(k23) Y^1(k13) Y^2(k12).
    """
    if dims.N != 3:
        raise ValueError(f"the consistency check is a three-particle identity, got N={dims.N}")
    k12 = 0.5 * (k1 - k2)
    k13 = 0.5 * (k1 - k3)
    k23 = 0.5 * (k2 - k3)

    def y_at(slot: int, k: float) -> np.ndarray:
        return embed_pair(yfactory(k), slot, dims)

    left = y_at(1, k12) @ y_at(2, k13) @ y_at(1, k23)
    right = y_at(2, k23) @ y_at(1, k13) @ y_at(2, k12)
    return max_abs(left - right)

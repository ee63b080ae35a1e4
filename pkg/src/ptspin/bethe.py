"""Bethe coefficient propagation and wavefunction assembly for separated
boundary conditions.

In the fundamental region x_1 < x_2 < ... < x_N the wavefunction is a sum of
N! plane waves, one per assignment sigma of momenta to coordinate slots, each
carrying a spin coefficient u_sigma in (C^n)^{x N}.  Crossing the coincidence
plane between slots j and j+1 relates coefficients through the pair exchange
operator: if sigma has labels (alpha, beta) at slots (j, j+1) and sigma' swaps
them, then

    u_sigma' = Y^{j,j+1}((k_alpha - k_beta)/2) u_sigma,

anchored by the two-particle case u_21 = Y(k12) u_12.  Coefficients for every
permutation are produced by propagating along a canonical reduced word
(reversed bubble sort); `path_consistency` measures how much the result would
depend on the word chosen.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .boundary import SeparatedBC
from .linalg import SingularMatrixError, SpinDims, embed_pair, max_abs
from .scattering import Statistics, as_statistics, y_separated

__all__ = [
    "BetheState",
    "SignPattern",
    "bethe_coefficients",
    "path_consistency",
    "evaluate_wavefunction",
    "boundary_jump_residual",
]

COINCIDENCE_RTOL = 1e-13


@dataclass(frozen=True)
class SignPattern:
    """Choice of sign epsilon_{kl} = +/-1 for every unordered particle pair.

    Keys are 1-based pairs (k, l) with k > l; lookups accept either order.
    """

    n_particles: int
    eps: Mapping[tuple[int, int], int]

    def __post_init__(self):
        if self.n_particles < 2:
            raise ValueError(f"need at least two particles, got {self.n_particles}")
        wanted = {(k, l) for k in range(2, self.n_particles + 1) for l in range(1, k)}
        normalized: dict[tuple[int, int], int] = {}
        for key, value in dict(self.eps).items():
            i, j = int(key[0]), int(key[1])
            pair = (max(i, j), min(i, j))
            if pair not in wanted:
                raise ValueError(f"pair {key} is not a valid particle pair for N={self.n_particles}")
            if pair in normalized:
                raise ValueError(f"pair {key} appears twice")
            sign = int(value)
            if sign != value or sign not in (-1, 1):
                raise ValueError(f"sign for pair {key} must be +1 or -1, got {value!r}")
            normalized[pair] = sign
        missing = wanted - set(normalized)
        if missing:
            raise ValueError(f"missing sign for pairs {sorted(missing)}")
        object.__setattr__(self, "eps", normalized)

    @classmethod
    def uniform(cls, n_particles: int, sign: int = 1) -> "SignPattern":
        eps = {(k, l): sign for k in range(2, n_particles + 1) for l in range(1, k)}
        return cls(n_particles=n_particles, eps=eps)

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        """All pairs (k, l), k > l, in ascending order."""
        return tuple(sorted(self.eps))

    def __getitem__(self, pair: tuple[int, int]) -> int:
        i, j = pair
        if i == j:
            raise KeyError(f"pair indices must differ, got {pair}")
        return self.eps[(max(i, j), min(i, j))]

    def values(self) -> tuple[int, ...]:
        """Signs listed in the order of `pairs`."""
        return tuple(self.eps[p] for p in self.pairs)


@dataclass(frozen=True)
class BetheState:
    """Propagated spin coefficients for all momentum assignments.

    coefficients maps each permutation (a 1-based tuple listing which momentum
    sits at each coordinate slot) to its coefficient vector; words records the
    adjacent-swap sequence used to reach it from the identity.
    """

    dims: SpinDims
    momenta: tuple[float, ...]
    coefficients: Mapping[tuple[int, ...], np.ndarray]
    words: Mapping[tuple[int, ...], tuple[int, ...]]
    statistics: Statistics


def _canonical_word(perm: tuple[int, ...]) -> tuple[int, ...]:
    """Reduced word of adjacent swaps taking the identity to perm.

    Bubble sort perm back to the identity (largest displaced labels drift
    rightward), then reverse the recorded swap slots.  The word length equals
    the inversion count, so the word is reduced.
    """
    seq = list(perm)
    word: list[int] = []
    changed = True
    while changed:
        changed = False
        for j in range(len(seq) - 1):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                word.append(j + 1)
                changed = True
    return tuple(reversed(word))


class _PairExchangeCache:
    """Embedded exchange operators keyed by (slot, label pair)."""

    def __init__(self, bc: SeparatedBC, momenta: tuple[float, ...], dims: SpinDims):
        self.bc = bc
        self.momenta = momenta
        self.dims = dims
        self._cache: dict[tuple[int, int, int], np.ndarray] = {}

    def operator(self, slot: int, alpha: int, beta: int) -> np.ndarray:
        key = (slot, alpha, beta)
        if key not in self._cache:
            k_ab = 0.5 * (self.momenta[alpha - 1] - self.momenta[beta - 1])
            try:
                y = y_separated(self.bc, k_ab)
            except SingularMatrixError as exc:
                raise SingularMatrixError(
                    f"momentum pair ({alpha},{beta}) gives a singular exchange "
                    f"operator: {exc}",
                    role=exc.role,
                ) from None
            self._cache[key] = embed_pair(y, slot, self.dims)
        return self._cache[key]

    def apply_word(self, word: tuple[int, ...], start: np.ndarray) -> np.ndarray:
        """Propagate a coefficient (or transport matrix) from the identity."""
        seq = list(range(1, self.dims.N + 1))
        out = start
        for slot in word:
            alpha, beta = seq[slot - 1], seq[slot]
            out = self.operator(slot, alpha, beta) @ out
            seq[slot - 1], seq[slot] = beta, alpha
        return out


def _check_momenta(momenta) -> tuple[float, ...]:
    momenta = tuple(float(k) for k in momenta)
    if len(momenta) < 2:
        raise ValueError(f"need at least two momenta, got {len(momenta)}")
    if not all(np.isfinite(momenta)):
        raise ValueError("momenta must be finite")
    return momenta


def _check_state_inputs(bc, momenta, u_init):
    if not isinstance(bc, SeparatedBC):
        raise TypeError("coefficient propagation requires a separated boundary condition")
    momenta = _check_momenta(momenta)
    dims = SpinDims(bc.n, len(momenta))
    u = np.asarray(u_init, dtype=np.complex128).reshape(-1)
    if u.shape[0] != dims.total_dim:
        raise ValueError(
            f"initial coefficient must have length {dims.total_dim} for "
            f"n={bc.n}, N={dims.N}, got {u.shape[0]}"
        )
    if not np.isfinite(u).all() or max_abs(u) == 0.0:
        raise ValueError("initial coefficient must be finite and non-zero")
    return momenta, dims, u


def bethe_coefficients(bc: SeparatedBC, momenta, u_init, statistics) -> BetheState:
    """Propagate the identity-permutation coefficient to all N! permutations."""
    momenta, dims, u = _check_state_inputs(bc, momenta, u_init)
    stats = as_statistics(statistics)
    cache = _PairExchangeCache(bc, momenta, dims)
    coefficients: dict[tuple[int, ...], np.ndarray] = {}
    words: dict[tuple[int, ...], tuple[int, ...]] = {}
    for perm in itertools.permutations(range(1, dims.N + 1)):
        word = _canonical_word(perm)
        coefficients[perm] = cache.apply_word(word, u)
        words[perm] = word
    return BetheState(dims=dims, momenta=momenta, coefficients=coefficients,
                      words=words, statistics=stats)


def path_consistency(bc: SeparatedBC, momenta, u_init, statistics) -> float:
    """Worst-case dependence of the propagation on the reduced word chosen.

    For every permutation whose canonical reduced word contains a braid-move
    site (j, j+1, j) <-> (j+1, j, j+1), both words are applied to the
    coefficient transport operators from the identity and the entrywise
    max-abs discrepancy is taken.  The discrepancy is measured on transports
    (every initial coefficient at once), so it vanishes exactly when the
    Yang-Baxter identity holds on the visited relative momenta; u_init is
    validated but the returned number does not depend on it.
    """
    momenta, dims, _ = _check_state_inputs(bc, momenta, u_init)
    as_statistics(statistics)
    if dims.N < 3:
        raise ValueError(f"path consistency needs at least three particles, got N={dims.N}")
    cache = _PairExchangeCache(bc, momenta, dims)
    eye = np.eye(dims.total_dim, dtype=np.complex128)
    worst = 0.0
    for perm in itertools.permutations(range(1, dims.N + 1)):
        word = _canonical_word(perm)
        for i in range(len(word) - 2):
            a, b, c = word[i], word[i + 1], word[i + 2]
            if a == c and abs(a - b) == 1:
                flipped = word[:i] + (b, a, b) + word[i + 3:]
                t_canonical = cache.apply_word(word, eye)
                t_flipped = cache.apply_word(flipped, eye)
                worst = max(worst, max_abs(t_canonical - t_flipped))
    return worst


def _spin_slot_permutation(vec: np.ndarray, order: np.ndarray, dims: SpinDims) -> np.ndarray:
    """Reindex spin slots: result[a_1..a_N] = vec[a_{order(1)}..a_{order(N)}]."""
    tensor = vec.reshape((dims.n,) * dims.N)
    return np.transpose(tensor, axes=np.argsort(order)).reshape(-1)


def _permutation_sign(order: np.ndarray) -> int:
    seen = np.zeros(len(order), dtype=bool)
    sign = 1
    for start in range(len(order)):
        if seen[start]:
            continue
        length = 0
        pos = start
        while not seen[pos]:
            seen[pos] = True
            pos = order[pos]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _fundamental_value(state: BetheState, y: np.ndarray, dtype) -> np.ndarray:
    momenta = np.asarray(state.momenta, dtype=np.longdouble)
    value = np.zeros(state.dims.total_dim, dtype=dtype)
    for perm, coeff in state.coefficients.items():
        slots = np.asarray(perm) - 1
        phase = np.exp(1j * np.dot(momenta[slots], y).astype(dtype))
        value = value + coeff.astype(dtype) * phase
    return value


def _wavefunction(state: BetheState, x, statistics, dtype) -> np.ndarray:
    x = np.asarray(x, dtype=np.longdouble).reshape(-1)
    if x.shape[0] != state.dims.N:
        raise ValueError(f"position must have {state.dims.N} coordinates, got {x.shape[0]}")
    stats = as_statistics(statistics)
    scale = max(1.0, float(np.max(np.abs(x))))
    order = np.argsort(x, kind="stable")
    y = x[order]
    if float(np.min(np.diff(y))) < COINCIDENCE_RTOL * scale:
        raise ValueError(
            "position lies on (or too near) a coincidence plane; "
            "the wavefunction is only defined on open ordering regions"
        )
    value = _fundamental_value(state, y, dtype)
    reindexed = _spin_slot_permutation(value, order, state.dims)
    if stats is Statistics.FERMION and _permutation_sign(order) < 0:
        reindexed = -reindexed
    return reindexed


def evaluate_wavefunction(state: BetheState, x, statistics) -> np.ndarray:
    """Wavefunction value at a point off the coincidence planes.

    The point is sorted into the fundamental region, the plane-wave sum is
    evaluated there, and the value is carried back by reindexing spin slots
    with the sorting permutation (signed for fermions).
    """
    return _wavefunction(state, x, statistics, np.complex128).astype(np.complex128)


def _fd_weights(nodes: np.ndarray, max_order: int) -> np.ndarray:
    """Finite-difference weights at 0 for given nodes (Fornberg recursion).

    Returns an array w of shape (max_order+1, len(nodes)) with
    f^(m)(0) ~ sum_i w[m, i] f(nodes[i]).
    """
    x = np.asarray(nodes, dtype=np.longdouble)
    n = len(x)
    w = np.zeros((max_order + 1, n), dtype=np.longdouble)
    c1 = np.longdouble(1.0)
    c4 = x[0]
    w[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, max_order)
        c2 = np.longdouble(1.0)
        c5 = c4
        c4 = x[i]
        for j in range(i):
            c3 = x[i] - x[j]
            c2 = c2 * c3
            if j == i - 1:
                for m in range(mn, 0, -1):
                    w[m, i] = c1 * (m * w[m - 1, i - 1] - c5 * w[m, i - 1]) / c2
                w[0, i] = -c1 * c5 * w[0, i - 1] / c2
            for m in range(mn, 0, -1):
                w[m, j] = (c4 * w[m, j] - m * w[m - 1, j]) / c3
            w[0, j] = c4 * w[0, j] / c3
        c1 = c2
    return w


_JUMP_NODES = 8


def boundary_jump_residual(state: BetheState, bc: SeparatedBC, j: int, probe: float) -> float:
    """Interface-condition defect of a two-particle state at the plane x_j = x_{j+1}.

    One-sided limits of the wavefunction and its normal derivative across the
    plane are extracted from samples on a transversal through the probe point
    (extended-precision one-sided stencils).  Returns the larger of the
    max-abs defects of psi'(0+) - F psi(0+) and psi'(0-) + conj(F) psi(0-);
    for the Dirichlet member the defect of psi(0+) = psi(0-) = 0 is returned.
    """
    if state.dims.N != 2:
        raise ValueError(f"interface check is limited to two particles, got N={state.dims.N}")
    if j != 1:
        raise IndexError(f"pair index must be 1 for two particles, got {j}")
    if not isinstance(bc, SeparatedBC):
        raise TypeError("interface check requires a separated boundary condition")
    if bc.n != state.dims.n:
        raise ValueError("boundary condition and state have different spin dimensions")
    probe = float(probe)
    scale = max(1.0, max(abs(k) for k in state.momenta))
    delta = np.longdouble(0.01) / scale
    nodes = delta * np.arange(1, _JUMP_NODES + 1, dtype=np.longdouble)
    weights = _fd_weights(nodes, 1)

    def side(sign: float):
        samples = []
        for s in sign * nodes:
            point = np.array([probe - 0.5 * s, probe + 0.5 * s], dtype=np.longdouble)
            samples.append(_wavefunction(state, point, state.statistics, np.clongdouble))
        stack = np.array(samples)
        value = weights[0] @ stack
        derivative = sign * (weights[1] @ stack)
        return value, derivative

    value_plus, deriv_plus = side(1.0)
    value_minus, deriv_minus = side(-1.0)
    if bc.dirichlet:
        return max(max_abs(value_plus), max_abs(value_minus))
    F = bc.F
    res_plus = max_abs(deriv_plus.astype(np.complex128) - F @ value_plus.astype(np.complex128))
    res_minus = max_abs(deriv_minus.astype(np.complex128) + F.conj() @ value_minus.astype(np.complex128))
    return max(res_plus, res_minus)

"""Boundary-condition families for point interactions with spin coupling.

Two representations are used.  Non-separated conditions relate boundary data
across the origin through four n^2 x n^2 connection matrices (A, B, C, D)
acting on (psi, psi') pairs.  Separated conditions fix Robin-type data on each
side independently through a coupling matrix F, with the opposite side forced
to G = -conj(F) by PT symmetry (conjugation is entrywise, no transpose).

Validators never impose parameter inequalities on matrix families; they report
per-constraint residuals in the entrywise max-abs norm and compare against a
tolerance.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    as_operator,
    inverse,
    matrix_from_json,
    matrix_to_json,
    max_abs,
    swap_pair,
)

TWO_PI = 2.0 * math.pi

__all__ = [
    "ParseError",
    "ScalarBC",
    "NonseparatedBC",
    "SeparatedBC",
    "ValidationReport",
    "scalar_sa_nonseparated",
    "scalar_sa_separated",
    "scalar_pt_type1",
    "scalar_pt_type2",
    "delta_type",
    "delta_prime_type",
    "hspin",
    "lift_scalar",
    "validate_nonseparated_pt",
    "validate_selfadjoint",
    "validate_separated_pt",
    "validate_separated_selfadjoint",
    "compatibility_residual",
    "parse_boundary_condition",
    "load_boundary_condition",
    "boundary_condition_to_json",
]

HSPIN_PARAM_NAMES = ("a", "b", "c", "d", "f", "g", "e1", "e2", "e3", "e4")


class ParseError(ValueError):
    """A boundary-condition document is structurally malformed."""


@dataclass(frozen=True)
class ScalarBC:
    """One-channel (n=1) boundary condition, tagged by family."""

    kind: str  # sa_nonseparated | sa_separated | pt_type1 | pt_type2
    params: dict[str, float] = field(repr=True)

    def connection_matrix(self) -> np.ndarray:
        """2x2 connection matrix for the non-separated scalar families."""
        p = self.params
        if self.kind == "sa_nonseparated":
            phase = np.exp(1j * p["theta"])
            return phase * np.array([[p["a"], p["b"]], [p["c"], p["d"]]])
        if self.kind == "pt_type1":
            root = math.sqrt(1.0 + p["b"] * p["c"])
            phase = np.exp(1j * p["theta"])
            return phase * np.array(
                [
                    [root * np.exp(1j * p["phi"]), p["b"]],
                    [p["c"], root * np.exp(-1j * p["phi"])],
                ]
            )
        raise ValueError(f"scalar family {self.kind!r} has no connection matrix")

    def to_separated(self) -> SeparatedBC:
        """Separated form of the pt_type2 family (h0 = 0 gives Dirichlet)."""
        if self.kind != "pt_type2":
            raise ValueError(f"scalar family {self.kind!r} has no separated form")
        p = self.params
        return scalar_pt_type2(p["theta"], p["h0"], p["h1"])


@dataclass(frozen=True)
class NonseparatedBC:
    """Connection-matrix boundary condition (psi, psi')_+ = [[A,B],[C,D]] (psi, psi')_-."""

    n: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"spin dimension must be positive, got n={self.n}")
        d = self.n * self.n
        for name in "ABCD":
            m = as_operator(getattr(self, name), f"connection matrix {name}")
            if m.shape != (d, d):
                raise ValueError(
                    f"connection matrix {name} must be {d}x{d} for n={self.n}, "
                    f"got {m.shape}"
                )
            object.__setattr__(self, name, m)


@dataclass(frozen=True)
class SeparatedBC:
    """Separated boundary condition psi'(0+) = F psi(0+), psi'(0-) = -conj(F) psi(0-).

    F is None for the Dirichlet limit psi(0+) = psi(0-) = 0, which downstream
    exchange operators map to Y = -identity.
    """

    n: int
    F: np.ndarray | None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"spin dimension must be positive, got n={self.n}")
        if self.F is not None:
            d = self.n * self.n
            m = as_operator(self.F, "coupling matrix F")
            if m.shape != (d, d):
                raise ValueError(
                    f"coupling matrix F must be {d}x{d} for n={self.n}, got {m.shape}"
                )
            object.__setattr__(self, "F", m)

    @property
    def dirichlet(self) -> bool:
        return self.F is None


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a constraint check: per-constraint max-abs residuals."""

    valid: bool
    residuals: dict[str, float]
    tolerance: float

    @classmethod
    def from_residuals(cls, residuals: dict[str, float], tolerance: float) -> ValidationReport:
        worst = max(residuals.values()) if residuals else 0.0
        return cls(valid=worst <= tolerance, residuals=dict(residuals), tolerance=tolerance)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values()) if self.residuals else 0.0


def _require_finite_real(value, name: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"parameter {name} must be finite, got {value!r}")
    return value


def scalar_sa_nonseparated(theta: float, a: float, b: float, c: float, d: float) -> ScalarBC:
    """Self-adjoint one-channel family e^{i theta} [[a,b],[c,d]] with ad - bc = 1."""
    params = {
        "theta": _require_finite_real(theta, "theta") % TWO_PI,
        "a": _require_finite_real(a, "a"),
        "b": _require_finite_real(b, "b"),
        "c": _require_finite_real(c, "c"),
        "d": _require_finite_real(d, "d"),
    }
    det = params["a"] * params["d"] - params["b"] * params["c"]
    if abs(det - 1.0) > 1e-12:
        raise ValueError(f"determinant constraint ad - bc = 1 violated: got {det!r}")
    return ScalarBC(kind="sa_nonseparated", params=params)


def scalar_sa_separated(h_plus: float, h_minus: float) -> ScalarBC:
    """Self-adjoint separated scalar data phi'(0+-) = h_pm phi(0+-), h in R u {inf}."""
    h_plus = float(h_plus)
    h_minus = float(h_minus)
    for name, h in (("h_plus", h_plus), ("h_minus", h_minus)):
        if math.isnan(h):
            raise ValueError(f"parameter {name} must be a real number or +-inf")
    return ScalarBC(kind="sa_separated", params={"h_plus": h_plus, "h_minus": h_minus})


def scalar_pt_type1(theta: float, phi: float, b: float, c: float) -> ScalarBC:
    """PT-symmetric non-separated scalar family.

    Connection matrix e^{i theta} [[sqrt(1+bc) e^{i phi}, b], [c, sqrt(1+bc) e^{-i phi}]]
    with b >= 0 and 1 + bc >= 0.  Phases are stored reduced modulo 2 pi.
    """
    b = _require_finite_real(b, "b")
    c = _require_finite_real(c, "c")
    if b < 0.0:
        raise ValueError(f"parameter b must be non-negative, got {b!r}")
    if 1.0 + b * c < 0.0:
        raise ValueError(f"parameter constraint 1 + bc >= 0 violated: got {1.0 + b * c!r}")
    params = {
        "theta": _require_finite_real(theta, "theta") % TWO_PI,
        "phi": _require_finite_real(phi, "phi") % TWO_PI,
        "b": b,
        "c": c,
    }
    return ScalarBC(kind="pt_type1", params=params)


def scalar_pt_type2(theta: float, h0: float, h1: float) -> SeparatedBC:
    """PT-symmetric separated scalar family as a one-channel SeparatedBC.

    h0 phi'(0+) = h1 e^{i theta} phi(0+) with (h0, h1) projective; h0 = 0 is
    the Dirichlet member, returned with F = None.
    """
    theta = _require_finite_real(theta, "theta") % TWO_PI
    h0 = _require_finite_real(h0, "h0")
    h1 = _require_finite_real(h1, "h1")
    if h0 == 0.0 and h1 == 0.0:
        raise ValueError("projective parameters (h0, h1) must not both vanish")
    if h0 == 0.0:
        return SeparatedBC(n=1, F=None)
    f = (h1 / h0) * np.exp(1j * theta)
    return SeparatedBC(n=1, F=np.array([[f]]))


def _real_block(values, name: str, n: int) -> np.ndarray:
    m = as_operator(values, name)
    if m.shape != (n * n, n * n):
        raise ValueError(f"{name} must be {n * n}x{n * n} for n={n}, got {m.shape}")
    if max_abs(m.imag) != 0.0:
        raise ValueError(f"{name} must be real for this family")
    return m


def delta_type(C, n: int) -> NonseparatedBC:
    """Delta-type connection: continuous psi, derivative jump C psi with C real."""
    if n < 1:
        raise ValueError(f"spin dimension must be positive, got n={n}")
    C = _real_block(C, "coupling strength C", n)
    d = n * n
    eye = np.eye(d, dtype=np.complex128)
    zero = np.zeros((d, d), dtype=np.complex128)
    return NonseparatedBC(n=n, A=eye, B=zero, C=C, D=eye)


def delta_prime_type(B, n: int) -> NonseparatedBC:
    """Derivative-continuous connection: psi jump B psi' with B real."""
    if n < 1:
        raise ValueError(f"spin dimension must be positive, got n={n}")
    B = _real_block(B, "coupling strength B", n)
    d = n * n
    eye = np.eye(d, dtype=np.complex128)
    zero = np.zeros((d, d), dtype=np.complex128)
    return NonseparatedBC(n=n, A=eye, B=B, C=zero, D=eye)


def hspin(a, b, c, d, f, g, e1, e2, e3, e4) -> SeparatedBC:
    """Spin-half separated coupling matrix commuting with the pair exchange.

    Ten real parameters fill the 4x4 pattern
        [[a,  e1, e1, c ],
         [e3, f,  g,  e2],
         [e3, g,  f,  e2],
         [d,  e4, e4, b ]]
    in the (up-up, up-down, down-up, down-down) basis.
    """
    vals = {name: _require_finite_real(val, name) for name, val in
            zip(HSPIN_PARAM_NAMES, (a, b, c, d, f, g, e1, e2, e3, e4))}
    F = np.array(
        [
            [vals["a"], vals["e1"], vals["e1"], vals["c"]],
            [vals["e3"], vals["f"], vals["g"], vals["e2"]],
            [vals["e3"], vals["g"], vals["f"], vals["e2"]],
            [vals["d"], vals["e4"], vals["e4"], vals["b"]],
        ],
        dtype=np.complex128,
    )
    return SeparatedBC(n=2, F=F)


def lift_scalar(s, n: int) -> NonseparatedBC:
    """Lift a 2x2 scalar connection [[a,b],[c,d]] to scalar multiples of identity."""
    s = as_operator(s, "scalar connection matrix")
    if s.shape != (2, 2):
        raise ValueError(f"scalar connection matrix must be 2x2, got {s.shape}")
    if n < 1:
        raise ValueError(f"spin dimension must be positive, got n={n}")
    eye = np.eye(n * n, dtype=np.complex128)
    return NonseparatedBC(n=n, A=s[0, 0] * eye, B=s[0, 1] * eye, C=s[1, 0] * eye, D=s[1, 1] * eye)


def validate_nonseparated_pt(bc: NonseparatedBC, tol: float = DEFAULT_TOL) -> ValidationReport:
    """PT constraints on (A, B, C, D); the star is entrywise conjugation."""
    A, B, C, D = bc.A, bc.B, bc.C, bc.D
    eye = np.eye(bc.n * bc.n, dtype=np.complex128)
    residuals = {
        "AA*-BC*-I": max_abs(A @ A.conj() - B @ C.conj() - eye),
        "DD*-CB*-I": max_abs(D @ D.conj() - C @ B.conj() - eye),
        "BD*-AB*": max_abs(B @ D.conj() - A @ B.conj()),
        "CA*-DC*": max_abs(C @ A.conj() - D @ C.conj()),
    }
    return ValidationReport.from_residuals(residuals, tol)


def validate_selfadjoint(bc: NonseparatedBC, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Self-adjointness constraints on (A, B, C, D); the dagger is the adjoint."""
    A, B, C, D = bc.A, bc.B, bc.C, bc.D
    eye = np.eye(bc.n * bc.n, dtype=np.complex128)
    ah, bh, ch, dh = (m.conj().T for m in (A, B, C, D))
    residuals = {
        "A†D-C†B-I": max_abs(ah @ D - ch @ B - eye),
        "B†D-D†B": max_abs(bh @ D - dh @ B),
        "A†C-C†A": max_abs(ah @ C - ch @ A),
    }
    return ValidationReport.from_residuals(residuals, tol)


def validate_separated_pt(F, G, tol: float = DEFAULT_TOL) -> ValidationReport:
    """PT constraint on separated data: G = -conj(F) entrywise."""
    F = as_operator(F, "coupling matrix F")
    G = as_operator(G, "coupling matrix G")
    if F.shape != G.shape:
        raise ValueError(f"F and G must have equal shape, got {F.shape} and {G.shape}")
    residuals = {"G+conj(F)": max_abs(G + F.conj())}
    return ValidationReport.from_residuals(residuals, tol)


def validate_separated_selfadjoint(g_plus, g_minus, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Self-adjointness of separated data: both one-sided matrices Hermitian."""
    gp = as_operator(g_plus, "coupling matrix G+")
    gm = as_operator(g_minus, "coupling matrix G-")
    residuals = {
        "Gplus-hermiticity": max_abs(gp - gp.conj().T),
        "Gminus-hermiticity": max_abs(gm - gm.conj().T),
    }
    return ValidationReport.from_residuals(residuals, tol)


def _statistics_sign(statistics) -> float:
    value = getattr(statistics, "value", statistics)
    if value == "boson":
        return 1.0
    if value == "fermion":
        return -1.0
    raise ValueError(f"unknown statistics {statistics!r}; expected 'boson' or 'fermion'")


def compatibility_residual(F, k12: float, statistics="boson") -> float:
    """Mismatch between the two one-sided exchange operators of a separated BC.

    Compares (ik - F)^-1 (ik + F) against P (ik - conj F)^-1 (ik + conj F) P
    with P the statistics-signed pair exchange and k = k12.  Zero means both
    sides of the interface produce the same exchange operator; real F
    commuting with the pair exchange always passes.
    """
    F = as_operator(F, "coupling matrix F")
    d = F.shape[0]
    n = math.isqrt(d)
    if n * n != d:
        raise ValueError(f"coupling matrix dimension {d} is not a perfect square")
    k12 = float(k12)
    ik = 1j * k12
    eye = np.eye(d, dtype=np.complex128)
    p = _statistics_sign(statistics) * swap_pair(n)
    y_plus = inverse(ik * eye - F, role="ik-F") @ (ik * eye + F)
    fc = F.conj()
    y_minus = inverse(ik * eye - fc, role="ik-conj(F)") @ (ik * eye + fc)
    return max_abs(y_plus - p @ y_minus @ p)


_SCALAR_KIND_FIELDS = {
    "scalar_pt_type1": ("theta", "phi", "b", "c"),
    "scalar_pt_type2": ("theta", "h0", "h1"),
}


def _require_number(doc: dict, key: str) -> float:
    if key not in doc:
        raise ParseError(f"missing field {key!r}")
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"field {key!r} must be a number, got {value!r}")
    return float(value)


def _require_matrix(doc: dict, key: str) -> np.ndarray:
    if key not in doc:
        raise ParseError(f"missing field {key!r}")
    try:
        return matrix_from_json(doc[key])
    except ValueError as exc:
        raise ParseError(f"field {key!r}: {exc}") from exc


def _require_dim(doc: dict) -> int:
    n = doc.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ParseError(f"field 'n' must be a positive integer, got {n!r}")
    return n


def parse_boundary_condition(doc):
    """Build a boundary condition from a decoded JSON document.

    Structural problems raise ParseError.  Family parameter inequalities are
    not enforced here; validators and constructors report them instead.  The
    delta and delta_prime kinds are lowered to their connection-matrix form
    without a realness gate so that validation can flag complex couplings.
    """
    if not isinstance(doc, dict):
        raise ParseError(f"boundary-condition document must be an object, got {type(doc).__name__}")
    kind = doc.get("kind")
    if kind == "nonseparated":
        n = _require_dim(doc)
        mats = {key: _require_matrix(doc, key) for key in "ABCD"}
        try:
            return NonseparatedBC(n=n, **mats)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    if kind == "separated":
        n = _require_dim(doc)
        F = _require_matrix(doc, "F")
        try:
            return SeparatedBC(n=n, F=F)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    if kind in _SCALAR_KIND_FIELDS:
        params = {key: _require_number(doc, key) for key in _SCALAR_KIND_FIELDS[kind]}
        return ScalarBC(kind=kind.removeprefix("scalar_"), params=params)
    if kind == "delta":
        n = _require_dim(doc)
        C = _require_matrix(doc, "C")
        d = n * n
        if C.shape != (d, d):
            raise ParseError(f"field 'C' must be {d}x{d} for n={n}, got {C.shape}")
        eye = np.eye(d, dtype=np.complex128)
        zero = np.zeros((d, d), dtype=np.complex128)
        return NonseparatedBC(n=n, A=eye, B=zero, C=C, D=eye)
    if kind == "delta_prime":
        n = _require_dim(doc)
        B = _require_matrix(doc, "B")
        d = n * n
        if B.shape != (d, d):
            raise ParseError(f"field 'B' must be {d}x{d} for n={n}, got {B.shape}")
        eye = np.eye(d, dtype=np.complex128)
        zero = np.zeros((d, d), dtype=np.complex128)
        return NonseparatedBC(n=n, A=eye, B=B, C=zero, D=eye)
    if kind == "hspin":
        params = doc.get("params")
        if not isinstance(params, dict):
            raise ParseError("field 'params' must be an object with the ten hspin parameters")
        extra = set(params) - set(HSPIN_PARAM_NAMES)
        if extra:
            raise ParseError(f"unknown hspin parameters {sorted(extra)!r}")
        values = {key: _require_number(params, key) for key in HSPIN_PARAM_NAMES}
        return hspin(**values)
    raise ParseError(f"unknown boundary-condition kind {kind!r}")


def _reject_constant(name: str):
    raise ParseError(f"non-finite JSON constant {name!r} is not allowed")


def load_boundary_condition(path):
    """Read and parse a boundary-condition JSON file."""
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc
    return parse_boundary_condition(doc)


def boundary_condition_to_json(bc) -> dict:
    """Encode a boundary condition back into its document form."""
    if isinstance(bc, NonseparatedBC):
        return {
            "kind": "nonseparated",
            "n": bc.n,
            "A": matrix_to_json(bc.A),
            "B": matrix_to_json(bc.B),
            "C": matrix_to_json(bc.C),
            "D": matrix_to_json(bc.D),
        }
    if isinstance(bc, SeparatedBC):
        if bc.dirichlet:
            return {"kind": "scalar_pt_type2", "theta": 0.0, "h0": 0.0, "h1": 1.0}
        return {"kind": "separated", "n": bc.n, "F": matrix_to_json(bc.F)}
    if isinstance(bc, ScalarBC):
        return {"kind": f"scalar_{bc.kind}", **{k: float(v) for k, v in bc.params.items()}}
    raise TypeError(f"cannot encode {type(bc).__name__} as a boundary-condition document")

"""Two-parameter dilation extensions of the polarized Heisenberg group.

A parameter set (n, p, B1, B2) with commuting B1, B2 defines dilations
d(t) = diag(e^{pt}, e^{Bt}, 1), pt = p1 t1 + p2 t2, Bt = B1 t1 + B2 t2,
acting on the polarized group by conjugation.  Group elements are
quadruples g(t, x, y, z); the group operation, closed-form inverse and the
faithful (n+2) x (n+2) matrix form are provided, together with the two
closedness conditions on the generator pencil:

  (M1)  the block generators diag(p_k, B_k, 0) are linearly independent;
  (M2)  no nonzero element of their span is similar to a skew-symmetric
        matrix.

For p != 0 the (M2) test is exact (only the kernel line of (s,t) -> s p1 +
t p2 can violate it); for p = 0 a scanned grid over directions with local
refinement is used and the report is flagged heuristic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InvalidParamsError
from .heisenberg import PolarizedElement
from .matrices import is_skew_similar, mat_exp

COMMUTE_RTOL = 1e-12
M1_TOL = 1e-10
M2_SCAN_POINTS = 360


def _matrix(m, n: int, what: str) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.shape != (n, n):
        raise DimensionError(f"{what} must be {n}x{n}, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DimensionError(f"{what} has non-finite entries")
    return m


@dataclass(frozen=True)
class ValidationReport:
    commute: bool
    m1_ok: bool
    m2_ok: bool
    m2_heuristic: bool

    @property
    def ok(self) -> bool:
        return self.commute and self.m1_ok and self.m2_ok

    def as_dict(self) -> dict:
        return {
            "commute": self.commute,
            "m1_ok": self.m1_ok,
            "m2_ok": self.m2_ok,
            "m2_heuristic": self.m2_heuristic,
            "ok": self.ok,
        }


@dataclass(frozen=True, eq=False)
class DilationParams:
    """Immutable parameter set (n, p = (p1, p2), B = (B1, B2))."""

    n: int
    p: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise DimensionError("dimension n must be positive")
        object.__setattr__(self, "n", n)
        p = np.asarray(self.p, dtype=float)
        if p.shape != (2,) or not np.all(np.isfinite(p)):
            raise DimensionError("p must be a finite pair (p1, p2)")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "b1", _matrix(self.b1, n, "B1"))
        object.__setattr__(self, "b2", _matrix(self.b2, n, "B2"))

    # -- scalar/matrix pencils ------------------------------------------------
    def pt(self, t) -> float:
        t = np.asarray(t, dtype=float)
        return float(self.p @ t)

    def bt(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return t[0] * self.b1 + t[1] * self.b2

    def b_combo(self, s: float, t: float) -> np.ndarray:
        return s * self.b1 + t * self.b2

    def m_generator(self, k: int) -> np.ndarray:
        """Block generator diag(p_k, B_k, 0) of size n+2."""
        if k not in (1, 2):
            raise ValueError("generator index must be 1 or 2")
        pk = self.p[k - 1]
        bk = self.b1 if k == 1 else self.b2
        m = np.zeros((self.n + 2, self.n + 2))
        m[0, 0] = pk
        m[1:self.n + 1, 1:self.n + 1] = bk
        return m

    def key(self) -> tuple:
        return (self.n, self.p.tobytes(), self.b1.tobytes(), self.b2.tobytes())

    # -- serialization ---------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": [float(self.p[0]), float(self.p[1])],
            "B1": self.b1.tolist(),
            "B2": self.b2.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DilationParams":
        try:
            return cls(n=int(data["n"]), p=data["p"], b1=data["B1"], b2=data["B2"])
        except KeyError as exc:
            raise InvalidParamsError(f"missing field {exc} in params object") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "DilationParams":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class GroupElement:
    """Quadruple g(t, x, y, z), t in R^2, x, y in R^n, z in R."""

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: float

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        if t.shape != (2,):
            raise DimensionError("t must be a pair")
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        y = np.atleast_1d(np.asarray(self.y, dtype=float))
        if x.shape != y.shape or x.ndim != 1:
            raise DimensionError("x and y must be vectors of equal length")
        for v in (t, x, y):
            if not np.all(np.isfinite(v)):
                raise DimensionError("group element has non-finite entries")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", float(self.z))

    @property
    def n(self) -> int:
        return len(self.x)

    def to_dict(self) -> dict:
        return {"t": self.t.tolist(), "x": self.x.tolist(),
                "y": self.y.tolist(), "z": self.z}


def commutation_defect(params: DilationParams) -> float:
    return float(np.linalg.norm(params.b1 @ params.b2 - params.b2 @ params.b1))


def _m1_holds(params: DilationParams, tol: float) -> bool:
    vecs = np.stack([
        np.concatenate([[params.p[0]], params.b1.ravel()]),
        np.concatenate([[params.p[1]], params.b2.ravel()]),
    ])
    sv = np.linalg.svd(vecs, compute_uv=False)
    return bool(sv[-1] > tol * max(1.0, sv[0]))


def _m2_violation_at(params: DilationParams, s: float, t: float, zero_tol: float) -> bool:
    combo = params.b_combo(s, t)
    if np.linalg.norm(combo) <= zero_tol:
        return False
    return is_skew_similar(combo)


def _max_real_part(params: DilationParams, theta: float) -> float:
    combo = params.b_combo(np.cos(theta), np.sin(theta))
    return float(np.max(np.abs(np.real(np.linalg.eigvals(combo)))))


def _m2_scan(params: DilationParams, points: int) -> bool:
    """Heuristic (M2) check for p = 0: scan directions, refine near minima."""
    scale = 1.0 + float(np.linalg.norm(params.b1) + np.linalg.norm(params.b2))
    zero_tol = 1e-12 * scale
    thetas = np.linspace(0.0, np.pi, points, endpoint=False)
    values = np.array([_max_real_part(params, th) for th in thetas])
    for i, th in enumerate(thetas):
        if _m2_violation_at(params, np.cos(th), np.sin(th), zero_tol):
            return False
    # Refine near local minima of max|Re lambda(theta)|; a violation needs it to hit 0.
    for i in range(points):
        left = values[(i - 1) % points]
        right = values[(i + 1) % points]
        if values[i] <= left and values[i] <= right and values[i] < 0.5 * scale:
            lo = thetas[i] - np.pi / points
            hi = thetas[i] + np.pi / points
            for _ in range(80):
                m1 = lo + (hi - lo) / 3.0
                m2 = hi - (hi - lo) / 3.0
                if _max_real_part(params, m1) <= _max_real_part(params, m2):
                    hi = m2
                else:
                    lo = m1
            th = 0.5 * (lo + hi)
            if _m2_violation_at(params, np.cos(th), np.sin(th), zero_tol):
                return False
    return True


def validate_params(params: DilationParams, tol: float = M1_TOL,
                    scan_points: int = M2_SCAN_POINTS) -> ValidationReport:
    """Report commutation of (B1, B2) and the (M1)/(M2) pencil conditions."""
    cached = params._cache.get("validation")
    if cached is not None and cached[0] == (tol, scan_points):
        return cached[1]

    scale = 1.0 + float(np.linalg.norm(params.b1) * np.linalg.norm(params.b2))
    commute = commutation_defect(params) <= COMMUTE_RTOL * scale
    m1_ok = _m1_holds(params, tol)

    heuristic = False
    if float(np.linalg.norm(params.p)) > tol:
        # Exact branch: only the kernel line of (s,t) -> s p1 + t p2 can violate (M2).
        s, t = -params.p[1], params.p[0]
        norm = float(np.hypot(s, t))
        zero_tol = 1e-12 * (1.0 + float(np.linalg.norm(params.b1) + np.linalg.norm(params.b2)))
        m2_ok = not _m2_violation_at(params, s / norm, t / norm, zero_tol)
    else:
        heuristic = True
        m2_ok = _m2_scan(params, scan_points)

    report = ValidationReport(commute=commute, m1_ok=m1_ok, m2_ok=m2_ok,
                              m2_heuristic=heuristic)
    params._cache["validation"] = ((tol, scan_points), report)
    return report


def require_m1(params: DilationParams):
    report = validate_params(params)
    if not report.commute:
        raise InvalidParamsError("B1 and B2 do not commute")
    if not report.m1_ok:
        raise InvalidParamsError("generators are linearly dependent ((M1) fails)")
    return report


# -- dilations and the action ------------------------------------------------

def d_of_t(params: DilationParams, t) -> np.ndarray:
    """diag(e^{pt}, e^{Bt}, 1) as an (n+2) x (n+2) matrix."""
    t = np.asarray(t, dtype=float)
    n = params.n
    out = np.zeros((n + 2, n + 2))
    out[0, 0] = np.exp(params.pt(t))
    out[1:n + 1, 1:n + 1] = mat_exp(params.bt(t))
    out[n + 1, n + 1] = 1.0
    return out


def alpha(params: DilationParams, t, h: PolarizedElement) -> PolarizedElement:
    """Conjugation action: h(x, y, z) -> h(e^{Bt}x, e^{pt}[e^{-Bt}]^T y, e^{pt}z)."""
    if h.n != params.n:
        raise DimensionError("element dimension does not match params")
    t = np.asarray(t, dtype=float)
    ept = np.exp(params.pt(t))
    ebt = mat_exp(params.bt(t))
    ebt_inv = mat_exp(-params.bt(t))
    return PolarizedElement(ebt @ h.x, ept * (ebt_inv.T @ h.y), ept * h.z)


# -- the group ----------------------------------------------------------------

def g_identity(params: DilationParams) -> GroupElement:
    return GroupElement(np.zeros(2), np.zeros(params.n), np.zeros(params.n), 0.0)


def g_mul(params: DilationParams, a: GroupElement, b: GroupElement) -> GroupElement:
    """Product g(t,x,y,z) g(t~,x~,y~,z~) of the semidirect law."""
    if a.n != params.n or b.n != params.n:
        raise DimensionError("element dimension does not match params")
    ept = np.exp(params.pt(a.t))
    ebt = mat_exp(params.bt(a.t))
    ebt_inv = mat_exp(-params.bt(a.t))
    ebx = ebt @ b.x
    return GroupElement(
        a.t + b.t,
        a.x + ebx,
        a.y + ept * (ebt_inv.T @ b.y),
        a.z + ept * b.z + float(a.y @ ebx),
    )


def g_inverse(params: DilationParams, a: GroupElement) -> GroupElement:
    """Closed-form inverse of the semidirect law."""
    ept = np.exp(-params.pt(a.t))
    ebt = mat_exp(params.bt(a.t))
    ebt_inv = mat_exp(-params.bt(a.t))
    return GroupElement(
        -a.t,
        -(ebt_inv @ a.x),
        -ept * (ebt.T @ a.y),
        ept * (float(a.y @ a.x) - a.z),
    )


def g_to_matrix(params: DilationParams, a: GroupElement, require_m2: bool = False) -> np.ndarray:
    """Faithful matrix form with rows (e^{pt}, y^T e^{Bt}, z / 0, e^{Bt}, x / 0, 0, 1).

    Requires commuting generators and (M1); pass require_m2=True to also
    insist on (M2), under which the image is a closed subgroup.
    """
    report = require_m1(params)
    if require_m2 and not report.m2_ok:
        raise InvalidParamsError("the generator pencil contains a skew-similar element ((M2) fails)")
    if a.n != params.n:
        raise DimensionError("element dimension does not match params")
    n = params.n
    ebt = mat_exp(params.bt(a.t))
    out = np.zeros((n + 2, n + 2))
    out[0, 0] = np.exp(params.pt(a.t))
    out[0, 1:n + 1] = a.y @ ebt
    out[0, n + 1] = a.z
    out[1:n + 1, 1:n + 1] = ebt
    out[1:n + 1, n + 1] = a.x
    out[n + 1, n + 1] = 1.0
    return out

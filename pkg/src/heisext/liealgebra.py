"""The solvable Lie algebras attached to the dilation extensions.

Basis order is (M1, M2, X_{e_1}..X_{e_n}, Y_{e_1}..Y_{e_n}, Z), total
dimension 2n+3.  The only nonzero brackets are generated by

    [M_k, X_x] = X_{B_k x},   [M_k, Y_y] = Y_{(p_k I - B_k^T) y},
    [M_k, Z_z] = Z_{p_k z},   [Y_y, X_x] = Z_{y.x},

equivalently [M_k, W_w] = W_{C_k w} on W = (x; y) with
C_k = diag(B_k, p_k I - B_k^T).  Everything downstream (center, series,
nilradical, case analysis, normalization and the structure-preserving maps)
is computed from these structure constants.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CertificateError,
    DimensionError,
    MapPreconditionError,
    NumericalError,
)
from .extension import DilationParams, require_m1
from .heisenberg import is_symplectic, symplectic_matrix
from .matrices import is_nilpotent, nullspace_dim, orthonormal_span

SERIES_TOL = 1e-10
NILPOTENT_SCAN_POINTS = 720


@dataclass(frozen=True, eq=False)
class LieElement:
    """Coordinates (s1, s2, x, y, z) over the standard basis."""

    s: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: float

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        if s.shape != (2,):
            raise DimensionError("s must be a pair of generator coefficients")
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        y = np.atleast_1d(np.asarray(self.y, dtype=float))
        if x.shape != y.shape or x.ndim != 1:
            raise DimensionError("x and y must be vectors of equal length")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", float(self.z))

    @property
    def n(self) -> int:
        return len(self.x)

    def coords(self) -> np.ndarray:
        return np.concatenate([self.s, self.x, self.y, [self.z]])

    @classmethod
    def from_coords(cls, n: int, v) -> "LieElement":
        v = np.asarray(v, dtype=float)
        if v.shape != (2 * n + 3,):
            raise DimensionError(f"coordinate vector must have length {2 * n + 3}")
        return cls(v[:2], v[2:n + 2], v[n + 2:2 * n + 2], v[2 * n + 2])


def algebra_dim(n: int) -> int:
    return 2 * n + 3


def basis(params: DilationParams) -> list[LieElement]:
    n = params.n
    return [LieElement.from_coords(n, row) for row in np.eye(algebra_dim(n))]


def bracket(params: DilationParams, u: LieElement, v: LieElement) -> LieElement:
    """Lie bracket [u, v] from the defining relations."""
    n = params.n
    if u.n != n or v.n != n:
        raise DimensionError("element dimension does not match params")
    bu = u.s[0] * params.b1 + u.s[1] * params.b2
    bv = v.s[0] * params.b1 + v.s[1] * params.b2
    pu = float(params.p @ u.s)
    pv = float(params.p @ v.s)
    du = pu * np.eye(n) - bu.T
    dv = pv * np.eye(n) - bv.T
    return LieElement(
        np.zeros(2),
        bu @ v.x - bv @ u.x,
        du @ v.y - dv @ u.y,
        pu * v.z - pv * u.z + float(u.y @ v.x) - float(v.y @ u.x),
    )


def lie_to_matrix(params: DilationParams, u: LieElement) -> np.ndarray:
    """Matrix realization with rows (s.p, y^T, z / 0, s.B, x / 0, 0, 0)."""
    n = params.n
    if u.n != n:
        raise DimensionError("element dimension does not match params")
    m = np.zeros((n + 2, n + 2))
    m[0, 0] = float(params.p @ u.s)
    m[0, 1:n + 1] = u.y
    m[0, n + 1] = u.z
    m[1:n + 1, 1:n + 1] = u.s[0] * params.b1 + u.s[1] * params.b2
    m[1:n + 1, n + 1] = u.x
    return m


def c_matrix(params: DilationParams, k: int) -> np.ndarray:
    """The 2n x 2n block diag(B_k, p_k I - B_k^T) acting on W-coordinates."""
    if k not in (1, 2):
        raise ValueError("index must be 1 or 2")
    bk = params.b1 if k == 1 else params.b2
    pk = params.p[k - 1]
    n = params.n
    out = np.zeros((2 * n, 2 * n))
    out[:n, :n] = bk
    out[n:, n:] = pk * np.eye(n) - bk.T
    return out


# -- structure constants -------------------------------------------------------

_TENSOR_CACHE: dict[tuple, np.ndarray] = {}


def structure_tensor(params: DilationParams) -> np.ndarray:
    """T[i, j, :] = coordinates of [b_i, b_j] over the standard basis."""
    key = params.key()
    cached = _TENSOR_CACHE.get(key)
    if cached is not None:
        return cached
    els = basis(params)
    dim = len(els)
    tensor = np.zeros((dim, dim, dim))
    for i in range(dim):
        for j in range(i + 1, dim):
            c = bracket(params, els[i], els[j]).coords()
            tensor[i, j] = c
            tensor[j, i] = -c
    tensor.flags.writeable = False
    _TENSOR_CACHE[key] = tensor
    return tensor


def bracket_coords(params: DilationParams, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    t = structure_tensor(params)
    return np.einsum("i,j,ijk->k", a, b, t)


def adjoint_matrix(params: DilationParams, u: LieElement) -> np.ndarray:
    t = structure_tensor(params)
    return np.einsum("i,ijk->kj", u.coords(), t)


def jacobi_defect(params: DilationParams) -> float:
    """Max norm of the Jacobi cyclic sum over all basis triples."""
    t = structure_tensor(params)
    dim = t.shape[0]
    worst = 0.0
    for i in range(dim):
        for j in range(i + 1, dim):
            for k in range(j + 1, dim):
                total = t[i, j] @ t[:, k] + t[j, k] @ t[:, i] + t[k, i] @ t[:, j]
                worst = max(worst, float(np.max(np.abs(total))))
    return worst


def center_dim(params: DilationParams) -> int:
    """Dimension of {u : [u, v] = 0 for all v} via the stacked adjoints."""
    require_m1(params)
    t = structure_tensor(params)
    dim = t.shape[0]
    stacked = np.stack([t[j].T.ravel() for j in range(dim)], axis=1)
    return nullspace_dim(stacked, tol=SERIES_TOL)


# -- series and nilpotency ------------------------------------------------------

def _bracket_span(t: np.ndarray, q1: np.ndarray, q2: np.ndarray) -> np.ndarray:
    if q1.shape[1] == 0 or q2.shape[1] == 0:
        return np.zeros((t.shape[0], 0))
    cols = np.einsum("ijk,ia,jb->kab", t, q1, q2).reshape(t.shape[0], -1)
    return orthonormal_span(cols, tol=SERIES_TOL)


def lower_central_dims(params: DilationParams) -> tuple[int, ...]:
    """Dimensions of g, [g, g], [g, [g, g]], ... until stable or zero."""
    t = structure_tensor(params)
    dim = t.shape[0]
    full = np.eye(dim)
    dims = [dim]
    current = full
    for _ in range(dim + 1):
        current = _bracket_span(t, full, current)
        d = current.shape[1]
        dims.append(d)
        if d == 0 or d == dims[-2]:
            break
    return tuple(dims)


def derived_series_dims(params: DilationParams) -> tuple[int, ...]:
    """Dimensions of g, [g, g], [[g, g], [g, g]], ... until stable or zero."""
    t = structure_tensor(params)
    dim = t.shape[0]
    dims = [dim]
    current = np.eye(dim)
    for _ in range(dim + 1):
        current = _bracket_span(t, current, current)
        d = current.shape[1]
        dims.append(d)
        if d == 0 or d == dims[-2]:
            break
    return tuple(dims)


def is_nilpotent_algebra(params: DilationParams) -> bool:
    return lower_central_dims(params)[-1] == 0


# -- normalization ---------------------------------------------------------------

def normalize(params: DilationParams) -> tuple[DilationParams, np.ndarray]:
    """Basis change of the dilation plane bringing p to (1, 0) or (0, 0).

    Returns (new params, A) with p' = A p and B'_i = a_i1 B1 + a_i2 B2.
    Pivot: k* = argmax |p_k| (ties favor k=1); first row e_k*/p_k*, second
    row the other unit vector minus its p-projection on the pivot.
    """
    require_m1(params)
    p = params.p
    if np.all(np.abs(p) <= 1e-12):
        return params, np.eye(2)
    k = 0 if abs(p[0]) >= abs(p[1]) else 1
    other = 1 - k
    a = np.zeros((2, 2))
    a[0, k] = 1.0 / p[k]
    a[1, other] = 1.0
    a[1, k] = -p[other] / p[k]
    b_new = [a[i, 0] * params.b1 + a[i, 1] * params.b2 for i in range(2)]
    out = DilationParams(n=params.n, p=np.array([1.0, 0.0]), b1=b_new[0], b2=b_new[1])
    return out, a


def is_normalized(params: DilationParams) -> bool:
    p = params.p
    return bool(np.allclose(p, [1.0, 0.0], atol=1e-12) or np.allclose(p, [0.0, 0.0], atol=1e-12))


# -- automorphisms of the Heisenberg part -----------------------------------------

def heisenberg_automorphism(lam: float, u, s, sign: int = 1) -> np.ndarray:
    """Automorphism of the (2n+1)-dim Heisenberg algebra in (W, Z) coordinates.

    W_w -> W_{lam S w} + Z_{u.w} and Z_z -> Z_{sign lam^2 z}; requires
    lam > 0 and S^T J S = sign J.
    """
    if lam <= 0:
        raise MapPreconditionError("scaling factor must be positive")
    if sign not in (1, -1):
        raise MapPreconditionError("sign must be +1 or -1")
    s = np.asarray(s, dtype=float)
    u = np.asarray(u, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2:
        raise DimensionError("S must be square of even size")
    two_n = s.shape[0]
    if u.shape != (two_n,):
        raise DimensionError("u must match the size of S")
    j = symplectic_matrix(two_n // 2)
    defect = float(np.linalg.norm(s.T @ j @ s - sign * j))
    if defect > 1e-8 * (1.0 + float(np.linalg.norm(s)) ** 2):
        raise MapPreconditionError("S^T J S != sign J within tolerance")
    out = np.zeros((two_n + 1, two_n + 1))
    out[:two_n, :two_n] = lam * s
    out[two_n, :two_n] = u
    out[two_n, two_n] = sign * lam * lam
    return out


def decompose_heisenberg_automorphism(phi) -> tuple[float, np.ndarray, np.ndarray, int]:
    """Recover (lam, u, S, sign) from an automorphism matrix in (W, Z) coordinates."""
    phi = np.asarray(phi, dtype=float)
    if phi.ndim != 2 or phi.shape[0] != phi.shape[1] or phi.shape[0] % 2 == 0:
        raise DimensionError("automorphism matrix must be square of odd size")
    two_n = phi.shape[0] - 1
    if float(np.max(np.abs(phi[:two_n, two_n]))) > 1e-10 * (1.0 + np.abs(phi).max()):
        raise MapPreconditionError("map does not preserve the center line")
    a22 = phi[two_n, two_n]
    if a22 == 0:
        raise MapPreconditionError("map is singular on the center")
    lam = float(np.sqrt(abs(a22)))
    sign = 1 if a22 > 0 else -1
    s = phi[:two_n, :two_n] / lam
    u = phi[two_n, :two_n].copy()
    j = symplectic_matrix(two_n // 2)
    defect = float(np.linalg.norm(s.T @ j @ s - sign * j))
    if defect > 1e-8 * (1.0 + float(np.linalg.norm(s)) ** 2):
        raise MapPreconditionError("map does not preserve the bracket form")
    return lam, u, s, sign


def vh_bracket(n: int, a, b) -> np.ndarray:
    """Bracket on (W, Z) coordinates: [W+Z, W'+Z'] = Z_{form(w, w')}."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    w1, w2 = a[:2 * n], b[:2 * n]
    out = np.zeros(2 * n + 1)
    out[2 * n] = float(w1[n:] @ w2[:n] - w1[:n] @ w2[n:])
    return out


def vh_bracket_defect(n: int, phi: np.ndarray) -> float:
    dim = 2 * n + 1
    worst = 0.0
    for i in range(dim):
        for j in range(i + 1, dim):
            ei = np.eye(dim)[i]
            ej = np.eye(dim)[j]
            lhs = phi @ vh_bracket(n, ei, ej)
            rhs = vh_bracket(n, phi @ ei, phi @ ej)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


# -- structure-preserving maps between two algebras --------------------------------

def bracket_defect(src: DilationParams, dst: DilationParams, phi: np.ndarray) -> float:
    """Max deviation of phi([u, v]) from [phi u, phi v] over basis pairs."""
    ta = structure_tensor(src)
    tb = structure_tensor(dst)
    phi = np.asarray(phi, dtype=float)
    lhs = np.einsum("ijk,ck->ijc", ta, phi)
    rhs = np.einsum("li,mj,lmc->ijc", phi, phi, tb)
    return float(np.max(np.abs(lhs - rhs)))


def _block_map(n: int, top: np.ndarray, middle: np.ndarray, corner: float = 1.0) -> np.ndarray:
    dim = algebra_dim(n)
    out = np.zeros((dim, dim))
    out[:2, :2] = top
    out[2:dim - 1, 2:dim - 1] = middle
    out[dim - 1, dim - 1] = corner
    return out


def build_isomorphism(params: DilationParams, kind: str, *, s=None, v=None,
                      a=None, alpha_scale=None,
                      target: DilationParams | None = None,
                      tol: float = 1e-8) -> tuple[DilationParams, np.ndarray]:
    """Construct one of the standard isomorphisms, verifying its hypothesis.

    kind "symplectic": given S in Sp(n, R) and a target with equal p whose
    W-action matrices satisfy C'_k = S C_k S^{-1}; fixes the generators and
    the center, maps W_w to W_{Sw}.
    kind "conjugate": given V in GL_n, target has B'_k = V B_k V^{-1}
    (constructed if not supplied); realized via S = diag(V, V^{-T}).
    kind "basis_change": given invertible 2x2 A, target generators are the
    A-combinations of the source generators.
    kind "scale": both generators multiplied by a nonzero scalar.
    Returns (target params, coordinate matrix).  Raises CertificateError
    when the data fails its hypothesis.
    """
    n = params.n
    if kind == "symplectic":
        if s is None or target is None:
            raise CertificateError("symplectic kind needs S and an explicit target")
        s = np.asarray(s, dtype=float)
        if not is_symplectic(s):
            raise CertificateError("S is not symplectic within tolerance")
        if not np.allclose(target.p, params.p, atol=tol):
            raise CertificateError("targets of a symplectic map must share p")
        s_inv = np.linalg.inv(s)
        scale = 1.0 + float(np.linalg.norm(s)) ** 2
        for k in (1, 2):
            defect = float(np.linalg.norm(c_matrix(target, k) - s @ c_matrix(params, k) @ s_inv))
            if defect > tol * scale * (1.0 + float(np.linalg.norm(c_matrix(params, k)))):
                raise CertificateError(f"C'_{k} != S C_{k} S^-1 (defect {defect:.3e})")
        return target, _block_map(n, np.eye(2), s)

    if kind == "conjugate":
        if v is None:
            raise CertificateError("conjugate kind needs V")
        v = np.asarray(v, dtype=float)
        if v.shape != (n, n) or abs(np.linalg.det(v)) < 1e-12:
            raise CertificateError("V must be invertible n x n")
        v_inv = np.linalg.inv(v)
        built = DilationParams(n=n, p=params.p.copy(),
                               b1=v @ params.b1 @ v_inv, b2=v @ params.b2 @ v_inv)
        if target is not None:
            for got, want in ((built.b1, target.b1), (built.b2, target.b2)):
                if float(np.linalg.norm(got - want)) > tol * (1.0 + float(np.linalg.norm(want))):
                    raise CertificateError("target generators are not the V-conjugates")
            if not np.allclose(target.p, params.p, atol=tol):
                raise CertificateError("targets of a conjugation must share p")
            built = target
        s_big = np.zeros((2 * n, 2 * n))
        s_big[:n, :n] = v
        s_big[n:, n:] = v_inv.T
        return built, _block_map(n, np.eye(2), s_big)

    if kind == "basis_change":
        if a is None:
            raise CertificateError("basis_change kind needs a 2x2 matrix A")
        a = np.asarray(a, dtype=float)
        if a.shape != (2, 2) or abs(np.linalg.det(a)) < 1e-12:
            raise CertificateError("A must be an invertible 2x2 matrix")
        built = DilationParams(
            n=n, p=a @ params.p,
            b1=a[0, 0] * params.b1 + a[0, 1] * params.b2,
            b2=a[1, 0] * params.b1 + a[1, 1] * params.b2,
        )
        return built, _block_map(n, np.linalg.inv(a).T, np.eye(2 * n))

    if kind == "scale":
        if alpha_scale is None or alpha_scale == 0:
            raise CertificateError("scale kind needs a nonzero scalar")
        return build_isomorphism(params, "basis_change", a=float(alpha_scale) * np.eye(2))

    raise ValueError(f"unknown isomorphism kind {kind!r}")


# -- case analysis and the nilradical ----------------------------------------------

def _spectral_radius_grid(params: DilationParams, thetas: np.ndarray) -> np.ndarray:
    stack = (np.cos(thetas)[:, None, None] * params.b1
             + np.sin(thetas)[:, None, None] * params.b2)
    vals = np.linalg.eigvals(stack)
    return np.max(np.abs(vals), axis=1)


def nilpotent_pencil_directions(params: DilationParams,
                                grid: int = NILPOTENT_SCAN_POINTS) -> list[float]:
    """Isolated directions theta in [0, pi) with cos(theta) B1 + sin(theta) B2 nilpotent.

    Assumes not all directions are nilpotent (check the generators first).
    """
    scale = 1.0 + float(np.linalg.norm(params.b1) + np.linalg.norm(params.b2))
    thetas = np.linspace(0.0, np.pi, grid, endpoint=False)
    radius = _spectral_radius_grid(params, thetas)
    found: list[float] = []
    h = np.pi / grid
    for i in range(grid):
        left = radius[(i - 1) % grid]
        right = radius[(i + 1) % grid]
        if radius[i] <= left and radius[i] <= right and radius[i] < 0.5 * scale:
            lo, hi = thetas[i] - h, thetas[i] + h
            for _ in range(100):
                m1 = lo + (hi - lo) / 3.0
                m2 = hi - (hi - lo) / 3.0
                r1 = _spectral_radius_grid(params, np.array([m1]))[0]
                r2 = _spectral_radius_grid(params, np.array([m2]))[0]
                if r1 <= r2:
                    hi = m2
                else:
                    lo = m1
            theta = (0.5 * (lo + hi)) % np.pi
            combo = params.b_combo(np.cos(theta), np.sin(theta))
            if np.linalg.norm(combo) > 1e-10 * scale and is_nilpotent(combo):
                if not any(min(abs(theta - f), np.pi - abs(theta - f)) < 1e-6 for f in found):
                    found.append(theta)
    return sorted(found)


def case_id(params: DilationParams) -> int:
    """Structure case of the normalized algebra.

    1: p1=1, kernel generator not nilpotent;  2: p1=1, kernel generator
    nilpotent;  3: p=0, no nilpotent pencil direction;  4: p=0, exactly one;
    5: p=0, whole pencil nilpotent.
    """
    norm, _ = normalize(params)
    if norm.p[0] > 0.5:
        return 2 if is_nilpotent(norm.b2) else 1
    if is_nilpotent(norm.b1) and is_nilpotent(norm.b2):
        return 5
    dirs = nilpotent_pencil_directions(norm)
    if len(dirs) == 0:
        return 3
    if len(dirs) == 1:
        return 4
    raise NumericalError(
        f"found {len(dirs)} nilpotent directions in a commuting pencil; "
        "expected 0, 1, or the whole plane")


def nilradical_dim(params: DilationParams) -> int:
    """Dimension of the largest nilpotent ideal.

    Computed structurally: the Heisenberg part plus the kernel-of-p
    generator directions whose W-action is nilpotent.  For the fully
    nilpotent case the lower central series is cross-checked.
    """
    norm, _ = normalize(params)
    case = case_id(norm)
    n = params.n
    if case == 5:
        if not is_nilpotent_algebra(norm):
            raise NumericalError("nilpotent pencil but lower central series does not vanish")
        mid = 0.5 * (norm.b1 + norm.b2)
        if not is_nilpotent(mid):
            raise NumericalError("nilpotent directions do not form a subspace")
        return 2 * n + 3
    if case in (2, 4):
        return 2 * n + 2
    return 2 * n + 1

"""Pointwise-evaluable unitary representations and their intertwiners.

Operators are kept as exact pointwise transformers (prefactor times an
argument substitution), never grid discretizations: every identity checked
here is a pointwise identity, so verification introduces no interpolation
error.  Quadrature enters only through norm checks.

Conventions: points of the frequency-side space are plain arrays (r, xi)
acted on by right matrix multiplication; points of the position-side space
are (u, v) columns.  Half-space support tags "O+"/"O-" (frequency side) and
"U+"/"U-" (position side) both refer to the sign of the first coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import (
    DimensionError,
    DomainError,
    MapPreconditionError,
    NumericalError,
    SupportTagError,
)
from .extension import DilationParams, GroupElement
from .matrices import mat_exp

O_TAGS = ("O+", "O-")
U_TAGS = ("U+", "U-")


def _tag_sign(tag: str) -> float:
    return 1.0 if tag.endswith("+") else -1.0


# -- evaluable probe functions ---------------------------------------------------

@dataclass(frozen=True)
class TestFunction:
    """Complex-valued function on R^(dim) with optional half-space support.

    box = (center, halfwidths) is a decay box outside which the function is
    numerically negligible; affine operators transport it.
    """

    dim: int
    fn: Callable = field(repr=False)
    support: str | None = None
    box: tuple | None = None

    def __post_init__(self):
        if self.support is not None and self.support not in O_TAGS + U_TAGS:
            raise SupportTagError(f"unknown support tag {self.support!r}")

    def evaluate(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        if single:
            pts = pts[None, :]
        if pts.shape[-1] != self.dim:
            raise DimensionError(f"points must have {self.dim} coordinates")
        vals = np.asarray(self.fn(pts), dtype=complex)
        if self.support is not None:
            mask = _tag_sign(self.support) * pts[..., 0] > 0
            vals = np.where(mask, vals, 0.0)
        return vals[0] if single else vals

    __call__ = evaluate

    def restricted(self, tag: str) -> "TestFunction":
        return replace(self, support=tag)


def gaussian(center, width_inv, modulation=None, support: str | None = None) -> TestFunction:
    """exp(-(q-c)^T W (q-c)/2) * exp(2 pi i k.q) with W the inverse-width matrix."""
    center = np.atleast_1d(np.asarray(center, dtype=float))
    dim = len(center)
    w = np.asarray(width_inv, dtype=float)
    if w.ndim == 0:
        w = w * np.eye(dim)
    elif w.ndim == 1:
        w = np.diag(w)
    if w.shape != (dim, dim):
        raise DimensionError("inverse-width matrix does not match the center")
    k = np.zeros(dim) if modulation is None else np.atleast_1d(np.asarray(modulation, dtype=float))

    def fn(pts):
        diff = pts - center
        quad = np.einsum("...i,ij,...j->...", diff, w, diff)
        return np.exp(-0.5 * quad + 2j * np.pi * (pts @ k))

    halfwidths = 8.0 * np.sqrt(np.diag(np.linalg.inv(w)))
    return TestFunction(dim=dim, fn=fn, support=support, box=(center, halfwidths))


def trig_gaussian(center, width_inv, terms, support: str | None = None) -> TestFunction:
    """Gaussian envelope times a finite trigonometric polynomial sum(a_m e^{2 pi i k_m.q})."""
    env = gaussian(center, width_inv)
    terms = [(complex(a), np.atleast_1d(np.asarray(k, dtype=float))) for a, k in terms]

    def fn(pts):
        out = np.zeros(pts.shape[:-1], dtype=complex)
        for amp, freq in terms:
            out = out + amp * np.exp(2j * np.pi * (pts @ freq))
        return out * env.fn(pts)

    return TestFunction(dim=env.dim, fn=fn, support=support, box=env.box)


# -- operators ---------------------------------------------------------------------

def _preserve_tag(tag):
    return tag


def _drop_tag(tag):
    return None


@dataclass(frozen=True)
class RepOperator:
    """Pointwise operator [Tf](q) = pref(q) * f(argmap(q))."""

    dim: int
    pref: Callable = field(repr=False)
    argmap: Callable = field(repr=False)
    affine: tuple | None = None  # (A, b) with argmap(q) = A q + b
    tag_map: Callable = _drop_tag
    in_tags: tuple | None = None  # accepted input support tags; None = any
    name: str = ""

    def __call__(self, f: TestFunction) -> TestFunction:
        if f.dim != self.dim:
            raise DimensionError("operator and function dimensions differ")
        if self.in_tags is not None and f.support not in self.in_tags:
            raise SupportTagError(
                f"{self.name or 'operator'} expects support in {self.in_tags}, "
                f"got {f.support!r}")
        pref, argmap, inner = self.pref, self.argmap, f

        def fn(pts):
            return pref(pts) * inner.evaluate(argmap(pts))

        box = None
        if f.box is not None and self.affine is not None:
            a, b = self.affine
            a_inv = np.linalg.inv(a)
            center, halfwidths = f.box
            box = (a_inv @ (center - b), np.abs(a_inv) @ halfwidths)
        return TestFunction(dim=self.dim, fn=fn, support=self.tag_map(f.support), box=box)

    def compose(self, other: "RepOperator") -> "RepOperator":
        """self after other: (self.compose(other))(f) = self(other(f))."""
        if self.dim != other.dim:
            raise DimensionError("operator dimensions differ")
        p1, m1 = self.pref, self.argmap
        p2, m2 = other.pref, other.argmap
        affine = None
        if self.affine is not None and other.affine is not None:
            a1, b1 = self.affine
            a2, b2 = other.affine
            affine = (a2 @ a1, a2 @ b1 + b2)
        outer_tag, inner_tag = self.tag_map, other.tag_map

        def pref(pts):
            return p1(pts) * p2(m1(pts))

        def argmap(pts):
            return m2(m1(pts))

        def tag_map(tag):
            return inner_tag(outer_tag(tag))

        return RepOperator(dim=self.dim, pref=pref, argmap=argmap, affine=affine,
                           tag_map=tag_map, in_tags=other.in_tags,
                           name=f"{self.name}*{other.name}")

    @staticmethod
    def identity(dim: int) -> "RepOperator":
        return RepOperator(dim=dim, pref=lambda p: np.ones(p.shape[:-1]),
                           argmap=lambda p: p, affine=(np.eye(dim), np.zeros(dim)),
                           tag_map=_preserve_tag, name="id")


def _affine_op(a: np.ndarray, b: np.ndarray, pref, tag_map=_drop_tag, name="") -> RepOperator:
    dim = len(b)

    def argmap(pts):
        return pts @ a.T + b

    return RepOperator(dim=dim, pref=pref, argmap=argmap, affine=(a, b),
                       tag_map=tag_map, name=name)


def translation(x) -> RepOperator:
    """(T_x f)(y) = f(y - x)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return _affine_op(np.eye(len(x)), -x,
                      lambda p: np.ones(p.shape[:-1]), name="T")


def modulation(x) -> RepOperator:
    """(E_x f)(y) = e^{2 pi i x.y} f(y)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return _affine_op(np.eye(len(x)), np.zeros(len(x)),
                      lambda p: np.exp(2j * np.pi * (p @ x)), name="E")


def _invertible(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError("dilation matrix must be square")
    if abs(np.linalg.det(a)) < 1e-300:
        raise MapPreconditionError("dilation matrix is singular")
    return a


def left_dilation(a) -> RepOperator:
    """(S_a f)(y) = |det a|^{-1/2} f(a^{-1} y)."""
    a = _invertible(a)
    c = abs(np.linalg.det(a)) ** -0.5
    return _affine_op(np.linalg.inv(a), np.zeros(a.shape[0]),
                      lambda p: np.full(p.shape[:-1], c), name="S")


def right_dilation(a) -> RepOperator:
    """(S^_a g)(xi) = |det a|^{1/2} g(xi a) on row vectors."""
    a = _invertible(a)
    c = abs(np.linalg.det(a)) ** 0.5
    return _affine_op(a.T, np.zeros(a.shape[0]),
                      lambda p: np.full(p.shape[:-1], c), name="S^")


def chirp(m) -> RepOperator:
    """(U_m f)(q) = e^{i pi q^T m q} f(q) for symmetric m."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError("chirp matrix must be square")
    if float(np.linalg.norm(m - m.T)) > 1e-12 * (1.0 + float(np.linalg.norm(m))):
        raise MapPreconditionError("chirp matrix must be symmetric")
    dim = m.shape[0]

    def pref(pts):
        return np.exp(1j * np.pi * np.einsum("...i,ij,...j->...", pts, m, pts))

    return _affine_op(np.eye(dim), np.zeros(dim), pref, tag_map=_preserve_tag, name="U")


# -- the matrices of the symplectic and affine pictures ------------------------------

def delta_det(params: DilationParams, t) -> float:
    """det e^{Bt} = e^{tr(Bt)}."""
    return float(np.exp(np.trace(params.bt(t))))


def m_matrix(z: float, x) -> np.ndarray:
    """Symmetric (n+1) x (n+1) block [[-z, -x^T], [-x, 0]]."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = len(x)
    out = np.zeros((n + 1, n + 1))
    out[0, 0] = -z
    out[0, 1:] = -x
    out[1:, 0] = -x
    return out


def a_matrix(params: DilationParams, t, y) -> np.ndarray:
    """Lower-unipotent shear in y times diag(e^{-pt/2}, e^{pt/2}[e^{-Bt}]^T)."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    n = params.n
    shear = np.eye(n + 1)
    shear[1:, 0] = -0.5 * y
    diag = np.zeros((n + 1, n + 1))
    pt = params.pt(t)
    diag[0, 0] = np.exp(-0.5 * pt)
    diag[1:, 1:] = np.exp(0.5 * pt) * mat_exp(-params.bt(t)).T
    return shear @ diag


def h_matrix(params: DilationParams, t, y) -> np.ndarray:
    """Affine dilation block [[e^{pt}, y^T e^{Bt}], [0, e^{Bt}]]."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    n = params.n
    ebt = mat_exp(params.bt(t))
    out = np.zeros((n + 1, n + 1))
    out[0, 0] = np.exp(params.pt(t))
    out[0, 1:] = y @ ebt
    out[1:, 1:] = ebt
    return out


def sympl_embed(params: DilationParams, g: GroupElement) -> np.ndarray:
    """Image [[a, 0], [m a, a^{-T}]] in the symplectic group of size 2n+2."""
    a = a_matrix(params, g.t, g.y)
    m = m_matrix(g.z, g.x)
    k = np.zeros((2 * params.n + 2, 2 * params.n + 2))
    nn = params.n + 1
    k[:nn, :nn] = a
    k[nn:, :nn] = m @ a
    k[nn:, nn:] = np.linalg.inv(a).T
    return k


def affine_embed(params: DilationParams, g: GroupElement) -> np.ndarray:
    """Image [[h, (z; x)], [0, 1]] in the affine group of R^{n+1}."""
    n = params.n
    out = np.eye(n + 2)
    out[:n + 1, :n + 1] = h_matrix(params, g.t, g.y)
    out[0, n + 1] = g.z
    out[1:n + 1, n + 1] = g.x
    return out


# -- the two representations ----------------------------------------------------------

def wavelet_op(params: DilationParams, g: GroupElement) -> RepOperator:
    """Frequency-side wavelet operator: modulation by -(z; x) times right dilation."""
    n = params.n
    const = np.sqrt(delta_det(params, g.t)) * np.exp(0.5 * params.pt(g.t))
    mvec = np.concatenate([[g.z], g.x])
    h = h_matrix(params, g.t, g.y)

    def pref(pts):
        return const * np.exp(-2j * np.pi * (pts @ mvec))

    op = _affine_op(h.T, np.zeros(n + 1), pref, tag_map=_preserve_tag, name="pi^")
    return replace(op, in_tags=(None, "O+", "O-"))


def metaplectic_op(params: DilationParams, g: GroupElement) -> RepOperator:
    """Position-side operator with chirp phase and the sheared dilation substitution."""
    n = params.n
    pt = params.pt(g.t)
    const = np.sqrt(delta_det(params, g.t)) * np.exp(0.25 * pt * (1 - n))
    z, x, y = g.z, g.x, g.y
    ebt_t = mat_exp(params.bt(g.t)).T

    def pref(pts):
        u = pts[..., 0]
        v = pts[..., 1:]
        return const * np.exp(-1j * np.pi * (u * u * z + 2.0 * u * (v @ x)))

    a = np.zeros((n + 1, n + 1))
    a[0, 0] = np.exp(0.5 * pt)
    a[1:, 0] = np.exp(-0.5 * pt) * (ebt_t @ (0.5 * y))
    a[1:, 1:] = np.exp(-0.5 * pt) * ebt_t
    op = _affine_op(a, np.zeros(n + 1), pref, tag_map=_preserve_tag, name="mu")
    return replace(op, in_tags=(None, "U+", "U-"))


# -- the square-law change of variables and its weighted compositions ------------------

def psi_map(q) -> np.ndarray:
    """(u; v) -> (u^2/2, u v)."""
    q = np.asarray(q, dtype=float)
    u = q[..., :1]
    return np.concatenate([0.5 * u * u, u * q[..., 1:]], axis=-1)


def psi_jacobian(q) -> np.ndarray:
    """Jacobian determinant u^{n+1} of the square-law map."""
    q = np.asarray(q, dtype=float)
    return q[..., 0] ** q.shape[-1]


def psi_inverse(sign: int, eta) -> np.ndarray:
    """(r, xi) -> sign (sqrt(2r); xi / sqrt(2r)); requires r > 0."""
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    eta = np.asarray(eta, dtype=float)
    r = eta[..., :1]
    if np.any(r <= 0):
        raise DomainError("the square-law inverse needs a positive first coordinate")
    root = np.sqrt(2.0 * r)
    return sign * np.concatenate([root, eta[..., 1:] / root], axis=-1)


def q_op(n: int, sign: int) -> RepOperator:
    """Weighted composition (Q f)(q) = |u|^{(n+1)/2} f(psi(q)) onto the u-half-space."""
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    out_tag = "U+" if sign > 0 else "U-"

    def pref(pts):
        return np.abs(pts[..., 0]) ** (0.5 * (n + 1)) + 0j

    return RepOperator(dim=n + 1, pref=pref, argmap=psi_map, affine=None,
                       tag_map=lambda tag: out_tag, in_tags=("O+",), name=f"Q{sign:+d}")


def q_op_inverse(n: int, sign: int) -> RepOperator:
    """Inverse weighted composition back onto the positive r-half-space."""
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    in_tag = "U+" if sign > 0 else "U-"

    def pref(pts):
        r = pts[..., 0]
        return np.where(r > 0, np.abs(2.0 * np.where(r > 0, r, 1.0)) ** (-0.25 * (n + 1)), 0.0) + 0j

    def argmap(pts):
        safe = pts.copy()
        safe[..., 0] = np.maximum(safe[..., 0], 1e-300)
        return psi_inverse(sign, safe)

    return RepOperator(dim=n + 1, pref=pref, argmap=argmap, affine=None,
                       tag_map=lambda tag: "O+", in_tags=(in_tag,), name=f"Q{sign:+d}^-1")


# -- sampling and checks ----------------------------------------------------------------

@dataclass(frozen=True)
class SampleCheckConfig:
    count: int = 200
    box: float = 2.0
    seed: int = 12345
    tol: float = 1e-9
    min_first: float = 1e-3

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class QuadConfig:
    rtol: float = 1e-6
    orders: tuple = (16, 24, 32, 48, 64, 96)
    tol: float = 1e-4


def sample_points(cfg: SampleCheckConfig, dim: int, tag: str | None = None,
                  rng: np.random.Generator | None = None) -> np.ndarray:
    """Uniform box samples; tagged samples keep |first coordinate| >= min_first."""
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    pts = rng.uniform(-cfg.box, cfg.box, size=(cfg.count, dim))
    if tag is not None:
        first = rng.uniform(cfg.min_first, cfg.box, size=cfg.count)
        pts[:, 0] = _tag_sign(tag) * first
    else:
        sign = np.where(pts[:, 0] >= 0, 1.0, -1.0)
        pts[:, 0] = sign * np.maximum(np.abs(pts[:, 0]), cfg.min_first)
    return pts


def max_pointwise_diff(f1: TestFunction, f2: TestFunction, points) -> float:
    return float(np.max(np.abs(f1.evaluate(points) - f2.evaluate(points))))


def check_homomorphism(params: DilationParams, kind: str, g1: GroupElement,
                       g2: GroupElement, f: TestFunction, points) -> float:
    """Pointwise defect of rho(g1) rho(g2) f against rho(g1 g2) f."""
    from .extension import g_mul

    build = wavelet_op if kind == "wavelet" else metaplectic_op
    lhs = build(params, g1)(build(params, g2)(f))
    rhs = build(params, g_mul(params, g1, g2))(f)
    return max_pointwise_diff(lhs, rhs, points)


def check_intertwining(params: DilationParams, g: GroupElement, sign: int,
                       f: TestFunction, cfg: SampleCheckConfig) -> float:
    """Max pointwise defect of mu(g) f against Q pi^(g) Q^{-1} f on the u-half-space."""
    tag = "U+" if sign > 0 else "U-"
    if f.support != tag:
        raise SupportTagError(f"probe must be tagged {tag}")
    n = params.n
    lhs = q_op(n, sign)(wavelet_op(params, g)(q_op_inverse(n, sign)(f)))
    rhs = metaplectic_op(params, g)(f)
    pts = sample_points(cfg, n + 1, tag=tag)
    return float(np.max(np.abs(lhs.evaluate(pts) - rhs.evaluate(pts))))


def tensor_quad_norm(f: TestFunction, box: tuple | None = None,
                     cfg: QuadConfig = QuadConfig()) -> float:
    """L^2 norm over the decay box by tensor Gauss-Legendre, refined to stability."""
    box = f.box if box is None else box
    if box is None:
        raise NumericalError("function carries no decay box for quadrature")
    center, halfwidths = box
    center = np.asarray(center, dtype=float)
    halfwidths = np.asarray(halfwidths, dtype=float)
    dim = f.dim
    previous = None
    for order in cfg.orders:
        nodes, weights = np.polynomial.legendre.leggauss(order)
        axes_nodes = [center[i] + halfwidths[i] * nodes for i in range(dim)]
        axes_weights = [halfwidths[i] * weights for i in range(dim)]
        mesh = np.meshgrid(*axes_nodes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=-1)
        wmesh = np.meshgrid(*axes_weights, indexing="ij")
        wts = np.prod(np.stack([w.ravel() for w in wmesh], axis=-1), axis=-1)
        vals = np.abs(f.evaluate(pts)) ** 2
        integral = float(np.sum(wts * vals))
        if previous is not None and abs(integral - previous) <= cfg.rtol * max(abs(integral), 1e-300):
            return float(np.sqrt(max(integral, 0.0)))
        previous = integral
    raise NumericalError("quadrature failed to stabilize at the configured orders")


def check_unitarity(params: DilationParams, kind: str, g: GroupElement,
                    f: TestFunction, cfg: QuadConfig = QuadConfig()) -> float:
    """Relative norm deviation |  ||rho(g) f|| - ||f||  | / ||f|| under quadrature."""
    build = wavelet_op if kind == "wavelet" else metaplectic_op
    tf = build(params, g)(f)
    norm_f = tensor_quad_norm(f, cfg=cfg)
    norm_tf = tensor_quad_norm(tf, cfg=cfg)
    return abs(norm_tf - norm_f) / norm_f


def check_q_norm(n: int, sign: int, f: TestFunction,
                 cfg: QuadConfig = QuadConfig()) -> float:
    """Relative norm deviation of the weighted composition onto the u-half-space."""
    if f.support != "O+":
        raise SupportTagError("probe must be tagged O+")
    if f.box is None:
        raise NumericalError("probe carries no decay box")
    center, halfwidths = f.box
    r_lo = max(center[0] - halfwidths[0], 1e-3)
    r_hi = center[0] + halfwidths[0]
    u_lo, u_hi = np.sqrt(2.0 * r_lo), np.sqrt(2.0 * r_hi)
    xi_max = np.abs(center[1:]) + halfwidths[1:]
    v_half = xi_max / u_lo
    u_center = 0.5 * (u_lo + u_hi) * (1 if sign > 0 else -1)
    qbox = (np.concatenate([[u_center], np.zeros(n)]),
            np.concatenate([[0.5 * (u_hi - u_lo) + 1e-6], v_half]))
    qf = q_op(n, sign)(f)
    norm_f = tensor_quad_norm(f, cfg=cfg)
    norm_qf = tensor_quad_norm(qf, box=qbox, cfg=cfg)
    return abs(norm_qf - norm_f) / norm_f


def check_record(check: str, params: DilationParams, g: GroupElement,
                 max_error: float, tolerance: float) -> dict:
    """Serializable record of one verification result."""
    return {
        "check": check,
        "params": params.to_dict(),
        "groupElement": g.to_dict(),
        "maxError": float(max_error),
        "tolerance": float(tolerance),
        "pass": bool(max_error <= tolerance),
    }


def support_violations(params: DilationParams, kind: str, g: GroupElement,
                       points, min_first: float = 1e-3) -> int:
    """Count sampled points whose transformed argument crosses the half-space wall."""
    op = wavelet_op(params, g) if kind == "wavelet" else metaplectic_op(params, g)
    pts = np.asarray(points, dtype=float)
    mapped = op.argmap(pts)
    relevant = np.abs(pts[:, 0]) >= min_first
    crossed = np.sign(mapped[:, 0]) != np.sign(pts[:, 0])
    return int(np.sum(relevant & crossed))

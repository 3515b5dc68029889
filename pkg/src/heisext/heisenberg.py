"""The Heisenberg group, its polarized form, and the symplectic action.

Elements of the phase-space form carry a single vector w of even length,
split semantically as w = (x; y).  The polarized form stores x, y, z
separately and embeds into unipotent upper-triangular matrices of size n+2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, MapPreconditionError

SYMPLECTIC_RTOL = 1e-9


def _vec(v, length: int | None = None, what: str = "vector") -> np.ndarray:
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if v.ndim != 1:
        raise DimensionError(f"{what} must be one-dimensional")
    if length is not None and len(v) != length:
        raise DimensionError(f"{what} must have length {length}, got {len(v)}")
    if not np.all(np.isfinite(v)):
        raise DimensionError(f"{what} has non-finite entries")
    return v


def symplectic_matrix(n: int) -> np.ndarray:
    """The 2n x 2n form matrix with blocks [[0, -I], [I, 0]]."""
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = -np.eye(n)
    j[n:, :n] = np.eye(n)
    return j


def symplectic_form(w, wt) -> float:
    """w^T J wt, i.e. y.x~ - x.y~ for w = (x; y), wt = (x~; y~)."""
    w = _vec(w, what="first phase vector")
    wt = _vec(wt, what="second phase vector")
    if len(w) != len(wt):
        raise DimensionError("phase vectors must have equal length")
    if len(w) % 2:
        raise DimensionError("phase vectors must have even length")
    n = len(w) // 2
    return float(w[n:] @ wt[:n] - w[:n] @ wt[n:])


def is_symplectic(a, tol: float = SYMPLECTIC_RTOL) -> bool:
    """||A^T J A - J|| <= tol * (1 + ||A||^2)."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % 2:
        return False
    j = symplectic_matrix(a.shape[0] // 2)
    defect = float(np.linalg.norm(a.T @ j @ a - j))
    return defect <= tol * (1.0 + float(np.linalg.norm(a)) ** 2)


@dataclass(frozen=True, eq=False)
class HeisenbergElement:
    """Pair (w, z) with w of even length 2n."""

    w: np.ndarray
    z: float

    def __post_init__(self):
        w = _vec(self.w, what="w")
        if len(w) % 2:
            raise DimensionError("w must have even length")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "z", float(self.z))

    @property
    def n(self) -> int:
        return len(self.w) // 2

    @property
    def x(self) -> np.ndarray:
        return self.w[: self.n]

    @property
    def y(self) -> np.ndarray:
        return self.w[self.n:]


@dataclass(frozen=True, eq=False)
class PolarizedElement:
    """Triple (x, y, z) of the polarized form."""

    x: np.ndarray
    y: np.ndarray
    z: float

    def __post_init__(self):
        x = _vec(self.x, what="x")
        y = _vec(self.y, len(x), what="y")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", float(self.z))

    @property
    def n(self) -> int:
        return len(self.x)


def heis_identity(n: int) -> HeisenbergElement:
    return HeisenbergElement(np.zeros(2 * n), 0.0)


def heis_mul(a: HeisenbergElement, b: HeisenbergElement) -> HeisenbergElement:
    """(w, z)(w~, z~) = (w + w~, z + z~ + form(w, w~)/2)."""
    if a.n != b.n:
        raise DimensionError("elements live in different dimensions")
    return HeisenbergElement(a.w + b.w, a.z + b.z + 0.5 * symplectic_form(a.w, b.w))


def heis_inverse(a: HeisenbergElement) -> HeisenbergElement:
    return HeisenbergElement(-a.w, -a.z)


def pol_identity(n: int) -> PolarizedElement:
    return PolarizedElement(np.zeros(n), np.zeros(n), 0.0)


def pol_mul(a: PolarizedElement, b: PolarizedElement) -> PolarizedElement:
    """(x, y, z)(x~, y~, z~) = (x + x~, y + y~, z + z~ + y.x~)."""
    if a.n != b.n:
        raise DimensionError("elements live in different dimensions")
    return PolarizedElement(a.x + b.x, a.y + b.y, a.z + b.z + float(a.y @ b.x))


def pol_inverse(a: PolarizedElement) -> PolarizedElement:
    return PolarizedElement(-a.x, -a.y, -a.z + float(a.y @ a.x))


def pol_to_matrix(h: PolarizedElement) -> np.ndarray:
    """Unipotent (n+2) x (n+2) matrix with blocks (1, y^T, z / 0, I, x / 0, 0, 1)."""
    n = h.n
    m = np.eye(n + 2)
    m[0, 1:n + 1] = h.y
    m[0, n + 1] = h.z
    m[1:n + 1, n + 1] = h.x
    return m


def psi(h: HeisenbergElement) -> PolarizedElement:
    """Isomorphism (w, z) -> (x, y, z + y.x/2) onto the polarized form."""
    return PolarizedElement(h.x, h.y, h.z + 0.5 * float(h.y @ h.x))


def psi_inverse(h: PolarizedElement) -> HeisenbergElement:
    return HeisenbergElement(np.concatenate([h.x, h.y]), h.z - 0.5 * float(h.y @ h.x))


def sp_action(a, h: HeisenbergElement, tol: float = SYMPLECTIC_RTOL) -> HeisenbergElement:
    """Automorphism (w, z) -> (Aw, z) for a symplectic matrix A; fixes the center."""
    a = np.asarray(a, dtype=float)
    if not is_symplectic(a, tol):
        raise MapPreconditionError("matrix is not symplectic within tolerance")
    if a.shape[0] != 2 * h.n:
        raise DimensionError("matrix size does not match the element")
    return HeisenbergElement(a @ h.w, h.z)

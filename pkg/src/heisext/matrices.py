"""Small dense matrix primitives: exponential, spectra, spectral predicates.

Everything here targets the tiny dimensions used by the rest of the package
(at most n+4 rows for moderate n), so plain dense algorithms are used
throughout.  All functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NumericalError

# Default tolerances; every predicate accepts an override.
ALGEBRA_RTOL = 1e-9
SPECTRAL_TOL = 1e-8

# Pade-13 numerator coefficients and the matching scaling threshold.
_PADE13_B = (
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0, 129060195264000.0, 10559470521600.0, 670442572800.0,
    33522128640.0, 1323241920.0, 40840800.0, 960960.0, 16380.0, 182.0, 1.0,
)
_PADE13_THETA = 5.371920351148152


def as_square(a, what: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{what} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DimensionError(f"{what} has non-finite entries")
    return a


def commutator(a, b) -> np.ndarray:
    """AB - BA for square matrices of equal size."""
    a = as_square(a, "commutator left operand")
    b = as_square(b, "commutator right operand")
    if a.shape != b.shape:
        raise DimensionError(f"commutator needs equal shapes, got {a.shape} vs {b.shape}")
    return a @ b - b @ a


def _expm_2x2(a: np.ndarray) -> np.ndarray:
    # a = mu*I + N with tr(N)=0 and N^2 = delta*I; exp splits accordingly.
    mu = 0.5 * (a[0, 0] + a[1, 1])
    n = a - mu * np.eye(2)
    delta = n[0, 0] * n[0, 0] + n[0, 1] * n[1, 0]
    if delta > 1e-30:
        s = np.sqrt(delta)
        c, k = np.cosh(s), np.sinh(s) / s
    elif delta < -1e-30:
        s = np.sqrt(-delta)
        c, k = np.cos(s), np.sin(s) / s
    else:
        c, k = 1.0 + 0.5 * delta, 1.0
    return np.exp(mu) * (c * np.eye(2) + k * n)


def mat_exp(a) -> np.ndarray:
    """Matrix exponential e^A.

    Closed forms for 1x1 and 2x2, a terminating power series for nilpotent
    input, and Pade-13 scaling-and-squaring otherwise.
    """
    a = as_square(a, "mat_exp argument")
    d = a.shape[0]
    if d == 1:
        return np.exp(a)
    if d == 2:
        return _expm_2x2(a)
    if is_nilpotent(a, tol=1e-13):
        term = np.eye(d)
        out = np.eye(d)
        for k in range(1, d):
            term = term @ a / k
            out = out + term
        return out

    norm = np.linalg.norm(a, 1)
    squarings = max(0, int(np.ceil(np.log2(norm / _PADE13_THETA)))) if norm > _PADE13_THETA else 0
    x = a / (2.0 ** squarings)

    b = _PADE13_B
    ident = np.eye(d)
    x2 = x @ x
    x4 = x2 @ x2
    x6 = x2 @ x4
    u = x @ (x6 @ (b[13] * x6 + b[11] * x4 + b[9] * x2)
             + b[7] * x6 + b[5] * x4 + b[3] * x2 + b[1] * ident)
    v = (x6 @ (b[12] * x6 + b[10] * x4 + b[8] * x2)
         + b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * ident)
    try:
        r = np.linalg.solve(v - u, v + u)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - pathological input
        raise NumericalError(f"mat_exp Pade solve failed: {exc}") from exc
    for _ in range(squarings):
        r = r @ r
    return r


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues with algebraic multiplicities and a semisimplicity flag."""

    eigenvalues: tuple
    multiplicities: tuple
    semisimple: bool

    def __post_init__(self):
        dim = sum(self.multiplicities)
        if len(self.eigenvalues) != len(self.multiplicities):
            raise DimensionError("eigenvalue/multiplicity length mismatch")
        if dim <= 0:
            raise DimensionError("multiplicities must sum to the matrix dimension")

    @property
    def dim(self) -> int:
        return sum(self.multiplicities)


def _cluster_complex(values: np.ndarray, tol: float):
    """Greedy clustering of complex values; returns (centers, counts)."""
    order = np.lexsort((values.imag, values.real))
    centers: list[complex] = []
    counts: list[int] = []
    for v in values[order]:
        for i, c in enumerate(centers):
            if abs(v - c) <= tol:
                centers[i] = (c * counts[i] + v) / (counts[i] + 1)
                counts[i] += 1
                break
        else:
            centers.append(complex(v))
            counts.append(1)
    return centers, counts


def rank(a: np.ndarray, tol: float) -> int:
    sv = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(sv > tol))


def spectrum(a, cluster_tol: float | None = None, rank_tol: float | None = None) -> Spectrum:
    """Clustered eigenvalues of a square matrix.

    The semisimple flag is true iff rank(A - lambda*I) = dim - mult(lambda)
    for every clustered eigenvalue, ranks taken with tolerance
    rank_tol (default 1e-8 * max(1, ||A||)).
    """
    a = as_square(a, "spectrum argument")
    d = a.shape[0]
    scale = max(1.0, float(np.linalg.norm(a, 2)))
    ctol = SPECTRAL_TOL * scale if cluster_tol is None else cluster_tol
    rtol = SPECTRAL_TOL * scale if rank_tol is None else rank_tol
    try:
        vals = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        residual = float(np.linalg.norm(a))
        raise NumericalError(f"eigenvalue solver failed (||A||={residual:.3e}): {exc}") from exc
    centers, counts = _cluster_complex(vals, ctol)
    semisimple = True
    for lam, m in zip(centers, counts):
        if m == 1:
            continue
        if rank(a - lam.real * np.eye(d) - 1j * lam.imag * np.eye(d), rtol) != d - m:
            semisimple = False
            break
    return Spectrum(tuple(centers), tuple(counts), semisimple)


def is_nilpotent(a, tol: float = SPECTRAL_TOL) -> bool:
    """True iff ||A^n|| <= tol * (1 + ||A||^n) for n = dim(A)."""
    a = as_square(a, "is_nilpotent argument")
    d = a.shape[0]
    power = np.eye(d)
    for _ in range(d):
        power = power @ a
    norm_a = float(np.linalg.norm(a))
    return float(np.linalg.norm(power)) <= tol * (1.0 + norm_a ** d)


def is_skew_similar(a, tol: float = SPECTRAL_TOL) -> bool:
    """Whether A is similar to a real skew-symmetric matrix.

    Criterion: semisimple with purely imaginary spectrum (|Re lambda|
    within tol * (1 + ||A||)).
    """
    a = as_square(a, "is_skew_similar argument")
    spec = spectrum(a)
    if not spec.semisimple:
        return False
    bound = tol * (1.0 + float(np.linalg.norm(a, 2)))
    return all(abs(lam.real) <= bound for lam in spec.eigenvalues)


def nullspace_dim(a: np.ndarray, tol: float = 1e-10) -> int:
    """Dimension of the kernel of a (possibly rectangular) matrix."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return a.shape[1] if a.ndim == 2 else 0
    sv = np.linalg.svd(a, compute_uv=False)
    smax = sv[0] if len(sv) else 0.0
    return int(a.shape[1] - np.sum(sv > tol * max(1.0, smax)))


def orthonormal_span(vectors: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (columns) of the span of the given columns."""
    vectors = np.asarray(vectors, dtype=float)
    if vectors.size == 0:
        return np.zeros((vectors.shape[0], 0))
    u, sv, _ = np.linalg.svd(vectors, full_matrices=False)
    smax = sv[0] if len(sv) else 0.0
    r = int(np.sum(sv > tol * max(1.0, smax)))
    return u[:, :r]

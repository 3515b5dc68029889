"""Isomorphism support: invariants, refutation, certificates, the catalog.

Deciding isomorphism in general reduces to symplectic conjugacy of the
W-action pencil, which is out of scope; this module refutes via computable
invariants and verifies explicitly supplied certificates.

The pencil profile is the workhorse invariant.  For the normalized algebra
it samples the characteristic polynomial of C(theta) = cos(theta) C1 +
sin(theta) C2 over directions, canonicalizing each coefficient vector
projectively (coefficient j scales with the j-th power of a direction
rescaling).  Coefficients alone cannot see Jordan structure, so the profile
additionally records every special direction where the eigenvalue partition
or a geometric multiplicity jumps, with its partition/Jordan data; these
records are compared as multisets.  When p1 = 1 the kernel direction of the
p-functional is canonical up to scale and is compared directly as an anchor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import CertificateError
from .extension import DilationParams, require_m1
from .heisenberg import is_symplectic, symplectic_matrix
from .liealgebra import (
    c_matrix,
    case_id,
    center_dim,
    derived_series_dims,
    is_nilpotent_algebra,
    lower_central_dims,
    nilradical_dim,
    normalize,
)

PROFILE_SAMPLES = 64
PROFILE_DENSE = 1024
PROFILE_SCAN = 720
PROFILE_MATCH_TOL = 1e-6
_SAMPLE_OFFSET = 0.381966011250105  # golden-section offset, avoids axis-aligned specials


# -- characteristic polynomial machinery -----------------------------------------

def char_coeffs(mats: np.ndarray) -> np.ndarray:
    """Coefficients (a_1..a_d) of det(lambda I - M) = lambda^d + sum a_j lambda^{d-j}.

    Batched over leading axes via power traces and Newton's identities.
    """
    mats = np.asarray(mats, dtype=float)
    d = mats.shape[-1]
    traces = []
    power = mats
    traces.append(np.trace(power, axis1=-2, axis2=-1))
    for _ in range(d - 1):
        power = power @ mats
        traces.append(np.trace(power, axis1=-2, axis2=-1))
    psums = np.stack(traces, axis=-1)
    elem = np.zeros(mats.shape[:-2] + (d + 1,))
    elem[..., 0] = 1.0
    for k in range(1, d + 1):
        acc = np.zeros(mats.shape[:-2])
        for i in range(1, k + 1):
            acc = acc + ((-1.0) ** (i - 1)) * elem[..., k - i] * psums[..., i - 1]
        elem[..., k] = acc / k
    signs = (-1.0) ** np.arange(1, d + 1)
    return signs * elem[..., 1:]


def canonicalize_coeffs(coeffs: np.ndarray, zero_tol: float) -> np.ndarray:
    """Projective normal form: divide a_j by s^j with s = max_j |a_j|^(1/j)."""
    coeffs = np.asarray(coeffs, dtype=float)
    d = coeffs.shape[-1]
    j = np.arange(1, d + 1, dtype=float)
    with np.errstate(divide="ignore"):
        mags = np.abs(coeffs) ** (1.0 / j)
    s = np.max(mags, axis=-1)
    safe = np.where(s > zero_tol, s, 1.0)
    out = coeffs / safe[..., None] ** j
    out = np.where((s > zero_tol)[..., None], out, 0.0)
    return out


def _flip(coeffs: np.ndarray) -> np.ndarray:
    d = coeffs.shape[-1]
    return coeffs * ((-1.0) ** np.arange(1, d + 1))


def coeff_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Max-norm distance up to the negative-scale flip; broadcasts over b."""
    direct = np.max(np.abs(b - a), axis=-1)
    flipped = np.max(np.abs(_flip(b) - a), axis=-1)
    return np.minimum(direct, flipped)


# -- pencil profile ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SpecialDirection:
    theta: float
    code: tuple
    coeffs: np.ndarray

    def as_dict(self) -> dict:
        return {
            "theta": self.theta,
            "code": [[m, list(defects)] for m, defects in self.code],
            "coeffs": self.coeffs.tolist(),
        }


@dataclass(frozen=True, eq=False)
class PencilProfile:
    n: int
    p1: int
    scale: float
    c1: np.ndarray = field(repr=False)
    c2: np.ndarray = field(repr=False)
    sample_thetas: np.ndarray = field(repr=False)
    sample_coeffs: np.ndarray = field(repr=False)
    dense_thetas: np.ndarray = field(repr=False)
    dense_coeffs: np.ndarray = field(repr=False)
    generic_code: tuple
    specials: tuple
    kernel: SpecialDirection | None

    def coeffs_at(self, thetas: np.ndarray) -> np.ndarray:
        mats = (np.cos(thetas)[..., None, None] * self.c1
                + np.sin(thetas)[..., None, None] * self.c2)
        return canonicalize_coeffs(char_coeffs(mats), 1e-8 * self.scale)

    def as_dict(self) -> dict:
        return {
            "sample_thetas": self.sample_thetas.tolist(),
            "sample_coeffs": self.sample_coeffs.tolist(),
            "generic_code": [[m, list(defects)] for m, defects in self.generic_code],
            "specials": [s.as_dict() for s in self.specials],
            "kernel": self.kernel.as_dict() if self.kernel is not None else None,
        }


def _cluster_eigs(vals: np.ndarray, tol: float):
    centers: list[complex] = []
    groups: list[int] = []
    for v in sorted(vals, key=lambda z: (z.real, z.imag)):
        for i, c in enumerate(centers):
            if abs(v - c) <= tol:
                centers[i] = (c * groups[i] + v) / (groups[i] + 1)
                groups[i] += 1
                break
        else:
            centers.append(complex(v))
            groups.append(1)
    return centers, groups


def _structure_code(mat: np.ndarray, cluster_tol: float, rank_tol: float) -> tuple:
    """Sorted tuple of (multiplicity, kernel-dimension sequence) per eigenvalue."""
    d = mat.shape[0]
    vals = np.linalg.eigvals(mat)
    centers, mults = _cluster_eigs(vals, cluster_tol)
    code = []
    ident = np.eye(d)
    for lam, m in zip(centers, mults):
        defects = []
        shifted = mat - lam * ident
        power = np.eye(d, dtype=complex)
        for _ in range(m):
            power = power @ shifted
            sv = np.linalg.svd(power, compute_uv=False)
            defect = int(np.sum(sv <= rank_tol * max(1.0, sv[0] if len(sv) else 1.0)))
            defects.append(defect)
            if defect >= m:
                break
        code.append((m, tuple(defects)))
    return tuple(sorted(code))


def _argmin_zoom(fn, center: float, halfwidth: float, levels: int = 12,
                 pts: int = 15) -> float:
    """Noise-robust scalar minimization by nested grid argmin."""
    for _ in range(levels):
        grid = center + np.linspace(-halfwidth, halfwidth, pts)
        values = [fn(th) for th in grid]
        center = float(grid[int(np.argmin(values))])
        halfwidth /= 5.0
    return center


def _pencil_matrix(c1, c2, theta):
    return np.cos(theta) * c1 + np.sin(theta) * c2


def _power_defects(shifted: np.ndarray, mult: int, rank_tol: float) -> tuple:
    """Kernel dimensions of shifted^k for k = 1.. until the multiplicity is filled."""
    d = shifted.shape[0]
    defects = []
    power = np.eye(d, dtype=shifted.dtype)
    for _ in range(mult):
        power = power @ shifted
        sv = np.linalg.svd(power, compute_uv=False)
        top = float(sv[0]) if len(sv) else 0.0
        defect = int(np.sum(sv <= rank_tol * max(1.0, top)))
        defects.append(defect)
        if defect >= mult:
            break
    return tuple(defects)


def _local_minima(values: np.ndarray, bound: float) -> list[int]:
    k = len(values)
    return [i for i in range(k)
            if values[i] <= values[(i - 1) % k]
            and values[i] <= values[(i + 1) % k]
            and values[i] < bound]


def _find_special_records(c1: np.ndarray, c2: np.ndarray, scale: float,
                          generic_code: tuple, zero_tol: float,
                          cluster_tol: float, rank_tol: float) -> list[SpecialDirection]:
    """Records of directions where the eigenvalue partition or a defect jumps.

    Candidates come from two scanned indicators (the first non-persistent
    eigenvalue gap, and the singular value beyond the generic kernel of a
    repeated eigenvalue).  Candidate clusters are polished on the smooth
    coefficient functional that detects full collisions, which dodges the
    k-th-root eigenvalue noise around deeply degenerate directions.
    """
    d = c1.shape[0]
    thetas = np.linspace(0.0, np.pi, PROFILE_SCAN, endpoint=False)
    mats = (np.cos(thetas)[:, None, None] * c1 + np.sin(thetas)[:, None, None] * c2)
    vals = np.linalg.eigvals(mats)
    h = np.pi / PROFILE_SCAN

    iu, ju = np.triu_indices(d, k=1)
    gaps = np.sort(np.abs(vals[:, iu] - vals[:, ju]), axis=1)
    persistent = int(np.sum(np.median(gaps, axis=0) < 1e-4 * scale))

    candidates: list[float] = []

    if persistent < gaps.shape[1]:
        def collision_ind(th: float) -> float:
            v = np.linalg.eigvals(_pencil_matrix(c1, c2, th))
            g = np.sort(np.abs(v[iu] - v[ju]))
            return float(g[persistent])

        for i in _local_minima(gaps[:, persistent], 0.4 * scale):
            candidates.append(_argmin_zoom(collision_ind, thetas[i], h, levels=6) % np.pi)

    # Geometric-multiplicity jumps inside persistently repeated eigenvalues.
    by_mult: dict[int, list[int]] = {}
    cached = []
    for k in range(PROFILE_SCAN):
        centers, mults = _cluster_eigs(vals[k], cluster_tol)
        per_point = []
        for lam, m in zip(centers, mults):
            if m < 2:
                continue
            sv = np.linalg.svd(mats[k] - lam * np.eye(d), compute_uv=False)
            defect = int(np.sum(sv <= rank_tol * max(1.0, sv[0])))
            per_point.append((m, defect, sv))
            by_mult.setdefault(m, []).append(defect)
        cached.append(per_point)
    generic_defect = {m: int(np.median(v)) for m, v in by_mult.items()}

    if generic_defect:
        jind = np.full(PROFILE_SCAN, np.inf)
        for k, per_point in enumerate(cached):
            for m, defect, sv in per_point:
                idx = max(0, d - 1 - generic_defect[m])
                jind[k] = min(jind[k], float(sv[idx]))

        def jordan_ind(th: float) -> float:
            mat = _pencil_matrix(c1, c2, th)
            v = np.linalg.eigvals(mat)
            centers, mults = _cluster_eigs(v, cluster_tol)
            best = np.inf
            for lam, m in zip(centers, mults):
                if m < 2 or m not in generic_defect:
                    continue
                sv = np.linalg.svd(mat - lam * np.eye(d), compute_uv=False)
                idx = max(0, d - 1 - generic_defect[m])
                best = min(best, float(sv[idx]))
            return best if np.isfinite(best) else scale

        finite = np.where(np.isfinite(jind), jind, scale)
        for i in _local_minima(finite, 0.4 * scale):
            theta = _argmin_zoom(jordan_ind, thetas[i], h, levels=6) % np.pi
            if jordan_ind(theta) < 100 * rank_tol:
                candidates.append(theta)

    # Cluster candidate angles; distinct special directions sit far apart.
    candidates.sort()
    clusters: list[list[float]] = []
    for theta in candidates:
        if clusters and min(abs(theta - clusters[-1][-1]),
                            np.pi - abs(theta - clusters[-1][-1])) < 2e-3:
            clusters[-1].append(theta)
        elif clusters and min(abs(theta - clusters[0][0]),
                              np.pi - abs(theta - clusters[0][0])) < 2e-3:
            clusters[0].append(theta)
        else:
            clusters.append([theta])

    def full_collision_gap(th: float) -> float:
        mat = _pencil_matrix(c1, c2, th)
        coeffs = char_coeffs(mat[None, ...])[0]
        mu = -coeffs[0] / d
        beta = char_coeffs((mat - mu * np.eye(d))[None, ...])[0]
        return float(np.max(np.abs(beta[1:])))

    probe = np.linspace(0.0, np.pi, 257)
    fscale = float(np.max([full_collision_gap(th) for th in probe]))
    ascale = float(np.max(np.abs(char_coeffs(mats))))

    records: list[tuple[float, SpecialDirection]] = []
    for group in clusters:
        center = float(np.median(group))
        record = None
        if fscale > 1e-6 * scale:
            theta_f = _argmin_zoom(full_collision_gap, center, 2e-3)
            if full_collision_gap(theta_f) <= 1e-7 * (1.0 + fscale):
                mat = _pencil_matrix(c1, c2, theta_f)
                coeffs = char_coeffs(mat[None, ...])[0]
                mu = -coeffs[0] / d
                code = ((d, _power_defects(mat - mu * np.eye(d), d, rank_tol)),)
                if float(np.max(np.abs(coeffs))) <= 1e-7 * (1.0 + ascale):
                    canon = np.zeros(d)
                else:
                    canon = canonicalize_coeffs(coeffs[None, :], zero_tol)[0]
                record = SpecialDirection(theta_f % np.pi, code, canon)
        if record is None:
            def specialness(th: float) -> float:
                best = np.inf
                if persistent < gaps.shape[1]:
                    v = np.linalg.eigvals(_pencil_matrix(c1, c2, th))
                    g = np.sort(np.abs(v[iu] - v[ju]))
                    best = min(best, float(g[persistent]))
                if generic_defect:
                    best = min(best, jordan_ind(th))
                return best

            theta = _argmin_zoom(specialness, center, 2e-3) % np.pi
            mat = _pencil_matrix(c1, c2, theta)
            code = _structure_code(mat, cluster_tol, rank_tol)
            canon = canonicalize_coeffs(char_coeffs(mat[None, ...]), zero_tol)[0]
            record = SpecialDirection(theta, code, canon)
        if record.code == generic_code:
            continue
        if any(min(abs(record.theta - t), np.pi - abs(record.theta - t)) < 1e-4
               for t, _ in records):
            continue
        records.append((record.theta, record))
    return [rec for _, rec in sorted(records, key=lambda pair: pair[0])]


_PROFILE_CACHE: dict[tuple, PencilProfile] = {}


def pencil_profile(params: DilationParams) -> PencilProfile:
    """Profile of the normalized W-action pencil of the given parameters."""
    norm, _ = normalize(params)
    key = norm.key()
    cached = _PROFILE_CACHE.get(key)
    if cached is not None:
        return cached

    c1 = c_matrix(norm, 1)
    c2 = c_matrix(norm, 2)
    scale = 1.0 + float(np.linalg.norm(c1) + np.linalg.norm(c2))
    cluster_tol = 1e-5 * scale
    rank_tol = 1e-5 * scale
    zero_tol = 1e-8 * scale

    sample_thetas = np.pi * (np.arange(PROFILE_SAMPLES) + _SAMPLE_OFFSET) / PROFILE_SAMPLES
    dense_thetas = np.linspace(0.0, np.pi, PROFILE_DENSE, endpoint=False)

    def coeffs_at(thetas):
        mats = (np.cos(thetas)[..., None, None] * c1 + np.sin(thetas)[..., None, None] * c2)
        return canonicalize_coeffs(char_coeffs(mats), zero_tol)

    sample_coeffs = coeffs_at(sample_thetas)
    dense_coeffs = coeffs_at(dense_thetas)

    # Generic structure code = the most common one over the scan grid.
    scan_thetas = np.linspace(0.0, np.pi, 97, endpoint=False) + 0.003
    codes = [_structure_code(_pencil_matrix(c1, c2, th), cluster_tol, rank_tol)
             for th in scan_thetas]
    generic_code = max(set(codes), key=codes.count)

    specials = _find_special_records(c1, c2, scale, generic_code, zero_tol,
                                     cluster_tol, rank_tol)

    p1 = int(round(norm.p[0]))
    kernel = None
    if p1 == 1:
        mat = _pencil_matrix(c1, c2, np.pi / 2)
        dense_raw = char_coeffs(
            np.cos(dense_thetas)[:, None, None] * c1
            + np.sin(dense_thetas)[:, None, None] * c2)
        ascale = float(np.max(np.abs(dense_raw)))
        coeffs = char_coeffs(mat[None, ...])[0]
        if float(np.max(np.abs(coeffs))) <= 1e-7 * (1.0 + ascale):
            canon = np.zeros(coeffs.shape)
        else:
            canon = canonicalize_coeffs(coeffs[None, :], zero_tol)[0]
        kernel = SpecialDirection(
            float(np.pi / 2),
            _structure_code(mat, cluster_tol, rank_tol),
            canon,
        )

    profile = PencilProfile(
        n=norm.n, p1=p1, scale=scale, c1=c1, c2=c2,
        sample_thetas=sample_thetas, sample_coeffs=sample_coeffs,
        dense_thetas=dense_thetas, dense_coeffs=dense_coeffs,
        generic_code=generic_code, specials=tuple(specials), kernel=kernel,
    )
    _PROFILE_CACHE[key] = profile
    return profile


def _refine_matches(profile: PencilProfile, targets: np.ndarray,
                    starts: np.ndarray) -> np.ndarray:
    """Minimize coeff_distance(target, profile(theta)) near each start angle."""
    centers = starts.copy()
    width = np.pi / PROFILE_DENSE
    best = np.full(len(starts), np.inf)
    for _ in range(7):
        offsets = np.linspace(-1.0, 1.0, 17)
        grid = centers[:, None] + width * offsets[None, :]
        coeffs = profile.coeffs_at(grid.ravel()).reshape(len(starts), 17, -1)
        dists = coeff_distance(targets[:, None, :], coeffs)
        idx = np.argmin(dists, axis=1)
        centers = grid[np.arange(len(starts)), idx]
        best = dists[np.arange(len(starts)), idx]
        width /= 8.0
    return best


def _directed_profile_match(a: PencilProfile, b: PencilProfile,
                            tol: float) -> tuple[bool, float]:
    """Whether every sampled direction of a has a matching direction in b."""
    worst = 0.0
    for i in range(len(a.sample_thetas)):
        target = a.sample_coeffs[i]
        dists = coeff_distance(target, b.dense_coeffs)
        order = np.argsort(dists)
        # Refine every local minimum among the best candidates.
        starts = []
        for k in order[:32]:
            if dists[k] <= dists[(k - 1) % len(dists)] and dists[k] <= dists[(k + 1) % len(dists)]:
                starts.append(b.dense_thetas[k])
            if len(starts) >= 8:
                break
        if not starts:
            starts = [b.dense_thetas[order[0]]]
        refined = _refine_matches(b, np.tile(target, (len(starts), 1)), np.asarray(starts))
        di = float(np.min(refined))
        worst = max(worst, di)
        if di > tol:
            return False, worst
    return True, worst


def _specials_match(a: PencilProfile, b: PencilProfile, tol: float) -> bool:
    if len(a.specials) != len(b.specials):
        return False
    groups_a: dict[tuple, list[SpecialDirection]] = {}
    groups_b: dict[tuple, list[SpecialDirection]] = {}
    for s in a.specials:
        groups_a.setdefault(s.code, []).append(s)
    for s in b.specials:
        groups_b.setdefault(s.code, []).append(s)
    if set(groups_a) != set(groups_b):
        return False
    for code, items_a in groups_a.items():
        items_b = groups_b[code]
        if len(items_a) != len(items_b):
            return False
        dist = np.array([[float(coeff_distance(x.coeffs, y.coeffs[None, :])[0])
                          for y in items_b] for x in items_a])
        ok = any(all(dist[i, perm[i]] <= tol for i in range(len(items_a)))
                 for perm in itertools.permutations(range(len(items_b))))
        if not ok:
            return False
    return True


def profiles_equivalent(a: PencilProfile, b: PencilProfile,
                        tol: float = PROFILE_MATCH_TOL) -> bool:
    """Match two profiles up to direction re-parametrization and scale."""
    if a.generic_code != b.generic_code:
        return False
    if not _specials_match(a, b, tol):
        return False
    if (a.kernel is None) != (b.kernel is None):
        return False
    if a.kernel is not None and b.kernel is not None:
        if a.kernel.code != b.kernel.code:
            return False
        if float(coeff_distance(a.kernel.coeffs, b.kernel.coeffs[None, :])[0]) > tol:
            return False
    ok_ab, _ = _directed_profile_match(a, b, tol)
    if not ok_ab:
        return False
    ok_ba, _ = _directed_profile_match(b, a, tol)
    return ok_ba


# -- invariant vector --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class InvariantVector:
    n: int
    p1: int
    center_dim: int
    nilradical_dim: int
    is_nilpotent_algebra: bool
    case_id: int
    derived_series_dims: tuple
    lower_central_dims: tuple
    pencil_profile: PencilProfile

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "p1": self.p1,
            "center_dim": self.center_dim,
            "nilradical_dim": self.nilradical_dim,
            "is_nilpotent_algebra": self.is_nilpotent_algebra,
            "case_id": self.case_id,
            "derived_series_dims": list(self.derived_series_dims),
            "lower_central_dims": list(self.lower_central_dims),
            "pencil_profile": self.pencil_profile.as_dict(),
        }


_INVARIANT_CACHE: dict[tuple, InvariantVector] = {}


def invariant_vector(params: DilationParams) -> InvariantVector:
    """All implemented isomorphism invariants of the normalized algebra."""
    require_m1(params)
    norm, _ = normalize(params)
    key = norm.key()
    cached = _INVARIANT_CACHE.get(key)
    if cached is not None:
        return cached
    vec = InvariantVector(
        n=norm.n,
        p1=int(round(norm.p[0])),
        center_dim=center_dim(norm),
        nilradical_dim=nilradical_dim(norm),
        is_nilpotent_algebra=is_nilpotent_algebra(norm),
        case_id=case_id(norm),
        derived_series_dims=derived_series_dims(norm),
        lower_central_dims=lower_central_dims(norm),
        pencil_profile=pencil_profile(norm),
    )
    _INVARIANT_CACHE[key] = vec
    return vec


def refute_isomorphism(pa: DilationParams, pb: DilationParams) -> str | None:
    """Name of an invariant separating the two algebras, or None if inconclusive."""
    if pa.n != pb.n:
        return "n"
    va = invariant_vector(pa)
    vb = invariant_vector(pb)
    for name in ("p1", "center_dim", "case_id", "nilradical_dim",
                 "is_nilpotent_algebra", "derived_series_dims", "lower_central_dims"):
        if getattr(va, name) != getattr(vb, name):
            return name
    if not profiles_equivalent(va.pencil_profile, vb.pencil_profile):
        return "pencil_profile"
    return None


# -- certificates --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Certificate:
    """Claimed isomorphism data: generator basis change A and symplectic S."""

    a: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        s = np.asarray(self.s, dtype=float)
        if a.shape != (2, 2):
            raise CertificateError("A must be 2x2")
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2:
            raise CertificateError("S must be square of even size")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "s", s)

    def to_dict(self) -> dict:
        return {"A": self.a.tolist(), "S": self.s.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "Certificate":
        try:
            return cls(a=data["A"], s=data["S"])
        except KeyError as exc:
            raise CertificateError(f"missing field {exc} in certificate") from exc


def verify_certificate(pa: DilationParams, pb: DilationParams, cert: Certificate,
                       tol: float = 1e-8) -> tuple[bool, dict]:
    """Check the conjugacy relations the certificate claims.

    With the second algebra's generators replaced by the A-combinations, the
    p-pair must equal the first algebra's and S must conjugate each W-action
    matrix onto its counterpart.  Returns (ok, defect report).
    """
    if abs(float(np.linalg.det(cert.a))) < 1e-12:
        raise CertificateError("certificate basis change is singular")
    if cert.s.shape != (2 * pa.n, 2 * pa.n):
        raise CertificateError("certificate S has the wrong size")
    if not is_symplectic(cert.s):
        raise CertificateError("certificate S is not symplectic")
    if pa.n != pb.n:
        raise CertificateError("parameter sets have different dimensions")

    j = symplectic_matrix(pa.n)
    sympl_defect = float(np.linalg.norm(cert.s.T @ j @ cert.s - j))
    p_new = cert.a @ pb.p
    c_new = [cert.a[k, 0] * c_matrix(pb, 1) + cert.a[k, 1] * c_matrix(pb, 2)
             for k in range(2)]
    s_inv = np.linalg.inv(cert.s)
    report: dict = {"sympl_defect": sympl_defect,
                    "p_defect": float(np.max(np.abs(p_new - pa.p)))}
    ok = report["p_defect"] <= tol * (1.0 + float(np.max(np.abs(pa.p))))
    for k in (1, 2):
        target = cert.s @ c_matrix(pa, k) @ s_inv
        scale = 1.0 + float(np.linalg.norm(target))
        defect = float(np.linalg.norm(c_new[k - 1] - target))
        report[f"c{k}_defect"] = defect
        ok = ok and defect <= tol * scale
    report["ok"] = ok
    return ok, report


def induced_map(pa: DilationParams, pb: DilationParams, cert: Certificate) -> np.ndarray:
    """Coordinate matrix of the isomorphism a valid certificate induces."""
    n = pa.n
    dim = 2 * n + 3
    out = np.zeros((dim, dim))
    out[:2, :2] = cert.a.T
    out[2:dim - 1, 2:dim - 1] = cert.s
    out[dim - 1, dim - 1] = 1.0
    return out


def search_certificate_n1(pa: DilationParams, pb: DilationParams) -> Certificate | None:
    """Best-effort certificate search for n = 1 (heuristic, not a decision).

    The W-action matrices are diagonal at n = 1, so a symplectic conjugation
    can only fix or swap the two diagonal entries; both options reduce to a
    linear solve for the basis change.
    """
    if pa.n != 1 or pb.n != 1:
        raise ValueError("certificate search is only implemented for n = 1")
    j = symplectic_matrix(1)
    for s in (np.eye(2), j):
        rows = []
        rhs = []
        # Unknowns (a11, a12, a21, a22): p and diagonal matching equations.
        c_a = [np.diag(s @ c_matrix(pa, k) @ np.linalg.inv(s)) for k in (1, 2)]
        c_b = [np.diag(c_matrix(pb, k)) for k in (1, 2)]
        for k in range(2):
            row_p = np.zeros(4)
            row_p[2 * k] = pb.p[0]
            row_p[2 * k + 1] = pb.p[1]
            rows.append(row_p)
            rhs.append(pa.p[k])
            for entry in range(2):
                row = np.zeros(4)
                row[2 * k] = c_b[0][entry]
                row[2 * k + 1] = c_b[1][entry]
                rows.append(row)
                rhs.append(c_a[k][entry])
        sol, *_ = np.linalg.lstsq(np.asarray(rows), np.asarray(rhs), rcond=None)
        a = sol.reshape(2, 2)
        if abs(np.linalg.det(a)) < 1e-10:
            continue
        cert = Certificate(a=a, s=s)
        ok, _ = verify_certificate(pa, pb, cert)
        if ok:
            return cert
    return None


# -- the catalog of lowest-dimensional classes ---------------------------------------

DEFAULT_CHOICES = {
    "b": (0.6, 0.9),
    "d": (0.0, 0.5, 1.0),
    "a": (0.5, 1.0),
    "c": (0.0, 1.0),
}


def _entry(label: str, n: int, p, b1, b2) -> tuple[str, DilationParams]:
    return label, DilationParams(n=n, p=np.asarray(p, dtype=float), b1=b1, b2=b2)


def table1_catalog(n: int, choices: dict | None = None) -> list[tuple[str, DilationParams]]:
    """Catalog of representatives of the lowest-dimensional classes (n = 1, 2)."""
    opts = dict(DEFAULT_CHOICES)
    if choices:
        opts.update({k: tuple(v) for k, v in choices.items()})

    for b in opts["b"]:
        if not b > 0:
            raise ValueError(f"parameter b={b} out of range (needs b > 0)")
    for d in opts["d"]:
        if not 0 <= d <= 1:
            raise ValueError(f"parameter d={d} out of range (needs 0 <= d <= 1)")
    for a in opts["a"]:
        if not a >= 0.5:
            raise ValueError(f"parameter a={a} out of range (needs a >= 1/2)")
    for c in opts["c"]:
        if not c >= 0:
            raise ValueError(f"parameter c={c} out of range (needs c >= 0)")

    if n == 1:
        return [_entry("n=1,p=1", 1, (1.0, 0.0), [[0.5]], [[1.0]])]
    if n != 2:
        raise ValueError("the catalog covers n = 1 and n = 2")

    entries = [
        _entry("n=2,p=0,row1", 2, (0.0, 0.0), [[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 1.0]]),
        _entry("n=2,p=0,row2", 2, (0.0, 0.0), np.eye(2), [[0.0, 1.0], [0.0, 0.0]]),
        _entry("n=2,p=0,row3", 2, (0.0, 0.0), np.eye(2), [[0.0, 1.0], [-1.0, 0.0]]),
    ]
    for b in opts["b"]:
        if not (b > 0.5 or b == 0.5):
            raise ValueError(f"parameter b={b} out of range for the diagonal row")
        for d in opts["d"]:
            entries.append(_entry(f"n=2,p=1,row1[b={b},d={d}]", 2, (1.0, 0.0),
                                  [[0.5, 0.0], [0.0, b]], [[1.0, 0.0], [0.0, d]]))
    for d in opts["d"]:
        entries.append(_entry(f"n=2,p=1,row2[d={d}]", 2, (1.0, 0.0),
                              [[0.5, 1.0], [0.0, 0.5]], [[1.0, d], [0.0, 1.0]]))
    entries.append(_entry("n=2,p=1,row3", 2, (1.0, 0.0),
                          [[0.5, 0.0], [0.0, 0.5]], [[1.0, 1.0], [0.0, 1.0]]))
    for a in opts["a"]:
        entries.append(_entry(f"n=2,p=1,row4[a={a}]", 2, (1.0, 0.0),
                              [[a, 0.0], [0.0, a]], [[0.0, 1.0], [0.0, 0.0]]))
    for a in opts["a"]:
        for c in opts["c"]:
            entries.append(_entry(f"n=2,p=1,row5[a={a},c={c}]", 2, (1.0, 0.0),
                                  [[a, 0.0], [0.0, a]], [[c, 1.0], [-1.0, c]]))
    for b in opts["b"]:
        entries.append(_entry(f"n=2,p=1,row6[b={b}]", 2, (1.0, 0.0),
                              [[0.5, b], [-b, 0.5]], np.eye(2)))
    return entries


@dataclass(frozen=True)
class Table1Report:
    labels: tuple
    params: tuple
    verdicts: tuple
    witnesses: tuple

    @property
    def all_separated(self) -> bool:
        k = len(self.labels)
        return all(self.verdicts[i][j] == "refuted"
                   for i in range(k) for j in range(k) if i != j)

    def as_dict(self) -> dict:
        return {
            "rows": [{"label": lab, "params": par.to_dict()}
                     for lab, par in zip(self.labels, self.params)],
            "verdicts": [list(row) for row in self.verdicts],
            "witnesses": [list(row) for row in self.witnesses],
            "all_separated": self.all_separated,
        }


def table1_report(n: int, choices: dict | None = None) -> Table1Report:
    """Pairwise separation report over the catalog; diagonal is inconclusive."""
    entries = table1_catalog(n, choices)
    labels = tuple(lab for lab, _ in entries)
    params = tuple(par for _, par in entries)
    k = len(entries)
    verdicts = [["inconclusive"] * k for _ in range(k)]
    witnesses = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            witness = refute_isomorphism(params[i], params[j])
            if witness is not None:
                verdicts[i][j] = verdicts[j][i] = "refuted"
                witnesses[i][j] = witnesses[j][i] = witness
    return Table1Report(labels, params, tuple(map(tuple, verdicts)),
                        tuple(map(tuple, witnesses)))

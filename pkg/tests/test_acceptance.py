"""Acceptance suite: one test per criterion, each at its stated tolerance.

Run with `pytest -s tests/test_acceptance.py` to see one PASS line per
criterion.  The catalog entries use the default parameter samples.
"""

import numpy as np
import pytest

from heisext.classify import table1_catalog, table1_report
from heisext.extension import d_of_t, g_mul, g_to_matrix
from heisext.heisenberg import symplectic_matrix
from heisext.liealgebra import (
    basis,
    bracket,
    case_id,
    center_dim,
    heisenberg_automorphism,
    is_nilpotent_algebra,
    jacobi_defect,
    lie_to_matrix,
    lower_central_dims,
    nilradical_dim,
    normalize,
    vh_bracket_defect,
)
from heisext.matrices import commutator
from heisext.reps import (
    QuadConfig,
    SampleCheckConfig,
    a_matrix,
    affine_embed,
    check_homomorphism,
    check_intertwining,
    check_q_norm,
    check_unitarity,
    chirp,
    left_dilation,
    m_matrix,
    metaplectic_op,
    sample_points,
    support_violations,
    sympl_embed,
)
from heisext.sampling import (
    random_anti_symplectic,
    random_group_element,
    random_probe,
    random_symplectic,
)

SEED = 20260808


def rel_err(got, want):
    return float(np.max(np.abs(got - want) / (1.0 + np.abs(want))))


@pytest.fixture(scope="module")
def catalog():
    return table1_catalog(1) + table1_catalog(2)


def report(line):
    print(f"\n{line}")


def test_criterion_01_group_law_matches_matrix_form(catalog):
    # Quadruple product vs matrix product, 1000 random pairs per entry, <= 1e-10.
    worst = 0.0
    for label, params in catalog:
        rng = np.random.default_rng(SEED)
        for _ in range(1000):
            a = random_group_element(params, rng)
            b = random_group_element(params, rng)
            lhs = g_to_matrix(params, g_mul(params, a, b))
            rhs = g_to_matrix(params, a) @ g_to_matrix(params, b)
            worst = max(worst, rel_err(lhs, rhs))
        assert worst <= 1e-10, label
    report(f"PASS criterion 1: group law vs matrix form, max rel err {worst:.3e} <= 1e-10")


def test_criterion_02_dilation_homomorphism(catalog):
    # d(t) d(s) = d(t+s), 100 random draws per entry, <= 1e-9.
    worst = 0.0
    for label, params in catalog:
        rng = np.random.default_rng(SEED + 1)
        for _ in range(100):
            t, s = rng.uniform(-1.5, 1.5, size=(2, 2))
            lhs = d_of_t(params, t) @ d_of_t(params, s)
            rhs = d_of_t(params, t + s)
            worst = max(worst, rel_err(lhs, rhs))
        assert worst <= 1e-9, label
    report(f"PASS criterion 2: dilation one-parameter law, max rel err {worst:.3e} <= 1e-9")


def test_criterion_03_brackets_and_jacobi(catalog):
    # Bracket equals matrix commutator and the Jacobi sum vanishes, <= 1e-12.
    worst_bracket = 0.0
    worst_jacobi = 0.0
    for label, params in catalog:
        els = basis(params)
        for i in range(len(els)):
            for j in range(i + 1, len(els)):
                lhs = lie_to_matrix(params, bracket(params, els[i], els[j]))
                rhs = commutator(lie_to_matrix(params, els[i]), lie_to_matrix(params, els[j]))
                worst_bracket = max(worst_bracket, float(np.max(np.abs(lhs - rhs))))
        worst_jacobi = max(worst_jacobi, jacobi_defect(params))
        assert worst_bracket <= 1e-12 and worst_jacobi <= 1e-12, label
    report(f"PASS criterion 3: bracket vs commutator {worst_bracket:.3e}, "
           f"Jacobi {worst_jacobi:.3e} <= 1e-12")


def test_criterion_04_heisenberg_automorphisms():
    # 100 random (lam, u, S) with S^T J S = +-J preserve brackets to 1e-12;
    # the negative sign scales the center by exactly -lam^2.
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for k in range(100):
        n = 1 + k % 2
        lam = float(rng.uniform(0.2, 2.5))
        u = rng.uniform(-2, 2, 2 * n)
        sign = 1 if k % 4 < 2 else -1
        s = random_symplectic(n, rng) if sign == 1 else random_anti_symplectic(n, rng)
        phi = heisenberg_automorphism(lam, u, s, sign)
        worst = max(worst, vh_bracket_defect(n, phi))
        assert phi[2 * n, 2 * n] == sign * lam * lam
    assert worst <= 1e-12
    report(f"PASS criterion 4: automorphism bracket defect {worst:.3e} <= 1e-12, "
           "center scaling exact")


def test_criterion_05_center_dimensions(catalog):
    # Trivial center iff normalized p1 = 1, one-dimensional center iff p1 = 0.
    for label, params in catalog:
        norm, _ = normalize(params)
        expected = 0 if round(norm.p[0]) == 1 else 1
        assert center_dim(params) == expected, label
    report("PASS criterion 5: center dimensions match the normalized p1 exactly")


def test_criterion_06_case_ids_and_nilradical():
    # Constructed exemplars of every case reachable at n <= 2 (a commuting
    # nilpotent pencil needs n >= 3, so case 5 is unreachable here); the
    # lower-central-series oracle agrees with the case analysis.
    from heisext.extension import DilationParams

    exemplars = [
        (DilationParams(n=1, p=(1.0, 0.0), b1=[[0.5]], b2=[[1.0]]), 1, 3),
        (DilationParams(n=2, p=(1.0, 0.0), b1=np.eye(2),
                        b2=[[0.0, 1.0], [0.0, 0.0]]), 2, 6),
        (DilationParams(n=2, p=(0.0, 0.0), b1=np.diag([1.0, 0.0]),
                        b2=np.diag([0.0, 1.0])), 3, 5),
        (DilationParams(n=2, p=(0.0, 0.0), b1=np.eye(2),
                        b2=[[0.0, 1.0], [0.0, 0.0]]), 4, 6),
    ]
    for params, case, dim in exemplars:
        assert case_id(params) == case
        assert nilradical_dim(params) == dim
        assert dim == 2 * params.n + (1 if case in (1, 3) else 2)
        assert not is_nilpotent_algebra(params)
        assert lower_central_dims(params)[-1] > 0
    report("PASS criterion 6: case ids and nilradical dimensions exact; "
           "lower-central oracle agrees")


def test_criterion_07_catalog_separation():
    # Every distinct pair of catalog entries is refuted; 0 inconclusive off-diagonal.
    for n in (1, 2):
        rep = table1_report(n)
        k = len(rep.labels)
        bad = [(rep.labels[i], rep.labels[j])
               for i in range(k) for j in range(k)
               if i != j and rep.verdicts[i][j] != "refuted"]
        assert not bad, f"inconclusive pairs at n={n}: {bad}"
    report("PASS criterion 7: all distinct catalog entries pairwise refuted (n=1, 2)")


def test_criterion_08_embeddings(catalog):
    # Symplectic image satisfies k^T J k = J and both embeddings are
    # multiplicative, 500 random pairs per entry, <= 1e-10.
    worst_sympl = 0.0
    worst_mult = 0.0
    for label, params in catalog:
        rng = np.random.default_rng(SEED + 3)
        j = symplectic_matrix(params.n + 1)
        for _ in range(500):
            a = random_group_element(params, rng)
            b = random_group_element(params, rng)
            k = sympl_embed(params, a)
            worst_sympl = max(worst_sympl, float(np.max(np.abs(k.T @ j @ k - j))))
            ab = g_mul(params, a, b)
            for embed in (sympl_embed, affine_embed):
                lhs = embed(params, a) @ embed(params, b)
                worst_mult = max(worst_mult, rel_err(lhs, embed(params, ab)))
        assert worst_sympl <= 1e-10 and worst_mult <= 1e-10, label
    report(f"PASS criterion 8: symplectic defect {worst_sympl:.3e}, "
           f"multiplicativity {worst_mult:.3e} <= 1e-10")


@pytest.fixture(scope="module")
def rep_sampling(catalog):
    # Shared sampling for criteria 9, 10, 12: 200 points, 5 probes, 50 pairs.
    data = {}
    for label, params in catalog:
        rng = np.random.default_rng(SEED + 4)
        n = params.n
        pts = sample_points(SampleCheckConfig(count=200, seed=SEED + 5), n + 1)
        pairs = [(random_group_element(params, rng), random_group_element(params, rng))
                 for _ in range(50)]
        probes = {tag: [random_probe(n, rng, tag) for _ in range(5)]
                  for tag in ("O+", "U+", "U-")}
        data[label] = (params, pts, pairs, probes)
    return data


def test_criterion_09_representation_homomorphism(rep_sampling):
    # Pointwise homomorphism defect <= 1e-9 for both representations over
    # 200 points x 5 probes x 50 pairs per entry; chirp-dilation
    # factorization of the position-side operator <= 1e-10.
    worst_hom = 0.0
    worst_factor = 0.0
    for label, (params, pts, pairs, probes) in rep_sampling.items():
        for g1, g2 in pairs:
            for fo, fu in zip(probes["O+"], probes["U+"]):
                worst_hom = max(worst_hom,
                                check_homomorphism(params, "wavelet", g1, g2, fo, pts),
                                check_homomorphism(params, "metaplectic", g1, g2, fu, pts))
        for g1, _ in pairs[:10]:
            for fu in probes["U+"]:
                mu = metaplectic_op(params, g1)(fu)
                factored = chirp(m_matrix(g1.z, g1.x))(
                    left_dilation(a_matrix(params, g1.t, g1.y))(fu))
                worst_factor = max(worst_factor, float(np.max(np.abs(
                    mu.evaluate(pts) - factored.evaluate(pts)))))
        assert worst_hom <= 1e-9 and worst_factor <= 1e-10, label
    report(f"PASS criterion 9: homomorphism defect {worst_hom:.3e} <= 1e-9, "
           f"factorization {worst_factor:.3e} <= 1e-10")


def test_criterion_10_intertwining(rep_sampling):
    # mu_sign(g) = Q_sign pi^_+(g) Q_sign^{-1} pointwise <= 1e-9 over the
    # same sampling, both signs.
    worst = 0.0
    for label, (params, _, pairs, probes) in rep_sampling.items():
        cfg = SampleCheckConfig(count=200, seed=SEED + 6)
        for g1, _ in pairs:
            for fu, fm in zip(probes["U+"], probes["U-"]):
                worst = max(worst,
                            check_intertwining(params, g1, 1, fu, cfg),
                            check_intertwining(params, g1, -1, fm, cfg))
        assert worst <= 1e-9, label
    report(f"PASS criterion 10: intertwining defect {worst:.3e} <= 1e-9")


def test_criterion_11_unitarity(catalog):
    # Quadrature norm preservation <= 1e-4 relative for both representations
    # and for the weighted square-law compositions.
    worst = 0.0
    quad = QuadConfig()
    for label, params in catalog:
        rng = np.random.default_rng(SEED + 7)
        g = random_group_element(params, rng)
        worst = max(worst,
                    check_unitarity(params, "wavelet", g, random_probe(params.n, rng, "O+"), quad),
                    check_unitarity(params, "metaplectic", g, random_probe(params.n, rng), quad))
        assert worst <= 1e-4, label
    rng = np.random.default_rng(SEED + 8)
    for n in (1, 2):
        for sign in (1, -1):
            worst = max(worst, check_q_norm(n, sign, random_probe(n, rng, "O+"), quad))
    assert worst <= 1e-4
    report(f"PASS criterion 11: norm preservation, worst rel err {worst:.3e} <= 1e-4")


def test_criterion_12_support_invariance(rep_sampling):
    # The half-space walls are never crossed by the transformed arguments.
    violations = 0
    for label, (params, pts, pairs, _) in rep_sampling.items():
        for g1, g2 in pairs:
            violations += support_violations(params, "wavelet", g1, pts)
            violations += support_violations(params, "metaplectic", g2, pts)
    assert violations == 0
    report("PASS criterion 12: 0 support violations across all sampled evaluations")

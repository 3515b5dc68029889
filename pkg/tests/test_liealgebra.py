import numpy as np
import pytest

from heisext.errors import CertificateError, InvalidParamsError, MapPreconditionError
from heisext.extension import DilationParams
from heisext.liealgebra import (
    LieElement,
    basis,
    bracket,
    bracket_defect,
    build_isomorphism,
    c_matrix,
    case_id,
    center_dim,
    decompose_heisenberg_automorphism,
    derived_series_dims,
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
from heisext.sampling import random_anti_symplectic, random_commuting_params, random_symplectic


def params_n1():
    return DilationParams(n=1, p=(1.0, 0.0), b1=[[0.5]], b2=[[1.0]])


def params_n2_p0():
    return DilationParams(n=2, p=(0.0, 0.0), b1=np.diag([1.0, 0.0]), b2=np.diag([0.0, 1.0]))


def random_element(n, rng):
    return LieElement(rng.uniform(-2, 2, 2), rng.uniform(-2, 2, n),
                      rng.uniform(-2, 2, n), rng.uniform(-2, 2))


class TestBracket:
    def test_self_bracket_vanishes(self):
        rng = np.random.default_rng(1)
        u = random_element(2, rng)
        out = bracket(params_n2_p0(), u, u)
        assert np.max(np.abs(out.coords())) == 0.0

    def test_generator_on_x(self):
        p = params_n1()
        m1 = LieElement([1.0, 0.0], [0.0], [0.0], 0.0)
        x1 = LieElement([0.0, 0.0], [1.0], [0.0], 0.0)
        out = bracket(p, m1, x1)
        assert out.x[0] == 0.5 and np.max(np.abs(out.s)) == 0 and out.z == 0

    def test_y_x_gives_center(self):
        p = DilationParams(n=2, p=(1.0, 0.0), b1=np.eye(2) * 0.5, b2=np.eye(2))
        u = LieElement([0.0, 0.0], [0.0, 0.0], [1.0, 2.0], 0.0)
        v = LieElement([0.0, 0.0], [3.0, 4.0], [0.0, 0.0], 0.0)
        out = bracket(p, u, v)
        # Inner-product oracle: (1,2).(3,4) = 11.
        assert out.z == 11.0
        assert np.max(np.abs(out.x)) == 0 and np.max(np.abs(out.y)) == 0

    def test_matches_matrix_commutator(self):
        rng = np.random.default_rng(3)
        for _ in range(500):
            params = random_commuting_params(rng.integers(1, 4), rng)
            u = random_element(params.n, rng)
            v = random_element(params.n, rng)
            lhs = lie_to_matrix(params, bracket(params, u, v))
            rhs = commutator(lie_to_matrix(params, u), lie_to_matrix(params, v))
            assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_x_span_is_abelian(self):
        p = params_n2_p0()
        rng = np.random.default_rng(4)
        for _ in range(20):
            u = LieElement(np.zeros(2), rng.uniform(-2, 2, 2), np.zeros(2), 0.0)
            v = LieElement(np.zeros(2), rng.uniform(-2, 2, 2), np.zeros(2), 0.0)
            assert np.max(np.abs(bracket(p, u, v).coords())) == 0.0


class TestMatrixRealization:
    def test_center_image(self):
        p = params_n2_p0()
        z = LieElement([0.0, 0.0], [0.0, 0.0], [0.0, 0.0], 2.0)
        m = lie_to_matrix(p, z)
        expected = np.zeros((4, 4))
        expected[0, 3] = 2.0
        assert np.array_equal(m, expected)

    def test_generator_image(self):
        p = params_n1()
        m1 = lie_to_matrix(p, LieElement([1.0, 0.0], [0.0], [0.0], 0.0))
        assert np.array_equal(m1, np.diag([1.0, 0.5, 0.0]))


class TestCMatrix:
    def test_zero_params(self):
        p = DilationParams(n=2, p=(0.0, 1.0), b1=np.zeros((2, 2)), b2=np.eye(2))
        assert np.max(np.abs(c_matrix(p, 1))) == 0.0

    def test_scalar_block(self):
        c1 = c_matrix(params_n1(), 1)
        assert np.array_equal(c1, np.diag([0.5, 0.5]))

    def test_bracket_consistency(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            params = random_commuting_params(rng.integers(1, 4), rng)
            n = params.n
            w = rng.uniform(-2, 2, 2 * n)
            for k in (1, 2):
                mk = LieElement(np.eye(2)[k - 1], np.zeros(n), np.zeros(n), 0.0)
                ww = LieElement(np.zeros(2), w[:n], w[n:], 0.0)
                out = bracket(params, mk, ww)
                expected = c_matrix(params, k) @ w
                assert np.max(np.abs(np.concatenate([out.x, out.y]) - expected)) < 1e-12
                assert abs(out.z) < 1e-12


class TestJacobi:
    def test_catalog_entries(self):
        from heisext.classify import table1_catalog

        for _, params in table1_catalog(1) + table1_catalog(2):
            assert jacobi_defect(params) <= 1e-12

    def test_random_commuting(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            params = random_commuting_params(rng.integers(1, 4), rng)
            assert jacobi_defect(params) <= 1e-12

    def test_noncommuting_breaks_jacobi(self):
        params = DilationParams(n=2, p=(1.0, 0.0),
                                b1=[[0.0, 1.0], [0.0, 0.0]],
                                b2=[[0.0, 0.0], [1.0, 0.0]])
        assert jacobi_defect(params) > 0.1


class TestHeisenbergAutomorphism:
    def test_identity(self):
        phi = heisenberg_automorphism(1.0, np.zeros(2), np.eye(2), 1)
        assert np.array_equal(phi, np.eye(3))

    def test_scaling_acts_on_center(self):
        phi = heisenberg_automorphism(2.0, np.zeros(2), np.eye(2), 1)
        assert phi[2, 2] == 4.0

    def test_negative_sign_center(self):
        rng = np.random.default_rng(9)
        s = random_anti_symplectic(1, rng)
        phi = heisenberg_automorphism(1.5, np.zeros(2), s, -1)
        assert phi[2, 2] == -2.25

    def test_form_matrix_is_automorphism(self):
        from heisext.heisenberg import symplectic_matrix

        phi = heisenberg_automorphism(1.0, np.zeros(4), symplectic_matrix(2), 1)
        assert vh_bracket_defect(2, phi) <= 1e-12

    def test_bracket_preservation_random(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            n = int(rng.integers(1, 4))
            lam = float(rng.uniform(0.2, 3.0))
            u = rng.uniform(-2, 2, 2 * n)
            sign = 1 if rng.uniform() < 0.5 else -1
            s = random_symplectic(n, rng) if sign == 1 else random_anti_symplectic(n, rng)
            phi = heisenberg_automorphism(lam, u, s, sign)
            assert vh_bracket_defect(n, phi) <= 1e-12

    def test_round_trip_decomposition(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            n = int(rng.integers(1, 3))
            lam = float(rng.uniform(0.3, 2.5))
            u = rng.uniform(-2, 2, 2 * n)
            sign = 1 if rng.uniform() < 0.5 else -1
            s = random_symplectic(n, rng) if sign == 1 else random_anti_symplectic(n, rng)
            phi = heisenberg_automorphism(lam, u, s, sign)
            lam2, u2, s2, sign2 = decompose_heisenberg_automorphism(phi)
            assert abs(lam2 - lam) < 1e-10
            assert sign2 == sign
            assert np.max(np.abs(u2 - u)) < 1e-10
            assert np.max(np.abs(s2 - s)) < 1e-10

    def test_bad_s_rejected(self):
        with pytest.raises(MapPreconditionError):
            heisenberg_automorphism(1.0, np.zeros(2), 2.0 * np.eye(2), 1)


class TestStandardIsomorphisms:
    def test_scale_identity(self):
        p = params_n1()
        target, phi = build_isomorphism(p, "scale", alpha_scale=1.0)
        assert np.array_equal(phi, np.eye(5))
        assert np.array_equal(target.p, p.p)

    def test_conjugate_scalar(self):
        p = params_n1()
        target, phi = build_isomorphism(p, "conjugate", v=[[2.0]])
        assert np.array_equal(target.b1, p.b1)
        assert bracket_defect(p, target, phi) <= 1e-12

    def test_symplectic_reproduces_conjugate(self):
        rng = np.random.default_rng(17)
        p = random_commuting_params(2, rng)
        v = np.eye(2) + 0.3 * rng.uniform(-1, 1, (2, 2))
        target, phi_conj = build_isomorphism(p, "conjugate", v=v)
        s = np.zeros((4, 4))
        s[:2, :2] = v
        s[2:, 2:] = np.linalg.inv(v).T
        target2, phi_sym = build_isomorphism(p, "symplectic", s=s, target=target)
        assert np.max(np.abs(phi_conj - phi_sym)) < 1e-12

    def test_basis_change_preserves_brackets(self):
        rng = np.random.default_rng(19)
        for _ in range(25):
            p = random_commuting_params(int(rng.integers(1, 4)), rng)
            a = np.eye(2) + 0.5 * rng.uniform(-1, 1, (2, 2))
            if abs(np.linalg.det(a)) < 0.2:
                continue
            target, phi = build_isomorphism(p, "basis_change", a=a)
            assert bracket_defect(p, target, phi) <= 1e-11

    def test_wrong_certificate_rejected(self):
        p = params_n1()
        target, _ = build_isomorphism(p, "conjugate", v=[[2.0]])
        bad = DilationParams(n=1, p=(1.0, 0.0), b1=[[0.7]], b2=[[1.0]])
        with pytest.raises(CertificateError):
            build_isomorphism(p, "symplectic", s=np.eye(2), target=bad)


class TestNormalize:
    def test_already_normalized(self):
        p = params_n1()
        out, a = normalize(p)
        assert np.array_equal(a, np.eye(2))
        assert np.array_equal(out.p, [1.0, 0.0])

    def test_pivot_second_component(self):
        p = DilationParams(n=1, p=(0.0, 3.0), b1=[[0.5]], b2=[[1.0]])
        out, a = normalize(p)
        assert np.allclose(a, [[0.0, 1.0 / 3.0], [1.0, 0.0]])
        assert np.allclose(a @ p.p, [1.0, 0.0])
        assert np.array_equal(out.p, [1.0, 0.0])
        _, phi = build_isomorphism(p, "basis_change", a=a)
        assert bracket_defect(p, out, phi) <= 1e-12

    def test_general_p(self):
        p = DilationParams(n=1, p=(2.0, 3.0), b1=[[0.5]], b2=[[1.0]])
        out, a = normalize(p)
        assert np.allclose(a @ p.p, [1.0, 0.0], atol=1e-14)
        built, phi = build_isomorphism(p, "basis_change", a=a)
        assert np.allclose(built.b1, out.b1) and np.allclose(built.b2, out.b2)
        assert bracket_defect(p, out, phi) <= 1e-12

    def test_zero_p_unchanged(self):
        p = params_n2_p0()
        out, a = normalize(p)
        assert np.array_equal(a, np.eye(2))
        assert np.array_equal(out.p, [0.0, 0.0])

    def test_center_dim_preserved(self):
        p = DilationParams(n=1, p=(0.0, 3.0), b1=[[0.5]], b2=[[1.0]])
        out, _ = normalize(p)
        assert center_dim(out) == center_dim(normalize(p)[0])

    def test_m1_failure_rejected(self):
        p = DilationParams(n=1, p=(0.0, 0.0), b1=[[1.0]], b2=[[2.0]])
        with pytest.raises(InvalidParamsError):
            normalize(p)


class TestStructuralInvariants:
    def test_center_trivial_when_p1_one(self):
        assert center_dim(params_n1()) == 0

    def test_center_line_when_p_zero(self):
        assert center_dim(params_n2_p0()) == 1

    def test_center_catalog(self):
        from heisext.classify import table1_catalog

        for label, params in table1_catalog(2):
            norm, _ = normalize(params)
            expected = 0 if round(norm.p[0]) == 1 else 1
            assert center_dim(params) == expected, label

    def test_case_and_nilradical_n1(self):
        assert case_id(params_n1()) == 1
        assert nilradical_dim(params_n1()) == 3

    def test_case2_exemplar(self):
        p = DilationParams(n=2, p=(1.0, 0.0), b1=np.eye(2),
                           b2=[[0.0, 1.0], [0.0, 0.0]])
        assert case_id(p) == 2
        assert nilradical_dim(p) == 6

    def test_case3_exemplar(self):
        p = params_n2_p0()
        assert case_id(p) == 3
        assert nilradical_dim(p) == 5

    def test_case4_exemplar(self):
        p = DilationParams(n=2, p=(0.0, 0.0), b1=np.eye(2),
                           b2=[[0.0, 1.0], [0.0, 0.0]])
        assert case_id(p) == 4
        assert nilradical_dim(p) == 6

    def test_case5_exemplar_n3(self):
        b1 = np.zeros((3, 3))
        b1[0, 1] = b1[1, 2] = 1.0
        b2 = np.zeros((3, 3))
        b2[0, 2] = 1.0
        p = DilationParams(n=3, p=(0.0, 0.0), b1=b1, b2=b2)
        assert np.max(np.abs(p.b1 @ p.b2 - p.b2 @ p.b1)) == 0.0
        assert case_id(p) == 5
        assert is_nilpotent_algebra(p)
        assert nilradical_dim(p) == 2 * 3 + 3
        assert lower_central_dims(p)[-1] == 0

    def test_series_dims_n1(self):
        dims = lower_central_dims(params_n1())
        assert dims[0] == 5 and dims[-1] == dims[-2]
        ds = derived_series_dims(params_n1())
        assert ds[0] == 5 and ds[-1] == 0

    def test_not_nilpotent_catalog(self):
        from heisext.classify import table1_catalog

        for label, params in table1_catalog(2):
            assert not is_nilpotent_algebra(params), label

import numpy as np
import pytest

from heisext.errors import InvalidParamsError
from heisext.extension import (
    DilationParams,
    GroupElement,
    alpha,
    d_of_t,
    g_identity,
    g_inverse,
    g_mul,
    g_to_matrix,
    validate_params,
)
from heisext.heisenberg import PolarizedElement, pol_to_matrix
from heisext.matrices import mat_exp
from heisext.sampling import random_group_element


@pytest.fixture
def p1_params():
    return DilationParams(n=1, p=(1.0, 0.0), b1=[[0.5]], b2=[[1.0]])


@pytest.fixture
def n2_params():
    return DilationParams(n=2, p=(1.0, 0.0),
                          b1=[[0.5, 0.0], [0.0, 0.9]], b2=[[1.0, 0.0], [0.0, 0.5]])


class TestValidation:
    def test_catalog_n1_passes(self, p1_params):
        report = validate_params(p1_params)
        assert report.commute and report.m1_ok and report.m2_ok
        assert not report.m2_heuristic

    def test_p_zero_n1_fails_m1(self):
        params = DilationParams(n=1, p=(0.0, 0.0), b1=[[0.7]], b2=[[1.3]])
        assert not validate_params(params).m1_ok

    def test_skew_generator_fails_m2(self):
        # The second generator is itself skew-symmetric; spectrum oracle: +-i.
        params = DilationParams(n=2, p=(0.0, 0.0), b1=np.eye(2),
                                b2=[[0.0, 1.0], [-1.0, 0.0]])
        vals = np.sort_complex(np.linalg.eigvals(np.asarray(params.b2)))
        assert np.allclose(vals, [-1j, 1j])
        report = validate_params(params)
        assert report.commute and report.m1_ok
        assert not report.m2_ok
        assert report.m2_heuristic

    def test_interior_skew_direction_detected(self):
        # B1 - B2 is skew-symmetric even though neither generator is.
        params = DilationParams(n=2, p=(0.0, 0.0),
                                b1=[[0.0, 2.0], [0.0, 0.0]],
                                b2=[[0.0, 1.0], [1.0, 0.0]])
        report = validate_params(params)
        assert not report.m2_ok

    def test_noncommuting_reported(self):
        params = DilationParams(n=2, p=(1.0, 0.0),
                                b1=[[0.0, 1.0], [0.0, 0.0]],
                                b2=[[0.0, 0.0], [1.0, 0.0]])
        assert not validate_params(params).commute


class TestDilations:
    def test_t_zero(self, n2_params):
        assert np.allclose(d_of_t(n2_params, (0.0, 0.0)), np.eye(4))

    def test_scalar_values(self, p1_params):
        got = d_of_t(p1_params, (1.0, 0.0))
        assert np.allclose(got, np.diag([np.e, np.exp(0.5), 1.0]), atol=1e-14)

    def test_homomorphism(self, n2_params):
        rng = np.random.default_rng(2)
        for _ in range(100):
            t, s = rng.uniform(-1.5, 1.5, size=(2, 2))
            lhs = d_of_t(n2_params, t + s)
            rhs = d_of_t(n2_params, t) @ d_of_t(n2_params, s)
            assert np.max(np.abs(lhs - rhs) / (1.0 + np.abs(lhs))) < 1e-9

    def test_equals_generator_exponential(self, n2_params):
        rng = np.random.default_rng(3)
        for _ in range(50):
            t = rng.uniform(-1.5, 1.5, size=2)
            m = t[0] * n2_params.m_generator(1) + t[1] * n2_params.m_generator(2)
            assert np.max(np.abs(d_of_t(n2_params, t) - mat_exp(m))) < 1e-12


class TestAction:
    def test_t_zero_fixes(self, n2_params):
        h = PolarizedElement(np.array([1.0, -2.0]), np.array([0.5, 3.0]), -1.0)
        out = alpha(n2_params, (0.0, 0.0), h)
        assert np.allclose(out.x, h.x) and np.allclose(out.y, h.y) and out.z == h.z

    def test_conjugation_oracle(self, n2_params):
        rng = np.random.default_rng(5)
        for _ in range(200):
            t = rng.uniform(-1.0, 1.0, size=2)
            h = PolarizedElement(rng.uniform(-2, 2, 2), rng.uniform(-2, 2, 2),
                                 rng.uniform(-2, 2))
            d = d_of_t(n2_params, t)
            oracle = d @ pol_to_matrix(h) @ np.linalg.inv(d)
            assert np.max(np.abs(pol_to_matrix(alpha(n2_params, t, h)) - oracle)) < 1e-10

    def test_action_composition(self, n2_params):
        rng = np.random.default_rng(7)
        for _ in range(50):
            t, s = rng.uniform(-1.0, 1.0, size=(2, 2))
            h = PolarizedElement(rng.uniform(-2, 2, 2), rng.uniform(-2, 2, 2),
                                 rng.uniform(-2, 2))
            one = alpha(n2_params, t, alpha(n2_params, s, h))
            two = alpha(n2_params, t + s, h)
            assert np.max(np.abs(one.x - two.x)) < 1e-10
            assert np.max(np.abs(one.y - two.y)) < 1e-10
            assert abs(one.z - two.z) < 1e-10


class TestGroupLaw:
    def test_identity(self, n2_params):
        rng = np.random.default_rng(11)
        g = random_group_element(n2_params, rng)
        out = g_mul(n2_params, g_identity(n2_params), g)
        assert np.allclose(out.t, g.t) and np.allclose(out.x, g.x)
        assert np.allclose(out.y, g.y) and abs(out.z - g.z) < 1e-15

    def test_matrix_oracle_values_n1(self, p1_params):
        a = GroupElement(np.zeros(2), [1.0], [0.0], 0.0)
        b = GroupElement(np.zeros(2), [0.0], [1.0], 0.0)
        ab = g_mul(p1_params, a, b)
        ba = g_mul(p1_params, b, a)
        assert (ab.x[0], ab.y[0], ab.z) == (1.0, 1.0, 0.0)
        assert (ba.x[0], ba.y[0], ba.z) == (1.0, 1.0, 1.0)
        # Same products through the matrix embedding.
        for left, right, quad in ((a, b, ab), (b, a, ba)):
            oracle = g_to_matrix(p1_params, left) @ g_to_matrix(p1_params, right)
            assert np.max(np.abs(g_to_matrix(p1_params, quad) - oracle)) < 1e-12

    def test_matrix_oracle_random(self, n2_params):
        rng = np.random.default_rng(13)
        for _ in range(1000):
            a = random_group_element(n2_params, rng)
            b = random_group_element(n2_params, rng)
            lhs = g_to_matrix(n2_params, g_mul(n2_params, a, b))
            rhs = g_to_matrix(n2_params, a) @ g_to_matrix(n2_params, b)
            assert np.max(np.abs(lhs - rhs) / (1.0 + np.abs(rhs))) < 1e-10

    def test_associativity(self, n2_params):
        rng = np.random.default_rng(17)
        for _ in range(200):
            a, b, c = (random_group_element(n2_params, rng) for _ in range(3))
            left = g_mul(n2_params, g_mul(n2_params, a, b), c)
            right = g_mul(n2_params, a, g_mul(n2_params, b, c))
            for attr in ("t", "x", "y"):
                assert np.max(np.abs(getattr(left, attr) - getattr(right, attr))) < 1e-10
            assert abs(left.z - right.z) < 1e-10 * (1.0 + abs(right.z))


class TestInverse:
    def test_identity_inverse(self, n2_params):
        e = g_identity(n2_params)
        inv = g_inverse(n2_params, e)
        assert np.allclose(inv.t, 0) and inv.z == 0

    def test_t_component_negates(self, n2_params):
        rng = np.random.default_rng(19)
        g = random_group_element(n2_params, rng)
        assert np.allclose(g_inverse(n2_params, g).t, -g.t)

    def test_matrix_inverse_oracle(self, n2_params):
        rng = np.random.default_rng(23)
        for _ in range(200):
            g = random_group_element(n2_params, rng)
            inv = g_inverse(n2_params, g)
            left = g_mul(n2_params, g, inv)
            right = g_mul(n2_params, inv, g)
            for out in (left, right):
                assert np.max(np.abs(out.t)) < 1e-12
                assert np.max(np.abs(out.x)) < 1e-10
                assert np.max(np.abs(out.y)) < 1e-10
                assert abs(out.z) < 1e-10
            oracle = np.linalg.inv(g_to_matrix(n2_params, g))
            assert np.max(np.abs(g_to_matrix(n2_params, inv) - oracle)) < 1e-10


class TestMatrixForm:
    def test_identity_element(self, n2_params):
        assert np.allclose(g_to_matrix(n2_params, g_identity(n2_params)), np.eye(4))

    def test_central_element_n1(self, p1_params):
        g = GroupElement(np.zeros(2), [0.0], [0.0], 1.0)
        expected = np.eye(3)
        expected[0, 2] = 1.0
        assert np.array_equal(g_to_matrix(p1_params, g), expected)

    def test_m1_failure_rejected(self):
        params = DilationParams(n=1, p=(0.0, 0.0), b1=[[1.0]], b2=[[2.0]])
        with pytest.raises(InvalidParamsError):
            g_to_matrix(params, GroupElement(np.zeros(2), [0.0], [0.0], 0.0))

    def test_m2_failure_only_rejected_when_strict(self):
        params = DilationParams(n=2, p=(0.0, 0.0), b1=np.eye(2),
                                b2=[[0.0, 1.0], [-1.0, 0.0]])
        g = GroupElement(np.zeros(2), [1.0, 0.0], [0.0, 0.0], 0.0)
        g_to_matrix(params, g)
        with pytest.raises(InvalidParamsError):
            g_to_matrix(params, g, require_m2=True)


class TestSerialization:
    def test_round_trip(self, n2_params):
        text = n2_params.to_json()
        back = DilationParams.from_json(text)
        assert back.n == n2_params.n
        assert np.array_equal(back.p, n2_params.p)
        assert np.array_equal(back.b1, n2_params.b1)
        assert np.array_equal(back.b2, n2_params.b2)

    def test_missing_field(self):
        with pytest.raises(InvalidParamsError):
            DilationParams.from_dict({"n": 1, "p": [1, 0], "B1": [[1.0]]})

"""
test_operator_core.py - 생성자 모델, 반군, 레졸벤트 테스트
Hille-Phillips 함수 미적분 실험 시스템
"""

import math

import numpy as np
import pytest
from scipy.linalg import svdvals

from src.errors import DivergenceError, DomainError, ParseError, SingularityError
from src.operator_core import (OperatorModel, certify_type, dumps_operator,
                               fractional_resolvent_power, load_operator, operator_norm,
                               parse_operator, resolvent, semigroup_at, spectral_oracle)
from src.symbols import catalog, const, exp_decay


class TestOperatorModel:

    def test_kinds_and_dimensions(self, diag12, jordan12, dense3):
        assert diag12.dim == 2 and jordan12.dim == 2 and dense3.dim == 3
        assert np.allclose(jordan12.matrix, [[1, 1], [0, 1]])

    def test_half_plane_type_is_min_real_eigenvalue(self, diag12, dense3):
        assert diag12.half_plane_type == pytest.approx(1.0)
        assert dense3.half_plane_type == pytest.approx(np.linalg.eigvals(dense3.matrix).real.min())

    def test_shifted_adds_identity(self, diag12):
        op = OperatorModel.shifted(diag12, -0.25)
        assert np.allclose(op.matrix, np.diag([0.75, 1.75]))
        assert op.half_plane_type == pytest.approx(0.75)

    def test_bad_kind_rejected(self):
        with pytest.raises(DomainError):
            OperatorModel('sparse', 2, ())

    def test_dense_must_be_square(self):
        with pytest.raises(DomainError):
            OperatorModel('dense', 2, np.zeros((2, 3)))


class TestSemigroupAt:

    def test_identity_at_zero(self, diag12):
        assert np.allclose(semigroup_at(diag12, 0.0), np.eye(2))

    def test_diagonal_exponential(self, diag12):
        expected = np.diag([math.exp(-0.5), math.exp(-1.0)])
        assert np.allclose(semigroup_at(diag12, 0.5), expected, atol=1e-15)

    def test_jordan_closed_form(self, jordan12):
        expected = math.exp(-1) * np.array([[1, -1], [0, 1]])
        assert np.allclose(semigroup_at(jordan12, 1.0), expected, atol=1e-15)

    @pytest.mark.parametrize('s,t', [(0.1, 0.2), (0.7, 1.3), (2.0, 3.5)])
    def test_semigroup_law(self, operators, s, t):
        for _, op in operators:
            lhs = semigroup_at(op, s + t)
            rhs = semigroup_at(op, s) @ semigroup_at(op, t)
            assert operator_norm(lhs - rhs) <= 1e-10 * (1 + operator_norm(lhs))

    def test_negative_time_rejected(self, diag12):
        with pytest.raises(DomainError):
            semigroup_at(diag12, -1.0)


class TestCertifyType:

    def test_contraction(self, diag12):
        st = certify_type(diag12, 0.0)
        assert st.M == pytest.approx(1.0)
        assert st.t_argmax == pytest.approx(0.0)

    def test_unitary_group(self):
        st = certify_type(OperatorModel.diagonal([1j, -1j]), 0.0, t_max=20.0)
        assert st.M == pytest.approx(1.0)

    def test_jordan_matches_scalar_maximization(self, jordan12):
        ts = np.linspace(0.0, 10.0, 20001)
        oracle = max(math.exp(-t) * svdvals(np.array([[1, -t], [0, 1]]))[0] for t in ts)
        st = certify_type(jordan12, 0.0)
        assert st.M >= 1.0
        assert st.M == pytest.approx(oracle, rel=1e-3)

    def test_too_small_omega_diverges(self, diag12):
        with pytest.raises(DivergenceError):
            certify_type(diag12, -1.5, t_max=40.0)


class TestResolvent:

    def test_diagonal_at_zero(self, diag12):
        assert np.allclose(resolvent(diag12, 0.0), np.diag([-1.0, -0.5]))

    def test_in_spectrum(self, diag12):
        with pytest.raises(SingularityError):
            resolvent(diag12, 1.0)

    def test_jordan_at_zero(self, jordan12):
        assert np.allclose(resolvent(jordan12, 0.0), [[-1.0, 1.0], [0.0, -1.0]])

    def test_resolvent_identity(self, dense3):
        rng = np.random.default_rng(3)
        for _ in range(5):
            z, w = rng.normal(size=2) + 1j * rng.normal(size=2) - 2.0
            lhs = resolvent(dense3, z) - resolvent(dense3, w)
            rhs = (w - z) * resolvent(dense3, z) @ resolvent(dense3, w)
            assert operator_norm(lhs - rhs) <= 1e-10


class TestFractionalResolventPower:

    def test_alpha_one_is_resolvent(self, diag12):
        assert np.allclose(fractional_resolvent_power(diag12, -1.0, 1.0), np.diag([0.5, 1 / 3]), atol=1e-9)

    def test_square_root(self, diag12):
        expected = np.diag([2 ** -0.5, 3 ** -0.5])
        assert np.allclose(fractional_resolvent_power(diag12, -1.0, 0.5), expected, atol=1e-8)

    def test_alpha_zero_rejected(self, diag12):
        with pytest.raises(DomainError):
            fractional_resolvent_power(diag12, -1.0, 0.0)

    def test_power_law(self, jordan12):
        a = fractional_resolvent_power(jordan12, -0.5, 0.3)
        b = fractional_resolvent_power(jordan12, -0.5, 0.45)
        ab = fractional_resolvent_power(jordan12, -0.5, 0.75)
        assert operator_norm(a @ b - ab) <= 1e-7 * (1 + operator_norm(ab))


class TestSpectralOracle:

    def test_diagonal_exp(self, diag12):
        f = catalog()['exp']
        assert np.allclose(spectral_oracle(diag12, f), np.diag([math.exp(-1), math.exp(-2)]))

    def test_jordan_matches_semigroup(self, jordan12):
        assert np.allclose(spectral_oracle(jordan12, exp_decay(1.0)), semigroup_at(jordan12, 1.0), atol=1e-15)

    def test_constant_one(self, diag12):
        assert np.allclose(spectral_oracle(diag12, const(1.0)), np.eye(2))

    def test_dense_matches_semigroup(self, dense3):
        for t in (0.3, 1.0, 2.5):
            gap = operator_norm(spectral_oracle(dense3, exp_decay(t)) - semigroup_at(dense3, t))
            assert gap <= 1e-12


class TestOperatorNorm:

    def test_examples(self):
        assert operator_norm(np.eye(2)) == pytest.approx(1.0)
        assert operator_norm(np.diag([3, -4j])) == pytest.approx(4.0)
        assert operator_norm([[0, 1], [0, 0]]) == pytest.approx(1.0)


class TestTextFormat:

    def test_parse_shifted_jordan(self):
        op = parse_operator("shifted 2\n-0.5,0\njordan 2\n1,0 2\n")
        assert op.kind == 'shifted'
        assert np.allclose(op.matrix, [[0.5, 1.0], [0.0, 0.5]])

    def test_dump_and_load(self, tmp_path, dense3):
        path = tmp_path / 'op.txt'
        path.write_text(dumps_operator(dense3), encoding='utf-8')
        assert np.array_equal(load_operator(path).matrix, dense3.matrix)

    def test_malformed(self):
        with pytest.raises(ParseError):
            parse_operator("dense 2\n1,0 2,0\n3,0\n")
        with pytest.raises(ParseError):
            parse_operator("circulant 2\n1 2\n")

"""
test_calculus.py - f(A) 계산 경로 테스트
Hille-Phillips 함수 미적분 실험 시스템
"""

import math

import numpy as np
import pytest

from src.calculus import (ROUTE_CHECK_TOL, SMOOTHING_CHECK_TOL, apply_derivative, apply_function,
                          apply_measure, apply_smoothed, apply_with_semigroup, approximant,
                          convergence_limit, iterated_derivative_constant)
from src.errors import ConvergenceError, DivergenceError, DomainError, RecognitionError
from src.measures import GammaKernel, WeightedMeasure
from src.operator_core import OperatorModel, resolvent, spectral_oracle
from src.symbols import exp_decay


class TestApplyMeasure:

    def test_point_mass_is_semigroup(self, diag12, dirac1):
        result = apply_measure(diag12, dirac1)
        assert np.allclose(result.matrix, np.diag([math.exp(-1), math.exp(-2)]))
        assert result.route == 'primary'

    def test_exponential_kernel_is_resolvent(self, jordan12):
        result = apply_measure(jordan12, WeightedMeasure.exponential(1.0))
        assert np.allclose(result.matrix, [[0.5, -0.25], [0.0, 0.5]], atol=1e-10)

    def test_gridded_density(self, diag12):
        mu = WeightedMeasure.from_function(lambda t: np.exp(-2 * t), t_max=40.0, step=1e-3)
        result = apply_measure(diag12, mu)
        assert np.allclose(result.matrix, np.diag([1 / 3, 1 / 4]), atol=1e-8)
        assert result.quad_report['grid_nodes'] == 40001

    def test_combined_parts_add(self, dense3):
        mu = WeightedMeasure.build(atoms=((0.5, 2.0),), kernels=(GammaKernel(1.0, 0.0, 1.0, -1.0),))
        expected = 2.0 * spectral_oracle(dense3, exp_decay(0.5, -0.9)) - resolvent(dense3, -1.0)
        assert np.allclose(apply_measure(dense3, mu).matrix, expected, atol=1e-8)

    def test_growing_kernel_diverges(self, diag12):
        mu = WeightedMeasure.build(kernels=(GammaKernel(1.0, 0.0, 1.0, 1.5),), support_low=0.0)
        with pytest.raises(DivergenceError):
            apply_measure(diag12, mu)


class TestApplyFunction:

    def test_primary_route_agrees_with_oracle(self, operators, functions):
        for label, op in operators:
            for name in ('exp', 'resolvent', 'exp_resolvent', 'rational', 'double_pole', 'two_delays'):
                result = apply_function(op, functions[name])
                assert result.route == 'primary', (label, name)
                assert result.quad_report['oracle_gap'] <= ROUTE_CHECK_TOL, (label, name)

    def test_exponential_on_diagonal(self, diag12, functions):
        result = apply_function(diag12, functions['exp'])
        assert np.allclose(result.matrix, np.diag([math.exp(-1), math.exp(-2)]))
        assert result.norm_value == pytest.approx(math.exp(-1))

    def test_forced_regularized_route(self, jordan12, functions):
        result = apply_function(jordan12, functions['resolvent'], route='regularized')
        assert result.route == 'regularized'
        assert result.quad_report['h_route'] == 'laplace'
        assert np.allclose(result.matrix, -resolvent(jordan12, -1.0), atol=1e-9)

    def test_unrecognized_function_uses_regularized_route(self, diag12, functions):
        f = functions['ratio']
        with pytest.raises(RecognitionError):
            apply_function(diag12, f, route='primary')
        result = apply_function(diag12, f)
        assert result.route == 'regularized'
        assert result.quad_report['h_route'] == 'paley-wiener'
        assert result.quad_report['oracle_gap'] <= ROUTE_CHECK_TOL

    def test_regularized_route_agrees_on_every_operator(self, operators, functions):
        for label, op in operators:
            result = apply_function(op, functions['ratio'])
            assert result.quad_report['h_route'] == 'paley-wiener', label
            assert result.quad_report['oracle_gap'] <= ROUTE_CHECK_TOL, label

    def test_oracle_route(self, dense3, functions):
        result = apply_function(dense3, functions['sqrt_resolvent'], route='oracle')
        assert result.route == 'spectral-oracle'
        assert np.allclose(result.matrix, spectral_oracle(dense3, functions['sqrt_resolvent']))

    def test_spectrum_outside_domain(self, functions):
        op = OperatorModel.diagonal([-0.95, 1.0])
        with pytest.raises(DomainError):
            apply_function(op, functions['exp'])

    def test_unknown_route(self, diag12, functions):
        with pytest.raises(DomainError):
            apply_function(diag12, functions['exp'], route='fastest')


class TestSemigroupAndSmoothing:

    def test_with_semigroup(self, diag12, functions):
        result = apply_with_semigroup(diag12, functions['resolvent'], 1.0)
        assert np.allclose(result.matrix, np.diag([math.exp(-1) / 2, math.exp(-2) / 3]))

    def test_negative_tau(self, diag12, functions):
        with pytest.raises(DomainError):
            apply_with_semigroup(diag12, functions['exp'], -0.1)

    @pytest.mark.parametrize('alpha', [0.25, 0.5, 1.0])
    @pytest.mark.parametrize('name, scalar', [
        ('exp', lambda d: math.exp(-d)),
        ('resolvent', lambda d: 1.0 / (d + 1.0)),
        ('exp_resolvent', lambda d: math.exp(-d) / (d + 1.0)),
    ])
    def test_smoothed_closed_form(self, diag12, functions, alpha, name, scalar):
        result = apply_smoothed(diag12, functions[name], -1.0, alpha)
        expected = np.diag([scalar(d) * (d + 1.0) ** -alpha for d in (1.0, 2.0)])
        assert np.allclose(result.matrix, expected, atol=1e-8)
        assert result.quad_report['oracle_gap'] <= SMOOTHING_CHECK_TOL
        assert result.quad_report['passed']

    @pytest.mark.parametrize('alpha', [0.25, 0.5, 1.0])
    def test_smoothed_on_non_normal_operators(self, jordan12, dense3, functions, alpha):
        for op in (jordan12, dense3):
            result = apply_smoothed(op, functions['exp_resolvent'], -1.0, alpha)
            assert result.quad_report['oracle_gap'] <= SMOOTHING_CHECK_TOL

    def test_oracle_disagreement_is_an_error(self, diag12, functions, monkeypatch):
        monkeypatch.setattr('src.calculus.spectral_oracle', lambda op, f: np.zeros((op.dim, op.dim)))
        with pytest.raises(ConvergenceError):
            apply_smoothed(diag12, functions['exp'], -1.0, 0.5)
        result = apply_smoothed(diag12, functions['exp'], -1.0, 0.5, strict=False)
        assert not result.quad_report['passed']

    def test_smoothing_power_must_be_positive(self, diag12, functions):
        with pytest.raises(DomainError):
            apply_smoothed(diag12, functions['exp'], -1.0, 0.0)

    def test_smoothing_point_in_spectrum_half_plane(self, diag12, functions):
        with pytest.raises(DivergenceError):
            apply_smoothed(diag12, functions['exp'], 1.5, 0.5)


class TestDerivative:

    def test_resolvent_on_jordan(self, jordan12, functions):
        result = apply_derivative(jordan12, functions['resolvent'], 1)
        assert np.allclose(result.matrix, [[-0.25, 0.25], [0.0, -0.25]], atol=1e-9)
        assert result.quad_report['moment_gap'] <= 1e-8

    def test_second_derivative_of_semigroup_symbol(self, diag12, functions):
        result = apply_derivative(diag12, functions['exp'], 2)
        assert np.allclose(result.matrix, np.diag([math.exp(-1), math.exp(-2)]))
        assert result.quad_report['moment_gap'] <= 1e-8

    def test_order_zero(self, diag12, functions):
        with pytest.raises(DomainError):
            apply_derivative(diag12, functions['exp'], 0)


class TestConvergence:

    def test_approximant_values(self, functions):
        f = functions['resolvent']
        g = approximant(f, 10.0, 0.1)
        z = 0.3 + 2j
        want = f.evaluate(z + 0.1) * 10.0 / (z + 0.1 + 0.9 + 10.0)
        assert g.evaluate(z) == pytest.approx(want)

    def test_limit_reached(self, diag12, functions):
        report = convergence_limit(diag12, functions['exp_resolvent'],
                                   [10.0, 100.0, 1000.0], [0.1, 0.01, 0.001])
        assert report.monotone
        assert report.bound_ok
        assert report.sup_norm <= report.uniform_bound
        assert report.passed
        assert len(report.table) == 9
        assert report.diagonal[-1] < report.diagonal[0]

    def test_uniform_bound_from_total_variation(self, diag12, functions):
        """e^{-z}/(z+1) 의 측도는 e^{-(s-1)} on [1, ∞), R_{-0.9} 가중 TV 는 10e^{0.9}"""
        report = convergence_limit(diag12, functions['exp_resolvent'], [10.0, 100.0], [0.1, 0.01])
        assert report.uniform_bound == pytest.approx(10.0 * math.exp(0.9), rel=1e-6)
        assert all(row['bound'] == report.uniform_bound for row in report.table)

    def test_uniform_bound_on_jordan_block(self, jordan12, functions):
        report = convergence_limit(jordan12, functions['resolvent'], [10.0, 100.0], [0.1, 0.01])
        assert report.bound_ok
        assert report.sup_norm < report.uniform_bound

    def test_unrecognized_function_has_no_uniform_bound(self, diag12, functions):
        report = convergence_limit(diag12, functions['ratio'], [10.0, 100.0], [0.1, 0.01])
        assert math.isnan(report.uniform_bound)
        assert report.bound_ok

    def test_empty_grid(self, diag12, functions):
        with pytest.raises(DomainError):
            convergence_limit(diag12, functions['exp'], [], [0.1])


class TestDerivativeConstant:

    def test_first_order(self):
        assert iterated_derivative_constant(1, -0.5, 0.0, 1.0) == pytest.approx(1.0)
        assert iterated_derivative_constant(1, -0.25, 0.0, 2.0) == pytest.approx(8.0)

    def test_positive_for_higher_orders(self):
        values = [iterated_derivative_constant(n, -0.5, 0.0, 1.0) for n in (1, 2, 3)]
        assert all(v > 0 for v in values)

    def test_requires_gap(self):
        with pytest.raises(DomainError):
            iterated_derivative_constant(2, 0.0, 0.0, 1.0)
        with pytest.raises(DomainError):
            iterated_derivative_constant(0, -1.0, 0.0, 1.0)

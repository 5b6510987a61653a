"""
test_symbols.py - 반평면 함수 기호 계산 테스트
Hille-Phillips 함수 미적분 실험 시스템
"""

import math

import numpy as np
import pytest

from src.errors import DomainError, ParseError, UnboundedError
from src.measures import laplace_transform, tv_norm
from src.symbols import (boundary_trace, catalog, cauchy_derivative_line, const, derivative,
                         evaluate, exp_decay, laplace_measure, maximum_principle_check,
                         mikhlin_norm, paley_wiener_factor, parse_function, poisson_extend,
                         regularizer, sector_inclusion_check, sup_norm)


@pytest.fixture
def cat0():
    """R_0 위의 카탈로그"""
    return catalog(0.0)


class TestEvaluate:

    def test_examples(self, cat0):
        assert evaluate(cat0['exp'], 0.0) == pytest.approx(1.0)
        assert evaluate(cat0['resolvent'], 1j) == pytest.approx((1 - 1j) / 2)
        assert evaluate(cat0['sqrt_resolvent'], 0.0) == pytest.approx(1.0)

    def test_left_of_abscissa(self, cat0):
        with pytest.raises(DomainError):
            evaluate(cat0['resolvent'], -0.5)

    def test_pole_must_be_left_of_abscissa(self):
        with pytest.raises(DomainError):
            catalog(-1.0)


class TestDerivative:

    def test_semigroup_symbol(self):
        d = derivative(exp_decay(0.7), 1)
        z = np.array([0.2, 1 + 3j])
        assert np.allclose(d.evaluate(z), -0.7 * np.exp(-0.7 * z))

    def test_resolvent_second(self, cat0):
        z = np.array([0.0, 2 - 1j])
        assert np.allclose(derivative(cat0['resolvent'], 2).evaluate(z), 2 / (1 + z) ** 3)

    def test_constant(self):
        assert derivative(const(3.0), 1).evaluate(0.5) == pytest.approx(0.0)

    def test_finite_differences_on_catalog(self, cat0):
        z, h = 0.5 + 0.3j, 1e-4
        for name, f in cat0.items():
            symbolic = complex(f.derivative(1).evaluate(z))
            fd = (complex(f.evaluate(z + h)) - complex(f.evaluate(z - h))) / (2 * h)
            assert abs(symbolic - fd) <= 1e-6 * max(1.0, abs(symbolic)), name

    def test_order_must_be_positive(self, cat0):
        with pytest.raises(DomainError):
            derivative(cat0['exp'], 0)


class TestSupNorm:

    def test_exponential_on_shifted_line(self):
        assert sup_norm(exp_decay(2.0, -0.5), 0.3) == pytest.approx(math.exp(-0.6))

    def test_resolvent(self, cat0):
        assert sup_norm(cat0['resolvent'], 0.0) == pytest.approx(1.0)

    def test_delayed_resolvent(self, cat0):
        assert sup_norm(cat0['exp_resolvent'], 0.0) == pytest.approx(1.0, rel=1e-9)

    def test_unbounded(self):
        with pytest.raises(UnboundedError):
            sup_norm(parse_function('add(z, 1)', 0.0))

    def test_left_of_abscissa(self, cat0):
        with pytest.raises(DomainError):
            sup_norm(cat0['resolvent'], -0.5)

    @pytest.mark.parametrize('tau,omega', [(0.5, 0.0), (1.0, 0.4), (2.0, -0.3)])
    def test_semigroup_factor_scales_norm(self, tau, omega):
        for name, f in catalog(-0.9).items():
            lhs = sup_norm(exp_decay(tau, -0.9) * f, omega)
            rhs = math.exp(-tau * omega) * sup_norm(f, omega)
            assert lhs == pytest.approx(rhs, rel=1e-6), name

    def test_maximum_principle(self, cat0):
        for name, f in cat0.items():
            assert maximum_principle_check(f, 0.0) <= 1e-8, name

    @pytest.mark.parametrize('k', [1.0, 10.0, 100.0])
    def test_regularizer_normalization(self, k):
        g = regularizer(k, 0.0)
        assert tv_norm(laplace_measure(g)) == pytest.approx(1.0)
        assert sup_norm(g, 0.0) == pytest.approx(1.0)
        assert g.evaluate(0.0) == pytest.approx(1.0)


class TestMikhlinNorm:

    def test_constant(self):
        norm = mikhlin_norm(const(-2.5), 0.0)
        assert norm.value == pytest.approx(2.5)
        assert norm.sup_deriv_term == pytest.approx(0.0)

    def test_resolvent(self, cat0):
        norm = mikhlin_norm(cat0['resolvent'], 0.0)
        assert norm.sup_f == pytest.approx(1.0)
        assert norm.sup_deriv_term == pytest.approx(0.5, rel=1e-6)
        assert norm.value == pytest.approx(1.5, rel=1e-6)

    def test_exponential_is_not_mikhlin(self, cat0):
        with pytest.raises(UnboundedError):
            mikhlin_norm(cat0['exp'], 0.0)

    def test_sector_inclusion(self, cat0):
        check = sector_inclusion_check(cat0['resolvent'], 0.0)
        assert check.passed


class TestPoissonExtend:

    def test_constant_trace(self):
        trace = boundary_trace(const(1.0), 0.0)
        assert np.allclose(poisson_extend(trace, 1.0, np.array([-3.0, 0.0, 7.5])), 1.0, atol=1e-8)

    def test_resolvent(self, cat0):
        trace = boundary_trace(cat0['resolvent'], 0.0)
        assert poisson_extend(trace, 1.0, 0.0) == pytest.approx(0.5, abs=1e-5)

    def test_exponential(self, cat0):
        trace = boundary_trace(cat0['exp'], 0.0)
        assert poisson_extend(trace, 1.0, 0.0) == pytest.approx(math.exp(-1), abs=1e-4)

    def test_needs_interior_line(self, cat0):
        with pytest.raises(DomainError):
            poisson_extend(boundary_trace(cat0['resolvent'], 0.0), 0.0, 0.0)


class TestCauchyDerivativeLine:

    def test_constant(self):
        assert abs(cauchy_derivative_line(const(1.0), 0.0, 1.0, 1, 0.0)) <= 1e-8

    def test_resolvent_first(self, cat0):
        got = cauchy_derivative_line(cat0['resolvent'], 0.0, 1.0, 1, 0.0)
        assert got == pytest.approx(-0.25, abs=1e-6)

    def test_exponential_second(self, cat0):
        got = cauchy_derivative_line(cat0['exp'], 0.0, 1.0, 2, 0.0)
        assert got == pytest.approx(math.exp(-1), abs=1e-6)

    def test_beta_must_exceed_alpha(self, cat0):
        with pytest.raises(DomainError):
            cauchy_derivative_line(cat0['resolvent'], 0.5, 0.5, 1, 0.0)


class TestPaleyWiener:

    def test_constant_gives_closed_form_kernel(self):
        mu = paley_wiener_factor(const(1.0), 1.0, -1.0, 0.5)
        t = np.array([0.1, 1.0, 4.0])
        assert np.allclose(mu.evaluate_density(t), np.exp(-1.5 * t))

    def test_square_root_pair(self):
        mu = paley_wiener_factor(const(1.0), 0.75, -1.0, 0.5)
        z = np.array([0.5, 1 + 1j])
        assert np.allclose(laplace_transform(mu, z), (z + 1.5) ** -0.75, rtol=1e-6)

    def test_delayed_density(self, cat0):
        mu = paley_wiener_factor(cat0['exp'], 1.0, -1.0, 0.5)
        density = mu.evaluate_density(np.array([0.5, 2.0]))
        assert abs(density[0]) <= 5e-3
        assert abs(density[1] - math.exp(-2.0)) <= 5e-3

    def test_rational_symbol_reproduced(self, cat0):
        f = cat0['ratio']
        mu = paley_wiener_factor(f, 1.0, -1.0, 0.5)
        z = np.array([0.3, 1.5 - 0.5j, 2.0 + 5.0j])
        want = f.evaluate(z + 0.5) / (z + 1.5)
        assert np.allclose(laplace_transform(mu, z), want, rtol=1e-5, atol=0)

    def test_far_field_kernels_split_off(self, cat0):
        mu = paley_wiener_factor(cat0['ratio'], 1.0, -1.0, 0.5)
        second = [k for k in mu.kernels if complex(k.alpha) == 2.0]
        assert len(second) == 1
        assert complex(second[0].coef) == pytest.approx(1.0, abs=1e-4)

    def test_alpha_range(self):
        with pytest.raises(DomainError):
            paley_wiener_factor(const(1.0), 0.5, -1.0, 0.5)


class TestParserAndRecognition:

    def test_grammar_example(self):
        f = parse_function('mul(exp(-1 z), rpow(add(z, 1), -0.5))')
        assert f.evaluate(0.0) == pytest.approx(1.0)

    def test_malformed(self):
        with pytest.raises(ParseError):
            parse_function('mul(exp(-1 z), ')
        with pytest.raises(ParseError):
            parse_function('exp(2 z)')
        with pytest.raises(ParseError):
            parse_function('frobnicate(z)')

    def test_laplace_measure_reproduces_function(self, cat0):
        z = np.array([0.5, 1 + 2j])
        for name in ('exp', 'resolvent', 'exp_resolvent', 'rational', 'double_pole', 'two_delays'):
            f = cat0[name]
            mu = laplace_measure(f)
            assert np.allclose(laplace_transform(mu, z), f.evaluate(z), atol=1e-12), name

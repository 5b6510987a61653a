"""
test_numerics.py - 공용 수치 도구 테스트
Hille-Phillips 함수 미적분 실험 시스템
"""

import numpy as np
import pytest

from src.numerics import format_sig, hann_mean, simpson_weights, tail_window


class TestTailWindow:

    @pytest.mark.parametrize('n', [8, 10, 13, 4096])
    def test_outer_quarter_on_each_side(self, n):
        values = np.arange(n)
        left, right = tail_window(values, 'left'), tail_window(values, 'right')
        assert len(left) == len(right) == n // 4
        assert np.array_equal(left, values[: n // 4])
        assert np.array_equal(right, values[n - n // 4:])

    def test_windows_do_not_reach_center(self):
        values = np.arange(100)
        assert tail_window(values, 'left').max() < 50
        assert tail_window(values, 'right').min() >= 75


class TestHannMean:

    def test_constant(self):
        assert hann_mean(np.full(64, 2.0 - 1j)) == pytest.approx(2.0 - 1j)

    def test_oscillation_is_removed(self):
        k = np.arange(256)
        values = 1.0 + 0.5 * np.exp(2j * np.pi * 16 * k / 256)
        assert abs(hann_mean(values) - 1.0) <= 1e-2

    def test_short_input(self):
        assert hann_mean(np.array([])) == 0j
        assert hann_mean(np.array([1.0, 3.0])) == pytest.approx(2.0)


class TestSimpsonWeights:

    @pytest.mark.parametrize('n', [2, 5, 6, 101])
    def test_integrates_linear_exactly(self, n):
        x = np.linspace(0.0, 1.0, n)
        w = simpson_weights(n, x[1] - x[0])
        assert w @ (3.0 * x + 1.0) == pytest.approx(2.5)


class TestFormatSig:

    def test_kinds(self):
        assert format_sig(True) == 'true'
        assert format_sig(np.int64(7)) == '7'
        assert format_sig(0.1) == '0.10000000000000001'
        assert format_sig(1 - 2j, digits=3) == '1-2j'
        assert format_sig('diag12') == 'diag12'

"""
numerics.py - 공용 수치 보조 함수
Hille-Phillips 함수 미적분 실험 시스템

경계선 최대화, 행렬값 구적법, 꼬리 모델처럼 여러 모듈이
같이 쓰는 작은 도구들.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple
import logging

import numpy as np
from scipy.integrate import quad_vec
from scipy.optimize import minimize_scalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LineMaximum:
    """직선 위 |g(s)| 최대화 결과"""
    value: float
    argmax: float
    n_samples: int
    tail_value: float
    refined: int


def _local_maxima(values: np.ndarray) -> np.ndarray:
    inner = (values[1:-1] >= values[:-2]) & (values[1:-1] >= values[2:])
    return np.nonzero(inner)[0] + 1


def maximize_modulus_on_line(g: Callable[[np.ndarray], np.ndarray],
                             s_max: float = 1.0e3,
                             n_coarse: int = 20001,
                             tail_max: float = 1.0e8,
                             n_tail: int = 200,
                             refine_top: int = 8) -> LineMaximum:
    """
    sup_s |g(s)| 를 3단계 격자로 근사

    1) |s| <= s_max 균일 격자, 2) 로그 간격 꼬리, 3) 상위 국소 최대점에서
    황금분할 정련.

    Args:
        g: 배열을 받아 복소 배열을 돌려주는 함수
        s_max: 균일 격자 반폭
        n_coarse: 균일 격자 점 수
        tail_max: 꼬리 격자의 최대 |s|
        n_tail: 한쪽 꼬리 점 수
        refine_top: 정련할 국소 최대점 수

    Returns:
        LineMaximum
    """
    coarse = np.linspace(-s_max, s_max, n_coarse)
    tail = np.logspace(np.log10(s_max), np.log10(tail_max), n_tail)[1:]
    s = np.concatenate([-tail[::-1], coarse, tail])
    values = np.abs(np.asarray(g(s), dtype=complex))
    values = np.where(np.isfinite(values), values, np.inf)

    best = int(np.argmax(values))
    best_value = float(values[best])
    best_s = float(s[best])

    refined = 0
    peaks = _local_maxima(values)
    if peaks.size:
        order = peaks[np.argsort(values[peaks])[::-1][:refine_top]]
        objective = lambda x: -float(np.abs(g(np.array([x]))[0]))
        for i in order:
            try:
                res = minimize_scalar(objective, bracket=(s[i - 1], s[i], s[i + 1]),
                                      method='golden')
            except ValueError:
                # 평탄한 구간은 격자값으로 충분
                continue
            refined += 1
            if -res.fun > best_value:
                best_value = float(-res.fun)
                best_s = float(res.x)

    tail_value = float(max(values[0], values[-1]))
    return LineMaximum(best_value, best_s, int(s.size), tail_value, refined)


def quad_matrix(fn: Callable[[float], np.ndarray], a: float, b: float,
                epsabs: float = 1e-12, epsrel: float = 1e-10,
                points: Optional[Sequence[float]] = None,
                limit: int = 2000) -> Tuple[np.ndarray, float]:
    """
    복소 행렬값 함수의 적분 (quad_vec 위에서 실수/허수부를 쌓아 처리)

    Returns:
        (적분값, 추정오차)
    """
    sample = np.asarray(fn(0.5 * (a + b)), dtype=complex)
    shape = sample.shape

    def stacked(t):
        v = np.asarray(fn(t), dtype=complex).ravel()
        return np.concatenate([v.real, v.imag])

    res, err = quad_vec(stacked, a, b, epsabs=epsabs, epsrel=epsrel,
                        points=points, limit=limit)
    half = res.size // 2
    return (res[:half] + 1j * res[half:]).reshape(shape), float(err)


def hann_mean(values: np.ndarray) -> complex:
    """한 꼬리 구간의 Hann 가중 평균 (진동 성분을 지움)"""
    values = np.asarray(values)
    if values.size < 3:
        return complex(values.mean()) if values.size else 0j
    w = np.hanning(values.size)
    return complex(np.sum(w * values) / np.sum(w))


def tail_window(values: np.ndarray, side: str) -> np.ndarray:
    """격자 바깥 1/4 구간 (side='left' | 'right'), 양쪽 모두 n // 4 노드"""
    n = values.shape[0]
    return values[: n // 4] if side == 'left' else values[n - n // 4:]


def format_sig(x, digits: int = 17) -> str:
    """CSV 출력용 유효숫자 포맷"""
    if isinstance(x, (bool, np.bool_)):
        return 'true' if x else 'false'
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), f'.{digits}g')
    if isinstance(x, complex):
        return f"{format(x.real, f'.{digits}g')}{format(x.imag, f'+.{digits}g')}j"
    return str(x)


def simpson_weights(n: int, h: float) -> np.ndarray:
    """균일 격자 합성 심프슨 가중치 (짝수 개면 마지막 구간은 사다리꼴)"""
    if n == 1:
        return np.zeros(1)
    if n == 2:
        return np.array([h / 2, h / 2])
    m = n if n % 2 == 1 else n - 1
    w = np.zeros(n)
    w[:m] = 2.0
    w[1:m:2] = 4.0
    w[0] = w[m - 1] = 1.0
    w[:m] *= h / 3
    if m < n:
        w[m - 1] += h / 2
        w[m] += h / 2
    return w

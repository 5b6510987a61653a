"""
symbols.py - 반평면 위의 유계 정칙 함수 (식 트리)
Hille-Phillips 함수 미적분 실험 시스템

식 트리 평가/기호 미분, 경계선 sup 노름, Mikhlin 노름, 포아송 확장,
코시 미분 공식, Paley-Wiener 인자 복원, 텍스트 문법 파서, 예제 카탈로그,
라플라스 측도 인식을 담당한다.
"""

from dataclasses import dataclass, field
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple, Union
import logging
import math
import re

import numpy as np
from scipy.integrate import simpson

from .errors import (CausalityError, ConvergenceError, DomainError, ParseError,
                     RecognitionError, TruncationError, UnboundedError)
from .measures import (DensityGrid, GammaKernel, WeightedMeasure, convolve,
                       laplace_transform)
from .numerics import (LineMaximum, hann_mean, maximize_modulus_on_line,
                       tail_window)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# 식 트리
# ---------------------------------------------------------------------------

def _num(c: complex) -> str:
    c = complex(c)
    if c.imag == 0:
        return repr(float(c.real))
    return f"cplx({float(c.real)!r}, {float(c.imag)!r})"


class Expr:
    """식 트리 노드 기본 클래스"""

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def diff(self) -> 'Expr':
        raise NotImplementedError

    def growth(self) -> float:
        """수직선 위 |s| → ∞ 에서의 증가 차수 (|f| ~ |s|^order)"""
        raise NotImplementedError

    def poles(self) -> List[complex]:
        return []


@dataclass(frozen=True)
class Const(Expr):
    value: complex

    def evaluate(self, z):
        return np.full(np.shape(z), complex(self.value))

    def diff(self):
        return Const(0j)

    def growth(self):
        return -math.inf if self.value == 0 else 0.0

    def __str__(self):
        return _num(self.value)


@dataclass(frozen=True)
class Var(Expr):

    def evaluate(self, z):
        return np.asarray(z, dtype=complex)

    def diff(self):
        return Const(1 + 0j)

    def growth(self):
        return 1.0

    def __str__(self):
        return 'z'


@dataclass(frozen=True)
class Exp(Expr):
    """e^{-τz}, τ >= 0"""
    tau: float

    def __post_init__(self):
        if self.tau < 0:
            raise DomainError(f"exp(-τz) needs τ >= 0, got τ={self.tau}")

    def evaluate(self, z):
        return np.exp(-self.tau * np.asarray(z, dtype=complex))

    def diff(self):
        return mul(Const(-self.tau), self)

    def growth(self):
        return 0.0

    def __str__(self):
        return f"exp({-self.tau!r} z)"


@dataclass(frozen=True)
class RPow(Expr):
    """(z-λ)^{-α}, 주가지"""
    lam: complex
    alpha: complex

    def evaluate(self, z):
        return np.power(np.asarray(z, dtype=complex) - self.lam, -self.alpha)

    def diff(self):
        return mul(Const(-self.alpha), RPow(self.lam, self.alpha + 1))

    def growth(self):
        return -float(np.real(self.alpha))

    def poles(self):
        return [complex(self.lam)]

    def __str__(self):
        return f"rpow(add(z, {_num(-complex(self.lam))}), {_num(-complex(self.alpha))})"


@dataclass(frozen=True)
class Shift(Expr):
    """z ↦ child(z + ε)"""
    child: Expr
    eps: complex

    def evaluate(self, z):
        return self.child.evaluate(np.asarray(z, dtype=complex) + self.eps)

    def diff(self):
        return Shift(self.child.diff(), self.eps)

    def growth(self):
        return self.child.growth()

    def poles(self):
        return [p - self.eps for p in self.child.poles()]

    def __str__(self):
        return f"shift({self.child}, {_num(self.eps)})"


@dataclass(frozen=True)
class Add(Expr):
    terms: Tuple[Expr, ...]

    def evaluate(self, z):
        out = self.terms[0].evaluate(z)
        for t in self.terms[1:]:
            out = out + t.evaluate(z)
        return out

    def diff(self):
        return add(*(t.diff() for t in self.terms))

    def growth(self):
        return max(t.growth() for t in self.terms)

    def poles(self):
        return [p for t in self.terms for p in t.poles()]

    def __str__(self):
        return f"add({', '.join(str(t) for t in self.terms)})"


@dataclass(frozen=True)
class Mul(Expr):
    factors: Tuple[Expr, ...]

    def evaluate(self, z):
        out = self.factors[0].evaluate(z)
        for f in self.factors[1:]:
            out = out * f.evaluate(z)
        return out

    def diff(self):
        terms = []
        for i, f in enumerate(self.factors):
            rest = self.factors[:i] + self.factors[i + 1:]
            terms.append(mul(f.diff(), *rest))
        return add(*terms)

    def growth(self):
        return sum(f.growth() for f in self.factors)

    def poles(self):
        return [p for f in self.factors for p in f.poles()]

    def __str__(self):
        return f"mul({', '.join(str(f) for f in self.factors)})"


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    n: int

    def evaluate(self, z):
        return self.base.evaluate(z) ** self.n

    def diff(self):
        return mul(Const(complex(self.n)), power(self.base, self.n - 1), self.base.diff())

    def growth(self):
        g = self.base.growth()
        return g * self.n if self.n > 0 else math.inf

    def poles(self):
        return self.base.poles()

    def __str__(self):
        return f"pow({self.base}, {self.n})"


def add(*terms: Expr) -> Expr:
    flat: List[Expr] = []
    for t in terms:
        flat.extend(t.terms if isinstance(t, Add) else (t,))
    c = sum((complex(t.value) for t in flat if isinstance(t, Const)), 0j)
    others = [t for t in flat if not isinstance(t, Const)]
    if c != 0 or not others:
        others.insert(0, Const(c))
    return others[0] if len(others) == 1 else Add(tuple(others))


def mul(*factors: Expr) -> Expr:
    flat: List[Expr] = []
    for f in factors:
        flat.extend(f.factors if isinstance(f, Mul) else (f,))
    c = 1 + 0j
    tau = 0.0
    rpows: Dict[complex, complex] = {}
    others: List[Expr] = []
    for f in flat:
        if isinstance(f, Const):
            c *= f.value
        elif isinstance(f, Exp):
            tau += f.tau
        elif isinstance(f, RPow):
            # (z-λ)^{-α}(z-λ)^{-β} = (z-λ)^{-(α+β)}
            rpows[f.lam] = rpows.get(f.lam, 0j) + f.alpha
        else:
            others.append(f)
    if c == 0:
        return Const(0j)
    parts: List[Expr] = [] if c == 1 else [Const(c)]
    if tau != 0:
        parts.append(Exp(tau))
    parts.extend(RPow(lam, a) for lam, a in rpows.items() if a != 0)
    parts.extend(others)
    if not parts:
        return Const(1 + 0j)
    return parts[0] if len(parts) == 1 else Mul(tuple(parts))


def power(base: Expr, n: int) -> Expr:
    if n == 0:
        return Const(1 + 0j)
    if n == 1:
        return base
    if isinstance(base, Const):
        return Const(complex(base.value) ** n)
    if isinstance(base, Exp) and n > 0:
        return Exp(base.tau * n)
    if isinstance(base, RPow):
        return RPow(base.lam, base.alpha * n)
    return Pow(base, n)


# ---------------------------------------------------------------------------
# 반평면 함수
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class HalfPlaneFunction:
    """
    R_ω 위의 유계 정칙 함수

    Attributes:
        expr: 식 트리
        abscissa: 정의역 R_ω 의 ω
    """
    expr: Expr
    abscissa: float
    _sup_cache: Dict[float, LineMaximum] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for p in self.expr.poles():
            if not np.real(p) < self.abscissa:
                raise DomainError(
                    f"singularity at {p} is not strictly left of Re z = {self.abscissa:g}")

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(z.real < self.abscissa - 1e-12 * (1 + abs(self.abscissa))):
            raise DomainError(f"evaluation left of the abscissa {self.abscissa:g}")
        out = self.expr.evaluate(z)
        return complex(out) if out.ndim == 0 else out

    def derivative(self, m: int = 1) -> 'HalfPlaneFunction':
        expr = self.expr
        for _ in range(m):
            expr = expr.diff()
        return HalfPlaneFunction(expr, self.abscissa)

    def shift(self, eps: complex) -> 'HalfPlaneFunction':
        """z ↦ f(z + ε), 정의역은 R_{ω - Re ε}"""
        return HalfPlaneFunction(Shift(self.expr, complex(eps)), self.abscissa - float(np.real(eps)))

    def with_abscissa(self, omega: float) -> 'HalfPlaneFunction':
        return HalfPlaneFunction(self.expr, omega)

    def __mul__(self, other: 'HalfPlaneFunction') -> 'HalfPlaneFunction':
        return HalfPlaneFunction(mul(self.expr, other.expr), max(self.abscissa, other.abscissa))

    def __add__(self, other: 'HalfPlaneFunction') -> 'HalfPlaneFunction':
        return HalfPlaneFunction(add(self.expr, other.expr), max(self.abscissa, other.abscissa))

    @property
    def growth_order(self) -> float:
        return self.expr.growth()

    @property
    def is_bounded(self) -> bool:
        return self.growth_order <= 0

    def __str__(self):
        return str(self.expr)


def evaluate(f: HalfPlaneFunction, z):
    return f.evaluate(z)


def derivative(f: HalfPlaneFunction, m: int = 1) -> HalfPlaneFunction:
    if m < 1:
        raise DomainError("derivative order must be positive")
    return f.derivative(m)


def const(c: complex, abscissa: float = 0.0) -> HalfPlaneFunction:
    return HalfPlaneFunction(Const(complex(c)), abscissa)


def exp_decay(tau: float, abscissa: float = 0.0) -> HalfPlaneFunction:
    """e_{-τ}(z) = e^{-τz}"""
    return HalfPlaneFunction(Exp(float(tau)) if tau else Const(1 + 0j), abscissa)


def rpow(lam: complex, alpha: complex, abscissa: Optional[float] = None) -> HalfPlaneFunction:
    """(z-λ)^{-α}"""
    if abscissa is None:
        abscissa = float(np.real(lam)) + 1e-9 * (1 + abs(np.real(lam)))
    return HalfPlaneFunction(RPow(complex(lam), complex(alpha)), abscissa)


def regularizer(k: float, omega: float) -> HalfPlaneFunction:
    """g_k(z) = k/(z - ω + k)"""
    return HalfPlaneFunction(mul(Const(complex(k)), RPow(complex(omega - k), 1 + 0j)), omega)


def _check_boundary(f: HalfPlaneFunction, omega: float, what: str = 'f') -> None:
    if omega < f.abscissa - 1e-12:
        raise DomainError(f"ω={omega:g} lies left of the abscissa {f.abscissa:g}")
    order = f.growth_order
    if order > 0:
        raise UnboundedError(f"{what} grows like |s|^{order:g} on Re z = {omega:g}")


def sup_norm(f: HalfPlaneFunction, omega: Optional[float] = None) -> float:
    """
    ‖f‖_{H∞(R_ω)} = sup_s |f(ω+is)|

    Raises:
        UnboundedError: 성장 분석상 유계가 아닐 때
    """
    omega = f.abscissa if omega is None else omega
    _check_boundary(f, omega)
    cached = f._sup_cache.get(omega)
    if cached is None:
        cached = maximize_modulus_on_line(lambda s: f.expr.evaluate(omega + 1j * s))
        f._sup_cache.setdefault(omega, cached)
    return cached.value


def maximum_principle_check(f: HalfPlaneFunction, omega: float, n_points: int = 200,
                            seed: int = 0, tol: float = 1e-8) -> float:
    """
    내부 임의점에서 |f(z)| - sup_norm 의 최대 초과량 (<= tol 이면 정상)
    """
    rng = np.random.default_rng(seed)
    re = omega + rng.exponential(2.0, n_points)
    im = rng.uniform(-50.0, 50.0, n_points)
    interior = np.abs(f.expr.evaluate(re + 1j * im)).max()
    excess = float(interior - sup_norm(f, omega))
    if excess > tol:
        logger.warning(f"interior value exceeds boundary sup by {excess:.3e} for {f}")
    return excess


@dataclass
class MikhlinNorm:
    """‖f‖_{H∞₁} = sup|f| + sup|(z-ω)f'(z)|"""
    value: float
    sup_f: float
    sup_deriv_term: float
    grid: Dict[str, float]


def mikhlin_norm(f: HalfPlaneFunction, omega: Optional[float] = None,
                 spot_checks: int = 200, seed: int = 0) -> MikhlinNorm:
    """
    Raises:
        UnboundedError: f 또는 (z-ω)f' 가 유계가 아닐 때
    """
    omega = f.abscissa if omega is None else omega
    sup_f = sup_norm(f, omega)
    term = HalfPlaneFunction(mul(add(Var(), Const(complex(-omega))), f.expr.diff()), f.abscissa)
    _check_boundary(term, omega, what='(z-ω)f\'(z)')
    peak = maximize_modulus_on_line(lambda s: term.expr.evaluate(omega + 1j * s))
    sup_term = peak.value

    rng = np.random.default_rng(seed)
    z = omega + rng.exponential(2.0, spot_checks) + 1j * rng.uniform(-50.0, 50.0, spot_checks)
    interior = float(np.abs(term.expr.evaluate(z)).max())
    if interior > sup_term * (1 + 1e-8) + 1e-12:
        logger.warning(f"Mikhlin term: interior {interior:.6g} above boundary {sup_term:.6g}")
        sup_term = interior
    grid = {'n_samples': peak.n_samples, 'argmax': peak.argmax,
            'refined': peak.refined, 'tail_value': peak.tail_value}
    return MikhlinNorm(sup_f + sup_term, sup_f, sup_term, grid)


@dataclass
class SectorCheck:
    max_f: float
    max_deriv_term: float
    mikhlin: MikhlinNorm
    passed: bool


def sector_inclusion_check(f: HalfPlaneFunction, omega: Optional[float] = None,
                           angles: Sequence[float] = (math.pi / 6, math.pi / 4, math.pi / 3, 0.45 * math.pi),
                           radii: Optional[np.ndarray] = None, tol: float = 1e-8) -> SectorCheck:
    """ω 중심 섹터 광선 위에서 |f|, |(z-ω)f'| 가 Mikhlin 노름 아래인지 표본 점검"""
    omega = f.abscissa if omega is None else omega
    norm = mikhlin_norm(f, omega)
    if radii is None:
        radii = np.logspace(-3, 4, 400)
    fprime = f.expr.diff()
    max_f = max_t = 0.0
    for phi in angles:
        for sign in (1, -1):
            z = omega + radii * np.exp(1j * sign * phi)
            max_f = max(max_f, float(np.abs(f.expr.evaluate(z)).max()))
            max_t = max(max_t, float(np.abs((z - omega) * fprime.evaluate(z)).max()))
    passed = max_f <= norm.sup_f + tol and max_t <= norm.sup_deriv_term + tol
    return SectorCheck(max_f, max_t, norm, passed)


# ---------------------------------------------------------------------------
# 경계 적분
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BoundaryTrace:
    """ω + is 위의 균일 격자 값"""
    omega: float
    s: np.ndarray
    values: np.ndarray


def boundary_trace(f: HalfPlaneFunction, omega: Optional[float] = None,
                   s_max: float = 1000.0, step: float = 0.02) -> BoundaryTrace:
    omega = f.abscissa if omega is None else omega
    n = int(round(2 * s_max / step)) + 1
    s = np.linspace(-s_max, s_max, n)
    return BoundaryTrace(omega, s, f.expr.evaluate(omega + 1j * s))


def poisson_extend(trace: BoundaryTrace, omega_prime: float, s,
                   tail_tol: float = 1e-3):
    """
    u(ω'+is) = ∫ P_d(s-r) f(ω+ir) dr,  P_d(r) = d/(π(r²+d²)),  d = ω'-ω

    격자 밖은 바깥 구간의 Hann 평균 × 커널 꼬리 질량으로 메운다.

    Raises:
        TruncationError: 꼬리 오차 한계가 tail_tol 을 넘을 때
    """
    d = omega_prime - trace.omega
    if d <= 0:
        raise DomainError("Poisson extension needs ω' > ω")
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    r, v = trace.s, trace.values
    h = r[1] - r[0]
    w = np.full(r.size, h)
    w[0] = w[-1] = h / 2

    left_win, right_win = tail_window(v, 'left'), tail_window(v, 'right')
    c_left, c_right = hann_mean(left_win), hann_mean(right_win)
    dev_left = float(np.abs(left_win - c_left).max())
    dev_right = float(np.abs(right_win - c_right).max())

    out = np.empty(s_arr.size, dtype=complex)
    worst = 0.0
    for i, si in enumerate(s_arr):
        kernel = d / (np.pi * ((si - r) ** 2 + d * d))
        mass_left = (np.pi / 2 - np.arctan((si - r[0]) / d)) / np.pi
        mass_right = (np.pi / 2 - np.arctan((r[-1] - si) / d)) / np.pi
        out[i] = np.sum(w * kernel * v) + c_left * mass_left + c_right * mass_right
        worst = max(worst, dev_left * mass_left + dev_right * mass_right)
    if worst > tail_tol:
        raise TruncationError(
            f"Poisson kernel tail bound {worst:.3e} exceeds {tail_tol:.1e}; widen the trace grid",
            tail_bound=worst)
    return complex(out[0]) if np.ndim(s) == 0 else out


def _cauchy_line(values: np.ndarray, r: np.ndarray, z0: complex, alpha: float, n: int) -> complex:
    d = z0.real - alpha
    u = r - z0.imag
    kernel = (-d + 1j * u) ** (-(n + 1))
    body = simpson(values * kernel, x=r)
    R_right, R_left = u[-1], -u[0]
    c_left = hann_mean(tail_window(values, 'left'))
    c_right = hann_mean(tail_window(values, 'right'))
    tail_right = (-d + 1j * R_right) ** (-n) / (n * 1j)
    tail_left = (-d - 1j * R_left) ** (-n) / (-n * 1j)
    return -factorial(n) / (2 * np.pi) * (body + c_right * tail_right + c_left * tail_left)


def cauchy_derivative_line(f: HalfPlaneFunction, alpha: float, beta: float, n: int, s: float,
                           half_width: float = 1000.0, step: float = 0.02,
                           tol: float = 1e-6) -> complex:
    """
    f^{(n)}(β+is) = -(n!/2π) ∫ f(α+ir) (α+ir-(β+is))^{-(n+1)} dr

    폭 R 과 R/2 결과의 차이를 꼬리 한계로 쓴다.

    Raises:
        TruncationError: 꼬리 한계가 tol 을 넘을 때
    """
    if n < 1:
        raise DomainError("derivative order must be positive")
    if not beta > alpha:
        raise DomainError("need β > α")
    _check_boundary(f, alpha)
    m = int(round(2 * half_width / step)) // 4 * 4 + 1
    r = np.linspace(s - half_width, s + half_width, m)
    values = f.expr.evaluate(alpha + 1j * r)
    z0 = complex(beta, s)
    full = _cauchy_line(values, r, z0, alpha, n)
    q = (m - 1) // 4
    half = _cauchy_line(values[q:m - q], r[q:m - q], z0, alpha, n)
    bound = abs(full - half)
    if bound > tol:
        raise TruncationError(
            f"line integral tail bound {bound:.3e} exceeds {tol:.1e} for n={n}", tail_bound=bound)
    return complex(full)


def _far_coefficient(values: np.ndarray, scale: float, spread: float = 0.1) -> complex:
    """먼 주파수 표본이 상수에 가까우면 그 Hann 평균, 아니면 0"""
    c = hann_mean(values)
    if abs(c) < 1e-9 * max(1.0, scale):
        return 0j
    if float(np.abs(values - c).max()) > spread * max(1.0, abs(c)):
        return 0j
    return c


def paley_wiener_factor(f: HalfPlaneFunction, alpha: float, lam: complex, omega0: float,
                        period: float = 64.0, n_fft: int = 1 << 17,
                        causality_tol: float = 1e-3, reproduce_tol: float = 1e-5) -> WeightedMeasure:
    """
    h(z) = f(z)(z-λ)^{-α} 를 ĝ 로 하는 g 를 역 푸리에 변환으로 복원하고
    e_{-ω₀}g 밀도를 돌려준다.

    h 는 Re z = ω₀ 선에서 표본을 뜨므로 역변환 결과가 곧 e_{-ω₀}g 이다.
    무한대 전개 c₀(z-λ)^{-α} + c₁(z-λ)^{-α-1} 는 닫힌 형태 커널로 떼어낸다.

    Args:
        f: R_0 위에서 유계
        alpha: > 1/2
        lam: Re λ < 0
        omega0: > 0
        period: 시간축 주기 (절반이 양의 시간)
        n_fft: FFT 점 수

    Raises:
        CausalityError: 음의 시간 질량이 causality_tol 을 넘을 때
        ConvergenceError: 라플라스 재현 오차가 reproduce_tol 을 넘을 때
    """
    if not alpha > 0.5:
        raise DomainError("Paley-Wiener factor needs α > 1/2")
    if not np.real(lam) < 0:
        raise DomainError("Paley-Wiener factor needs Re λ < 0")
    if not omega0 > 0:
        raise DomainError("Paley-Wiener factor needs ω₀ > 0")
    _check_boundary(f, 0.0)
    lam, alpha = complex(lam), complex(alpha)
    h = mul(f.expr, RPow(lam, alpha))

    ds = 2 * np.pi / period
    dt = period / n_fft
    k = np.fft.fftfreq(n_fft, d=1.0 / n_fft)
    z = omega0 + 1j * k * ds

    far = np.abs(k) >= 0.25 * np.abs(k).max()
    z_far = z[far][np.argsort(k[far])]
    f_far = f.expr.evaluate(z_far)
    scale = sup_norm(f, 0.0)
    c0 = _far_coefficient(f_far, scale, spread=math.inf)
    c1 = _far_coefficient((f_far - c0) * (z_far - lam), scale)
    kernels = []
    if c0 != 0:
        kernels.append(GammaKernel(c0, 0.0, alpha, lam - omega0))
    if c1 != 0:
        kernels.append(GammaKernel(c1, 0.0, alpha + 1, lam - omega0))
    remainder = mul(add(f.expr, Const(-c0)), RPow(lam, alpha))
    if c1 != 0:
        remainder = add(remainder, mul(Const(-c1), RPow(lam, alpha + 1)))

    density = None
    mass_neg = 0.0
    if not (isinstance(remainder, Const) and remainder.value == 0):
        window = np.cos(np.pi * k / n_fft) ** 2
        samples = remainder.evaluate(z) * window
        g = np.fft.ifft(samples) * n_fft * ds / (2 * np.pi)

        half = n_fft // 2
        positive, negative = g[:half].copy(), g[half:]
        positive[0] = 2 * positive[1] - positive[2]
        mass_pos = float(np.sum(np.abs(positive)) * dt)
        mass_neg = float(np.sum(np.abs(negative)) * dt)
        if mass_neg > causality_tol * max(mass_pos, 1e-300):
            raise CausalityError(
                f"recovered g carries {mass_neg:.3e} mass on negative times (positive {mass_pos:.3e})")
        density = DensityGrid(0.0, dt, positive, truncated=True)
    measure = WeightedMeasure.build(kernels=tuple(kernels), density=density, support_low=0.0)

    test_points = np.array([0.5, 1.0 + 1.0j, 2.0 - 3.0j])
    got = laplace_transform(measure, test_points)
    want = h.evaluate(test_points + omega0)
    err = float(np.max(np.abs(got - want) / np.maximum(np.abs(want), 1e-12)))
    logger.debug(f"Paley-Wiener factor: c0={c0:.3g}, c1={c1:.3g}, negative mass {mass_neg:.2e}, "
                 f"Laplace error {err:.2e}")
    if err > reproduce_tol:
        raise ConvergenceError(f"Paley-Wiener density reproduces h only to {err:.3e}",
                               report={'laplace_error': err, 'negative_mass': mass_neg})
    return measure


# ---------------------------------------------------------------------------
# 라플라스 측도 인식
# ---------------------------------------------------------------------------

def _is_pos_int(a: complex) -> bool:
    return complex(a).imag == 0 and float(complex(a).real).is_integer() and complex(a).real >= 1


def _mul_measure(factors: List[Expr], omega: float) -> WeightedMeasure:
    ints = [f for f in factors if isinstance(f, RPow) and _is_pos_int(f.alpha)]
    for i, a in enumerate(ints):
        for b in ints[i + 1:]:
            if a.lam != b.lam:
                # 1/((z-a)^m (z-b)^n) = [(z-a)^{-m}(z-b)^{-(n-1)} - (z-a)^{-(m-1)}(z-b)^{-n}]/(a-b)
                rest = [f for f in factors if f is not a and f is not b]
                m, n = int(a.alpha.real), int(b.alpha.real)
                first = rest + [a] + ([RPow(b.lam, n - 1)] if n > 1 else [])
                second = rest + ([RPow(a.lam, m - 1)] if m > 1 else []) + [b]
                diff = _mul_measure(first, omega).plus(_mul_measure(second, omega).scaled(-1))
                return diff.scaled(1.0 / (a.lam - b.lam))
    result = WeightedMeasure.point_mass(0.0, 1.0, omega)
    for f in factors:
        result = convolve(result, _expr_measure(f, omega))
    return result


def _expr_measure(expr: Expr, omega: float) -> WeightedMeasure:
    if isinstance(expr, Const):
        return WeightedMeasure.point_mass(0.0, expr.value, omega)
    if isinstance(expr, Exp):
        return WeightedMeasure.point_mass(expr.tau, 1.0, omega)
    if isinstance(expr, RPow):
        if np.real(expr.alpha) <= 0:
            raise RecognitionError(f"{expr} is not a Laplace transform of a measure")
        return WeightedMeasure.build(kernels=(GammaKernel(1.0, 0.0, expr.alpha, expr.lam),),
                                     weight_exponent=omega, support_low=0.0)
    if isinstance(expr, Shift):
        # f(z+ε) = (e_{-ε}μ)^
        eps = complex(expr.eps)
        if eps.imag != 0:
            raise RecognitionError("complex shifts are not recognized")
        return _expr_measure(expr.child, omega + eps.real).reweight(-eps.real)
    if isinstance(expr, Add):
        out = _expr_measure(expr.terms[0], omega)
        for t in expr.terms[1:]:
            out = out.plus(_expr_measure(t, omega))
        return out
    if isinstance(expr, Mul):
        return _mul_measure(list(expr.factors), omega)
    if isinstance(expr, Pow):
        if expr.n < 0:
            raise RecognitionError(f"negative power {expr} is not recognized")
        return _mul_measure([expr.base] * expr.n, omega)
    raise RecognitionError(f"no Laplace measure for {expr}")


def laplace_measure(f: HalfPlaneFunction, omega: Optional[float] = None) -> WeightedMeasure:
    """
    f = μ̂ 인 μ ∈ M_ω(R+) 를 식 트리에서 구문적으로 찾는다

    Raises:
        RecognitionError: 인식할 수 없는 노드(z 단독 등)가 있을 때
    """
    omega = f.abscissa if omega is None else omega
    return _expr_measure(f.expr, omega)


def is_laplace_recognized(f: HalfPlaneFunction) -> bool:
    try:
        laplace_measure(f)
    except RecognitionError:
        return False
    return True


# ---------------------------------------------------------------------------
# 파서
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[(),*-]))")


def _tokenize(text: str) -> List[Tuple[str, str]]:
    tokens, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: '{text[pos:pos + 10]}'")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tokens


class _Parser:
    """
    expr   := NUMBER | 'z' | call
    call   := add(expr, ...) | mul(expr, ...) | sub(expr, expr) | pow(expr, INT)
            | exp(-τ z) | rpow(linear, p) | shift(expr, ε) | cplx(re, im)
    linear := z | add(z, c) | add(c, z) | sub(z, c)
    rpow(x, p) 는 x^p, 즉 (z-λ)^{-α} 에서 α = -p.
    """

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else ('eof', '')

    def take(self, value: Optional[str] = None):
        tok = self.peek()
        if tok[0] == 'eof' or (value is not None and tok[1] != value):
            raise ParseError(f"expected '{value}', found '{tok[1] or '<end>'}'")
        self.pos += 1
        return tok

    def number(self) -> complex:
        kind, val = self.peek()
        if kind == 'num':
            self.pos += 1
            return complex(float(val))
        if kind == 'name' and val == 'cplx':
            self.take()
            self.take('(')
            re_ = self.number().real
            self.take(',')
            im = self.number().real
            self.take(')')
            return complex(re_, im)
        if kind == 'op' and val == '-':
            self.take()
            return -self.number()
        raise ParseError(f"expected a number, found '{val or '<end>'}'")

    def args(self) -> List[Expr]:
        self.take('(')
        out = [self.expr()]
        while self.peek()[1] == ',':
            self.take(',')
            out.append(self.expr())
        self.take(')')
        return out

    def linear_shift(self) -> complex:
        """z + c 형태를 읽고 c 를 돌려준다"""
        e = self.expr()
        if isinstance(e, Var):
            return 0j
        if isinstance(e, Add) and len(e.terms) == 2:
            consts = [t for t in e.terms if isinstance(t, Const)]
            vars_ = [t for t in e.terms if isinstance(t, Var)]
            if len(consts) == 1 and len(vars_) == 1:
                return complex(consts[0].value)
        raise ParseError(f"rpow base must be z + c, got {e}")

    def expr(self) -> Expr:
        kind, val = self.peek()
        if kind in ('num',) or (kind == 'op' and val == '-') or val == 'cplx':
            return Const(self.number())
        if kind != 'name':
            raise ParseError(f"unexpected token '{val or '<end>'}'")
        self.take()
        if val == 'z':
            return Var()
        if val == 'add':
            return add(*self.args())
        if val == 'mul':
            return mul(*self.args())
        if val == 'sub':
            a, b = self.args()
            return add(a, mul(Const(-1 + 0j), b))
        if val == 'pow':
            self.take('(')
            base = self.expr()
            self.take(',')
            n = self.number()
            self.take(')')
            if n.imag or not float(n.real).is_integer():
                raise ParseError("pow exponent must be an integer")
            return power(base, int(n.real))
        if val == 'exp':
            self.take('(')
            if self.peek() == ('op', '-'):
                self.take()
                coef = -1.0
                if self.peek()[0] == 'num':
                    coef = -self.number().real
            else:
                coef = self.number().real
            if self.peek()[1] == '*':
                self.take('*')
            self.take('z')
            self.take(')')
            if coef > 0:
                raise ParseError("exp(c z) with c > 0 is unbounded on right half-planes")
            return Exp(-coef) if coef else Const(1 + 0j)
        if val == 'rpow':
            self.take('(')
            c = self.linear_shift()
            self.take(',')
            p = self.number()
            self.take(')')
            return RPow(-c, -p)
        if val == 'shift':
            self.take('(')
            inner = self.expr()
            self.take(',')
            eps = self.number()
            self.take(')')
            return Shift(inner, eps)
        raise ParseError(f"unknown function '{val}'")


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    e = p.expr()
    if p.pos != len(p.tokens):
        raise ParseError(f"trailing input after expression: '{p.peek()[1]}'")
    return e


def parse_function(text: str, abscissa: float = 0.0) -> HalfPlaneFunction:
    """예: parse_function('mul(exp(-1 z), rpow(add(z,1), -0.5))')"""
    return HalfPlaneFunction(parse_expr(text), abscissa)


# ---------------------------------------------------------------------------
# 카탈로그
# ---------------------------------------------------------------------------

CATALOG_SOURCES = {
    'one': '1',
    'exp': 'exp(-1 z)',
    'resolvent': 'rpow(add(z, 1), -1)',
    'exp_resolvent': 'mul(exp(-1 z), rpow(add(z, 1), -1))',
    'sqrt_resolvent': 'rpow(add(z, 1), -0.5)',
    'rational': 'mul(rpow(add(z, 1), -1), rpow(add(z, 2), -1))',
    'double_pole': 'mul(2, rpow(add(z, 1), -2))',
    'two_delays': 'mul(0.5, add(exp(-0.5 z), exp(-2 z)))',
    'damped': 'mul(exp(-0.5 z), rpow(add(z, 2), -1.5))',
    'mixed': 'add(mul(exp(-1 z), rpow(add(z, 2), -0.5)), mul(0.5, rpow(add(z, 3), -2)))',
    'ratio': 'mul(z, rpow(add(z, 1), -2))',
}


def catalog(abscissa: float = -0.5) -> Dict[str, HalfPlaneFunction]:
    """실험/테스트용 예제 함수 (모든 특이점은 Re z <= -1)"""
    return {name: parse_function(src, abscissa) for name, src in CATALOG_SOURCES.items()}

"""
calculus.py - Hille-Phillips 함수 미적분
Hille-Phillips 함수 미적분 실험 시스템

T_μ = ∫ T(t) μ(dt), 라플라스 인식 경로와 정칙화 경로의 f(A),
f(A)T(τ), f(A)(A-λ)^{-α}, f^{(m)}(A), 근사열 수렴 검사.
"""

from dataclasses import dataclass, field
from math import factorial
from typing import Any, Dict, List, Sequence
import logging
import math

import numpy as np
from scipy.special import gamma

from .errors import ConvergenceError, DivergenceError, DomainError, RecognitionError
from .measures import WeightedMeasure, tail_estimate, tv_norm
from .numerics import simpson_weights
from .operator_core import (OperatorModel, certify_type, fractional_resolvent_power,
                            operator_norm, semigroup_at, semigroup_path,
                            spectral_oracle)
from .symbols import (Const, Exp, HalfPlaneFunction, RPow, is_laplace_recognized,
                      laplace_measure, mul, paley_wiener_factor, rpow)

logger = logging.getLogger(__name__)

PATH_CHUNK = 4096
ROUTE_CHECK_TOL = 1e-6
SMOOTHING_CHECK_TOL = 1e-5


@dataclass
class CalculusResult:
    """f(A) 계산 결과와 경로 진단"""
    matrix: np.ndarray
    route: str
    quad_report: Dict[str, Any] = field(default_factory=dict)
    norm_value: float = 0.0

    def __post_init__(self):
        if not self.norm_value:
            self.norm_value = operator_norm(self.matrix)


def _grid_integral(op: OperatorModel, values: np.ndarray, start: float, step: float) -> np.ndarray:
    """∫ T(t) g(t) dt, 균일 격자 심프슨"""
    n = values.size
    weights = simpson_weights(n, step) * values
    out = np.zeros((op.dim, op.dim), dtype=complex)
    for lo in range(0, n, PATH_CHUNK):
        hi = min(lo + PATH_CHUNK, n)
        times = start + step * np.arange(lo, hi)
        out += np.tensordot(weights[lo:hi], semigroup_path(op, times), axes=(0, 0))
    return out


def _check_grid_tail(op: OperatorModel, mu: WeightedMeasure, tol: float) -> None:
    d = mu.density
    if d is None or not d.truncated:
        return
    n = d.values.size
    idx = np.unique(np.linspace(int(0.8 * n), n - 1, 64).astype(int))
    norms = np.array([operator_norm(semigroup_at(op, float(t))) for t in d.nodes[idx]])
    weighted = np.abs(d.values[idx]) * norms
    span = d.step * (idx[-1] - idx[0]) / max(idx.size - 1, 1)
    scale = float(np.abs(d.values).max()) * float(norms.max())
    tail = tail_estimate(weighted, span, floor=1e-13 * scale)
    if tail > tol:
        raise DivergenceError(
            f"∫‖T(t)‖|g(t)|dt tail ≈ {tail:.3e} beyond t={d.end:g}; not absolutely convergent")


def apply_measure(op: OperatorModel, mu: WeightedMeasure, tol: float = 1e-10) -> CalculusResult:
    """
    T_μ = ∫₀^∞ T(t) μ(dt)

    원자는 Σ a T(t), 감마 커널은 c T(s₀)(A-λ)^{-α}, 격자 밀도는 연산자값 구적.

    Raises:
        DivergenceError: 절대수렴 꼬리 검사 실패
    """
    n = op.dim
    out = np.zeros((n, n), dtype=complex)
    for t, a in mu.atoms:
        out += a * semigroup_at(op, t)
    omega0 = op.half_plane_type
    for k in mu.kernels:
        if np.real(k.lam) >= omega0:
            raise DivergenceError(
                f"kernel rate Re λ={np.real(k.lam):g} is not below ω₀={omega0:g}; T_μ diverges")
        power = fractional_resolvent_power(op, k.lam, k.alpha, tol=tol, check=False)
        out += k.coef * semigroup_at(op, k.start) @ power
    report: Dict[str, Any] = {'atoms': len(mu.atoms), 'kernels': len(mu.kernels)}
    if mu.density is not None:
        _check_grid_tail(op, mu, max(tol, 1e-8))
        d = mu.density
        out += _grid_integral(op, d.values, d.start, d.step)
        report.update(grid_nodes=int(d.values.size), grid_step=d.step)
    return CalculusResult(out, 'primary', report)


def _check_admissible(op: OperatorModel, f: HalfPlaneFunction) -> None:
    if f.abscissa >= op.half_plane_type:
        raise DomainError(
            f"f is only given on R_{f.abscissa:g}, which does not contain σ(A) "
            f"(ω₀={op.half_plane_type:g})")
    if not f.is_bounded:
        raise RecognitionError(f"{f} is not bounded on its half-plane; no calculus route applies")


def _regularized(op: OperatorModel, f: HalfPlaneFunction, tol: float) -> CalculusResult:
    omega = f.abscissa
    lam = omega - 1.0
    h = HalfPlaneFunction(mul(f.expr, RPow(complex(lam), 1 + 0j)), omega)
    report: Dict[str, Any] = {'lambda': lam}
    if is_laplace_recognized(h):
        H = apply_measure(op, laplace_measure(h), tol).matrix
        report['h_route'] = 'laplace'
    else:
        # h(A) = h̃(A - ω), h̃(z) = h(z + ω) 는 R_0 에서 유계
        shifted_op = OperatorModel.shifted(op, -omega)
        omega0 = 0.5
        factor = paley_wiener_factor(f.shift(omega), 1.0, lam - omega, omega0)
        H = apply_measure(shifted_op, factor.reweight(omega0), tol).matrix
        report['h_route'] = 'paley-wiener'
    matrix = (op.matrix - lam * np.eye(op.dim)) @ H
    return CalculusResult(matrix, 'regularized', report)


def apply_function(op: OperatorModel, f: HalfPlaneFunction, route: str = 'auto',
                   tol: float = 1e-10, cross_check: bool = True) -> CalculusResult:
    """
    f(A)

    route='auto' 이면 라플라스 인식 시 primary, 아니면 (z-λ)^{-1} 정칙화 경로.
    결과는 스펙트럴 오라클과 대조해 quad_report['oracle_gap'] 에 남긴다.

    Raises:
        RecognitionError: 어떤 경로도 적용할 수 없을 때
    """
    if route not in ('auto', 'primary', 'regularized', 'oracle'):
        raise DomainError(f"unknown route '{route}'")
    _check_admissible(op, f)
    if route == 'oracle':
        return CalculusResult(spectral_oracle(op, f), 'spectral-oracle', {})

    if route in ('auto', 'primary') and is_laplace_recognized(f):
        result = apply_measure(op, laplace_measure(f), tol)
    elif route == 'primary':
        raise RecognitionError(f"{f} is not a recognized Laplace transform")
    else:
        result = _regularized(op, f, tol)

    if cross_check:
        oracle = spectral_oracle(op, f)
        gap = operator_norm(result.matrix - oracle) / (1.0 + operator_norm(oracle))
        result.quad_report['oracle_gap'] = gap
        if gap > ROUTE_CHECK_TOL:
            logger.warning(f"{result.route} route and spectral oracle differ by {gap:.3e} for {f}")
    return result


def apply_with_semigroup(op: OperatorModel, f: HalfPlaneFunction, tau: float,
                         **kwargs) -> CalculusResult:
    """f(A)T(τ) = (e_{-τ}f)(A)"""
    if tau < 0:
        raise DomainError("τ must be nonnegative")
    g = HalfPlaneFunction(mul(Exp(float(tau)), f.expr), f.abscissa)
    return apply_function(op, g, **kwargs)


def apply_smoothed(op: OperatorModel, f: HalfPlaneFunction, lam: complex, alpha: complex,
                   tol: float = 1e-10, strict: bool = True) -> CalculusResult:
    """
    f(A)(A-λ)^{-α} = 1/Γ(α) ∫₀^∞ t^{α-1} e^{λt} f(A)T(t) dt

    f(A)T(t) = (e_{-t}f)(A) 이므로 f(A)를 적분 밖으로 빼고 반군 부분만 구적한다.
    결과는 (f·(z-λ)^{-α})(A) 의 스펙트럴 오라클과 대조한다.

    Args:
        strict: True 이면 오라클 차이가 SMOOTHING_CHECK_TOL 을 넘을 때 예외,
            False 이면 quad_report['passed'] 에만 남긴다

    Raises:
        DomainError: Re α <= 0
        DivergenceError: Re λ >= ω₀
        ConvergenceError: strict 이고 오라클과 어긋날 때
    """
    alpha = complex(alpha)
    if alpha.real <= 0:
        raise DomainError(f"smoothing needs Re α > 0, got α={alpha}")
    if np.real(lam) >= op.half_plane_type:
        raise DivergenceError(f"Re λ={np.real(lam):g} is not below ω₀={op.half_plane_type:g}")
    F = apply_function(op, f, tol=tol, cross_check=False)
    power = fractional_resolvent_power(op, lam, alpha, tol=tol, check=False)
    matrix = F.matrix @ power

    target = f * rpow(lam, alpha)
    oracle = spectral_oracle(op, target)
    gap = operator_norm(matrix - oracle) / (1.0 + operator_norm(oracle))
    passed = gap <= SMOOTHING_CHECK_TOL
    report = {'f_route': F.route, 'oracle_gap': gap, 'passed': passed}
    if not passed:
        message = f"smoothed route differs from oracle by {gap:.3e} (α={alpha})"
        if strict:
            raise ConvergenceError(message, report=report)
        logger.warning(message)
    return CalculusResult(matrix, F.route, report)


def apply_derivative(op: OperatorModel, f: HalfPlaneFunction, m: int = 1,
                     tol: float = 1e-10) -> CalculusResult:
    """
    f^{(m)}(A): 기호 미분 경로, 라플라스 인식 시 모멘트 경로 T_{(-t)^m μ} 로 대조
    """
    if m < 1:
        raise DomainError("derivative order must be positive")
    result = apply_function(op, f.derivative(m), tol=tol)
    result.quad_report['symbolic_route'] = result.route
    if is_laplace_recognized(f):
        mu = laplace_measure(f).moment(m).scaled((-1) ** m)
        via_moment = apply_measure(op, mu, tol).matrix
        gap = operator_norm(via_moment - result.matrix) / (1.0 + result.norm_value)
        result.quad_report['moment_gap'] = gap
        if gap > 1e-8:
            logger.warning(f"moment and symbolic derivative routes differ by {gap:.3e}")
    return result


@dataclass
class ConvergenceReport:
    """f_{k,ε}(A) → f(A) 표"""
    table: List[Dict[str, float]]
    diagonal: List[float]
    monotone: bool
    final_error: float
    reference_norm: float
    sup_norm: float
    uniform_bound: float
    bound_ok: bool
    passed: bool


def approximant(f: HalfPlaneFunction, k: float, eps: float) -> HalfPlaneFunction:
    """f_{k,ε}(z) = f(z+ε) g_k(z+ε), g_k(z) = k/(z-ω+k)"""
    omega = f.abscissa
    shifted = f.shift(eps)
    g = mul(Const(complex(k)), RPow(complex(omega - k - eps), 1 + 0j))
    return HalfPlaneFunction(mul(shifted.expr, g), omega)


def convergence_limit(op: OperatorModel, f: HalfPlaneFunction,
                      k_grid: Sequence[float], eps_grid: Sequence[float],
                      rel_tol: float = 1e-2, tol: float = 1e-8) -> ConvergenceReport:
    """
    ‖f_{k,ε}(A) - f(A)‖ 를 (k, ε) 격자에 표로 만들고 대각선 단조 감소와
    최종 오차 <= rel_tol·‖f(A)‖ 를 확인한다.

    f = μ̂ 로 인식되면 근사열 전체의 균일 상한 M·‖e_{-ω}μ‖_TV
    (M = sup_t ‖T(t)‖e^{ωt}) 과 sup_{k,ε} ‖f_{k,ε}(A)‖ 를 비교한다.
    인식되지 않으면 상한은 NaN 이고 bound_ok 는 검사하지 않는다.
    """
    ks = sorted(float(k) for k in k_grid)
    epss = sorted((float(e) for e in eps_grid), reverse=True)
    if not ks or not epss:
        raise DomainError("k and ε grids must be nonempty")
    reference = apply_function(op, f, tol=tol, cross_check=False)
    if is_laplace_recognized(f):
        bound = certify_type(op, -f.abscissa).M * tv_norm(laplace_measure(f))
    else:
        bound = math.nan
        logger.debug(f"{f} is not a recognized Laplace transform; no uniform bound")

    table = []
    errors = {}
    for k in ks:
        for eps in epss:
            approx = apply_function(op, approximant(f, k, eps), tol=tol, cross_check=False)
            err = operator_norm(approx.matrix - reference.matrix)
            errors[(k, eps)] = err
            table.append({'k': k, 'eps': eps, 'error': err, 'norm': approx.norm_value, 'bound': bound})
            logger.debug(f"f_(k={k:g}, ε={eps:g}): error {err:.3e}")

    sup_norm_value = max(row['norm'] for row in table)
    bound_ok = math.isnan(bound) or sup_norm_value <= bound + tol
    diagonal = [errors[(k, e)] for k, e in zip(ks, epss)]
    monotone = all(b <= a * (1 + 1e-9) + tol for a, b in zip(diagonal, diagonal[1:]))
    final = errors[(ks[-1], epss[-1])]
    passed = monotone and final <= rel_tol * max(reference.norm_value, tol) and bound_ok
    return ConvergenceReport(table, diagonal, monotone, final, reference.norm_value,
                             sup_norm_value, bound, bound_ok, passed)


def iterated_derivative_constant(n: int, omega: float, omega0: float, M: float) -> float:
    """
    ‖f^{(n)}(A)‖ <= C ‖f‖_{H∞(R_ω)} 의 p=2 상수

    β = (ω+ω₀)/2 에서 코시 선적분으로 f^{(n-1)} 을 R_β 위에서 누르고
    1계 미분 전이 한계 M²/(2(ω₀-β)) 를 곱한다.
    """
    if n < 1:
        raise DomainError("n must be positive")
    if not omega < omega0:
        raise DomainError("need ω < ω₀")
    if n == 1:
        return M * M / (2 * (omega0 - omega))
    beta = 0.5 * (omega + omega0)
    line = (factorial(n - 1) / (2 * math.pi) * math.sqrt(math.pi)
            * gamma((n - 1) / 2) / gamma(n / 2) * (beta - omega) ** (1 - n))
    return M * M / (2 * (omega0 - beta)) * line

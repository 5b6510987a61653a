"""
eta.py - 합성곱 인수분해 상수 η(α, t, q) 의 상한 인증서와 해석적 하한
Hille-Phillips 함수 미적분 실험 시스템

η(α,t,q) = inf ‖ψ‖_q ‖φ‖_{q'}  (ψ∗φ = e_{−α} on [t, ∞)).
모든 구성은 척도 불변성 η(α,t,q) = η(αt,1,q) 를 이용해 t=1 좌표
(a = αt)에서 만든 뒤 원래 좌표로 되돌린다.
"""

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple
import logging
import math

import numpy as np
from scipy.integrate import quad
from scipy.signal import fftconvolve, lfilter
from scipy.special import exp1, gamma

from .errors import (ConvergenceError, DomainError, ParseError, RegimeError,
                     TruncationError)

logger = logging.getLogger(__name__)

VERIFY_SPAN = 30.0
RESIDUAL_TOL = 1e-8
TAIL_REL = 1e-3
MAX_TERMS = 10_000_000
SUBSTITUTION_CHECK = 2000
FAST_TERMS = 4096
STALL_REL = 1e-4


def conjugate(q: float) -> float:
    """횔더 켤레 지수 q' (1/q + 1/q' = 1)"""
    if q < 1:
        raise DomainError(f"q={q} < 1")
    if q == 1:
        return math.inf
    if math.isinf(q):
        return 1.0
    return q / (q - 1.0)


def _check_args(alpha: float, t: float, q: float):
    if not (alpha > 0 and t > 0):
        raise DomainError(f"α={alpha}, t={t}: both must be positive")
    if q < 1:
        raise DomainError(f"q={q} outside [1, ∞]")


@dataclass(frozen=True, eq=False)
class FactorFunction:
    """
    조각별 지수함수 Σ c_i e^{r_i s} 1_{[s_i, e_i)}(s) on R+

    조각들은 서로 겹치지 않고 시작점 순으로 정렬되어 있다.
    """
    coef: np.ndarray
    rate: np.ndarray
    start: np.ndarray
    end: np.ndarray

    def __post_init__(self):
        arrays = [np.atleast_1d(np.asarray(x, dtype=float))
                  for x in (self.coef, self.rate, self.start, self.end)]
        if len({a.size for a in arrays}) != 1:
            raise DomainError("piece arrays must have equal length")
        if np.any(arrays[3] <= arrays[2]):
            raise DomainError("every piece needs start < end")
        if np.any(arrays[2][1:] < arrays[3][:-1]):
            raise DomainError("pieces must be sorted and disjoint")
        for name, a in zip(('coef', 'rate', 'start', 'end'), arrays):
            object.__setattr__(self, name, a)

    @classmethod
    def piece(cls, coef: float, rate: float, start: float, end: float) -> 'FactorFunction':
        return cls([coef], [rate], [start], [end])

    @classmethod
    def unit_steps(cls, heights: np.ndarray, rate: float) -> 'FactorFunction':
        """Σ_j h_j e^{rate·s} 1_{[j, j+1)}"""
        heights = np.asarray(heights, dtype=float)
        j = np.arange(heights.size, dtype=float)
        return cls(heights, np.full(heights.size, rate), j, j + 1.0)

    @property
    def n_pieces(self) -> int:
        return int(self.coef.size)

    def _power_integrals(self, p: float) -> np.ndarray:
        r = p * self.rate
        with np.errstate(over='ignore', invalid='ignore'):
            upper = np.where(np.isinf(self.end), 0.0,
                             np.exp(r * np.where(np.isinf(self.end), 0.0, self.end)))
            lower = np.exp(r * self.start)
            flat = np.abs(r) < 1e-300
            span = np.where(flat, self.end - self.start, (upper - lower) / np.where(flat, 1.0, r))
        if np.any(np.isinf(self.end) & (self.rate >= 0) & (self.coef != 0)):
            return np.full(self.n_pieces, np.inf)
        return np.abs(self.coef) ** p * span

    def norm(self, p: float) -> float:
        """L^p(R+) 노름 (닫힌 형태)"""
        if math.isinf(p):
            at_start = np.abs(self.coef) * np.exp(self.rate * self.start)
            with np.errstate(over='ignore'):
                at_end = np.where(np.isinf(self.end),
                                  np.where(self.rate > 0, np.inf, 0.0),
                                  np.abs(self.coef) * np.exp(self.rate * np.where(np.isinf(self.end), 0.0, self.end)))
            return float(np.max(np.maximum(at_start, at_end)))
        return float(np.sum(self._power_integrals(p)) ** (1.0 / p))

    def evaluate(self, s) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        idx = np.searchsorted(self.start, s, side='right') - 1
        safe = np.clip(idx, 0, self.n_pieces - 1)
        inside = (idx >= 0) & (s < self.end[safe])
        return np.where(inside, self.coef[safe] * np.exp(self.rate[safe] * s), 0.0)

    def rescale(self, t: float, p: float) -> 'FactorFunction':
        """ψ_t(s) = t^{−1/p} ψ(s/t)  (‖ψ_t‖_p = ‖ψ‖_p)"""
        factor = 1.0 if math.isinf(p) else t ** (-1.0 / p)
        return FactorFunction(self.coef * factor, self.rate / t,
                              self.start * t, self.end * t)

    def convolve_at(self, other: 'FactorFunction', r, chunk: int = 256) -> np.ndarray:
        """(self ∗ other)(r) 를 조각쌍 닫힌 적분으로 계산 (작은 조각 수 전용)"""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        c1, a1, s1, e1 = (x[None, :, None] for x in (self.coef, self.rate, self.start, self.end))
        c2, a2, s2, e2 = (x[None, None, :] for x in (other.coef, other.rate, other.start, other.end))
        out = np.empty(r.size)
        for i in range(0, r.size, chunk):
            rr = r[i:i + chunk, None, None]
            lo = np.maximum(s1, rr - e2)
            hi = np.minimum(e1, rr - s2)
            valid = hi > lo
            lo = np.where(valid, lo, 0.0)
            hi = np.where(valid, hi, 0.0)
            d = a1 - a2
            flat = np.abs(d) < 1e-14
            # ∫_lo^hi e^{a1 s} e^{a2 (r−s)} ds
            with np.errstate(over='ignore', invalid='ignore'):
                top = np.exp(a1 * hi + a2 * (rr - hi))
                bottom = np.exp(a1 * lo + a2 * (rr - lo))
                val = np.where(flat, np.exp(a2 * rr) * (hi - lo),
                               (top - bottom) / np.where(flat, 1.0, d))
            out[i:i + chunk] = np.sum(np.where(valid, c1 * c2 * val, 0.0), axis=(1, 2))
        return out


@dataclass(frozen=True, eq=False)
class FactorizationCertificate:
    """ψ∗φ = e_{−α} on [t, ∞) 를 만족하는 쌍과 그 값 ‖ψ‖_q‖φ‖_{q'}"""
    kind: str
    psi: FactorFunction
    phi: FactorFunction
    q: float
    alpha: float
    t: float
    value: float
    residual: float
    heights: Optional[np.ndarray] = None
    notes: Dict[str, float] = field(default_factory=dict)

    @property
    def scaled_alpha(self) -> float:
        return self.alpha * self.t

    def rescaled(self, s: float) -> 'FactorizationCertificate':
        """(α, t) → (α/s, t·s) 로 옮긴 인증서. 값은 노름에서 다시 계산한다."""
        psi = self.psi.rescale(s, self.q)
        phi = self.phi.rescale(s, conjugate(self.q))
        value = psi.norm(self.q) * phi.norm(conjugate(self.q))
        return replace(self, psi=psi, phi=phi, alpha=self.alpha / s, t=self.t * s, value=value)


@dataclass(frozen=True)
class LowerBound:
    value: float
    source: str
    log_term: float
    exp_term: float


@dataclass(frozen=True)
class EtaEnvelope:
    upper: float
    lower: float
    lower_source: str
    regime: str
    best_kind: str


def regime(alpha: float, t: float, q: float) -> str:
    """αt <= min(1/q, 1/q') 이면 'log', 아니면 'exponential'"""
    a = alpha * t
    threshold = min(1.0 / q, 1.0 / conjugate(q)) if 1 < q < math.inf else 0.0
    return 'log' if a <= threshold else 'exponential'


def _finish(kind: str, psi_unit: FactorFunction, phi_unit: FactorFunction,
            alpha: float, t: float, q: float, residual: float,
            heights: Optional[np.ndarray] = None, **notes) -> FactorizationCertificate:
    a = alpha * t
    if residual > RESIDUAL_TOL * math.exp(-a):
        raise ConvergenceError(
            f"{kind} certificate residual {residual:.3e} exceeds {RESIDUAL_TOL:g}·e^(-αt)",
            report={'residual': residual, 'alpha': alpha, 't': t, 'q': q})
    qc = conjugate(q)
    psi = psi_unit.rescale(t, q)
    phi = phi_unit.rescale(t, qc)
    value = psi.norm(q) * phi.norm(qc)
    logger.debug(f"{kind} certificate α={alpha:g} t={t:g} q={q:g}: value={value:.6g} residual={residual:.2e}")
    return FactorizationCertificate(kind, psi, phi, q, alpha, t, value, residual,
                                    heights, dict(notes))


def _pairwise_residual(psi: FactorFunction, phi: FactorFunction, a: float,
                       n_nodes: int = 2001) -> float:
    nodes = np.linspace(1.0, 1.0 + VERIFY_SPAN / a, n_nodes)
    return float(np.max(np.abs(psi.convolve_at(phi, nodes) - np.exp(-a * nodes))))


def _unit_step_residual(x: np.ndarray, y: np.ndarray, a: float) -> Tuple[float, float]:
    """
    단위 계단 쌍의 잔차

    ψ0∗φ0 는 정수점 사이에서 선형이고 정수점 n 에서 c_{n−1} (c = x∗y) 값을 가진다.

    Returns:
        ([1, 1+30/a] 위 최대 잔차, [0,1) 램프 편차)
    """
    n_max = int(math.ceil(1.0 + VERIFY_SPAN / a))
    if min(x.size, y.size) < n_max + 1:
        raise TruncationError(f"step pair has {min(x.size, y.size)} terms, needs {n_max + 1}")
    c = fftconvolve(x[:n_max + 1], y[:n_max + 1])[:n_max + 1]
    dev = np.abs(c - 1.0)
    n = np.arange(1, n_max)
    residual = float(np.max(np.maximum(dev[n - 1], dev[n]) * np.exp(-a * n))) if n.size else 0.0
    return residual, float(dev[0])


def _weighted_power_sum(c: np.ndarray, a: float, p: float) -> float:
    """Σ_j |c_j|^p ∫_j^{j+1} e^{−a p s} ds"""
    j = np.arange(c.size)
    with np.errstate(over='ignore', invalid='ignore'):
        terms = np.abs(c) ** p * np.exp(-a * p * j)
    return float(np.sum(terms) * -math.expm1(-a * p) / (a * p))


def trivial_certificate(alpha: float, t: float, q: float) -> FactorizationCertificate:
    """ψ = 1_{[0,t]}e_{−α}, φ = (1/t)e_{−α}"""
    _check_args(alpha, t, q)
    a = alpha * t
    psi = FactorFunction.piece(1.0, -a, 0.0, 1.0)
    phi = FactorFunction.piece(1.0, -a, 0.0, math.inf)
    residual = _pairwise_residual(psi, phi, a)
    return _finish('trivial', psi, phi, alpha, t, q, residual, heights=np.array([1.0]))


def exponential_certificate(alpha: float, t: float, q: float) -> FactorizationCertificate:
    """
    φ = 1_{[0,1]}e_{a(q−1)}, ψ = (aq/(e^{aq}−1)) e_{−a}, 값 (e^{aq}−1)^{−1/q}

    a <= 1/q 이면 (q' 쪽에서 만들고 ψ, φ 를 바꾼다).

    Raises:
        RegimeError: αt <= min(1/q, 1/q')
    """
    _check_args(alpha, t, q)
    a = alpha * t
    qc = conjugate(q)
    if a <= min(1.0 / q, 1.0 / qc):
        raise RegimeError(f"αt={a:g} is in the log regime for q={q:g}")
    swap = a <= 1.0 / q
    p = qc if swap else q
    if math.isinf(p):
        raise RegimeError("exponential construction needs a finite exponent")
    k = a * p / math.expm1(a * p)
    decay = FactorFunction.piece(k, -a, 0.0, math.inf)
    window = FactorFunction.piece(1.0, a * (p - 1.0), 0.0, 1.0)
    psi, phi = (window, decay) if swap else (decay, window)
    residual = _pairwise_residual(psi, phi, a)
    return _finish('exponential', psi, phi, alpha, t, q, residual,
                   heights=np.full(2, k) if not swap else None,
                   swapped=float(swap), closed_form=math.expm1(a * p) ** (-1.0 / p))


def _binomial_series(g: float, n: int) -> np.ndarray:
    """(1−x)^{−g} 의 계수: b_0 = 1, b_j = b_{j−1}(j−1+g)/j"""
    out = np.ones(n)
    if n > 1:
        j = np.arange(1, n, dtype=float)
        out[1:] = np.cumprod((j - 1.0 + g) / j)
    return out


def _series_tail(c_last: float, n: int, a: float, p: float) -> float:
    # c_j^p ~ C/j 이므로 Σ_{j>=n} c_j^p e^{−apj} ≈ c_n^p n E1(ap(n−1/2))
    return float(c_last ** p * n * exp1(a * p * (n - 0.5)) * -math.expm1(-a * p) / (a * p))


def _log_terms(a: float, q: float) -> int:
    qc = conjugate(q)
    n = int(math.ceil(1.0 + VERIFY_SPAN / a)) + 2
    while True:
        if n > MAX_TERMS:
            raise TruncationError(f"log construction needs more than {MAX_TERMS} terms at αt={a:g}")
        ok = True
        for g, p in ((1.0 / qc, q), (1.0 / q, qc)):
            c = _binomial_series(g, n)
            total = _weighted_power_sum(c, a, p)
            if _series_tail(c[-1], n, a, p) > TAIL_REL * total:
                ok = False
        if ok:
            return n
        n *= 2


def log_certificate(alpha: float, t: float, q: float) -> FactorizationCertificate:
    """
    계단함수 쌍 ψ = e_{−a}ψ0, φ = e_{−a}φ0 (로그 영역)

    ψ0 의 계수는 (1−x)^{−1/q'}, φ0 의 계수는 (1−x)^{−1/q} 의 멱급수 계수이다.
    두 급수의 곱이 1/(1−x) 이므로 ψ0∗φ0 는 [0,1) 에서 s, 그 뒤로 1 이 된다.
    앞쪽 계수는 삼각 합성곱 연립식의 전진 대입 해와 맞는지 확인한다.

    Raises:
        RegimeError: αt > min(1/q, 1/q')
        TruncationError: 필요한 항 수가 상한을 넘을 때
    """
    _check_args(alpha, t, q)
    if not 1 < q < math.inf:
        raise RegimeError(f"log construction needs q in (1, ∞), got {q}")
    a = alpha * t
    qc = conjugate(q)
    if a > min(1.0 / q, 1.0 / qc):
        raise RegimeError(f"αt={a:g} is above the log threshold {min(1.0 / q, 1.0 / qc):g}")

    n = _log_terms(a, q)
    x = _binomial_series(1.0 / qc, n)
    y = _binomial_series(1.0 / q, n)

    m = min(n, SUBSTITUTION_CHECK)
    solved = lfilter([1.0], x[:m], np.ones(m))
    gap = float(np.max(np.abs(solved - y[:m])))
    if gap > 1e-10:
        raise ConvergenceError(f"forward substitution disagrees with the series by {gap:.2e}",
                               report={'gap': gap})

    residual, ramp = _unit_step_residual(x, y, a)
    psi = FactorFunction.unit_steps(x, -a)
    phi = FactorFunction.unit_steps(y, -a)
    cert = _finish('log', psi, phi, alpha, t, q, residual, heights=x,
                   terms=float(n), ramp_deviation=ramp)
    return replace(cert, notes=dict(cert.notes, log_constant=cert.value / abs(math.log(a))))


def lower_bound(alpha: float, t: float, q: float) -> LowerBound:
    """
    max( sin(π/q)/(eπ)·|log αt| , e^{−αt} )

    로그 항은 αt < 1 에서만 쓴다.
    """
    _check_args(alpha, t, q)
    a = alpha * t
    log_term = 0.0
    if a < 1 and 1 < q < math.inf:
        log_term = math.sin(math.pi / q) / (math.e * math.pi) * abs(math.log(a))
    exp_term = math.exp(-a)
    if log_term > exp_term:
        return LowerBound(log_term, 'log', log_term, exp_term)
    return LowerBound(exp_term, 'exponential', log_term, exp_term)


def _trivial_value(a: float, q: float) -> float:
    qc = conjugate(q)
    left = 1.0 if math.isinf(q) else (-math.expm1(-a * q) / (a * q)) ** (1.0 / q)
    right = 1.0 if math.isinf(qc) else (1.0 / (a * qc)) ** (1.0 / qc)
    return left * right


def _log_value(a: float, q: float) -> float:
    qc = conjugate(q)
    out = 1.0
    for g, p in ((1.0 / qc, q), (1.0 / q, qc)):
        c = _binomial_series(g, FAST_TERMS)
        total = _weighted_power_sum(c, a, p) + _series_tail(c[-1], FAST_TERMS, a, p)
        out *= total ** (1.0 / p)
    return out


def eta_upper(alpha: float, t: float, q: float) -> float:
    """세 구성(양 방향)의 최솟값. 로그 구성은 정확한 부분합 + E1 꼬리로 빠르게 계산"""
    _check_args(alpha, t, q)
    a = alpha * t
    qc = conjugate(q)
    values = [_trivial_value(a, q), _trivial_value(a, qc)]
    for p in (q, qc):
        if not math.isinf(p) and a > 1.0 / p:
            values.append(math.expm1(a * p) ** (-1.0 / p))
    if 1 < q < math.inf and a <= min(1.0 / q, 1.0 / qc):
        values.append(_log_value(a, q))
    return float(min(values))


def _swap(cert: FactorizationCertificate) -> FactorizationCertificate:
    """q' 인증서를 q 인증서로 (ψ, φ 교환)"""
    return replace(cert, psi=cert.phi, phi=cert.psi, q=conjugate(cert.q), heights=None)


def certificates(alpha: float, t: float, q: float) -> List[FactorizationCertificate]:
    """(α,t,q) 에 적용 가능한 모든 명시적 인증서 (q' 쪽에서 만든 것도 교환해서 포함)"""
    qc = conjugate(q)
    out = [trivial_certificate(alpha, t, q), _swap(trivial_certificate(alpha, t, qc))]
    for p in (q, qc):
        if math.isinf(p) or alpha * t <= 1.0 / p:
            continue
        cert = exponential_certificate(alpha, t, p)
        out.append(cert if p == q else _swap(cert))
    if regime(alpha, t, q) == 'log':
        out.append(log_certificate(alpha, t, q))
    return out


def eta_envelope(alpha: float, t: float, q: float,
                 refine_budget: int = 0) -> EtaEnvelope:
    """상한(최선의 인증서)과 하한(해석적 공식)을 함께 보고"""
    certs = certificates(alpha, t, q)
    best = min(certs, key=lambda c: c.value)
    if refine_budget > 0:
        best = refine_certificate(best, refine_budget)
    low = lower_bound(alpha, t, q)
    return EtaEnvelope(best.value, low.value, low.source, regime(alpha, t, q), best.kind)


def _series_reciprocal(x: np.ndarray, n: int) -> np.ndarray:
    """1/X(w) 의 처음 n 개 계수 (FFT 곱을 쓰는 뉴턴 반복)"""
    g = np.array([1.0 / x[0]])
    k = 1
    while k < n:
        k = min(2 * k, n)
        xg = fftconvolve(x[:k], g)[:k]
        correction = fftconvolve(g, xg)[:k]
        g = 2.0 * np.concatenate([g, np.zeros(k - g.size)]) - correction
    return g[:n]


def _family_pair(heights: np.ndarray, a: float, q: float) -> Tuple[float, Optional[np.ndarray]]:
    qc = conjugate(q)
    n = heights.size
    with np.errstate(over='ignore', invalid='ignore'):
        y = np.cumsum(_series_reciprocal(heights, n))
    if not np.all(np.isfinite(y)):
        return math.inf, None
    sx = _weighted_power_sum(heights, a, q)
    sy = _weighted_power_sum(y, a, qc)
    with np.errstate(over='ignore'):
        dropped = abs(y[-1]) ** qc * math.exp(-a * qc * (n - 1)) / (a * qc)
    if not (np.isfinite(sy) and np.isfinite(sx)) or dropped > TAIL_REL * sy:
        return math.inf, None
    return sx ** (1.0 / q) * sy ** (1.0 / qc), y


def refine_certificate(seed: FactorizationCertificate, budget: int = 40,
                       n_heights: int = 12) -> FactorizationCertificate:
    """
    좌표 하강으로 인증서 값을 줄인다

    매개변수: ψ0 의 단위구간 높이 h_1..h_{U−1} (h_0 고정), 꼬리 배율, 지수 기울기.
    φ0 는 매번 ψ0 로부터 역급수(전진 대입)로 다시 풀기 때문에
    제약 ψ∗φ = e_{−a} on [1, ∞) 가 유지된다. 개선이 없으면 seed 를 그대로 돌려준다.

    Args:
        seed: 시작 인증서
        budget: 좌표 하강 스윕 횟수
        n_heights: 자유 높이 개수 U
    """
    q = seed.q
    if not 1 < q < math.inf:
        raise DomainError(f"refinement needs q in (1, ∞), got {q}")
    a = seed.scaled_alpha
    n = int(math.ceil(1.0 + VERIFY_SPAN / a)) + 2

    base = np.zeros(n)
    if seed.heights is not None:
        h = np.asarray(seed.heights, dtype=float)[:n]
        base[:h.size] = h
        if h.size < n and h.size > 1:
            base[h.size:] = h[-1]
    else:
        base[:] = 1.0
    base = base / base[0]
    u = min(n_heights, n - 1)
    tail_index = np.arange(n - u, dtype=float)

    def heights_of(p: np.ndarray) -> np.ndarray:
        x = base.copy()
        x[1:u] = p[:u - 1]
        x[u:] = base[u:] * p[u - 1] * np.exp(-p[u] * tail_index)
        return x

    params = np.concatenate([base[1:u], [1.0, 0.0]])
    start_value, _ = _family_pair(heights_of(params), a, q)
    best_value = min(start_value, seed.value)
    best_params = params.copy() if start_value <= seed.value else None
    steps = 0.25 * np.maximum(np.abs(params), 0.05)
    steps[-1] = 0.05 * a

    for sweep in range(budget):
        improved = False
        for i in range(params.size):
            for sign in (1.0, -1.0):
                trial = (best_params if best_params is not None else params).copy()
                trial[i] += sign * steps[i]
                value, _ = _family_pair(heights_of(trial), a, q)
                if value < best_value * (1.0 - 1e-12):
                    best_value, best_params = value, trial
                    improved = True
                    break
        if not improved:
            steps *= 0.5
        logger.debug(f"refine sweep {sweep + 1}/{budget}: value={best_value:.8g}")

    gain = (seed.value - best_value) / seed.value
    if best_params is None or gain < STALL_REL:
        logger.warning(f"refinement stalled at αt={a:g}, q={q:g}: gain {100 * gain:.4f}% "
                       f"after {budget} sweeps")
        notes = dict(seed.notes, stalled=1.0, improvement_pct=max(100 * gain, 0.0))
        if best_params is None:
            return replace(seed, notes=notes)

    x = heights_of(best_params)
    _, y = _family_pair(x, a, q)
    residual, ramp = _unit_step_residual(x, y, a)
    if residual > RESIDUAL_TOL * math.exp(-a):
        logger.warning(f"refined pair residual {residual:.2e} too large, keeping seed")
        return replace(seed, notes=dict(seed.notes, stalled=1.0, improvement_pct=0.0))
    cert = _finish('refined', FactorFunction.unit_steps(x, -a), FactorFunction.unit_steps(y, -a),
                   seed.alpha, seed.t, q, residual, heights=x,
                   ramp_deviation=ramp, seed_value=seed.value,
                   improvement_pct=100 * (seed.value - best_value) / seed.value,
                   stalled=float(gain < STALL_REL))
    if cert.value > seed.value:
        return replace(seed, notes=dict(seed.notes, stalled=1.0, improvement_pct=0.0))
    logger.info(f"refined η certificate: {seed.value:.6g} -> {cert.value:.6g} "
                f"({cert.notes['improvement_pct']:.3f}%)")
    return cert


def smoothing_constant(alpha: complex, lam: complex, omega: float) -> float:
    """
    C(α,λ,ω) = |Γ(α)|^{−1} ∫_0^∞ t^{Re α−1} e^{(Re λ+ω)t} η_upper(ω,t,2) dt

    ‖f(A)(A−λ)^{−α}‖ <= C·M²·‖f‖_{H∞(R_{−ω})} 의 상수.
    t = u^{1/Re α} 로 바꿔 원점 특이점을 없앤다.
    """
    a = float(np.real(alpha))
    if a <= 0:
        raise DomainError(f"Re α={a} must be positive")
    if omega <= 0:
        raise DomainError(f"ω={omega} must be positive")
    if np.real(lam) >= 0:
        raise DomainError(f"Re λ={np.real(lam)} must be negative")
    rate = float(np.real(lam)) + omega

    def integrand(u):
        if u <= 0:
            return 0.0
        t = u ** (1.0 / a)
        return math.exp(rate * t) * eta_upper(omega, t, 2.0) / a

    value, err = quad(integrand, 0.0, np.inf, limit=400)
    if err > 1e-6 * max(abs(value), 1.0):
        logger.warning(f"smoothing constant quadrature error {err:.2e}")
    return float(value / abs(gamma(alpha)))


def dumps_certificate(cert: FactorizationCertificate) -> str:
    lines = [f"certificate {cert.kind}",
             f"q {cert.q!r}", f"alpha {cert.alpha!r}", f"t {cert.t!r}",
             f"value {cert.value!r}", f"residual {cert.residual!r}"]
    for name, fn in (('psi', cert.psi), ('phi', cert.phi)):
        lines.append(f"{name} {fn.n_pieces}")
        for c, r, s, e in zip(fn.coef, fn.rate, fn.start, fn.end):
            lines.append(f"{c!r} {r!r} {s!r} {e!r}")
    return "\n".join(lines) + "\n"


def loads_certificate(text: str) -> FactorizationCertificate:
    """dumps_certificate 의 역. 저장된 값이 노름과 맞지 않으면 ParseError"""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith('#')]
    try:
        kind = lines[0].split()[1]
        header = {ln.split()[0]: float(ln.split()[1]) for ln in lines[1:6]}
        pos = 6
        parts = {}
        for name in ('psi', 'phi'):
            tag, count = lines[pos].split()
            if tag != name:
                raise ParseError(f"expected '{name}' section, got '{tag}'")
            rows = np.array([[float(v) for v in ln.split()]
                             for ln in lines[pos + 1:pos + 1 + int(count)]]).reshape(-1, 4)
            parts[name] = FactorFunction(*rows.T)
            pos += 1 + int(count)
    except (IndexError, ValueError) as e:
        raise ParseError(f"malformed certificate: {e}") from e
    q = header['q']
    value = parts['psi'].norm(q) * parts['phi'].norm(conjugate(q))
    if abs(value - header['value']) > 1e-9 * max(1.0, abs(value)):
        raise ParseError(f"stored value {header['value']!r} disagrees with norms {value!r}")
    return FactorizationCertificate(kind, parts['psi'], parts['phi'], q, header['alpha'],
                                    header['t'], value, header['residual'])

"""
transference.py - 전이(transference) 인수분해 검증
Hille-Phillips 함수 미적분 실험 시스템

T_μ = P ∘ L_{e_ω μ} ∘ ι 를 [−L, L] 위 엇갈린 격자 (k+1/2)h 에서 이산화한다.
ι(x)(s) = ψ(−s)T(−s)x (s <= 0), L_ν f = ν ∗ f, Pf = ∫₀^∞ φ(t)T(t)f(t)dt.
"""

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple
import logging
import math

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.signal import fftconvolve

from .calculus import PATH_CHUNK, apply_measure
from .errors import DomainError, SupportViolationError
from .eta import VERIFY_SPAN, FactorFunction, FactorizationCertificate, conjugate
from .measures import WeightedMeasure
from .operator_core import OperatorModel, certify_type, operator_norm, semigroup_path

logger = logging.getLogger(__name__)

NODES_PER_FOLD = 64
POWER_ITERATIONS = 200
POWER_RTOL = 1e-6
IDENTITY_RTOL = 1e-5


@dataclass(frozen=True, eq=False)
class GridSignal:
    """
    [−L, L] 위 벡터값 신호 (노드 s_k = (k + 1/2)h − L)

    Attributes:
        step: 격자 간격 h
        values: (노드 수, 차원) 복소 배열
        p: 노름 지수
        interpolation_error: 격자 밖 원자 이동에서 생긴 보간 오차 추정
    """
    step: float
    values: np.ndarray
    p: float = 2.0
    interpolation_error: float = 0.0

    @classmethod
    def zeros(cls, half_width: float, step: float, dim: int, p: float = 2.0) -> 'GridSignal':
        n = 2 * int(math.ceil(half_width / step - 1e-9))
        return cls(step, np.zeros((n, dim), dtype=complex), p)

    @property
    def n_nodes(self) -> int:
        return int(self.values.shape[0])

    @property
    def half_width(self) -> float:
        return 0.5 * self.n_nodes * self.step

    @property
    def nodes(self) -> np.ndarray:
        return (np.arange(self.n_nodes) + 0.5) * self.step - self.half_width

    def with_values(self, values: np.ndarray, interpolation_error: float = 0.0) -> 'GridSignal':
        return GridSignal(self.step, values, self.p, self.interpolation_error + interpolation_error)

    def norm(self) -> float:
        """이산 L^p 노름"""
        mags = np.linalg.norm(self.values, axis=1)
        if math.isinf(self.p):
            return float(mags.max()) if mags.size else 0.0
        return float((self.step * np.sum(mags ** self.p)) ** (1.0 / self.p))

    def boundary_mass(self) -> float:
        """양 끝 노드의 크기 (잘림 점검용)"""
        mags = np.linalg.norm(self.values, axis=1)
        return float(max(mags[0], mags[-1])) if mags.size else 0.0


def _semigroup_weighted(op: OperatorModel, times: np.ndarray, weights: np.ndarray,
                        vectors: np.ndarray) -> np.ndarray:
    """각 노드에서 w_k T(t_k) v_k"""
    out = np.zeros((times.size, op.dim), dtype=complex)
    for lo in range(0, times.size, PATH_CHUNK):
        hi = min(lo + PATH_CHUNK, times.size)
        path = semigroup_path(op, times[lo:hi])
        out[lo:hi] = weights[lo:hi, None] * np.einsum('tij,tj->ti', path, vectors[lo:hi])
    return out


def embed(x, psi: FactorFunction, op: OperatorModel, half_width: float,
          step: float, p: float = 2.0) -> GridSignal:
    """
    ι(x)(s) = ψ(−s)T(−s)x  (s <= 0), 그 외 0

    Args:
        x: 벡터
        psi: 인증서의 ψ
        op: 생성자 모델
        half_width: 격자 반폭 L
        step: 격자 간격 h
    """
    x = np.asarray(x, dtype=complex).ravel()
    if x.size != op.dim:
        raise DomainError(f"vector of length {x.size} does not match operator dimension {op.dim}")
    sig = GridSignal.zeros(half_width, step, op.dim, p)
    nodes = sig.nodes
    left = nodes < 0
    times = -nodes[left]
    weights = psi.evaluate(times)
    values = np.zeros_like(sig.values)
    if np.any(x):
        values[left] = _semigroup_weighted(op, times, weights, np.broadcast_to(x, (times.size, op.dim)))
    out = sig.with_values(values)
    edge = out.boundary_mass()
    if edge > 1e-12 * max(float(np.linalg.norm(values, axis=1).max()), 1e-300):
        logger.warning(f"embedded signal is not negligible at s=-L ({edge:.2e}); widen the grid")
    return out


def _shift_nodes(values: np.ndarray, k: int) -> np.ndarray:
    """values[i] → out[i + k] (밖으로 나가는 부분은 버린다)"""
    out = np.zeros_like(values)
    n = values.shape[0]
    if k >= 0:
        if k < n:
            out[k:] = values[:n - k]
    elif -k < n:
        out[:n + k] = values[-k:]
    return out


def _off_grid_shift(sig: GridSignal, t: float) -> Tuple[np.ndarray, float]:
    nodes = sig.nodes
    spline = CubicSpline(nodes, sig.values, axis=0, extrapolate=False)
    target = nodes - t
    cubic = np.nan_to_num(spline(target))
    linear = np.stack([np.interp(target, nodes, sig.values[:, j], left=0.0, right=0.0)
                       for j in range(sig.values.shape[1])], axis=1)
    return cubic, float(np.max(np.abs(cubic - linear))) if cubic.size else 0.0


def convolve_operator(sig: GridSignal, mu: WeightedMeasure, adjoint: bool = False) -> GridSignal:
    """
    L_μ f = μ ∗ f 의 격자판

    원자는 격자 위 이동이면 정확히 옮기고, 아니면 3차 스플라인으로 보간한다.
    밀도 부분은 셀 질량과의 이산 합성곱. adjoint=True 면 켤레 전치 (상관).
    """
    h = sig.step
    values = sig.values
    n = sig.n_nodes
    out = np.zeros_like(values)
    interp_error = 0.0
    for t, a in mu.atoms:
        shift = -t if adjoint else t
        weight = np.conj(a) if adjoint else a
        k = t / h
        if abs(k - round(k)) <= 1e-9 * max(1.0, abs(k)):
            out += weight * _shift_nodes(values, int(round(shift / h)))
        else:
            logger.warning(f"atom at t={t:g} is off the grid (h={h:g}); using cubic interpolation")
            moved, err = _off_grid_shift(sig, shift)
            out += weight * moved
            interp_error += abs(weight) * err

    if mu.kernels or mu.density is not None:
        masses = mu.discretize(h, n)
        last = np.nonzero(masses)[0]
        if last.size:
            masses = masses[:last[-1] + 1]
            if adjoint:
                full = fftconvolve(values, np.conj(masses)[::-1, None], axes=0)
                out += full[masses.size - 1:masses.size - 1 + n]
            else:
                out += fftconvolve(values, masses[:, None], axes=0)[:n]
    return sig.with_values(out, interp_error)


def project(sig: GridSignal, phi: FactorFunction, op: OperatorModel) -> np.ndarray:
    """Pf = ∫₀^∞ φ(t)T(t)f(t)dt (중점 규칙)"""
    nodes = sig.nodes
    right = nodes > 0
    times = nodes[right]
    weights = sig.step * phi.evaluate(times)
    terms = _semigroup_weighted(op, times, weights, sig.values[right])
    return terms.sum(axis=0)


def embedding_norm(psi: FactorFunction, op: OperatorModel, half_width: float, step: float) -> float:
    """p=2 에서 ‖ι‖ = sqrt(λ_max(Σ h|ψ_k|² T_k* T_k))"""
    times = (np.arange(int(math.ceil(half_width / step - 1e-9))) + 0.5) * step
    return _gram_norm(op, times, step * np.abs(psi.evaluate(times)) ** 2, adjoint_first=True)


def projection_norm(phi: FactorFunction, op: OperatorModel, half_width: float, step: float) -> float:
    """p=2 에서 ‖P‖ = sqrt(λ_max(Σ h|φ_k|² T_k T_k*))"""
    times = (np.arange(int(math.ceil(half_width / step - 1e-9))) + 0.5) * step
    return _gram_norm(op, times, step * np.abs(phi.evaluate(times)) ** 2, adjoint_first=False)


def _gram_norm(op: OperatorModel, times: np.ndarray, weights: np.ndarray,
               adjoint_first: bool) -> float:
    gram = np.zeros((op.dim, op.dim), dtype=complex)
    for lo in range(0, times.size, PATH_CHUNK):
        hi = min(lo + PATH_CHUNK, times.size)
        path = semigroup_path(op, times[lo:hi])
        w = weights[lo:hi, None, None]
        if adjoint_first:
            gram += np.einsum('tki,tkj->ij', np.conj(path) * w, path)
        else:
            gram += np.einsum('tik,tjk->ij', path * w, np.conj(path))
    return float(math.sqrt(max(np.linalg.eigvalsh(0.5 * (gram + gram.conj().T)).max(), 0.0)))


def _measure_grid(mu: WeightedMeasure) -> Tuple[float, float]:
    rates = [-float(np.real(k.lam)) for k in mu.kernels]
    if any(r <= 0 for r in rates):
        raise DomainError("convolution norm needs decaying kernels (finite total variation)")
    fastest = max(rates + [1.0])
    step = min(0.05, 1.0 / (16.0 * fastest))
    horizon = max([t for t, _ in mu.atoms] + [k.start + VERIFY_SPAN / r for k, r in zip(mu.kernels, rates)]
                  + ([mu.density.end] if mu.density is not None else []) + [1.0])
    anchors = [t for t, _ in mu.atoms if t > 0]
    if anchors:
        step = anchors[0] / math.ceil(anchors[0] / step)
    return step, 4.0 * horizon


def convolution_operator_norm(mu: WeightedMeasure, p: float = 2, step: Optional[float] = None,
                              half_width: Optional[float] = None,
                              max_iter: int = POWER_ITERATIONS, rtol: float = POWER_RTOL,
                              seed: int = 0) -> float:
    """
    스칼라 격자 신호 위 ‖L_μ‖ (잘린 격자 대리값)

    p=2 는 L*L 거듭제곱 반복, p=1/∞ 는 Σ|원자| + Σ|셀 질량|.
    """
    if p not in (1, 2, math.inf):
        raise DomainError("grid operator norm is available for p in {1, 2, inf}")
    auto_step, auto_width = _measure_grid(mu)
    step = step or auto_step
    half_width = half_width or auto_width
    if p != 2:
        n = 2 * int(math.ceil(half_width / step))
        return float(sum(abs(a) for _, a in mu.atoms) + np.sum(np.abs(mu.discretize(step, n))))

    rng = np.random.default_rng(seed)
    sig = GridSignal.zeros(half_width, step, 1)
    vec = rng.standard_normal((sig.n_nodes, 1)) + 0j
    sig = sig.with_values(vec / np.linalg.norm(vec))
    estimate = 0.0
    for it in range(max_iter):
        image = convolve_operator(sig, mu)
        value = float(np.linalg.norm(image.values))
        back = convolve_operator(image, mu, adjoint=True).values
        size = float(np.linalg.norm(back))
        if size == 0.0:
            return 0.0
        sig = sig.with_values(back / size)
        if abs(value - estimate) <= rtol * value:
            estimate = value
            break
        estimate = value
    logger.debug(f"power iteration: ‖L‖ ≈ {estimate:.8g} after {it + 1} steps (n={sig.n_nodes})")
    return estimate


def grid_for(op: OperatorModel, omega: float, tau: float) -> Tuple[float, float]:
    """
    (h, L): 한 e-배 구간당 64 노드 이상, L = max(τ, 1) + 30/ω.
    τ > 0 이면 h 가 τ 를 나누도록 맞춘다.
    """
    scale = max(abs(omega), operator_norm(op.matrix), 1.0)
    step = 1.0 / math.ceil(NODES_PER_FOLD * scale)
    if tau > 0:
        step = tau / math.ceil(tau / step)
    half_width = max(tau, 1.0) + VERIFY_SPAN / abs(omega)
    return step, step * math.ceil(half_width / step)


@dataclass
class TransferenceReport:
    """인수분해 항등식과 노름 사슬 점검 결과"""
    identity_errors: List[float]
    identity_tolerances: List[float]
    quadrature_errors: List[float]
    embedding_norm: float
    embedding_bound: float
    projection_norm: float
    projection_bound: float
    convolution_norm: float
    measured_norm: float
    estimate: float
    M: float
    step: float
    half_width: float
    notes: List[str] = field(default_factory=list)

    @property
    def identity_ok(self) -> bool:
        return all(e <= t for e, t in zip(self.identity_errors, self.identity_tolerances))

    @property
    def chain_ok(self) -> bool:
        slack = 1e-3
        return (self.embedding_norm <= self.embedding_bound * (1 + slack)
                and self.projection_norm <= self.projection_bound * (1 + slack)
                and self.measured_norm <= (self.projection_norm * self.convolution_norm
                                           * self.embedding_norm) * (1 + slack) + 1e-12)

    @property
    def estimate_ok(self) -> bool:
        return self.measured_norm <= self.estimate * (1 + 1e-9) + 1e-12

    @property
    def passed(self) -> bool:
        return self.identity_ok and self.chain_ok and self.estimate_ok


def _factorized(op: OperatorModel, x: np.ndarray, psi: FactorFunction, phi: FactorFunction,
                nu: WeightedMeasure, step: float, half_width: float, p: float) -> Tuple[np.ndarray, float]:
    sig = convolve_operator(embed(x, psi, op, half_width, step, p), nu)
    return project(sig, phi, op), sig.interpolation_error


def _run_checks(op: OperatorModel, direct: np.ndarray, xs: Sequence, psi: FactorFunction,
                phi: FactorFunction, nu: WeightedMeasure, step: float, half_width: float,
                p: float, bound_constant: float) -> TransferenceReport:
    kind = certify_type(op, 0.0)
    errors, tolerances, quad_errors = [], [], []
    for x in xs:
        x = np.asarray(x, dtype=complex).ravel()
        coarse, e1 = _factorized(op, x, psi, phi, nu, step, half_width, p)
        fine, e2 = _factorized(op, x, psi, phi, nu, step / 2, half_width, p)
        extrapolated = (4.0 * fine - coarse) / 3.0
        target = direct @ x
        err = float(np.linalg.norm(target - extrapolated))
        quad_err = float(np.linalg.norm(fine - extrapolated)) + e1 + e2
        tol = max(IDENTITY_RTOL * float(np.linalg.norm(target)), 1e-14)
        errors.append(err)
        tolerances.append(tol)
        quad_errors.append(quad_err)
        logger.debug(f"factorization identity: err={err:.3e} tol={tol:.3e} quadrature={quad_err:.3e}")
        if quad_err > tol:
            logger.warning(f"grid refinement changes P∘L∘ι x by {quad_err:.3e}, above the identity "
                           f"tolerance {tol:.3e}")

    h = step / 2
    emb = embedding_norm(psi, op, half_width, h)
    proj = projection_norm(phi, op, half_width, h)
    conv = convolution_operator_norm(nu, p=p, step=h, half_width=2 * half_width)
    measured = operator_norm(direct)
    qc = conjugate(p)
    report = TransferenceReport(
        identity_errors=errors, identity_tolerances=tolerances, quadrature_errors=quad_errors,
        embedding_norm=emb, embedding_bound=kind.M * psi.norm(p),
        projection_norm=proj, projection_bound=kind.M * phi.norm(qc),
        convolution_norm=conv, measured_norm=measured,
        estimate=kind.M ** 2 * bound_constant * conv, M=kind.M,
        step=step, half_width=half_width)
    if p != 2:
        report.notes.append("embedding/projection norms use the Hilbert-space Gram formula")
    return report


def factorization_check(op: OperatorModel, mu: WeightedMeasure, cert: FactorizationCertificate,
                        xs: Iterable, p: float = 2.0) -> TransferenceReport:
    """
    T_μ x 와 P(L_{e_ω μ}(ι x)) 비교, ‖T_μ‖ <= M²·η·‖L‖ 점검

    ω = cert.alpha, τ = cert.t.

    Raises:
        SupportViolationError: μ 의 지지 하한이 τ 보다 작을 때
    """
    tau = cert.t
    if mu.support_low < tau * (1 - 1e-12):
        raise SupportViolationError(f"μ is supported from {mu.support_low:g}, below τ={tau:g}")
    if cert.q != p:
        raise DomainError(f"certificate exponent q={cert.q:g} does not match p={p:g}")
    omega = cert.alpha
    nu = mu.reweight(omega)
    step, half_width = grid_for(op, omega, tau)
    direct = apply_measure(op, mu).matrix
    report = _run_checks(op, direct, list(xs), cert.psi, cert.phi, nu, step, half_width,
                         p, cert.value)
    logger.info(f"factorization check ω={omega:g} τ={tau:g}: identity "
                f"{'ok' if report.identity_ok else 'FAILED'}, ‖T_μ‖={report.measured_norm:.6g} "
                f"<= {report.estimate:.6g}")
    return report


def moment_constant(p: float) -> float:
    """p^{−1/p} p'^{−1/p'} (p=2 이면 1/2)"""
    qc = conjugate(p)
    left = 1.0 if math.isinf(p) else p ** (-1.0 / p)
    right = 1.0 if math.isinf(qc) else qc ** (-1.0 / qc)
    return left * right


def moment_pair(omega: float) -> Tuple[FactorFunction, FactorFunction]:
    """ψ = φ = 1_{R+}e_ω, ψ∗φ(t) = t e^{ωt}"""
    if omega >= 0:
        raise DomainError(f"moment factorization needs ω < 0, got {omega}")
    piece = FactorFunction.piece(1.0, omega, 0.0, math.inf)
    return piece, piece


def moment_factorization_check(op: OperatorModel, mu: WeightedMeasure, omega: float,
                               xs: Iterable, p: float = 2.0) -> TransferenceReport:
    """
    T_{tμ} = P ∘ L_{e_{−ω}μ} ∘ ι (지수 쌍), ‖T_{tμ}‖ <= M²/|ω|·p^{−1/p}p'^{−1/p'}·‖L‖
    """
    psi, phi = moment_pair(omega)
    nu = mu.reweight(-omega)
    step, half_width = grid_for(op, omega, 0.0)
    direct = apply_measure(op, mu.moment(1)).matrix
    constant = moment_constant(p) / abs(omega)
    report = _run_checks(op, direct, list(xs), psi, phi, nu, step, half_width, p, constant)
    report.notes.append(f"moment constant {moment_constant(p):.17g}")
    logger.info(f"moment factorization check ω={omega:g}: identity "
                f"{'ok' if report.identity_ok else 'FAILED'}")
    return report

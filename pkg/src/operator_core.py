"""
operator_core.py - 생성자, 반군, 레졸벤트, 스펙트럴 오라클
Hille-Phillips 함수 미적분 실험 시스템

유한 차원 생성자 -A 에 대해 T(t) = e^{-tA}, R(z, A), (A-λ)^{-α} 를 계산하고
f(A)의 기준값(스펙트럴 오라클)을 제공한다.
"""

from dataclasses import dataclass
from functools import cached_property
from math import factorial
from pathlib import Path
from typing import Any, Callable, List, Optional, Sequence, Tuple, Union
import logging

import numpy as np
from scipy.linalg import expm, svdvals
from scipy.special import gamma

from .errors import (ConditioningError, ConvergenceError, DivergenceError,
                     DomainError, ParseError, SemigroupOverflowError,
                     SingularityError, UsageError)
from .numerics import quad_matrix

logger = logging.getLogger(__name__)

KINDS = ('diagonal', 'dense', 'jordan', 'shifted')
EIG_CONDITION_LIMIT = 1.0e6
CONTOUR_NODES = 512


@dataclass(frozen=True, eq=False)
class OperatorModel:
    """
    유한 차원 생성자 -A

    Attributes:
        kind: diagonal | dense | jordan | shifted
        dim: 차원 n
        data: 고유값 튜플 / n×n 행렬 / (고유값, 블록 크기) 튜플 / (기저 모델, 이동량)
    """
    kind: str
    dim: int
    data: Any

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown operator kind '{self.kind}'")
        if self.dim < 1:
            raise DomainError("operator dimension must be positive")
        if self.kind == 'diagonal':
            object.__setattr__(self, 'data', tuple(complex(x) for x in self.data))
            size = len(self.data)
        elif self.kind == 'dense':
            mat = np.array(self.data, dtype=complex)
            if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
                raise DomainError("dense operator needs a square matrix")
            mat.setflags(write=False)
            object.__setattr__(self, 'data', mat)
            size = mat.shape[0]
        elif self.kind == 'jordan':
            blocks = tuple((complex(lam), int(k)) for lam, k in self.data)
            if any(k < 1 for _, k in blocks):
                raise DomainError("Jordan block sizes must be positive")
            object.__setattr__(self, 'data', blocks)
            size = sum(k for _, k in blocks)
        else:
            base, shift = self.data
            object.__setattr__(self, 'data', (base, complex(shift)))
            size = base.dim
        if size != self.dim:
            raise DomainError(f"{self.kind} data has size {size}, header says {self.dim}")

    # ---- 생성자 ----

    @classmethod
    def diagonal(cls, eigenvalues: Sequence[complex]) -> 'OperatorModel':
        return cls('diagonal', len(eigenvalues), tuple(eigenvalues))

    @classmethod
    def dense(cls, matrix) -> 'OperatorModel':
        mat = np.asarray(matrix, dtype=complex)
        return cls('dense', mat.shape[0], mat)

    @classmethod
    def jordan(cls, blocks: Union[Tuple[complex, int], Sequence[Tuple[complex, int]]]) -> 'OperatorModel':
        """Jordan(λ, k) 또는 블록 목록. 블록은 λI + N (N은 위쪽 이동)"""
        if len(blocks) == 2 and isinstance(blocks[1], (int, np.integer)) and not isinstance(blocks[0], tuple):
            blocks = (blocks,)
        return cls('jordan', sum(int(k) for _, k in blocks), tuple(blocks))

    @classmethod
    def shifted(cls, base: 'OperatorModel', shift: complex) -> 'OperatorModel':
        """A = base + shift·I"""
        return cls('shifted', base.dim, (base, shift))

    # ---- 파생 값 ----

    @cached_property
    def matrix(self) -> np.ndarray:
        if self.kind == 'diagonal':
            return np.diag(np.array(self.data, dtype=complex))
        if self.kind == 'dense':
            return np.array(self.data)
        if self.kind == 'jordan':
            return _jordan_apply(self.data, lambda lam, k: lam if k == 0 else (1.0 if k == 1 else 0.0))
        base, shift = self.data
        return base.matrix + shift * np.eye(self.dim)

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        if self.kind == 'diagonal':
            return np.array(self.data, dtype=complex)
        if self.kind == 'jordan':
            return np.concatenate([np.full(k, lam) for lam, k in self.data])
        if self.kind == 'shifted':
            base, shift = self.data
            return base.eigenvalues + shift
        return self._eig[0]

    @cached_property
    def _eig(self):
        w, v = np.linalg.eig(self.matrix)
        try:
            vinv = np.linalg.inv(v)
            cond = float(np.linalg.cond(v))
        except np.linalg.LinAlgError:
            vinv, cond = None, np.inf
        return w, v, vinv, cond

    @property
    def half_plane_type(self) -> float:
        """ω₀ = min Re σ(A)"""
        return float(np.min(self.eigenvalues.real))

    @property
    def eigen_condition(self) -> float:
        if self.kind == 'diagonal':
            return 1.0
        if self.kind == 'jordan':
            return 1.0 if all(k == 1 for _, k in self.data) else np.inf
        if self.kind == 'shifted':
            return self.data[0].eigen_condition
        return self._eig[3]

    def __repr__(self) -> str:
        return f"OperatorModel(kind={self.kind!r}, dim={self.dim}, ω₀={self.half_plane_type:.4g})"


@dataclass(frozen=True, eq=False)
class SemigroupType:
    """‖T(t)‖ <= M e^{ωt} 인증 결과"""
    M: float
    omega: float
    time_grid: np.ndarray
    t_argmax: float


def _jordan_apply(blocks, coeff: Callable[[complex, int], complex]) -> np.ndarray:
    """블록별 상삼각 Taylor 형태: k번째 위 대각선에 coeff(λ, k)"""
    n = sum(k for _, k in blocks)
    out = np.zeros((n, n), dtype=complex)
    pos = 0
    for lam, size in blocks:
        for k in range(size):
            c = coeff(lam, k)
            if c != 0:
                idx = np.arange(size - k)
                out[pos + idx, pos + idx + k] = c
        pos += size
    return out


def _check_finite(m: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(m)):
        raise SemigroupOverflowError(f"{what} has non-finite entries")
    return m


def semigroup_at(op: OperatorModel, t: float) -> np.ndarray:
    """
    T(t) = e^{-tA}

    Raises:
        DomainError: t < 0
        SemigroupOverflowError: 성분이 표현 범위를 넘을 때
    """
    if t < 0:
        raise DomainError(f"semigroup time must be nonnegative, got {t}")
    with np.errstate(over='ignore', invalid='ignore'):
        if op.kind == 'diagonal':
            m = np.diag(np.exp(-t * np.array(op.data)))
        elif op.kind == 'jordan':
            m = _jordan_apply(op.data, lambda lam, k: np.exp(-t * lam) * (-t) ** k / factorial(k))
        elif op.kind == 'shifted':
            base, shift = op.data
            m = np.exp(-t * shift) * semigroup_at(base, t)
        else:
            w, v, vinv, cond = op._eig
            if cond < EIG_CONDITION_LIMIT:
                m = (v * np.exp(-t * w)) @ vinv
            else:
                m = expm(-t * op.matrix)
    return _check_finite(m, f"T({t:g})")


def semigroup_path(op: OperatorModel, times: Sequence[float]) -> np.ndarray:
    """여러 시각의 T(t)를 (len(times), n, n) 배열로"""
    times = np.asarray(times, dtype=float)
    if np.any(times < 0):
        raise DomainError("semigroup times must be nonnegative")
    n = op.dim
    with np.errstate(over='ignore', invalid='ignore'):
        if op.kind == 'diagonal':
            out = np.zeros((times.size, n, n), dtype=complex)
            idx = np.arange(n)
            out[:, idx, idx] = np.exp(-np.outer(times, np.array(op.data)))
        elif op.kind == 'jordan':
            out = np.zeros((times.size, n, n), dtype=complex)
            pos = 0
            for lam, size in op.data:
                decay = np.exp(-times * lam)
                for k in range(size):
                    idx = np.arange(size - k) + pos
                    out[:, idx, idx + k] = (decay * (-times) ** k / factorial(k))[:, None]
                pos += size
        elif op.kind == 'shifted':
            base, shift = op.data
            out = np.exp(-times * shift)[:, None, None] * semigroup_path(base, times)
        elif op.kind == 'dense' and op._eig[3] < EIG_CONDITION_LIMIT:
            w, v, vinv, _ = op._eig
            out = np.einsum('ij,tj,jk->tik', v, np.exp(-np.outer(times, w)), vinv)
        else:
            out = np.stack([semigroup_at(op, float(t)) for t in times])
    return _check_finite(out, "semigroup path")


def _default_horizon(op: OperatorModel, omega: float) -> float:
    decay = op.half_plane_type + omega
    if decay <= 1e-9:
        return 20.0
    return float(min(max(10.0, 50.0 / decay), 1.0e4))


def certify_type(op: OperatorModel, omega: float = 0.0,
                 t_grid: Optional[Sequence[float]] = None,
                 t_max: Optional[float] = None,
                 max_rounds: int = 12) -> SemigroupType:
    """
    M = max_t ‖T(t)‖e^{-ωt} 를 격자에서 구하고 적응적으로 세분

    인접 노드 변화가 1%를 넘는 구간에 중점을 넣고, M 변화가 0.1% 미만이면 멈춘다.

    Raises:
        DivergenceError: 꼬리에서 최대값이 계속 커질 때 (ω가 너무 작음)
    """
    if t_grid is None:
        horizon = t_max if t_max is not None else _default_horizon(op, omega)
        grid = np.linspace(0.0, horizon, 257)
    else:
        grid = np.unique(np.concatenate([[0.0], np.asarray(t_grid, dtype=float)]))

    def profile(ts):
        norms = np.array([svdvals(m)[0] for m in semigroup_path(op, ts)])
        return norms * np.exp(-omega * ts)

    values = profile(grid)
    M = float(values.max())
    for round_ in range(max_rounds):
        jump = np.abs(np.diff(values)) > 0.01 * np.maximum(values[1:], values[:-1])
        if not np.any(jump) or grid.size > 200_000:
            break
        mids = 0.5 * (grid[:-1][jump] + grid[1:][jump])
        grid = np.concatenate([grid, mids])
        order = np.argsort(grid)
        grid = grid[order]
        values = np.concatenate([values, profile(mids)])[order]
        M_new = float(values.max())
        changed = abs(M_new - M) > 1e-3 * M
        M = M_new
        logger.debug(f"certify_type round {round_ + 1}: {grid.size} nodes, M={M:.6g}")
        if not changed:
            break

    head = values[grid <= 0.75 * grid[-1]].max()
    tail = values[grid > 0.75 * grid[-1]]
    if tail.size and tail.max() > head * (1 + 1e-9) and values[-1] >= values[-2]:
        raise DivergenceError(
            f"‖T(t)‖e^(-{omega:g}t) still grows at t={grid[-1]:g}; "
            f"ω is too small for half-plane type {op.half_plane_type:g}")
    i = int(np.argmax(values))
    return SemigroupType(M, omega, grid, float(grid[i]))


def resolvent(op: OperatorModel, z: complex, tol: float = 1e-12) -> np.ndarray:
    """
    R(z, A) = (z - A)^{-1}

    Raises:
        SingularityError: dist(z, σ(A)) < tol
    """
    dist = float(np.min(np.abs(z - op.eigenvalues)))
    if dist < tol * max(1.0, float(np.max(np.abs(op.eigenvalues)))):
        raise SingularityError(f"z={z} is within {dist:.3e} of the spectrum")
    if op.kind == 'diagonal':
        return np.diag(1.0 / (z - np.array(op.data)))
    if op.kind == 'jordan':
        return _jordan_apply(op.data, lambda lam, k: 1.0 / (z - lam) ** (k + 1))
    if op.kind == 'shifted':
        base, shift = op.data
        return resolvent(base, z - shift, tol)
    return np.linalg.solve(z * np.eye(op.dim) - op.matrix, np.eye(op.dim, dtype=complex))


def _tail_point(integrand_norm: Callable[[float], float], tol: float,
                start: float = 1.0, cap: float = 2.0 ** 40) -> float:
    T = start
    while True:
        here, further = integrand_norm(T), integrand_norm(2 * T)
        if here < tol / 10 and further <= here:
            return T
        T *= 2
        if T > cap:
            raise ConvergenceError(
                f"integrand still {here:.3e} at t={T / 2:g}; no admissible truncation point",
                report={'t': T / 2, 'integrand': here})


def fractional_resolvent_power(op: OperatorModel, lam: complex, alpha: complex,
                               tol: float = 1e-10, check: bool = True) -> np.ndarray:
    """
    (A-λ)^{-α} = 1/Γ(α) ∫₀^∞ t^{α-1} e^{λt} T(t) dt

    t = u^{1/Re α} 치환으로 원점 특이점을 없앤 뒤 quad_vec 로 적분하고
    스펙트럴 오라클과 대조한다.

    Args:
        op: 생성자
        lam: Re λ < ω₀
        alpha: Re α > 0
        tol: 적분 허용오차
        check: 오라클 대조 여부

    Raises:
        DomainError: Re α <= 0 이거나 Re λ >= ω₀
        ConvergenceError: 절단점을 찾지 못하거나 오라클과 어긋날 때
    """
    alpha = complex(alpha)
    a = alpha.real
    if a <= 0:
        raise DomainError(f"fractional power needs Re α > 0, got α={alpha}")
    if np.real(lam) >= op.half_plane_type:
        raise DomainError(f"Re λ={np.real(lam):g} is not below ω₀={op.half_plane_type:g}")
    g = gamma(alpha)

    def integrand_norm(t):
        return float(abs(t ** (alpha - 1) * np.exp(lam * t) / g) * svdvals(semigroup_at(op, t))[0])

    T = _tail_point(integrand_norm, tol)

    def integrand(u):
        t = u ** (1.0 / a)
        phase = u ** (1j * alpha.imag / a) if alpha.imag else 1.0
        return phase * np.exp(lam * t) * semigroup_at(op, t) / (a * g)

    result, err = quad_matrix(integrand, 0.0, T ** a, epsabs=tol, epsrel=tol)
    logger.debug(f"(A-λ)^(-α): λ={lam}, α={alpha}, T={T:g}, err≈{err:.2e}")

    if check:
        from .symbols import rpow
        oracle = spectral_oracle(op, rpow(lam, alpha))
        gap = operator_norm(result - oracle)
        scale = 1.0 + operator_norm(oracle)
        if gap > max(1e-6, 100 * err) * scale:
            raise ConvergenceError(
                f"quadrature and oracle disagree by {gap:.3e} for α={alpha}",
                report={'gap': gap, 'quad_err': err, 'T': T})
    return result


def spectral_oracle(op: OperatorModel, f) -> np.ndarray:
    """
    f(A)의 기준값

    diagonal: 고유값에 f, jordan: k번째 위 대각선에 f^{(k)}(λ)/k!,
    dense: V f(Λ) V^{-1} (조건수가 크면 원 위 윤곽 적분).

    Raises:
        ConditioningError: 윤곽 원을 f의 정의역 안에 놓을 수 없을 때
    """
    if op.kind == 'diagonal':
        return np.diag(np.asarray(f.evaluate(np.array(op.data)), dtype=complex))
    if op.kind == 'jordan':
        size = max(k for _, k in op.data)
        derivs = [f] + [f.derivative(k) for k in range(1, size)]
        return _jordan_apply(op.data, lambda lam, k: complex(derivs[k].evaluate(lam)) / factorial(k))
    if op.kind == 'shifted':
        base, shift = op.data
        return spectral_oracle(base, f.shift(shift))
    w, v, vinv, cond = op._eig
    if cond < EIG_CONDITION_LIMIT:
        return (v * np.asarray(f.evaluate(w), dtype=complex)) @ vinv
    logger.warning(f"eigenvector condition {cond:.2e}; using contour integral for f(A)")
    return _contour_oracle(op, f)


def _contour_oracle(op: OperatorModel, f) -> np.ndarray:
    w = op.eigenvalues
    center = 0.5 * (w.real.min() + w.real.max()) + 0.5j * (w.imag.min() + w.imag.max())
    spread = float(np.max(np.abs(w - center)))
    room = center.real - f.abscissa
    radius = max(1.5 * spread, 0.5 * room)
    if radius >= room or radius <= spread:
        raise ConditioningError(
            f"no circle around σ(A) fits right of Re z={f.abscissa:g} "
            f"(spread {spread:.3g}, room {room:.3g})")
    theta = 2 * np.pi * np.arange(CONTOUR_NODES) / CONTOUR_NODES
    nodes = center + radius * np.exp(1j * theta)
    fz = np.asarray(f.evaluate(nodes), dtype=complex)
    A = op.matrix
    eye = np.eye(op.dim)
    out = np.zeros((op.dim, op.dim), dtype=complex)
    for z, fv, th in zip(nodes, fz, theta):
        out += fv * radius * np.exp(1j * th) * np.linalg.solve(z * eye - A, eye)
    return out / CONTOUR_NODES


def operator_norm(m) -> float:
    """최대 특이값"""
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    if m.size == 0:
        return 0.0
    return float(svdvals(m)[0])


# ---- 텍스트 형식 ----

def _parse_complex(token: str) -> complex:
    parts = token.split(',')
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) != 2:
        raise ParseError(f"bad complex token '{token}'")
    return complex(float(parts[0]), float(parts[1]))


def _parse_lines(lines: List[List[str]], pos: int) -> Tuple[OperatorModel, int]:
    try:
        kind, dim = lines[pos][0], int(lines[pos][1])
    except (IndexError, ValueError) as e:
        raise ParseError(f"bad operator header {lines[pos] if pos < len(lines) else '<eof>'}") from e
    pos += 1
    if kind == 'diagonal':
        tokens = []
        while len(tokens) < dim:
            tokens.extend(lines[pos])
            pos += 1
        return OperatorModel.diagonal([_parse_complex(t) for t in tokens[:dim]]), pos
    if kind == 'dense':
        rows = [[_parse_complex(t) for t in lines[pos + i]] for i in range(dim)]
        if any(len(r) != dim for r in rows):
            raise ParseError(f"dense operator rows must have {dim} entries")
        return OperatorModel.dense(np.array(rows)), pos + dim
    if kind == 'jordan':
        blocks, total = [], 0
        while total < dim:
            lam, size = _parse_complex(lines[pos][0]), int(lines[pos][1])
            blocks.append((lam, size))
            total += size
            pos += 1
        if total != dim:
            raise ParseError(f"Jordan block sizes sum to {total}, header says {dim}")
        return OperatorModel('jordan', dim, tuple(blocks)), pos
    if kind == 'shifted':
        shift = _parse_complex(lines[pos][0])
        base, pos = _parse_lines(lines, pos + 1)
        if base.dim != dim:
            raise ParseError("shifted operator dimension differs from its base")
        return OperatorModel.shifted(base, shift), pos
    raise ParseError(f"unknown operator kind '{kind}'")


def parse_operator(text: str) -> OperatorModel:
    """
    텍스트 형식:
        <kind> <dim>
        diagonal: re,im 토큰 dim개
        dense:    행마다 re,im 토큰 dim개
        jordan:   줄마다 're,im size'
        shifted:  이동량 re,im 한 줄 + 중첩 모델
    """
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith('#')]
    if not lines:
        raise ParseError("empty operator text")
    try:
        op, pos = _parse_lines(lines, 0)
    except IndexError as e:
        raise ParseError("operator text ended early") from e
    if pos != len(lines):
        raise ParseError(f"trailing content after operator: {lines[pos]}")
    return op


def load_operator(path: Union[str, Path]) -> OperatorModel:
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise UsageError(f"cannot read operator file {path}: {e}") from e
    try:
        return parse_operator(text)
    except ParseError as e:
        raise ParseError(f"{path}: {e}") from e


def _fmt(z: complex) -> str:
    return f"{z.real!r},{z.imag!r}"


def dumps_operator(op: OperatorModel) -> str:
    lines = [f"{op.kind} {op.dim}"]
    if op.kind == 'diagonal':
        lines.extend(_fmt(z) for z in op.data)
    elif op.kind == 'dense':
        lines.extend(' '.join(_fmt(complex(z)) for z in row) for row in op.data)
    elif op.kind == 'jordan':
        lines.extend(f"{_fmt(lam)} {k}" for lam, k in op.data)
    else:
        base, shift = op.data
        lines.append(_fmt(shift))
        lines.append(dumps_operator(base).rstrip('\n'))
    return '\n'.join(lines) + '\n'

"""
measures.py - 가중 측도 대수 M_ω(R+) 모듈
Hille-Phillips 함수 미적분 실험 시스템

측도 = 정확한 원자(atom) + 감마 커널(해석적 밀도) + 균일 격자 밀도.
원자는 격자에 뭉개지 않는다.
"""

from dataclasses import dataclass, field, replace
from typing import Iterable, List, Optional, Sequence, Tuple
import logging
import math

import numpy as np
from scipy.integrate import quad, simpson
from scipy.signal import fftconvolve
from scipy.special import binom, gamma

from .errors import (DivergenceError, DomainError, GridResolutionError,
                     ParseError)
from .numerics import maximize_modulus_on_line

logger = logging.getLogger(__name__)

DEFAULT_STEP = 1.0e-3
SERIES_TERMS = 40


@dataclass(frozen=True)
class GammaKernel:
    """c·(s−s0)^{α−1} e^{λ(s−s0)} / Γ(α) on [s0, ∞), 라플라스 변환은 c e^{−z s0}(z−λ)^{−α}"""
    coef: complex
    start: float
    alpha: complex
    lam: complex

    def evaluate(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        u = s - self.start
        out = np.zeros(s.shape, dtype=complex)
        pos = u > 0
        up = u[pos]
        out[pos] = self.coef * up ** (self.alpha - 1) * np.exp(self.lam * up) / gamma(self.alpha)
        return out

    def laplace(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return self.coef * np.exp(-z * self.start) * (z - self.lam) ** (-self.alpha)

    def tv(self, omega: float) -> float:
        a = float(np.real(self.alpha))
        rate = omega - float(np.real(self.lam))
        if rate <= 0:
            raise DivergenceError(
                f"kernel (s-{self.start})^(α-1)e^(λs) with Re λ={np.real(self.lam):g} "
                f"is not integrable against e^(-{omega:g}s)")
        return float(abs(self.coef) * math.exp(-omega * self.start)
                     * gamma(a) / abs(gamma(self.alpha)) * rate ** (-a))

    def shifted(self, tau: float, weight: complex = 1.0) -> 'GammaKernel':
        return replace(self, coef=self.coef * weight, start=self.start + tau)

    def reweighted(self, w: float) -> 'GammaKernel':
        return replace(self, coef=self.coef * np.exp(w * self.start), lam=self.lam + w)

    def moment(self, m: int) -> List['GammaKernel']:
        # s^m = Σ_j C(m,j) s0^{m−j} u^j,  u^j·u^{α−1}/Γ(α) = Γ(α+j)/Γ(α)·u^{α+j−1}/Γ(α+j)
        out = []
        for j in range(m + 1):
            c = binom(m, j) * self.start ** (m - j)
            if c == 0:
                continue
            ratio = gamma(self.alpha + j) / gamma(self.alpha)
            out.append(replace(self, coef=self.coef * c * ratio, alpha=self.alpha + j))
        return out

    def _series_cumulative(self, b: np.ndarray) -> np.ndarray:
        # ∫_0^b u^{α−1}e^{λu}du/Γ(α) = Σ_n λ^n b^{α+n} / (n!(α+n)Γ(α))
        b = np.asarray(b, dtype=float)
        total = np.zeros(b.shape, dtype=complex)
        pos = b > 0
        bp = b[pos]
        term_sum = np.zeros(bp.shape, dtype=complex)
        lam_pow = 1.0 + 0j
        fact = 1.0
        for n in range(SERIES_TERMS):
            term_sum += lam_pow * bp ** (self.alpha + n) / (fact * (self.alpha + n))
            lam_pow *= self.lam
            fact *= (n + 1)
        total[pos] = term_sum / gamma(self.alpha)
        return self.coef * total

    def cell_masses(self, edges: np.ndarray) -> np.ndarray:
        """정렬된 구간 경계마다의 질량 (길이 len(edges)-1)"""
        u = np.clip(np.asarray(edges, dtype=float) - self.start, 0.0, None)
        cutoff = 2.0 / max(abs(self.lam), 1e-300)
        near = u <= cutoff
        cum = np.zeros(u.shape, dtype=complex)
        cum[near] = self._series_cumulative(u[near])
        if not np.all(near):
            # 특이점에서 먼 구간은 3점 심프슨으로 누적
            pts = np.concatenate([[cutoff], u[~near]])
            left, right = pts[:-1], pts[1:]
            g = lambda x: self.evaluate(x + self.start)
            simp = (right - left) / 6.0 * (g(left) + 4.0 * g(0.5 * (left + right)) + g(right))
            cum[~near] = self._series_cumulative(np.array([cutoff]))[0] + np.cumsum(simp)
        return np.diff(cum)


@dataclass(frozen=True, eq=False)
class DensityGrid:
    """균일 격자 밀도 g(s)ds, 구간별 선형 보간, 격자 밖은 0"""
    start: float
    step: float
    values: np.ndarray
    truncated: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'values', np.asarray(self.values, dtype=complex))

    @property
    def nodes(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.values.size)

    @property
    def end(self) -> float:
        return self.start + self.step * (self.values.size - 1)

    def evaluate(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        x = self.nodes
        re = np.interp(s, x, self.values.real, left=0.0, right=0.0)
        im = np.interp(s, x, self.values.imag, left=0.0, right=0.0)
        return re + 1j * im

    def cumulative(self, s) -> np.ndarray:
        """∫_{start}^{s} g, 보간 다항식에 대해 정확"""
        s = np.clip(np.asarray(s, dtype=float), self.start, self.end)
        v = self.values
        h = self.step
        nodal = np.concatenate([[0.0], np.cumsum(0.5 * h * (v[1:] + v[:-1]))])
        idx = np.clip(((s - self.start) // h).astype(int), 0, v.size - 2)
        d = s - (self.start + idx * h)
        slope = (v[idx + 1] - v[idx]) / h
        return nodal[idx] + v[idx] * d + 0.5 * slope * d * d

    def weighted_integral(self, weight: np.ndarray) -> complex:
        return complex(simpson(self.values * weight, x=self.nodes))


@dataclass(frozen=True, eq=False)
class WeightedMeasure:
    """
    M_ω(R+)의 원소 μ(ds) = e^{ωs} ν(ds)

    Attributes:
        atoms: (위치, 가중치) 튜플
        kernels: 해석적 감마 커널 밀도
        density: 격자 밀도 (선택)
        weight_exponent: ω
        support_low: 지지 하한 τ
    """
    atoms: Tuple[Tuple[float, complex], ...] = ()
    kernels: Tuple[GammaKernel, ...] = ()
    density: Optional[DensityGrid] = None
    weight_exponent: float = 0.0
    support_low: float = 0.0

    def __post_init__(self):
        atoms = _merge_atoms(self.atoms)
        object.__setattr__(self, 'atoms', atoms)
        object.__setattr__(self, 'kernels', tuple(self.kernels))
        eps = 1e-12 * max(1.0, abs(self.support_low))
        for t, _ in atoms:
            if t < -eps or t < self.support_low - eps:
                raise DomainError(f"atom at {t} lies below support {self.support_low}")
        for k in self.kernels:
            if k.start < self.support_low - eps:
                raise DomainError(f"kernel starting at {k.start} lies below support {self.support_low}")
        if self.density is not None and self.density.start < self.support_low - eps:
            raise DomainError(f"density starting at {self.density.start} lies below support {self.support_low}")

    # ---- 생성자 ----

    @classmethod
    def build(cls, atoms=(), kernels=(), density=None, weight_exponent=0.0,
              support_low: Optional[float] = None) -> 'WeightedMeasure':
        """support_low를 성분들의 최소 시작점으로 자동 설정"""
        if support_low is None:
            starts = [t for t, a in atoms if a != 0] + [k.start for k in kernels]
            if density is not None:
                starts.append(density.start)
            support_low = min(starts) if starts else 0.0
        return cls(tuple(atoms), tuple(kernels), density, weight_exponent, support_low)

    @classmethod
    def point_mass(cls, tau: float, weight: complex = 1.0, omega: float = 0.0) -> 'WeightedMeasure':
        return cls.build(atoms=((tau, weight),), weight_exponent=omega)

    @classmethod
    def gamma_density(cls, alpha: complex, lam: complex, coef: complex = 1.0,
                      start: float = 0.0, omega: float = 0.0) -> 'WeightedMeasure':
        return cls.build(kernels=(GammaKernel(coef, start, alpha, lam),), weight_exponent=omega)

    @classmethod
    def exponential(cls, rate: float, coef: complex = 1.0, start: float = 0.0,
                    omega: float = 0.0) -> 'WeightedMeasure':
        """c·e^{−rate(s−start)} ds on [start, ∞)"""
        return cls.gamma_density(1.0, -rate, coef, start, omega)

    @classmethod
    def from_function(cls, fn, t_max: float, step: float = DEFAULT_STEP, start: float = 0.0,
                      omega: float = 0.0, truncated: bool = True) -> 'WeightedMeasure':
        """함수를 [start, t_max] 격자에 샘플링한 밀도"""
        n = int(round((t_max - start) / step)) + 1
        nodes = start + step * np.arange(n)
        grid = DensityGrid(start, step, np.asarray(fn(nodes), dtype=complex), truncated)
        return cls.build(density=grid, weight_exponent=omega)

    # ---- 기본 변환 ----

    @property
    def is_atomic(self) -> bool:
        return not self.kernels and self.density is None

    def _grids(self, step: float) -> List[DensityGrid]:
        out = [] if self.density is None else [self.density]
        for k in self.kernels:
            out.append(kernel_to_grid(k, step, self.weight_exponent))
        return out

    def scaled(self, c: complex) -> 'WeightedMeasure':
        density = None if self.density is None else replace(self.density, values=self.density.values * c)
        return replace(self,
                       atoms=tuple((t, a * c) for t, a in self.atoms),
                       kernels=tuple(replace(k, coef=k.coef * c) for k in self.kernels),
                       density=density)

    def reweight(self, w: float) -> 'WeightedMeasure':
        """e_w μ"""
        density = None
        if self.density is not None:
            d = self.density
            density = replace(d, values=d.values * np.exp(w * d.nodes))
        return replace(self,
                       atoms=tuple((t, a * np.exp(w * t)) for t, a in self.atoms),
                       kernels=tuple(k.reweighted(w) for k in self.kernels),
                       density=density,
                       weight_exponent=self.weight_exponent + w)

    def moment(self, m: int) -> 'WeightedMeasure':
        """t^m μ"""
        if m < 0:
            raise DomainError("moment order must be nonnegative")
        kernels = []
        for k in self.kernels:
            kernels.extend(k.moment(m))
        density = None
        if self.density is not None:
            d = self.density
            density = replace(d, values=d.values * d.nodes ** m)
        return replace(self,
                       atoms=tuple((t, a * t ** m) for t, a in self.atoms if t ** m * a != 0),
                       kernels=tuple(kernels), density=density)

    def plus(self, other: 'WeightedMeasure') -> 'WeightedMeasure':
        _check_weights(self, other)
        grids = [g for g in (self.density, other.density) if g is not None]
        density = _sum_grids(grids) if grids else None
        return WeightedMeasure.build(self.atoms + other.atoms, self.kernels + other.kernels,
                                     density, self.weight_exponent,
                                     min(self.support_low, other.support_low))

    def evaluate_density(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        out = np.zeros(s.shape, dtype=complex)
        for k in self.kernels:
            out += k.evaluate(s)
        if self.density is not None:
            out += self.density.evaluate(s)
        return out

    def discretize(self, step: float, n_cells: int) -> np.ndarray:
        """
        절대연속 부분의 셀 질량

        셀 k는 [(k-1/2)h, (k+1/2)h] ∩ [0, ∞) (k = 0..n_cells-1).
        """
        edges = np.concatenate([[0.0], (np.arange(n_cells) + 0.5) * step])
        masses = np.zeros(n_cells, dtype=complex)
        for k in self.kernels:
            masses += k.cell_masses(edges)
        if self.density is not None:
            cum = self.density.cumulative(edges)
            masses += np.diff(cum)
        return masses


def _merge_atoms(atoms: Iterable[Tuple[float, complex]]) -> Tuple[Tuple[float, complex], ...]:
    """위치순 정렬, 같은 위치(상대 1e-12)의 가중치는 합치고 0 가중치는 버린다"""
    merged: List[List] = []
    for t, a in sorted(((float(t), complex(a)) for t, a in atoms), key=lambda ta: ta[0]):
        if merged and abs(t - merged[-1][0]) <= 1e-12 * max(1.0, abs(t)):
            merged[-1][1] += a
        else:
            merged.append([t, a])
    return tuple((t, a) for t, a in merged if a != 0)


def _merge_kernels(kernels: Iterable[GammaKernel]) -> List[GammaKernel]:
    """(start, α, λ)가 같은 커널의 계수를 합친다"""
    merged: dict = {}
    for k in kernels:
        key = (float(k.start), complex(k.alpha), complex(k.lam))
        merged[key] = merged[key] + k.coef if key in merged else k.coef
    return [GammaKernel(c, s, al, la) for (s, al, la), c in merged.items() if c != 0]


def _check_weights(mu: WeightedMeasure, nu: WeightedMeasure) -> None:
    if abs(mu.weight_exponent - nu.weight_exponent) > 1e-14 * max(1.0, abs(mu.weight_exponent)):
        raise DomainError(
            f"measures carry different weight exponents "
            f"({mu.weight_exponent:g} vs {nu.weight_exponent:g})")


def kernel_to_grid(kernel: GammaKernel, step: float, omega: float,
                   tail: float = 1e-13) -> DensityGrid:
    """감마 커널을 셀 평균값 격자로 바꾼다 (가중 꼬리가 tail 아래로 떨어질 때까지)"""
    rate = omega - float(np.real(kernel.lam))
    if rate <= 0:
        raise DivergenceError("kernel does not decay against the weight; cannot grid it")
    a = float(np.real(kernel.alpha))
    length = (-math.log(tail) + max(a - 1.0, 0.0) * math.log(1.0 + a / rate)) / rate
    n = int(math.ceil(length / step)) + 1
    edges = np.concatenate([[0.0], (np.arange(n) + 0.5) * step]) + kernel.start
    masses = kernel.cell_masses(edges)
    widths = np.diff(edges)
    return DensityGrid(kernel.start, step, masses / widths, truncated=True)


def _resample(grid: DensityGrid, start: float, step: float, n: int) -> np.ndarray:
    nodes = start + step * np.arange(n)
    return grid.evaluate(nodes)


def _sum_grids(grids: Sequence[DensityGrid]) -> DensityGrid:
    if len(grids) == 1:
        return grids[0]
    step = min(g.step for g in grids)
    start = min(g.start for g in grids)
    end = max(g.end for g in grids)
    n = int(math.ceil((end - start) / step - 1e-9)) + 1
    values = np.zeros(n, dtype=complex)
    for g in grids:
        aligned = abs((g.start - start) / step - round((g.start - start) / step)) < 1e-9 \
            and abs(g.step - step) < 1e-15
        if aligned:
            off = int(round((g.start - start) / step))
            values[off:off + g.values.size] += g.values
        else:
            values += _resample(g, start, step, n)
    return DensityGrid(start, step, values, truncated=any(g.truncated for g in grids))


def _grid_convolve(a: DensityGrid, b: DensityGrid, omega: float, tol: float) -> DensityGrid:
    if abs(a.step - b.step) > 1e-15:
        step = min(a.step, b.step)
        a = DensityGrid(a.start, step, _resample(a, a.start, step, int(round((a.end - a.start) / step)) + 1), a.truncated)
        b = DensityGrid(b.start, step, _resample(b, b.start, step, int(round((b.end - b.start) / step)) + 1), b.truncated)
    h = a.step
    va, vb = a.values, b.values
    na, nb = va.size, vb.size
    c = fftconvolve(va, vb) if na * nb > 1 << 22 else np.convolve(va, vb)
    # 사다리꼴 끝점 보정
    k = np.arange(na + nb - 1)
    j_lo = np.maximum(0, k - (nb - 1))
    j_hi = np.minimum(k, na - 1)
    c = c - 0.5 * (va[j_lo] * vb[k - j_lo] + va[j_hi] * vb[k - j_hi])
    c = h * c
    start = a.start + b.start

    if a.truncated and b.truncated:
        valid = min(na, nb)
    elif a.truncated:
        valid = na
    elif b.truncated:
        valid = nb
    else:
        valid = c.size
    if valid < c.size:
        nodes = start + h * np.arange(c.size)
        weight = np.abs(c) * np.exp(-omega * nodes)
        lost = float(simpson(weight[valid - 1:], x=nodes[valid - 1:])) if c.size - valid > 1 else 0.0
        total = float(simpson(weight, x=nodes))
        if lost > tol * max(total, 1e-300):
            raise GridResolutionError(
                f"convolution would truncate {lost:.3e} of {total:.3e} weighted mass; "
                f"extend the input grids")
        c = c[:valid]
    return DensityGrid(start, h, c, truncated=a.truncated or b.truncated)


def tv_norm(mu: WeightedMeasure, tol: float = 1e-8) -> float:
    """
    ‖e_{−ω}μ‖_TV = Σ|a_i|e^{−ωt_i} + ∫|g(s)|e^{−ωs}ds

    g는 모든 커널과 격자 밀도의 합이다. 부분마다 노름을 더하면 상쇄가
    사라지므로 합친 밀도의 절댓값을 적분한다.

    Raises:
        DivergenceError: 커널이 가중치에 대해 감쇠하지 않거나,
            격자 밀도 꼬리가 절단 기준을 만족하지 않을 때
    """
    omega = mu.weight_exponent
    total = sum(abs(a) * math.exp(-omega * t) for t, a in mu.atoms)
    kernels = _merge_kernels(mu.kernels)
    closed = [k.tv(omega) for k in kernels]
    d = mu.density
    if d is not None:
        weighted = np.abs(d.values) * np.exp(-omega * d.nodes)
        if d.truncated:
            mass = float(simpson(weighted, x=d.nodes))
            tail = tail_estimate(weighted, d.step, floor=1e-14 * float(weighted.max()))
            if tail > tol * max(1.0, mass):
                raise DivergenceError(
                    f"weighted density tail ≈ {tail:.3e} at T_max={d.end:g} "
                    f"(ω={omega:g}); e_(-ω)μ is not integrable on this grid")

    if d is None and len(kernels) <= 1:
        return float(total + sum(closed))
    if d is None:
        return float(total + _kernel_sum_tv(kernels, omega, tol))
    if kernels:
        d = _sum_grids([d] + [kernel_to_grid(k, d.step, omega) for k in kernels])
    weighted = np.abs(d.values) * np.exp(-omega * d.nodes)
    return float(total + simpson(weighted, x=d.nodes))


def _kernel_sum_tv(kernels: Sequence[GammaKernel], omega: float, tol: float) -> float:
    """∫|Σ_k g_k(s)|e^{−ωs}ds, 커널 시작점 사이 구간별 적응 구적"""

    def integrand(s: float) -> float:
        x = np.array([s])
        v = sum(k.evaluate(x)[0] for k in kernels)
        return abs(v) * math.exp(-omega * s)

    starts = sorted({float(k.start) for k in kernels})
    pieces = list(zip(starts[:-1], starts[1:])) + [(starts[-1], starts[-1] + 1.0),
                                                  (starts[-1] + 1.0, math.inf)]
    total, err = 0.0, 0.0
    for a, b in pieces:
        value, e = quad(integrand, a, b, limit=200, epsabs=tol * 1e-2, epsrel=1e-12)
        total += value
        err += e
    if err > tol * max(1.0, total):
        logger.warning(f"kernel TV quadrature error {err:.2e} exceeds {tol:.1e}")
    return total


def tail_estimate(weighted: np.ndarray, step: float, floor: float = 0.0) -> float:
    """
    마지막 구간의 로그 기울기로 잘린 꼬리 질량을 추정

    끝값이 floor 이하(반올림 잡음 수준)면 0으로 본다.
    """
    n = weighted.size
    end = float(weighted[-1])
    if end <= floor:
        return 0.0
    if n < 10:
        return end * step * n
    ref = float(weighted[int(0.8 * n)])
    span = step * (n - 1 - int(0.8 * n))
    if ref <= end:
        return math.inf
    rate = math.log(ref / end) / span
    return end / rate


def convolve(mu: WeightedMeasure, nu: WeightedMeasure, tol: float = 1e-8,
             step: Optional[float] = None) -> WeightedMeasure:
    """
    μ ∗ ν

    원자끼리는 위치 합/가중치 곱, 원자×밀도는 이동, 같은 λ의 감마 커널끼리는
    닫힌 형태, 나머지는 격자 합성곱.
    """
    _check_weights(mu, nu)
    omega = mu.weight_exponent
    atoms = {}
    for t1, a1 in mu.atoms:
        for t2, a2 in nu.atoms:
            atoms[t1 + t2] = atoms.get(t1 + t2, 0) + a1 * a2

    kernels: List[GammaKernel] = []
    grids: List[DensityGrid] = []

    def shift_grid(g: DensityGrid, tau: float, a: complex) -> DensityGrid:
        return DensityGrid(g.start + tau, g.step, g.values * a, g.truncated)

    for (atoms_side, other) in ((mu.atoms, nu), (nu.atoms, mu)):
        for t, a in atoms_side:
            kernels.extend(k.shifted(t, a) for k in other.kernels)
            if other.density is not None:
                grids.append(shift_grid(other.density, t, a))

    if step is None:
        steps = [g.step for g in (mu.density, nu.density) if g is not None]
        step = min(steps) if steps else DEFAULT_STEP

    for k1 in mu.kernels:
        for k2 in nu.kernels:
            if abs(k1.lam - k2.lam) < 1e-14 * max(1.0, abs(k1.lam)):
                kernels.append(GammaKernel(k1.coef * k2.coef, k1.start + k2.start,
                                           k1.alpha + k2.alpha, k1.lam))
            else:
                grids.append(_grid_convolve(kernel_to_grid(k1, step, omega),
                                            kernel_to_grid(k2, step, omega), omega, tol))

    for k in mu.kernels:
        if nu.density is not None:
            grids.append(_grid_convolve(kernel_to_grid(k, nu.density.step, omega), nu.density, omega, tol))
    for k in nu.kernels:
        if mu.density is not None:
            grids.append(_grid_convolve(mu.density, kernel_to_grid(k, mu.density.step, omega), omega, tol))
    if mu.density is not None and nu.density is not None:
        grids.append(_grid_convolve(mu.density, nu.density, omega, tol))

    density = _sum_grids(grids) if grids else None
    return WeightedMeasure(tuple((t, a) for t, a in atoms.items() if a != 0),
                           tuple(kernels), density, omega,
                           mu.support_low + nu.support_low)


def _laplace(mu: WeightedMeasure, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape, dtype=complex)
    for t, a in mu.atoms:
        out += a * np.exp(-z * t)
    for k in mu.kernels:
        out += k.laplace(z)
    if mu.density is not None:
        d = mu.density
        flat = z.ravel()
        vals = np.array([simpson(d.values * np.exp(-zz * d.nodes), x=d.nodes) for zz in flat])
        out += vals.reshape(z.shape)
    return out


def laplace_transform(mu: WeightedMeasure, z):
    """
    μ̂(z) = ∫ e^{−zs} μ(ds)

    Raises:
        DomainError: Re z <= ω
    """
    za = np.asarray(z, dtype=complex)
    if np.any(za.real <= mu.weight_exponent):
        raise DomainError(f"Laplace transform needs Re z > ω = {mu.weight_exponent:g}")
    out = _laplace(mu, za)
    return complex(out) if out.ndim == 0 else out


def boundary_values(mu: WeightedMeasure, s) -> np.ndarray:
    """경계선 Re z = ω 위의 μ̂(ω+is)"""
    return _laplace(mu, mu.weight_exponent + 1j * np.asarray(s, dtype=float))


@dataclass
class AM1Report:
    """AM_p 노름 항등식 점검 결과"""
    p: float
    boundary_sup: float
    tv_norm: float
    multiplier_norm: float
    grid_operator_norm: Optional[float]
    contractive: bool
    equal: bool
    notes: List[str] = field(default_factory=list)


def am1_norm_identity_check(mu: WeightedMeasure, p: float = 2, tol: float = 1e-6,
                            grid_norm: bool = True, s_max: float = 200.0,
                            n_coarse: int = 8001) -> AM1Report:
    """
    ‖μ̂‖_{AM_p} 와 ‖L_{e_{−ω}μ}‖ 비교 (스칼라 측도)

    p=2: 경계 sup (Plancherel), p=1/∞: TV 노름. 두 경우 모두
    sup|μ̂| <= TV 포함관계를 확인한다.
    """
    if p not in (1, 2, math.inf):
        raise DomainError("p must be one of 1, 2, inf")
    horizon = max([t for t, _ in mu.atoms] + [1.0])
    n = max(n_coarse, int(4 * s_max * horizon / math.pi) + 1)
    peak = maximize_modulus_on_line(lambda s: boundary_values(mu, s), s_max=s_max,
                                    n_coarse=n, tail_max=1e6, n_tail=100)
    tv = tv_norm(mu)
    multiplier = peak.value if p == 2 else tv
    notes = []
    operator = None
    if grid_norm:
        from .transference import convolution_operator_norm
        operator = convolution_operator_norm(mu.reweight(-mu.weight_exponent), p=p)
        notes.append("grid operator norm is a truncated-grid surrogate")
    contractive = peak.value <= tv + tol
    equal = abs(peak.value - tv) <= tol * max(1.0, tv)
    logger.debug(f"AM check p={p}: sup={peak.value:.6g}, tv={tv:.6g}")
    return AM1Report(p, peak.value, tv, multiplier, operator, contractive, equal, notes)


# ---- 텍스트 직렬화 ----

def dumps_measure(mu: WeightedMeasure) -> str:
    """
    형식:
        measure <ω> <support_low>
        atom <t> <re> <im>
        kernel <c_re> <c_im> <start> <α_re> <α_im> <λ_re> <λ_im>
        density <t0> <h> <re,im> <re,im> ...
        closed            (격자 밀도가 잘린 것이 아닐 때)
    """
    lines = [f"measure {mu.weight_exponent!r} {mu.support_low!r}"]
    for t, a in mu.atoms:
        lines.append(f"atom {t!r} {a.real!r} {a.imag!r}")
    for k in mu.kernels:
        c, al, la = complex(k.coef), complex(k.alpha), complex(k.lam)
        lines.append(f"kernel {c.real!r} {c.imag!r} {float(k.start)!r} "
                     f"{al.real!r} {al.imag!r} {la.real!r} {la.imag!r}")
    if mu.density is not None:
        d = mu.density
        vals = ' '.join(f"{float(v.real)!r},{float(v.imag)!r}" for v in d.values)
        lines.append(f"density {float(d.start)!r} {float(d.step)!r} {vals}")
        if not d.truncated:
            lines.append("closed")
    return '\n'.join(lines) + '\n'


def loads_measure(text: str) -> WeightedMeasure:
    atoms, kernels = [], []
    density = None
    omega, support = 0.0, None
    closed = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        parts = line.split()
        try:
            if parts[0] == 'measure':
                omega, support = float(parts[1]), float(parts[2])
            elif parts[0] == 'atom':
                atoms.append((float(parts[1]), complex(float(parts[2]), float(parts[3]))))
            elif parts[0] == 'kernel':
                f = [float(x) for x in parts[1:8]]
                kernels.append(GammaKernel(complex(f[0], f[1]), f[2], complex(f[3], f[4]),
                                           complex(f[5], f[6])))
            elif parts[0] == 'density':
                vals = [complex(*map(float, tok.split(','))) for tok in parts[3:]]
                density = (float(parts[1]), float(parts[2]), np.array(vals, dtype=complex))
            elif parts[0] == 'closed':
                closed = True
            else:
                raise ParseError(f"line {lineno}: unknown record '{parts[0]}'")
        except (IndexError, ValueError) as e:
            raise ParseError(f"line {lineno}: {e}") from e
    grid = None if density is None else DensityGrid(*density, truncated=not closed)
    return WeightedMeasure(tuple(atoms), tuple(kernels), grid, omega,
                           0.0 if support is None else support)

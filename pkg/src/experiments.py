"""
experiments.py - 설정 기반 실험 실행기
Hille-Phillips 함수 미적분 실험 시스템

각 실험은 매개변수 격자 위에서 측정값과 이론 상한을 비교한 ResultRow 를 만든다.
행 계산은 workers > 1 이면 프로세스 풀에서 돌리고, 출력 전에 격자 순서로 다시 정렬한다.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple
import logging
import math

import numpy as np

from .calculus import (SMOOTHING_CHECK_TOL, apply_derivative, apply_function, apply_smoothed,
                       apply_with_semigroup, iterated_derivative_constant)
from .errors import UsageError
from .eta import (eta_envelope, eta_upper, exponential_certificate, refine_certificate,
                  certificates, regime, smoothing_constant)
from .operator_core import (OperatorModel, certify_type, fractional_resolvent_power,
                            load_operator, operator_norm, semigroup_at)
from .symbols import HalfPlaneFunction, catalog, exp_decay, sup_norm
from .transference import moment_constant

logger = logging.getLogger(__name__)

EXPERIMENTS = ('thm35', 'cor310', 'thm44', 'stability', 'eta')
REQUIRED_GRIDS = {
    'thm35': ('functions', 'tau', 'omega'),
    'cor310': ('functions', 'tau', 'omega', 'alpha'),
    'thm44': ('functions', 'omega', 'm', 't'),
    'stability': ('h', 'alpha'),
    'eta': ('alpha_t', 'q'),
}
DEFAULT_TOL = 1e-9
DEFAULT_ABSCISSA = -0.9
JORDAN_COND_CAP = 1.0e4


@dataclass
class ResultRow:
    """실험 한 행: ratio = measured/bound, pass ⇔ ratio <= 1 + tol"""
    experiment: str
    params: Dict[str, Any]
    measured: float
    bound: float
    tol: float = DEFAULT_TOL
    order: Tuple = ()
    ratio: float = field(init=False)
    passed: bool = field(init=False)

    def __post_init__(self):
        self.measured = float(self.measured)
        self.bound = float(self.bound)
        if self.bound == 0.0:
            self.ratio = 0.0 if self.measured == 0.0 else math.inf
        else:
            self.ratio = self.measured / self.bound
        self.passed = bool(self.ratio <= 1.0 + self.tol)


@dataclass
class ExperimentConfig:
    """
    실험 하나의 설정

    Attributes:
        experiment: 실험 이름 (EXPERIMENTS 중 하나)
        operators: (라벨, 모델) 목록
        grids: 매개변수 격자 (리스트 값)
        options: 스칼라 설정값
        tol: 통과 허용오차
        seed: 난수 시드
        workers: 행 계산 프로세스 수
        out_dir: 출력 디렉토리
    """
    experiment: str
    operators: List[Tuple[str, OperatorModel]]
    grids: Dict[str, List[Any]]
    options: Dict[str, Any]
    tol: float = DEFAULT_TOL
    seed: int = 0
    workers: int = 1
    out_dir: Path = Path('./results')

    @classmethod
    def from_sections(cls, name: str, config: Dict[str, Any]) -> 'ExperimentConfig':
        """
        한 단계 섹션 설정에서 실험 설정을 만든다

        Raises:
            UsageError: 모르는 실험 이름, 비어 있는 격자
        """
        if name not in EXPERIMENTS:
            raise UsageError(f"unknown experiment '{name}' (choose from {', '.join(EXPERIMENTS)})")
        section = config.get(name) or {}
        run = config.get('run') or {}
        grids, options = {}, {}
        for key, value in section.items():
            (grids if isinstance(value, list) else options)[key] = value
        for key in REQUIRED_GRIDS[name]:
            if not grids.get(key):
                raise UsageError(f"[{name}] grid '{key}' is empty or missing")
        seed = int(run.get('seed', 0))
        out_dir = Path((config.get('paths') or {}).get('out_dir', './results')).expanduser()
        operators = build_operators(config.get('operators') or {}, seed)
        return cls(name, operators, grids, options,
                   tol=float(run.get('tol', DEFAULT_TOL)), seed=seed,
                   workers=max(1, int(run.get('workers', 1))), out_dir=out_dir)


# ---- 연산자 계열 ----

def random_normal(rng: np.random.Generator, dim: int, strip_low: float,
                  imag_max: float = 50.0) -> OperatorModel:
    """고유값 Re ∈ [ω₀, ω₀+5], |Im| <= imag_max 인 정규 행렬 (QR 유니터리)"""
    w = rng.uniform(strip_low, strip_low + 5.0, dim) + 1j * rng.uniform(-imag_max, imag_max, dim)
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return OperatorModel.dense(q @ np.diag(w) @ q.conj().T)


def perturbed_jordan(rng: np.random.Generator, lam: complex, size: int,
                     eps: float, max_tries: int = 20) -> OperatorModel:
    """조던 블록 + 작은 복소 섭동, 고유벡터 조건수 <= 1e4 가 될 때까지 섭동을 줄인다"""
    base = OperatorModel.jordan((lam, size)).matrix
    for _ in range(max_tries):
        noise = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
        op = OperatorModel.dense(base + eps * noise / np.sqrt(2 * size))
        if op.eigen_condition <= JORDAN_COND_CAP and op.half_plane_type > 0:
            return op
        eps *= 0.5
    raise UsageError(f"could not draw a Jordan perturbation with condition <= {JORDAN_COND_CAP:g}")


def build_operators(section: Dict[str, Any], seed: int) -> List[Tuple[str, OperatorModel]]:
    """operators 섹션 → (라벨, 모델) 목록"""
    rng = np.random.default_rng(seed)
    families = section.get('families', ['diag12'])
    out: List[Tuple[str, OperatorModel]] = []
    for family in families:
        if family == 'diag12':
            out.append(('diag12', OperatorModel.diagonal([1.0, 2.0])))
        elif family == 'normal':
            for i in range(int(section.get('normal_count', 1))):
                op = random_normal(rng, int(section.get('normal_dim', 3)),
                                   float(section.get('strip_low', 0.5)),
                                   float(section.get('imag_max', 50.0)))
                out.append((f'normal-{i}', op))
        elif family == 'jordan':
            for i in range(int(section.get('jordan_count', 1))):
                op = perturbed_jordan(rng, complex(section.get('jordan_lambda', 1.0)),
                                      int(section.get('jordan_size', 2)),
                                      float(section.get('perturbation', 0.05)))
                out.append((f'jordan-{i}', op))
        else:
            raise UsageError(f"unknown operator family '{family}'")
    for path in section.get('files', []) or []:
        out.append((Path(path).stem, load_operator(path)))
    if not out:
        raise UsageError("operator list is empty")
    return out


def _functions(names: Sequence[str], abscissa: float) -> Dict[str, HalfPlaneFunction]:
    table = catalog(abscissa)
    unknown = [n for n in names if n not in table]
    if unknown:
        raise UsageError(f"unknown catalog functions: {', '.join(unknown)}")
    return {n: table[n] for n in names}


def _map(fn: Callable, tasks: List, workers: int) -> List:
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, tasks))
    return [fn(t) for t in tasks]


def _types(cfg: ExperimentConfig) -> Dict[str, float]:
    return {label: certify_type(op, 0.0).M for label, op in cfg.operators}


def _check_omega(omegas: Sequence[float], abscissa: float, sign: int, name: str):
    for omega in omegas:
        line = sign * float(omega)
        if line < abscissa or (sign < 0 and omega <= 0) or (sign > 0 and omega >= 0):
            raise UsageError(f"[{name}] ω={omega} is outside the admissible range "
                             f"for functions on R_{abscissa:g}")


# ---- 반군 인자 추정: ‖(e_{−τ}f)(A)‖ <= M²η(ω,τ,2)‖e_{−τ}f‖_{H∞(R_{−ω})} ----

def _thm35_row(task) -> List[ResultRow]:
    order, label, op, M, name, tau, omega, abscissa, tol = task
    f = _functions([name], abscissa)[name]
    g = exp_decay(tau, abscissa) * f
    measured = apply_with_semigroup(op, f, tau).norm_value
    eta = eta_upper(omega, tau, 2.0)
    bound = M * M * eta * sup_norm(g, -omega)
    params = {'operator': label, 'f': name, 'tau': tau, 'omega': omega,
              'omega_tau': omega * tau, 'regime': regime(omega, tau, 2.0), 'eta': eta}
    rows = [ResultRow('thm35', params, measured, bound, tol, order)]
    if omega * tau > 0.5:
        # 지수 영역: η <= 2e^{−ωτ}
        simple = 2.0 * M * M * math.exp(-omega * tau) * sup_norm(g, -omega)
        rows.append(ResultRow('thm35-exp', dict(params), measured, simple, tol, order))
    return rows


def run_thm35(cfg: ExperimentConfig) -> List[ResultRow]:
    abscissa = float(cfg.options.get('abscissa', DEFAULT_ABSCISSA))
    _check_omega(cfg.grids['omega'], abscissa, -1, 'thm35')
    types = _types(cfg)
    tasks = []
    for i, (label, op) in enumerate(cfg.operators):
        for j, name in enumerate(cfg.grids['functions']):
            for k, tau in enumerate(cfg.grids['tau']):
                for l, omega in enumerate(cfg.grids['omega']):
                    tasks.append(((0, j, k, l, i), label, op, types[label], name,
                                  float(tau), float(omega), abscissa, cfg.tol))
    rows = [r for chunk in _map(_thm35_row, tasks, cfg.workers) for r in chunk]

    # 연산자 계열 전체의 sup 을 |log ωτ| 에 맞춘다
    groups: Dict[Tuple, List[ResultRow]] = {}
    for r in rows:
        if r.experiment == 'thm35':
            groups.setdefault(r.order[:4], []).append(r)
    for key, members in groups.items():
        first = members[0].params
        params = {'f': first['f'], 'tau': first['tau'], 'omega': first['omega'],
                  'omega_tau': first['omega_tau'], 'regime': first['regime']}
        log = abs(math.log(first['omega_tau']))
        measured = max(r.measured for r in members)
        if first['regime'] == 'log' and log > 0:
            params['log_band'] = measured / log
        rows.append(ResultRow('thm35-family', params, measured,
                              max(r.bound for r in members), cfg.tol, (1,) + key[1:]))
    rows.extend(thm35_monotone_rows(rows, cfg.tol))
    return sorted(rows, key=lambda r: (r.order, r.experiment))


def thm35_monotone_rows(rows: Sequence[ResultRow], tol: float = DEFAULT_TOL,
                        band_max: float = 10.0) -> List[ResultRow]:
    """
    thm35 표에서 읽는 모양 진단

    - thm35-monotone: 지수 영역에서 ω 고정 시 bound 가 τ 에 대해 증가하지 않음
      (measured = 이웃 τ 사이 bound 비의 최댓값, bound = 1)
    - thm35-log-band: 로그 영역 (ωτ <= 0.1) 에서 η/|log ωτ| 의 max/min <= band_max
    """
    out = []
    by_omega: Dict[Tuple, List[ResultRow]] = {}
    by_function: Dict[Tuple, List[ResultRow]] = {}
    for r in rows:
        if r.experiment != 'thm35':
            continue
        _, j, _, l, i = r.order
        if r.params['regime'] == 'exponential':
            by_omega.setdefault((j, l, i), []).append(r)
        elif r.params['omega_tau'] <= 0.1:
            by_function.setdefault((j, i), []).append(r)

    for (j, l, i), members in sorted(by_omega.items()):
        if len(members) < 2:
            continue
        members = sorted(members, key=lambda r: r.params['tau'])
        steps = [b.bound / a.bound for a, b in zip(members, members[1:])]
        first = members[0].params
        params = {'operator': first['operator'], 'f': first['f'], 'omega': first['omega'],
                  'tau_min': first['tau'], 'tau_max': members[-1].params['tau']}
        out.append(ResultRow('thm35-monotone', params, max(steps), 1.0, tol, (2, j, l, i)))

    for (j, i), members in sorted(by_function.items()):
        if len(members) < 2:
            continue
        band = [r.params['eta'] / abs(math.log(r.params['omega_tau'])) for r in members]
        first = members[0].params
        params = {'operator': first['operator'], 'f': first['f'], 'b1': min(band), 'b2': max(band)}
        out.append(ResultRow('thm35-log-band', params, max(band) / min(band), band_max, tol, (3, j, i)))
    return out


# ---- Hilbert 공간 추정과 평활화 ----

def _cor310_row(task) -> List[ResultRow]:
    kind, order, label, op, M, name, a, b, abscissa, lam, tol = task
    f = _functions([name], abscissa)[name]
    if kind == 'a':
        tau, omega = a, b
        fa = apply_function(op, f, cross_check=False).matrix
        measured = operator_norm(fa @ semigroup_at(op, tau))
        bound = M * M * eta_upper(omega, tau, 2.0) * math.exp(omega * tau) * sup_norm(f, -omega)
        params = {'operator': label, 'f': name, 'tau': tau, 'omega': omega,
                  'omega_tau': omega * tau, 'regime': regime(omega, tau, 2.0)}
        return [ResultRow('cor310a', params, measured, bound, tol, order)]

    alpha, omega = a, b
    smoothed = apply_smoothed(op, f, lam, alpha, strict=False)
    constant = smoothing_constant(alpha, lam, omega)
    params = {'operator': label, 'f': name, 'alpha': alpha, 'lambda': lam,
              'omega': omega, 'constant': constant}
    rows = [ResultRow('cor310c', params, smoothed.norm_value,
                      constant * M * M * sup_norm(f, -omega), tol, order),
            ResultRow('cor310-oracle', params, smoothed.quad_report['oracle_gap'],
                      SMOOTHING_CHECK_TOL, tol, order)]
    eye = np.eye(op.dim)
    if alpha == 1.0:
        F = apply_function(op, f, cross_check=False).matrix
        composed = F @ np.linalg.inv(op.matrix - lam * eye)
        gap = operator_norm(smoothed.matrix - composed)
        rows.append(ResultRow('cor310-resolvent', params, gap,
                              1e-6 * (1.0 + operator_norm(composed)), tol, order))
    if op.kind == 'diagonal' and name == 'exp':
        d = np.array(op.data)
        closed = np.diag(np.exp(-d) * (d - lam) ** (-alpha))
        gap = operator_norm(smoothed.matrix - closed)
        rows.append(ResultRow('cor310-closed', params, gap,
                              1e-6 * (1.0 + operator_norm(closed)), tol, order))
    return rows


def run_cor310(cfg: ExperimentConfig) -> List[ResultRow]:
    abscissa = float(cfg.options.get('abscissa', DEFAULT_ABSCISSA))
    lam = float(cfg.options.get('lambda', -1.0))
    smoothing_omega = float(cfg.options.get('smoothing_omega', 0.5))
    _check_omega(list(cfg.grids['omega']) + [smoothing_omega], abscissa, -1, 'cor310')
    types = _types(cfg)
    tasks = []
    for i, (label, op) in enumerate(cfg.operators):
        for j, name in enumerate(cfg.grids['functions']):
            for k, tau in enumerate(cfg.grids['tau']):
                for l, omega in enumerate(cfg.grids['omega']):
                    tasks.append(('a', (0, i, j, k, l), label, op, types[label], name,
                                  float(tau), float(omega), abscissa, lam, cfg.tol))
            for k, alpha in enumerate(cfg.grids['alpha']):
                tasks.append(('c', (1, i, j, k, 0), label, op, types[label], name,
                              float(alpha), smoothing_omega, abscissa, lam, cfg.tol))
    rows = [r for chunk in _map(_cor310_row, tasks, cfg.workers) for r in chunk]
    return sorted(rows, key=lambda r: (r.order, r.experiment))


# ---- 도함수와 m-유계 ----

def _thm44_row(task) -> List[ResultRow]:
    kind, order, label, op, M, a, b, c, abscissa, tol = task
    if kind == 'derivative':
        name, omega, m = a, b, c
        f = _functions([name], abscissa)[name]
        measured = apply_derivative(op, f, m).norm_value
        constant = iterated_derivative_constant(m, omega, 0.0, M)
        params = {'operator': label, 'f': name, 'omega': omega, 'm': m, 'constant': constant}
        return [ResultRow('thm44', params, measured, constant * sup_norm(f, omega), tol, order)]
    t, m = a, b
    T = semigroup_at(op, t)
    rows = []
    if m == 1:
        derived = apply_derivative(op, exp_decay(t, abscissa), 1).matrix
        gap = operator_norm(derived + t * T)
        rows.append(ResultRow('thm44-semigroup', {'operator': label, 't': t}, gap,
                              1e-8 * (1.0 + t * operator_norm(T)), tol, order))
    # ω = −1/t 에서 ‖e_{−t}‖_{H∞(R_ω)} = e
    constant = iterated_derivative_constant(m, -1.0 / t, 0.0, M)
    rows.append(ResultRow('thm44-converse', {'operator': label, 't': t, 'm': m},
                          t ** m * operator_norm(T), constant * math.e, tol, order))
    return rows


def run_thm44(cfg: ExperimentConfig) -> List[ResultRow]:
    abscissa = float(cfg.options.get('abscissa', DEFAULT_ABSCISSA))
    _check_omega(cfg.grids['omega'], abscissa, 1, 'thm44')
    types = _types(cfg)
    tasks = []
    for i, (label, op) in enumerate(cfg.operators):
        for j, name in enumerate(cfg.grids['functions']):
            for k, omega in enumerate(cfg.grids['omega']):
                for l, m in enumerate(cfg.grids['m']):
                    tasks.append(('derivative', (0, i, j, k, l), label, op, types[label],
                                  name, float(omega), int(m), abscissa, cfg.tol))
        for k, t in enumerate(cfg.grids['t']):
            for l, m in enumerate(cfg.grids['m']):
                tasks.append(('converse', (1, i, 0, k, l), label, op, types[label],
                              float(t), int(m), None, abscissa, cfg.tol))
    rows = [r for chunk in _map(_thm44_row, tasks, cfg.workers) for r in chunk]
    rows.append(ResultRow('thm44-constant', {'p': 2.0}, moment_constant(2.0), 0.5,
                          cfg.tol, (2,)))
    return sorted(rows, key=lambda r: (r.order, r.experiment))


# ---- 유리 근사의 안정성 ----

def cayley(z):
    """r(z) = (2−z)/(2+z)"""
    return (2.0 - z) / (2.0 + z)


def rational_powers_sup(R: np.ndarray, x: np.ndarray, n_max: int,
                        track_powers: bool = False) -> Tuple[float, Optional[float]]:
    """max_{0<=n<=N} ‖Rⁿx‖ 와 (track_powers 이면) max_n ‖Rⁿ‖"""
    v = np.asarray(x, dtype=complex)
    P = np.eye(R.shape[0], dtype=complex)
    best_v = float(np.linalg.norm(v))
    best_p = 1.0 if track_powers else None
    for _ in range(n_max):
        v = R @ v
        best_v = max(best_v, float(np.linalg.norm(v)))
        if track_powers:
            P = R @ P
            best_p = max(best_p, operator_norm(P))
    return best_v, best_p


def _stability_op(task) -> List[ResultRow]:
    order, label, op, hs, alphas, lam, delta, x0, n_max, seed, tol = task
    shifted = OperatorModel.shifted(op, -delta)
    M = certify_type(shifted, 0.0).M
    eye = np.eye(op.dim)
    x0 = np.asarray(x0, dtype=complex)
    rows = []
    for a_idx, alpha in enumerate(alphas):
        x_alpha = fractional_resolvent_power(op, lam, alpha) @ x0
        constant = smoothing_constant(alpha, lam - delta, delta)
        bound = constant * M * M * float(np.linalg.norm(x0))
        sups = []
        for h_idx, h in enumerate(hs):
            R = (2.0 * eye - h * op.matrix) @ np.linalg.inv(2.0 * eye + h * op.matrix)
            sup, _ = rational_powers_sup(R, x_alpha, n_max)
            sups.append(sup)
            rows.append(ResultRow('stability', {'operator': label, 'alpha': alpha, 'h': h,
                                                'n_max': n_max, 'constant': constant},
                                  sup, bound, tol, order + (0, a_idx, h_idx)))
        spread = (max(sups) - min(sups)) / max(sups)
        rows.append(ResultRow('stability-uniform', {'operator': label, 'alpha': alpha},
                              spread, 0.05, tol, order + (1, a_idx, 0)))
    # x₀ = (A-λ)^{-1}y, y = (A-λ)x₀ 이므로 α = 1 상수와 ‖(A-λ)x₀‖ 로 누른다
    graph = float(np.linalg.norm((op.matrix - lam * eye) @ x0))
    raw_bound = smoothing_constant(1.0, lam - delta, delta) * M * M * graph
    for h_idx, h in enumerate(hs):
        R = (2.0 * eye - h * op.matrix) @ np.linalg.inv(2.0 * eye + h * op.matrix)
        raw, power = rational_powers_sup(R, x0, n_max, track_powers=True)
        params = {'operator': label, 'h': h, 'n_max': n_max,
                  'growth': raw / float(np.linalg.norm(x0)), 'power_sup': power}
        rows.append(ResultRow('stability-raw', params, raw, raw_bound, tol, order + (2, 0, h_idx)))
        if op.kind == 'diagonal':
            rng = np.random.default_rng(seed)
            x = rng.standard_normal(op.dim) + 1j * rng.standard_normal(op.dim)
            sup, _ = rational_powers_sup(R, x, n_max)
            rows.append(ResultRow('stability-normal', {'operator': label, 'h': h},
                                  sup, float(np.linalg.norm(x)), tol, order + (3, 0, h_idx)))
    return rows


def run_stability(cfg: ExperimentConfig) -> List[ResultRow]:
    opts = cfg.options
    jordan = OperatorModel.jordan((float(opts.get('jordan_lambda', 0.2)), int(opts.get('jordan_size', 2))))
    ops = [('jordan', jordan)] + [(l, op) for l, op in cfg.operators if op.kind == 'diagonal']
    lam = float(opts.get('lambda', -1.0))
    delta = float(opts.get('delta', 0.1))
    n_max = int(opts.get('n_max', 10000))
    hs = [float(h) for h in cfg.grids['h']]
    alphas = [float(a) for a in cfg.grids['alpha']]
    if any(a <= 0 for a in alphas):
        raise UsageError("[stability] α must be positive")
    tasks = []
    for i, (label, op) in enumerate(ops):
        x0 = cfg.grids.get('x0') or [1.0] * op.dim
        if len(x0) != op.dim:
            x0 = [1.0] * op.dim
        if op.half_plane_type <= delta:
            raise UsageError(f"[stability] operator '{label}' needs half-plane type above δ={delta}")
        tasks.append(((0, i), label, op, hs, alphas, lam, delta, x0, n_max, cfg.seed, cfg.tol))
    rows = [r for chunk in _map(_stability_op, tasks, cfg.workers) for r in chunk]
    s = np.concatenate([np.linspace(-1e3, 1e3, 20001), np.logspace(3, 8, 200), -np.logspace(3, 8, 200)])
    rows.append(ResultRow('stability-symbol', {'samples': int(s.size)},
                          float(np.abs(cayley(1j * s)).max()), 1.0, cfg.tol, (1,)))
    return sorted(rows, key=lambda r: (r.order, r.experiment))


# ---- η 포락선 ----

def _eta_row(task) -> List[ResultRow]:
    order, a, q, budget, tol = task
    env = eta_envelope(a, 1.0, q)
    params = {'alpha_t': a, 'q': q, 'regime': env.regime, 'best': env.best_kind,
              'lower_source': env.lower_source}
    rows = [ResultRow('eta', params, env.lower, env.upper, tol, order)]
    if env.regime == 'exponential' and 1 < q < math.inf:
        value = exponential_certificate(a, 1.0, q).value
        rows.append(ResultRow('eta-exponential', {'alpha_t': a, 'q': q}, value,
                              2.0 * math.exp(-a), tol, order))
    if budget > 0 and 1 < q < math.inf:
        seed = min(certificates(a, 1.0, q), key=lambda c: c.value)
        refined = refine_certificate(seed, budget)
        rows.append(ResultRow('eta-refine', {'alpha_t': a, 'q': q, 'seed': seed.kind,
                                             'improvement_pct': refined.notes.get('improvement_pct', 0.0)},
                              refined.value, seed.value, tol, order))
    return rows


def run_eta_sweep(cfg: ExperimentConfig) -> List[ResultRow]:
    alphas = [float(a) for a in cfg.grids['alpha_t']]
    qs = [float(q) for q in cfg.grids['q']]
    budget = int(cfg.options.get('refine_budget', 0))
    tasks = [((0, j, i), a, q, budget, cfg.tol)
             for j, q in enumerate(qs) for i, a in enumerate(alphas)]
    rows = [r for chunk in _map(_eta_row, tasks, cfg.workers) for r in chunk]

    # 로그 영역 띠: value/|log αt| 의 max/min <= 10
    for j, q in enumerate(qs):
        band = [r.bound / abs(math.log(r.params['alpha_t'])) for r in rows
                if r.experiment == 'eta' and r.params['q'] == q and r.params['regime'] == 'log'
                and r.params['alpha_t'] <= 0.1]
        if len(band) >= 2:
            rows.append(ResultRow('eta-log-band', {'q': q, 'b1': min(band), 'b2': max(band)},
                                  max(band) / min(band), 10.0, cfg.tol, (1, j)))
    return sorted(rows, key=lambda r: (r.order, r.experiment))


RUNNERS: Dict[str, Callable[[ExperimentConfig], List[ResultRow]]] = {
    'thm35': run_thm35,
    'cor310': run_cor310,
    'thm44': run_thm44,
    'stability': run_stability,
    'eta': run_eta_sweep,
}


def run_experiment(cfg: ExperimentConfig) -> List[ResultRow]:
    rows = RUNNERS[cfg.experiment](cfg)
    failed = sum(not r.passed for r in rows)
    logger.info(f"{cfg.experiment}: {len(rows)} rows, {failed} failed")
    return rows

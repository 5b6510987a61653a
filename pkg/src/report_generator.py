"""
report_generator.py - 결과 표/그림/요약 생성 모듈
Hille-Phillips 함수 미적분 실험 시스템
"""

from pathlib import Path
from datetime import datetime
from typing import Any, Dict, List, Optional, Sequence
from collections import defaultdict
import hashlib
import logging
import math

import pandas as pd
import yaml
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt

try:
    from jinja2 import Environment, FileSystemLoader, BaseLoader
except ImportError:
    print("jinja2 패키지를 설치해주세요: pip install jinja2")
    raise

from .errors import UsageError
from .experiments import ResultRow
from .numerics import format_sig

logger = logging.getLogger(__name__)

FORMATS = ('csv', 'svg')
SVG_SALT = 'calculus-lab'

# 실험 id → (x 매개변수, 계열 매개변수, 로그 x축, 띠 그림)
PLOT_SPECS = {
    'thm35-family': ('omega_tau', 'f', True, False),
    'cor310a': ('omega_tau', 'f', True, False),
    'cor310c': ('alpha', 'f', False, False),
    'thm44': ('omega', 'm', False, False),
    'stability': ('h', 'alpha', True, False),
    'eta': ('alpha_t', 'q', True, True),
}


# 인라인 템플릿 (외부 파일 없이도 동작)
DEFAULT_TEMPLATE = '''# Hille-Phillips 실험 요약
**{{ generated_at }}** | 총 **{{ total_rows }}**행, 실패 **{{ total_failed }}**행

---

## 실험별 결과

| 실험 | 행 | 통과 | 최대 ratio | 최악 매개변수 |
|------|----|------|-----------|---------------|
{% for s in stats %}
| {{ s.experiment }} | {{ s.rows }} | {{ s.passed }} | {{ '%.6g'|format(s.worst_ratio) }} | {{ s.worst_params }} |
{% endfor %}

{% if failures %}
## 실패한 행 ({{ failures|length }})
{% for r in failures %}
- **{{ r.experiment }}** {{ r.params }}: measured={{ '%.6g'|format(r.measured) }}, bound={{ '%.6g'|format(r.bound) }}
{% endfor %}
{% endif %}

{% if log_bands %}
## 로그 영역 상수

| 출처 | 매개변수 | b₁ | b₂ |
|------|----------|----|----|
{% for b in log_bands %}
| {{ b.source }} | {{ b.label }} | {{ '%.6g'|format(b.low) }} | {{ '%.6g'|format(b.high) }} |
{% endfor %}
{% endif %}

---

*config sha256: `{{ config_digest }}`*
'''


def _cell(value: Any) -> str:
    return '' if value is None else format_sig(value, 17)


def rows_frame(rows: Sequence[ResultRow]) -> pd.DataFrame:
    """ResultRow 목록 → `experiment,param:...,measured,bound,ratio,pass` 문자열 표"""
    keys: List[str] = []
    for r in rows:
        for k in r.params:
            if k not in keys:
                keys.append(k)
    columns = ['experiment'] + [f'param:{k}' for k in keys] + ['measured', 'bound', 'ratio', 'pass']
    records = []
    for r in rows:
        record = {'experiment': r.experiment}
        for k in keys:
            record[f'param:{k}'] = _cell(r.params.get(k))
        record.update(measured=_cell(r.measured), bound=_cell(r.bound),
                      ratio=_cell(r.ratio), **{'pass': _cell(r.passed)})
        records.append(record)
    return pd.DataFrame(records, columns=columns, dtype=object)


def config_digest(config: Dict[str, Any]) -> str:
    text = yaml.safe_dump(config, sort_keys=True, allow_unicode=True)
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


class ReportGenerator:
    """CSV/SVG 출력과 마크다운 요약 생성 클래스"""

    def __init__(self, output_dir: str = None, template_dir: str = None):
        """
        보고서 생성기 초기화

        Args:
            output_dir: 결과 저장 디렉토리
            template_dir: Jinja2 템플릿 디렉토리 (summary.md.j2)
        """
        self.output_dir = Path(output_dir).expanduser() if output_dir else Path('./results')
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise OSError(f"cannot create output directory {self.output_dir}: {e}") from e

        # 템플릿 환경 설정
        if template_dir and Path(template_dir).exists():
            self.env = Environment(
                loader=FileSystemLoader(template_dir),
                trim_blocks=True,
                lstrip_blocks=True
            )
            self.template = self.env.get_template('summary.md.j2')
        else:
            self.env = Environment(
                loader=BaseLoader(),
                trim_blocks=True,
                lstrip_blocks=True
            )
            self.template = self.env.from_string(DEFAULT_TEMPLATE)

    def _write(self, path: Path, text: str) -> None:
        try:
            with open(path, 'w', encoding='utf-8', newline='\n') as f:
                f.write(text)
        except OSError as e:
            raise OSError(f"cannot write {path}: {e}") from e

    def emit(self, rows: Sequence[ResultRow], fmt: str, name: str) -> List[Path]:
        """
        결과 행을 파일로 출력

        Args:
            rows: 결과 행 (이미 격자 순서로 정렬된 상태)
            fmt: 'csv' 또는 'svg'
            name: 파일 이름 접두사

        Returns:
            작성한 파일 경로 목록 (svg 는 그림이 있는 실험 id 마다 하나)

        Raises:
            UsageError: 모르는 형식
        """
        if fmt not in FORMATS:
            raise UsageError(f"unknown output format '{fmt}' (choose from {', '.join(FORMATS)})")
        if fmt == 'csv':
            path = self.output_dir / f"{name}.csv"
            self._write(path, rows_frame(rows).to_csv(index=False, lineterminator='\n'))
            logger.info(f"CSV saved: {path} ({len(rows)} rows)")
            return [path]
        return self._plots(rows, name)

    def _plots(self, rows: Sequence[ResultRow], name: str) -> List[Path]:
        by_id: Dict[str, List[ResultRow]] = defaultdict(list)
        for r in rows:
            by_id[r.experiment].append(r)
        paths = []
        plt.rcParams['svg.hashsalt'] = SVG_SALT
        for experiment, members in by_id.items():
            spec = PLOT_SPECS.get(experiment)
            if spec is None:
                continue
            path = self.output_dir / f"{name}-{experiment}.svg"
            self._plot(members, experiment, spec, path)
            paths.append(path)
        return paths

    def _plot(self, members: List[ResultRow], experiment: str, spec, path: Path) -> None:
        x_key, series_key, logx, band = spec
        frame = pd.DataFrame([{'x': float(r.params[x_key]), 'series': str(r.params.get(series_key, '')),
                               'measured': r.measured, 'bound': r.bound} for r in members])
        # 같은 (계열, x) 의 다른 연산자는 최대값으로 묶는다
        frame = frame.groupby(['series', 'x'], sort=True).max().reset_index()

        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        for i, (label, part) in enumerate(frame.groupby('series', sort=False)):
            color = f"C{i % 10}"
            if band:
                ax.fill_between(part['x'], part['measured'], part['bound'], color=color, alpha=0.25)
                ax.plot(part['x'], part['bound'], color=color, label=f"{series_key}={label} upper")
                ax.plot(part['x'], part['measured'], color=color, linestyle=':', label=f"{series_key}={label} lower")
            else:
                ax.plot(part['x'], part['measured'], color=color, marker='o', markersize=3,
                        label=f"{series_key}={label} measured")
                ax.plot(part['x'], part['bound'], color=color, linestyle='--', label=f"{series_key}={label} bound")
        if logx:
            ax.set_xscale('log')
        positive = bool((frame['bound'] > 0).all())
        if band or (positive and frame['bound'].max() > 100 * frame['bound'].min()):
            ax.set_yscale('log')
        ax.set_xlabel(x_key)
        ax.set_title(experiment)
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=6)
        fig.tight_layout()
        try:
            fig.savefig(path, format='svg', metadata={'Date': None})
        except OSError as e:
            raise OSError(f"cannot write {path}: {e}") from e
        finally:
            plt.close(fig)
        logger.info(f"SVG saved: {path}")

    def _stats(self, rows: Sequence[ResultRow]) -> List[Dict[str, Any]]:
        grouped: Dict[str, List[ResultRow]] = defaultdict(list)
        for r in rows:
            grouped[r.experiment].append(r)
        stats = []
        for experiment, members in grouped.items():
            worst = max(members, key=lambda r: r.ratio)
            stats.append({
                'experiment': experiment,
                'rows': len(members),
                'passed': sum(r.passed for r in members),
                'worst_ratio': worst.ratio,
                'worst_params': ', '.join(f"{k}={_cell(v)}" for k, v in worst.params.items()),
            })
        return stats

    def _log_bands(self, rows: Sequence[ResultRow]) -> List[Dict[str, Any]]:
        bands = []
        for r in rows:
            if r.experiment == 'eta-log-band':
                bands.append({'source': 'eta', 'label': f"q={_cell(r.params['q'])}",
                              'low': r.params['b1'], 'high': r.params['b2']})
        family: Dict[str, List[float]] = defaultdict(list)
        for r in rows:
            if r.experiment == 'thm35-family' and 'log_band' in r.params:
                family[r.params['f']].append(r.params['log_band'])
        for f, values in family.items():
            bands.append({'source': 'thm35', 'label': f"f={f}", 'low': min(values), 'high': max(values)})
        return bands

    def generate_summary(self, results: Dict[str, List[ResultRow]],
                         config: Optional[Dict[str, Any]] = None) -> str:
        """
        실행 요약 마크다운 생성

        Args:
            results: 실험 이름 → 결과 행
            config: 실행에 쓴 설정 (digest 용)

        Returns:
            생성된 summary.md 경로
        """
        rows = [r for members in results.values() for r in members]
        failures = [r for r in rows if not r.passed]
        content = self.template.render(
            generated_at=datetime.now().strftime('%Y-%m-%d %H:%M:%S'),
            total_rows=len(rows),
            total_failed=len(failures),
            stats=self._stats(rows),
            failures=failures[:50],
            log_bands=self._log_bands(rows),
            config_digest=config_digest(config or {}),
        )
        filepath = self.output_dir / 'summary.md'
        self._write(filepath, content)
        logger.info(f"Summary saved: {filepath}")
        return str(filepath)

    def get_run_summary(self, results: Dict[str, List[ResultRow]]) -> Dict[str, Any]:
        """실행 통계 (로그/종료 코드용)"""
        rows = [r for members in results.values() for r in members]
        worst = max((r.ratio for r in rows if math.isfinite(r.ratio)), default=0.0)
        return {
            'total': len(rows),
            'failed': sum(not r.passed for r in rows),
            'worst_ratio': worst,
            'experiments': list(results.keys()),
        }


def emit(rows: Sequence[ResultRow], fmt: str, out_dir: str, name: str) -> List[Path]:
    """ReportGenerator(out_dir).emit 의 함수 형태"""
    return ReportGenerator(out_dir).emit(rows, fmt, name)

#!/usr/bin/env python3
"""
Calculus Lab - 메인 실행 파일
Hille-Phillips 함수 미적분 실험 시스템

사용법:
    python main.py all                     # 모든 실험 실행
    python main.py thm35 --seed 7          # 반군 인자 추정 실험만
    python main.py eta --out ./tmp         # η 포락선 표와 그림
    python main.py stability --workers 4   # 유리 근사 안정성 (4 프로세스)
"""

import sys
import argparse
import logging
from pathlib import Path
from typing import Dict, List, Optional
import yaml

# 프로젝트 경로 추가
sys.path.insert(0, str(Path(__file__).parent))

from src.errors import CalculusError, UsageError
from src.experiments import EXPERIMENTS, ExperimentConfig, ResultRow, run_experiment
from src.report_generator import ReportGenerator

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s [%(levelname)s] %(message)s',
    datefmt='%Y-%m-%d %H:%M:%S'
)
logger = logging.getLogger(__name__)


class CalculusLab:
    """실험 실행 메인 클래스"""

    def __init__(self, config_path: str = None, out_dir: str = None, seed: int = None,
                 tol: float = None, workers: int = None):
        """
        초기화

        Args:
            config_path: 설정 파일 경로
            out_dir, seed, tol, workers: 설정값을 덮어쓰는 CLI 플래그
        """
        self.config = self._load_config(config_path)
        self._apply_overrides(out_dir, seed, tol, workers)
        self._init_components()

    def _load_config(self, config_path: str = None) -> dict:
        """설정 파일 로드"""
        explicit = config_path is not None
        if config_path is None:
            config_path = Path(__file__).parent / 'config.yaml'

        config_path = Path(config_path)

        if config_path.exists():
            try:
                with open(config_path, 'r', encoding='utf-8') as f:
                    config = yaml.safe_load(f) or {}
            except yaml.YAMLError as e:
                raise UsageError(f"cannot parse config {config_path}: {e}") from e
            except OSError as e:
                raise UsageError(f"cannot read config {config_path}: {e}") from e
            for name, section in config.items():
                if isinstance(section, dict) and any(isinstance(v, dict) for v in section.values()):
                    raise UsageError(f"config section '{name}' nests deeper than one level")
            logger.info(f"Config loaded from {config_path}")
            return config
        if explicit:
            raise UsageError(f"config file not found: {config_path}")
        logger.warning("Config file not found, using defaults")
        return self._default_config()

    def _default_config(self) -> dict:
        """기본 설정 (config.yaml 과 같은 데모 격자)"""
        return {
            'paths': {'out_dir': './results'},
            'run': {'seed': 20240601, 'tol': 1e-9, 'workers': 1},
            'operators': {
                'families': ['diag12', 'normal', 'jordan'],
                'normal_count': 1, 'normal_dim': 3, 'strip_low': 0.5, 'imag_max': 50.0,
                'jordan_count': 1, 'jordan_lambda': 1.0, 'jordan_size': 2, 'perturbation': 0.05,
            },
            'thm35': {
                'functions': ['exp', 'resolvent', 'exp_resolvent', 'rational', 'damped'],
                'tau': [0.5, 1.0, 2.0],
                'omega': [0.05, 0.2, 0.5, 0.9],
            },
            'cor310': {
                'functions': ['exp', 'resolvent', 'sqrt_resolvent'],
                'tau': [0.5, 1.0, 2.0],
                'omega': [0.2, 0.5],
                'alpha': [0.25, 0.5, 1.0],
                'lambda': -1.0,
                'smoothing_omega': 0.5,
            },
            'thm44': {
                'functions': ['resolvent', 'exp_resolvent', 'rational', 'sqrt_resolvent', 'damped'],
                'omega': [-0.25, -0.5, -0.75],
                'm': [1, 2],
                't': [0.5, 1.0, 2.0],
            },
            'stability': {
                'h': [1.0, 0.1, 0.01],
                'alpha': [0.25, 0.5, 1.0],
                'x0': [1.0, 1.0],
                'n_max': 10000,
                'delta': 0.1,
                'lambda': -1.0,
                'jordan_lambda': 0.2,
                'jordan_size': 2,
            },
            'eta': {
                'alpha_t': [1.0e-4, 1.0e-3, 1.0e-2, 1.0e-1, 0.5, 1.0, 2.0, 4.0],
                'q': [1.5, 2.0, 3.0],
                'refine_budget': 0,
            },
        }

    def _apply_overrides(self, out_dir, seed, tol, workers):
        run = self.config.setdefault('run', {})
        if out_dir is not None:
            self.config.setdefault('paths', {})['out_dir'] = out_dir
        if seed is not None:
            run['seed'] = seed
        if tol is not None:
            if tol < 0:
                raise UsageError("--tol must be nonnegative")
            run['tol'] = tol
        if workers is not None:
            if workers < 1:
                raise UsageError("--workers must be at least 1")
            run['workers'] = workers

    def _init_components(self):
        """컴포넌트 초기화"""
        paths = self.config.get('paths') or {}
        out_dir = Path(paths.get('out_dir', './results')).expanduser()
        templates_dir = Path(paths.get('templates_dir', './templates'))
        self.report_gen = ReportGenerator(
            output_dir=str(out_dir),
            template_dir=str(templates_dir) if templates_dir.exists() else None
        )

    def run(self, names: List[str], formats: Optional[List[str]] = None) -> Dict[str, List[ResultRow]]:
        """
        실험 실행

        워크플로우 (실험마다):
        1. 섹션 설정 검증과 연산자 계열 생성
        2. 격자 위의 행 계산
        3. CSV/SVG 출력
        마지막으로 summary.md 작성

        Args:
            names: 실험 이름 목록
            formats: 출력 형식 (기본: csv, svg)

        Returns:
            실험 이름 → 결과 행
        """
        formats = formats or ['csv', 'svg']
        run = self.config.get('run') or {}

        logger.info("=" * 60)
        logger.info("Calculus Lab 시작")
        logger.info(f"   실험: {', '.join(names)}")
        logger.info(f"   seed={run.get('seed', 0)}, tol={run.get('tol')}, workers={run.get('workers', 1)}")
        logger.info("=" * 60)

        results: Dict[str, List[ResultRow]] = {}
        total = len(names)
        for i, name in enumerate(names, 1):
            logger.info(f"\n[{i}/{total}] {name} 실행 중...")
            cfg = ExperimentConfig.from_sections(name, self.config)
            logger.info(f"   연산자 {len(cfg.operators)}개: {', '.join(label for label, _ in cfg.operators)}")
            rows = run_experiment(cfg)
            for fmt in formats:
                for path in self.report_gen.emit(rows, fmt, name):
                    logger.info(f"   → {path}")
            failed = sum(not r.passed for r in rows)
            logger.info(f"   → {len(rows)}행, 실패 {failed}행")
            results[name] = rows

        summary_path = self.report_gen.generate_summary(results, self.config)
        summary = self.report_gen.get_run_summary(results)

        logger.info("\n" + "=" * 60)
        logger.info("완료" if summary['failed'] == 0 else "완료 (실패 행 있음)")
        logger.info(f"   총 행: {summary['total']}")
        logger.info(f"   실패: {summary['failed']}")
        logger.info(f"   최대 ratio: {summary['worst_ratio']:.6g}")
        logger.info(f"   요약: {summary_path}")
        logger.info("=" * 60)
        return results


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', '-c', type=str,
                        help='설정 파일 경로')
    common.add_argument('--out', '-o', type=str,
                        help='출력 디렉토리 (설정의 paths.out_dir 대신)')
    common.add_argument('--seed', type=int,
                        help='난수 시드')
    common.add_argument('--tol', type=float,
                        help='통과 허용오차 (ratio <= 1 + tol)')
    common.add_argument('--workers', '-j', type=int,
                        help='행 계산 프로세스 수')
    common.add_argument('--format', dest='formats', action='append', choices=['csv', 'svg'],
                        help='출력 형식 (반복 가능, 기본: csv와 svg)')
    common.add_argument('--verbose', '-v', action='store_true',
                        help='DEBUG 로그 출력')

    parser = argparse.ArgumentParser(
        description='Hille-Phillips 함수 미적분 실험 시스템',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
예시:
    python main.py all                       # 모든 실험
    python main.py thm35 --tol 1e-8          # 허용오차 변경
    python main.py eta --out ./eta-results   # 출력 위치 변경
    python main.py cor310 --config my.yaml   # 다른 설정 파일

종료 코드: 0 모든 행 통과, 1 실패 행 있음 또는 중단, 2 입력/수치 오류
        """
    )
    sub = parser.add_subparsers(dest='command', required=True)
    helps = {
        'thm35': '반군 인자 추정 (η 형태 상한)',
        'cor310': 'Hilbert 공간 추정과 분수 거듭제곱 평활화',
        'thm44': '도함수 상한과 m-유계 계산',
        'stability': '유리 시간 적분의 안정성',
        'eta': 'η 포락선 표와 그림',
        'all': '모든 실험',
    }
    for name in EXPERIMENTS + ('all',):
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def main(argv: Optional[List[str]] = None):
    """CLI 엔트리포인트"""
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    names = list(EXPERIMENTS) if args.command == 'all' else [args.command]
    try:
        lab = CalculusLab(config_path=args.config, out_dir=args.out, seed=args.seed,
                          tol=args.tol, workers=args.workers)
        results = lab.run(names, args.formats)
    except KeyboardInterrupt:
        print("\n중단됨")
        sys.exit(1)
    except CalculusError as e:
        logger.error(f"오류 발생: {e}")
        sys.exit(2)
    except Exception as e:
        logger.error(f"오류 발생: {e}")
        raise

    failed = sum(not r.passed for rows in results.values() for r in rows)
    sys.exit(0 if failed == 0 else 1)


if __name__ == "__main__":
    main()

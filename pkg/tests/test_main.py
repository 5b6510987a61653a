"""
test_main.py - CLI 와 설정 로딩 테스트
Hille-Phillips 함수 미적분 실험 시스템
"""

import pytest
import yaml

from main import CalculusLab, build_parser, main
from src.errors import UsageError


def _write_config(path, out_dir, eta=None):
    config = {
        'paths': {'out_dir': str(out_dir)},
        'run': {'seed': 3, 'tol': 1e-9, 'workers': 1},
        'operators': {'families': ['diag12']},
        'eta': eta or {'alpha_t': [0.05, 1.0], 'q': [2.0]},
    }
    path.write_text(yaml.safe_dump(config), encoding='utf-8')
    return path


class TestConfig:

    def test_missing_explicit_config(self, tmp_path):
        with pytest.raises(UsageError):
            CalculusLab(config_path=str(tmp_path / 'nope.yaml'))

    def test_nested_section_rejected(self, tmp_path):
        path = tmp_path / 'deep.yaml'
        path.write_text("eta:\n  grid:\n    q: [2.0]\n", encoding='utf-8')
        with pytest.raises(UsageError):
            CalculusLab(config_path=str(path))

    def test_broken_yaml(self, tmp_path):
        path = tmp_path / 'broken.yaml'
        path.write_text("eta: [1, 2\n", encoding='utf-8')
        with pytest.raises(UsageError):
            CalculusLab(config_path=str(path))

    def test_overrides(self, tmp_path, out_dir):
        path = _write_config(tmp_path / 'c.yaml', out_dir)
        lab = CalculusLab(config_path=str(path), seed=42, tol=1e-6, workers=2)
        assert lab.config['run'] == {'seed': 42, 'tol': 1e-6, 'workers': 2}

    def test_bad_overrides(self, tmp_path, out_dir):
        path = _write_config(tmp_path / 'c.yaml', out_dir)
        with pytest.raises(UsageError):
            CalculusLab(config_path=str(path), workers=0)
        with pytest.raises(UsageError):
            CalculusLab(config_path=str(path), tol=-1.0)


class TestCli:

    def test_subcommands(self):
        args = build_parser().parse_args(['eta', '--seed', '5', '--format', 'csv'])
        assert args.command == 'eta'
        assert args.seed == 5
        assert args.formats == ['csv']

    def test_passing_run_exits_zero(self, tmp_path, out_dir):
        path = _write_config(tmp_path / 'c.yaml', out_dir)
        with pytest.raises(SystemExit) as exc:
            main(['eta', '--config', str(path), '--format', 'csv'])
        assert exc.value.code == 0
        assert (out_dir / 'eta.csv').exists()
        assert (out_dir / 'summary.md').exists()

    def test_usage_error_exits_two(self, tmp_path, out_dir):
        path = _write_config(tmp_path / 'c.yaml', out_dir, eta={'alpha_t': [], 'q': [2.0]})
        with pytest.raises(SystemExit) as exc:
            main(['eta', '--config', str(path)])
        assert exc.value.code == 2

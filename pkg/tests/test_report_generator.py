"""
test_report_generator.py - CSV/SVG/요약 출력 테스트
Hille-Phillips 함수 미적분 실험 시스템
"""

import pytest

from src.errors import UsageError
from src.experiments import ResultRow
from src.report_generator import ReportGenerator, config_digest, emit, rows_frame


@pytest.fixture
def rows():
    return [
        ResultRow('eta', {'alpha_t': 0.01, 'q': 2.0, 'regime': 'log'}, 0.9, 2.5, order=(0, 0, 0)),
        ResultRow('eta', {'alpha_t': 0.1, 'q': 2.0, 'regime': 'log'}, 0.95, 1.4, order=(0, 0, 1)),
        ResultRow('eta', {'alpha_t': 1.0, 'q': 2.0, 'regime': 'exponential'}, 0.37, 0.4,
                  order=(0, 0, 2)),
        ResultRow('eta-log-band', {'q': 2.0, 'b1': 0.3, 'b2': 0.6}, 2.0, 10.0, order=(1, 0)),
    ]


class TestCsv:

    def test_header_only_for_no_rows(self, out_dir):
        path, = ReportGenerator(str(out_dir)).emit([], 'csv', 'empty')
        assert path.read_text(encoding='utf-8') == 'experiment,measured,bound,ratio,pass\n'

    def test_columns_and_full_precision(self, out_dir, rows):
        path, = emit(rows, 'csv', str(out_dir), 'eta')
        lines = path.read_text(encoding='utf-8').splitlines()
        assert lines[0] == ('experiment,param:alpha_t,param:q,param:regime,param:b1,param:b2,'
                            'measured,bound,ratio,pass')
        assert len(lines) == 5
        first = lines[1].split(',')
        assert first[0] == 'eta'
        assert float(first[-2]) == 0.9 / 2.5
        assert first[-1] == 'true'
        # 없는 매개변수는 빈 칸
        assert first[4] == '' and first[5] == ''

    def test_failed_row(self, out_dir):
        row = ResultRow('thm35', {'tau': 1.0}, 2.0, 1.0)
        path, = emit([row], 'csv', str(out_dir), 'fail')
        assert path.read_text(encoding='utf-8').splitlines()[1].endswith(',false')

    def test_rerun_is_byte_identical(self, out_dir, rows):
        first = emit(rows, 'csv', str(out_dir), 'a')[0].read_bytes()
        second = emit(rows, 'csv', str(out_dir), 'b')[0].read_bytes()
        assert first == second

    def test_frame_is_textual(self, rows):
        frame = rows_frame(rows)
        assert list(frame['experiment']) == ['eta', 'eta', 'eta', 'eta-log-band']
        assert all(isinstance(v, str) for v in frame['measured'])


class TestSvg:

    def test_plot_per_experiment_id(self, out_dir, rows):
        paths = ReportGenerator(str(out_dir)).emit(rows, 'svg', 'eta')
        assert [p.name for p in paths] == ['eta-eta.svg']
        text = paths[0].read_text(encoding='utf-8')
        assert text.lstrip().startswith('<?xml')
        assert '<svg' in text

    def test_svg_is_reproducible(self, out_dir, rows):
        gen = ReportGenerator(str(out_dir))
        first = gen.emit(rows, 'svg', 'one')[0].read_bytes()
        second = gen.emit(rows, 'svg', 'two')[0].read_bytes()
        assert first == second

    def test_unknown_format(self, out_dir, rows):
        with pytest.raises(UsageError):
            ReportGenerator(str(out_dir)).emit(rows, 'xlsx', 'eta')


class TestSummary:

    def test_summary_written(self, out_dir, rows):
        gen = ReportGenerator(str(out_dir))
        config = {'run': {'seed': 1}}
        path = gen.generate_summary({'eta': rows}, config)
        text = open(path, encoding='utf-8').read()
        assert '# Hille-Phillips 실험 요약' in text
        assert config_digest(config) in text
        assert '로그 영역 상수' in text

    def test_run_summary(self, out_dir, rows):
        failing = rows + [ResultRow('thm35', {'tau': 1.0}, 3.0, 1.0)]
        summary = ReportGenerator(str(out_dir)).get_run_summary({'eta': rows, 'thm35': failing[-1:]})
        assert summary['total'] == 5
        assert summary['failed'] == 1
        assert summary['worst_ratio'] == pytest.approx(3.0)
        assert summary['experiments'] == ['eta', 'thm35']

    def test_digest_ignores_key_order(self):
        assert config_digest({'a': 1, 'b': [1, 2]}) == config_digest({'b': [1, 2], 'a': 1})

"""
conftest.py - 공용 테스트 픽스처
Hille-Phillips 함수 미적분 실험 시스템
"""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.operator_core import OperatorModel
from src.measures import WeightedMeasure
from src.symbols import catalog


@pytest.fixture
def diag12():
    return OperatorModel.diagonal([1.0, 2.0])


@pytest.fixture
def jordan12():
    """Jordan(1, 2) = [[1, 1], [0, 1]]"""
    return OperatorModel.jordan((1.0, 2))


@pytest.fixture
def dense3():
    """대각화 가능한 비정규 3×3 행렬"""
    return OperatorModel.dense(np.array([[1.0, 0.5, 0.0],
                                         [0.0, 1.5, 0.3],
                                         [0.2, 0.0, 2.0]], dtype=complex))


@pytest.fixture
def operators(diag12, jordan12, dense3):
    return [('diag12', diag12), ('jordan12', jordan12), ('dense3', dense3)]


@pytest.fixture
def functions():
    return catalog(-0.9)


@pytest.fixture
def dirac1():
    return WeightedMeasure.point_mass(1.0)


@pytest.fixture
def out_dir(tmp_path):
    path = tmp_path / 'results'
    path.mkdir()
    return path


def pytest_addoption(parser):
    parser.addoption('--update-golden', action='store_true', default=False,
                     help='tests/golden/*.csv 를 현재 출력으로 다시 쓴다')


@pytest.fixture
def update_golden(request):
    return request.config.getoption('--update-golden')

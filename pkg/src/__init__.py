# Calculus Lab - Hille-Phillips 함수 미적분 실험 시스템
# src 패키지 초기화

from .errors import CalculusError, DomainError, UsageError
from .operator_core import OperatorModel, certify_type, semigroup_at, spectral_oracle
from .measures import WeightedMeasure
from .symbols import HalfPlaneFunction, catalog, parse_function, sup_norm
from .calculus import apply_function, apply_measure
from .eta import eta_envelope, eta_upper
from .transference import factorization_check
from .experiments import ExperimentConfig, ResultRow, run_experiment
from .report_generator import ReportGenerator

__all__ = [
    'CalculusError', 'DomainError', 'UsageError',
    'OperatorModel', 'certify_type', 'semigroup_at', 'spectral_oracle',
    'WeightedMeasure',
    'HalfPlaneFunction', 'catalog', 'parse_function', 'sup_norm',
    'apply_function', 'apply_measure',
    'eta_envelope', 'eta_upper',
    'factorization_check',
    'ExperimentConfig', 'ResultRow', 'run_experiment',
    'ReportGenerator',
]
__version__ = '1.0.0'

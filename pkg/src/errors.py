"""
errors.py - 예외 클래스 모음
Hille-Phillips 함수 미적분 실험 시스템

수치 루틴이 실패한 이유를 호출자가 구분할 수 있도록
내장 ValueError 대신 전용 예외를 사용한다.
"""


class CalculusError(Exception):
    """패키지 공통 기본 예외"""


class DomainError(CalculusError):
    """인자가 허용 영역 밖에 있을 때 (Re z <= ω, Re α <= 0 등)"""


class SingularityError(CalculusError):
    """z가 스펙트럼에 너무 가까울 때"""


class SemigroupOverflowError(CalculusError):
    """반군 행렬 성분이 표현 범위를 넘을 때"""


class DivergenceError(CalculusError):
    """꼬리 검사가 실패해서 적분/상한이 발산으로 판정될 때"""


class ConvergenceError(CalculusError):
    """구적법이나 절단이 허용오차에 도달하지 못했을 때

    마지막 진단 정보는 ``report`` 속성으로 확인할 수 있다.
    """

    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report


class ConditioningError(CalculusError):
    """고유벡터 조건수가 크고 윤곽 적분 대체 경로도 잡을 수 없을 때"""


class UnboundedError(CalculusError):
    """식 트리 성장 분석상 반평면에서 유계가 아닐 때"""


class TruncationError(CalculusError):
    """선적분/포아송 적분의 꼬리 한계가 허용오차를 넘을 때"""

    def __init__(self, msg, tail_bound=None):
        super().__init__(msg)
        self.tail_bound = tail_bound


class CausalityError(CalculusError):
    """역 푸리에 복원 결과가 음의 시간에 질량을 가질 때"""


class RecognitionError(CalculusError):
    """함수가 어떤 계산 경로에도 해당하지 않을 때"""


class GridResolutionError(CalculusError):
    """합성곱 결과 격자가 질량을 잘라낼 때"""


class SupportViolationError(CalculusError):
    """측도의 지지 하한이 요구값보다 작을 때"""


class RegimeError(CalculusError):
    """η 구성이 해당 영역 밖에서 요청되었을 때"""


class UsageError(CalculusError):
    """CLI/설정 입력 오류"""


class ParseError(CalculusError):
    """텍스트 형식이나 함수 문법 파싱 실패"""

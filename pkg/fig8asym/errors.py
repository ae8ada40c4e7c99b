"""
예외 정의
수치 계산 실패와 설정 오류를 코드/종료코드와 함께 표현
"""

from typing import Any, Dict, Optional

from .utils import Constants


class Fig8Error(Exception):
    """모든 라이브러리 예외의 기반 클래스"""

    code = "INTERNAL_ERROR"
    exit_code = 3

    def __init__(self, detail: str = "", **context: Any):
        self.detail = detail or Constants.ERROR_MESSAGES.get(self.code, self.code)
        self.context = context
        super().__init__(self.detail)

    def to_record(self) -> Dict[str, Any]:
        """CLI 가 출력하는 기계 판독용 에러 레코드"""
        record: Dict[str, Any] = {
            "success": False,
            "error": self.code,
            "message": Constants.ERROR_MESSAGES.get(self.code, ""),
            "detail": self.detail,
        }
        if self.context:
            record["context"] = {k: str(v) for k, v in self.context.items()}
        return record


class ConfigError(Fig8Error):
    code = "CONFIG_ERROR"
    exit_code = 2


class NumericError(Fig8Error):
    code = "NUMERIC_ERROR"


class CutError(NumericError):
    code = "CUT_ERROR"


class DomainError(NumericError):
    code = "DOMAIN_ERROR"


class WindowError(DomainError):
    code = "WINDOW_ERROR"


class PrecisionError(NumericError):
    code = "PRECISION_ERROR"


class QuadratureError(PrecisionError):
    code = "QUADRATURE_ERROR"


class BranchError(NumericError):
    code = "BRANCH_ERROR"


class NoRootError(NumericError):
    code = "NO_ROOT"


class HypothesisError(NumericError):
    code = "HYPOTHESIS_ERROR"


def exit_code_for(exc: Optional[BaseException]) -> int:
    """예외 → 프로세스 종료 코드"""
    if exc is None:
        return 0
    if isinstance(exc, Fig8Error):
        return exc.exit_code
    return 3

"""
공통 유틸리티
로그 영역 덧셈, 결정적 병렬 처리, 캐시 키, 출력 포맷, 입력 검증 등
"""

import hashlib
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from typing import Any, Callable, Iterable, List, Optional, Sequence, TypeVar

import mpmath

T = TypeVar("T")
R = TypeVar("R")


class LogUtils:
    """로그 영역 산술 (오버플로 없는 합). m 은 계산에 쓸 mpmath 컨텍스트"""

    @staticmethod
    def log_add(m, log_x, log_y):
        """log(e^x + e^y)"""
        if log_x == m.ninf:
            return log_y
        if log_y == m.ninf:
            return log_x
        if log_x > log_y:
            return log_x + m.log1p(m.exp(log_y - log_x))
        return log_y + m.log1p(m.exp(log_x - log_y))

    @staticmethod
    def log_sum_exp(m, log_values: Sequence[Any]):
        """고정 순서 쌍별 축약으로 log Σ e^{x_i} 계산 (빈 입력은 -inf)"""
        if not log_values:
            return m.ninf
        return ParallelUtils.pairwise_reduce(partial(LogUtils.log_add, m), list(log_values))


class ParallelUtils:
    """결정적 병렬 처리"""

    @staticmethod
    def map_ordered(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
        """입력 순서 그대로 결과를 돌려주는 map. workers <= 1 이면 현재 스레드에서 실행"""
        items = list(items)
        if workers <= 1 or len(items) <= 1:
            return [fn(item) for item in items]
        with ThreadPoolExecutor(max_workers=min(workers, len(items))) as executor:
            futures = [executor.submit(fn, item) for item in items]
            return [future.result() for future in futures]

    @staticmethod
    def pairwise_reduce(fn: Callable[[R, R], R], items: Sequence[R]) -> Optional[R]:
        """고정된 이진 트리 모양의 축약. 워커 수와 무관하게 같은 순서로 더함"""
        level = list(items)
        if not level:
            return None
        while len(level) > 1:
            nxt = [fn(level[i], level[i + 1]) for i in range(0, len(level) - 1, 2)]
            if len(level) % 2:
                nxt.append(level[-1])
            level = nxt
        return level[0]


class CacheUtils:
    """캐시 관련 유틸리티"""

    @staticmethod
    def generate_cache_key(*args) -> str:
        """캐시 키 생성"""
        key_string = "|".join(str(arg) for arg in args)
        return hashlib.md5(key_string.encode()).hexdigest()


class FormatUtils:
    """숫자 출력 포맷"""

    @staticmethod
    def significant_digits(precision_bits: int) -> int:
        return max(1, int(precision_bits / 3.32))

    @staticmethod
    def decimal_string(value, precision_bits: int) -> str:
        """precision_bits/3.32 유효숫자 10진 문자열"""
        return mpmath.nstr(value, FormatUtils.significant_digits(precision_bits), min_fixed=-3, max_fixed=12)


class ValidationUtils:
    """검증 관련 유틸리티"""

    @staticmethod
    def validate_odd_level(r: int) -> tuple[bool, str]:
        """TV 레벨 r 검증"""
        if r < 3:
            return False, "r 은 3 이상이어야 합니다"
        if r % 2 == 0:
            return False, "r 은 홀수여야 합니다"
        return True, ""

    @staticmethod
    def validate_windows(zeta: float, delta: float) -> tuple[bool, str]:
        """s≈1, s≈1/2 윈도우 폭 검증"""
        if not 0 < zeta < 0.5:
            return False, "zeta 는 (0, 1/2) 범위여야 합니다"
        if not 0 < delta < 0.25:
            return False, "delta 는 (0, 1/4) 범위여야 합니다"
        if not 0.5 + delta < 1 - zeta:
            return False, "두 윈도우가 겹칩니다 (1/2 + delta < 1 - zeta 이어야 함)"
        return True, ""

    @staticmethod
    def validate_deformation(u: float) -> tuple[bool, str]:
        """변형 파라미터 u 검증: 0 <= u < log((3+√5)/2)"""
        if not 0 <= u < Constants.U_MAX:
            return False, f"u 는 [0, {Constants.U_MAX:.6f}) 범위여야 합니다"
        return True, ""

    @staticmethod
    def validate_quadrature(value, err, tol) -> tuple[bool, str]:
        """구적 오차 추정 검증: err <= √tol · max(|value|, 1)"""
        err = mpmath.mpf(err)
        bound = mpmath.sqrt(mpmath.mpf(tol)) * max(mpmath.mpf(abs(value)), 1)
        if err > bound:
            return False, f"오차 추정 {mpmath.nstr(err, 5)} 가 허용치 {mpmath.nstr(bound, 5)} 를 넘었습니다"
        return True, ""


class Constants:
    """상수 정의"""

    # log((3+√5)/2): T(u) 의 극
    U_MAX = 0.9624236501192069

    # 양자 다이로그 적분 반경 기본 비율
    CONTOUR_R_FRACTION = 0.5

    # 수치 판정
    SADDLE_RESIDUAL_MAX = 1e-12
    SADDLE_D2_MIN = 1e-6
    NONVANISHING_MARGIN = 1e-6

    # 에러 메시지
    ERROR_MESSAGES = {
        "CONFIG_ERROR": "설정이 올바르지 않습니다",
        "NUMERIC_ERROR": "수치 계산에 실패했습니다",
        "CUT_ERROR": "다이로그 분지선 [1, ∞) 위의 값입니다",
        "DOMAIN_ERROR": "정의역을 벗어난 입력입니다",
        "WINDOW_ERROR": "s 가 허용 윈도우 밖에 있습니다",
        "PRECISION_ERROR": "요구 정밀도에 도달하지 못했습니다",
        "QUADRATURE_ERROR": "수치 적분이 수렴하지 않았습니다",
        "BRANCH_ERROR": "조건을 만족하는 안장점 분지를 찾지 못했습니다",
        "NO_ROOT": "구간 안에서 근을 찾지 못했습니다",
        "HYPOTHESIS_ERROR": "안장점 근사의 가정이 성립하지 않습니다",
        "INTERNAL_ERROR": "내부 오류가 발생했습니다",
    }

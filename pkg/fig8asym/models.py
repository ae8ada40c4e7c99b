"""
공통 데이터 모델
정밀도 컨텍스트, 평가점, 로그 영역 복소수, 결과 레코드
"""

import math
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import mpmath
from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import config
from .utils import Constants, FormatUtils

_LOCAL = threading.local()


def _thread_context(bits: int) -> mpmath.MPContext:
    """스레드별 mpmath 컨텍스트. workprec 전환이 다른 워커와 섞이지 않도록 분리"""
    contexts = getattr(_LOCAL, "contexts", None)
    if contexts is None:
        contexts = _LOCAL.contexts = {}
    ctx = contexts.get(bits)
    if ctx is None:
        ctx = mpmath.MPContext()
        ctx.prec = bits
        contexts[bits] = ctx
    return ctx


# ======================== 정밀도 ========================

class PrecisionContext(BaseModel):
    """모든 수치 연산의 작업 정밀도와 적분 허용오차"""

    model_config = ConfigDict(frozen=True)

    precision_bits: int = Field(default=config.DEFAULT_PRECISION_BITS, ge=64)
    quad_tol: float = Field(default=config.DEFAULT_QUAD_TOL, gt=0.0, lt=1.0)
    contour_R: Optional[float] = Field(default=None, gt=0.0)

    @property
    def mp(self) -> mpmath.MPContext:
        return _thread_context(self.precision_bits)

    @property
    def quad_bits(self) -> int:
        """적분에 쓰는 정밀도: 허용오차에 맞춘 자릿수 + 여유, 작업 정밀도 이하"""
        digits = max(15, int(math.ceil(-math.log10(self.quad_tol))) + 5)
        return min(self.precision_bits, int(digits * 3.33) + 8)

    def with_precision(self, bits: int) -> "PrecisionContext":
        return self.model_copy(update={"precision_bits": bits})

    def radius_for(self, gamma) -> Any:
        """C_R 반경. 0 < R < min(π/|γ|, 1) 을 벗어나면 ValueError"""
        m = self.mp
        bound = min(m.pi / abs(gamma), m.mpf(1))
        if self.contour_R is None:
            return Constants.CONTOUR_R_FRACTION * bound
        R = m.mpf(self.contour_R)
        if not 0 < R < bound:
            raise ValueError(f"contour_R={self.contour_R} 가 (0, {float(bound):.6f}) 밖에 있습니다")
        return R


# ======================== 평가점 ========================

class RootSpec(BaseModel):
    """평가점 (M, a, u). q = exp(ξ/(M+a)), ξ = 2πi + u, γ = (2π − iu)/(2(M+a))"""

    model_config = ConfigDict(frozen=True)

    M: int = Field(ge=1)
    a: float = Field(default=0.0, ge=0.0)
    u: float = Field(default=0.0, ge=0.0, lt=Constants.U_MAX)
    N: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _check_level(self) -> "RootSpec":
        if self.N is not None and self.a != self.N - self.M + 0.5:
            raise ValueError("N 이 주어지면 a = N − M + 1/2 이어야 합니다")
        return self

    @classmethod
    def from_color_level(cls, M: int, N: int) -> "RootSpec":
        """(M, N) 생성자: q = exp(2πi/(N+1/2))"""
        if M > N:
            raise ValueError(f"M={M} 은 N={N} 이하여야 합니다")
        return cls(M=M, a=N - M + 0.5, u=0.0, N=N)

    @classmethod
    def kashaev(cls, N: int) -> "RootSpec":
        """Kashaev 점: M = N, q = exp(2πi/N)"""
        return cls(M=N, a=0.0, u=0.0)

    @property
    def s(self) -> Optional[float]:
        return None if self.N is None else self.M / (self.N + 0.5)

    @property
    def r(self) -> Optional[int]:
        return None if self.N is None else 2 * self.N + 1

    def scale(self, m):
        """M + a"""
        return self.M + m.mpf(self.a)

    def xi(self, m):
        return m.mpc(self.u, 2 * m.pi)

    def gamma(self, m):
        return m.mpc(2 * m.pi, -m.mpf(self.u)) / (2 * self.scale(m))

    def q(self, m):
        return m.exp(self.xi(m) / self.scale(m))


# ======================== 로그 영역 복소수 ========================

def wrap_arg(m, theta):
    """각도를 (−π, π] 로"""
    k = m.ceil((theta - m.pi) / (2 * m.pi))
    return theta - 2 * m.pi * k


@dataclass(frozen=True)
class LogComplex:
    """(log|z|, arg z) 로 저장한 복소수. 0 은 log_mag = -inf"""

    log_mag: Any
    arg: Any

    @classmethod
    def from_complex(cls, m, z) -> "LogComplex":
        z = m.mpc(z)
        if z == 0:
            return cls(m.ninf, m.zero)
        return cls(m.log(abs(z)), m.arg(z))

    @classmethod
    def from_log(cls, m, w) -> "LogComplex":
        """복소 로그값 w 로부터 (허수부는 2π 로 감음)"""
        w = m.mpc(w)
        return cls(w.real, wrap_arg(m, w.imag))

    def to_complex(self, m):
        if self.log_mag == m.ninf:
            return m.mpc(0)
        return m.exp(self.log_mag) * m.expj(self.arg)

    def log_value(self, m):
        return m.mpc(self.log_mag, self.arg)

    def multiply(self, other: "LogComplex", m) -> "LogComplex":
        return LogComplex(self.log_mag + other.log_mag, wrap_arg(m, self.arg + other.arg))

    def divide(self, other: "LogComplex", m) -> "LogComplex":
        return LogComplex(self.log_mag - other.log_mag, wrap_arg(m, self.arg - other.arg))

    def abs_squared(self) -> "LogComplex":
        return LogComplex(2 * self.log_mag, 0 * self.arg)

    def to_record(self, precision_bits: int) -> Dict[str, str]:
        """JSON 출력용 {log_mag, arg_mod_2pi, decimal_string_if_representable}"""
        m = _thread_context(precision_bits)
        record = {
            "log_mag": FormatUtils.decimal_string(self.log_mag, precision_bits),
            "arg_mod_2pi": FormatUtils.decimal_string(self.arg, precision_bits),
            "decimal_string_if_representable": None,
        }
        # binary64 로 표현 가능한 크기일 때만 10진 값을 덧붙임
        if self.log_mag != m.ninf and self.log_mag < 700:
            record["decimal_string_if_representable"] = FormatUtils.decimal_string(
                self.to_complex(m), precision_bits
            )
        return record


# ======================== 결과 레코드 ========================

class Branch(str, Enum):
    MINUS_ROOT = "minus_root"
    PLUS_ROOT = "plus_root"


class TheoremTag(str, Enum):
    CVC2 = "cvc2"
    ASYMSU2 = "asymsu2"
    MAINTHM1 = "mainthm1"
    MAINTHM1_5 = "mainthm1_5"
    MAINTHM2 = "mainthm2"
    MAINTHM3_BOUND = "mainthm3_bound"
    MAINTHM4 = "mainthm4"
    WINDOW_S1 = "window_s1"
    WINDOW_HALF = "window_half"


@dataclass(frozen=True)
class JonesValue:
    value: Any
    log_form: LogComplex
    term_count: int
    precision_bits: int


@dataclass(frozen=True)
class SaddleSolution:
    z: Any
    omega: Any
    potential_value: Any
    second_derivative: Any
    residual: Any
    branch: Branch
    family: str = ""


@dataclass(frozen=True)
class AsymptoticEstimate:
    """value = prefactor · exp(exponent), 로그 영역으로 보관"""

    prefactor: Any
    exponent: Any
    value: LogComplex
    theorem_tag: TheoremTag
    params: Dict[str, Any] = field(default_factory=dict)

    def recomposed(self, m) -> LogComplex:
        return LogComplex.from_log(m, m.log(self.prefactor) + self.exponent)


@dataclass(frozen=True)
class TvResult:
    r: int
    value: LogComplex
    window_sums: Dict[str, LogComplex]
    growth_rate: Any
    log_abs_squares: Tuple[Any, ...] = ()


@dataclass
class SweepRow:
    """스윕 한 줄: (파라미터, 정확값, AEF 값, log 비, 성장률)"""

    params: Dict[str, Any]
    exact: Optional[LogComplex] = None
    aef: Optional[LogComplex] = None
    log_ratio: Any = None
    growth_rate: Any = None
    extra: Dict[str, Any] = field(default_factory=dict)

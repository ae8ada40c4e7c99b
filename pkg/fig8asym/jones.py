"""
8자 매듭의 색 Jones 다항식
Habiro 합 J_M(4₁; q) = Σ_{k=0}^{M−1} q^{−kM} Π_{l=1}^{k} (1−q^{M−l})(1−q^{M+l}) 의 수치 평가와
항 크기 g_M(k) 분석
"""

import logging
import time
from typing import List, Optional, Sequence, Tuple

from . import config
from .errors import DomainError, PrecisionError
from .models import JonesValue, LogComplex, PrecisionContext, RootSpec, SweepRow
from .special_functions import hyperbolic_volume, lobachevsky
from .utils import Constants, ParallelUtils

logger = logging.getLogger("fig8asym")


# ======================== 정밀도 정책 ========================

def required_precision(M: int) -> int:
    """J_M 합에 필요한 최소 작업 정밀도: max(128, 2M + 64)"""
    return max(config.JONES_MIN_PRECISION_BITS, 2 * M + config.JONES_GUARD_BITS)


def ensure_precision(ctx: PrecisionContext, M: int) -> PrecisionContext:
    """정책보다 낮으면 올린 컨텍스트를 돌려줌"""
    bits = required_precision(M)
    return ctx if ctx.precision_bits >= bits else ctx.with_precision(bits)


def _check_precision(ctx: PrecisionContext, M: int) -> None:
    bits = required_precision(M)
    if ctx.precision_bits < bits:
        raise PrecisionError(
            f"M={M} 에는 최소 {bits} 비트가 필요합니다 (현재 {ctx.precision_bits})",
            M=M, required_bits=bits,
        )


# ======================== Habiro 합 ========================

def _habiro_sum(M: int, q, m):
    """k = 0..M−1 순서로 누적 곱을 갱신하며 더함. (합, 항 개수)"""
    q_inv = 1 / q
    q_minus_M = q_inv ** M
    lower = q ** M   # q^{M−k}
    upper = lower    # q^{M+k}
    term = m.mpc(1)
    total = m.mpc(1)
    for k in range(1, M):
        lower *= q_inv
        upper *= q
        term *= q_minus_M * (1 - lower) * (1 - upper)
        total += term
    return total, M


def colored_jones_at(M: int, q, ctx: Optional[PrecisionContext] = None) -> JonesValue:
    """임의의 복소수 q 에서 J_M(4₁; q)"""
    ctx = ctx or PrecisionContext()
    if M < 1:
        raise DomainError(f"M 은 1 이상이어야 합니다: M={M}", M=M)
    _check_precision(ctx, M)
    m = ctx.mp

    start = time.time()
    value, count = _habiro_sum(M, m.mpc(q), m)
    elapsed = time.time() - start

    logger.debug(f"[JONES] M={M} terms={count} bits={ctx.precision_bits}")
    if elapsed > 1.0:
        logger.info(f"[PERF] [JONES] M={M} - {elapsed:.2f}s")
    return JonesValue(
        value=value,
        log_form=LogComplex.from_complex(m, value),
        term_count=count,
        precision_bits=ctx.precision_bits,
    )


def colored_jones_exact(spec: RootSpec, ctx: Optional[PrecisionContext] = None) -> JonesValue:
    """평가점 spec 의 q = exp(ξ/(M+a)) 에서 J_M"""
    ctx = ctx or PrecisionContext()
    _check_precision(ctx, spec.M)
    return colored_jones_at(spec.M, spec.q(ctx.mp), ctx)


def kashaev_invariant(N: int, ctx: Optional[PrecisionContext] = None) -> JonesValue:
    """Kashaev 불변량 J_N(4₁; e^{2πi/N}). 모든 항이 |(q)_k|² 이므로 양의 실수"""
    return colored_jones_exact(RootSpec.kashaev(N), ctx)


def kashaev_growth_table(
    N_list: Sequence[int],
    ctx: Optional[PrecisionContext] = None,
    workers: int = 1,
) -> List[SweepRow]:
    """(2π/N)·log J_N 과 Vol 과의 차이"""
    ctx = ctx or PrecisionContext()
    vol = hyperbolic_volume(ctx)

    def row(N: int) -> SweepRow:
        local = ensure_precision(ctx, N)
        m = local.mp
        value = kashaev_invariant(N, local)
        rate = 2 * m.pi / N * value.log_form.log_mag
        return SweepRow(
            params={"N": N},
            exact=value.log_form,
            growth_rate=rate,
            extra={"deviation": rate - vol},
        )

    return ParallelUtils.map_ordered(row, N_list, workers)


def head_split_index(a: float) -> int:
    """윤곽 밖에 남는 Habiro 항의 개수: 극 (2k+1)/(2(M+a)) 중 k ≤ a − 1/4 인 것"""
    if a < 0:
        raise DomainError(f"a 는 0 이상이어야 합니다: a={a}", a=a)
    k = 0
    while k <= a - 0.25:
        k += 1
    return k


# ======================== g_M(k) ========================

def _require_root_of_unity(spec: RootSpec) -> None:
    if spec.u != 0:
        raise DomainError("g_M(k) 는 u = 0 에서만 정의합니다", u=spec.u)


def _log_g_factors(spec: RootSpec, m) -> List:
    """l = 1..M−1 에 대해 log|4 sin(π(M−l)/(M+a)) sin(π(M+l)/(M+a))|"""
    scale = spec.scale(m)
    M = spec.M
    return [
        m.log(abs(4 * m.sinpi((M - l) / scale) * m.sinpi((M + l) / scale)))
        for l in range(1, M)
    ]


def g_product(spec: RootSpec, k: int, ctx: Optional[PrecisionContext] = None):
    """g_M(k) = Π_{l=1}^{k} |(q^{(M−l)/2} − q^{−(M−l)/2})(q^{(M+l)/2} − q^{−(M+l)/2})|"""
    ctx = ctx or PrecisionContext()
    _require_root_of_unity(spec)
    if not 1 <= k <= spec.M - 1:
        raise DomainError(f"1 ≤ k ≤ M−1 이어야 합니다: k={k}, M={spec.M}", k=k, M=spec.M)
    m = ctx.mp
    return m.exp(m.fsum(_log_g_factors(spec, m)[:k]))


def g_maximizer(spec: RootSpec, ctx: Optional[PrecisionContext] = None) -> Tuple[int, object]:
    """k ∈ {1..M−1} 전수 탐색. 동률이면 작은 k"""
    ctx = ctx or PrecisionContext()
    _require_root_of_unity(spec)
    if spec.M < 2:
        raise DomainError("g_maximizer 는 M ≥ 2 가 필요합니다", M=spec.M)
    m = ctx.mp

    best_k, best_log = 1, m.ninf
    running = m.zero
    for k, log_factor in enumerate(_log_g_factors(spec, m), start=1):
        running += log_factor
        if running > best_log:
            best_k, best_log = k, running
    logger.debug(f"[JONES] g_maximizer M={spec.M} a={spec.a} -> k={best_k}")
    return best_k, m.exp(best_log)


def growth_rate_bound(d, k_d, ctx: Optional[PrecisionContext] = None):
    """−(1/2π)(Λ(2π(k_d − d)) + Λ(2π(k_d + d))). 최댓값 Vol/4π"""
    ctx = ctx or PrecisionContext()
    m = ctx.mp
    d, k_d = m.mpf(d), m.mpf(k_d)
    two_pi = 2 * m.pi
    return -(lobachevsky(two_pi * (k_d - d), ctx) + lobachevsky(two_pi * (k_d + d), ctx)) / two_pi


def gj_min_factor(N: int, ctx: Optional[PrecisionContext] = None):
    """min_{1≤j≤N−1} |4 sin(π(N+j)/(N+1/2)) sin(π(N−j)/(N+1/2))|"""
    ctx = ctx or PrecisionContext()
    if N < 2:
        raise DomainError(f"N 은 2 이상이어야 합니다: N={N}", N=N)
    m = ctx.mp
    level = N + m.mpf(0.5)
    return min(
        abs(4 * m.sinpi((N + j) / level) * m.sinpi((N - j) / level))
        for j in range(1, N)
    )


def gj_nonvanishing_check(N: int, ctx: Optional[PrecisionContext] = None) -> bool:
    """q = e^{2πi/(N+1/2)} 에서 (1 − q^{N±j}) 인자가 하나도 0 이 아님을 수치로 확인"""
    return gj_min_factor(N, ctx) > Constants.NONVANISHING_MARGIN

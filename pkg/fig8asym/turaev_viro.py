"""
Turaev–Viro 불변량
TV_r(S³ \\ 4₁) = (η'_r)² Σ_{M=1}^{N} |J_M(4₁; e^{2πi/(N+1/2)})|², r = 2N + 1
"""

import logging
import time
from typing import Dict, List, Optional, Sequence

from . import config
from .errors import DomainError
from .jones import colored_jones_at, ensure_precision
from .models import LogComplex, PrecisionContext, SweepRow, TvResult
from .special_functions import hyperbolic_volume
from .utils import LogUtils, ParallelUtils, ValidationUtils

logger = logging.getLogger("fig8asym")

WINDOW_S1 = "s1"
WINDOW_HALF = "half"
WINDOW_BULK = "bulk"
WINDOW_LABELS = (WINDOW_S1, WINDOW_HALF, WINDOW_BULK)


def _check_level(r: int, minimum: int = 3) -> int:
    ok, message = ValidationUtils.validate_odd_level(r)
    if not ok or r < minimum:
        raise DomainError(message or f"r 은 {minimum} 이상이어야 합니다: r={r}", r=r)
    return (r - 1) // 2


def eta_prime(r: int, ctx: Optional[PrecisionContext] = None):
    """η'_r = 2 sin(2π/r)/√r"""
    _check_level(r)
    m = (ctx or PrecisionContext()).mp
    return 2 * m.sin(2 * m.pi / r) / m.sqrt(r)


def window_of(M: int, N: int, zeta: float, delta: float) -> str:
    """s = M/(N+1/2) 로 윈도우 분류: (1−ζ, 1] / (1/2−δ, 1/2+δ) / 나머지"""
    s = M / (N + 0.5)
    if s > 1 - zeta:
        return WINDOW_S1
    if abs(s - 0.5) < delta:
        return WINDOW_HALF
    return WINDOW_BULK


def window_members(N: int, zeta: float, delta: float) -> Dict[str, List[int]]:
    members: Dict[str, List[int]] = {label: [] for label in WINDOW_LABELS}
    for M in range(1, N + 1):
        members[window_of(M, N, zeta, delta)].append(M)
    return members


def log_abs_squares(N: int, ctx: PrecisionContext, workers: int = 1) -> List:
    """M = 1..N 의 log|J_M|². 모두 같은 정밀도에서 계산"""
    local = ensure_precision(ctx, N)
    m = local.mp
    q = m.expj(2 * m.pi / (N + m.mpf(0.5)))

    def one(M: int):
        return 2 * colored_jones_at(M, q, local).log_form.log_mag

    return ParallelUtils.map_ordered(one, range(1, N + 1), workers)


def tv_invariant(
    r: int,
    zeta: float = config.DEFAULT_ZETA,
    delta: float = config.DEFAULT_DELTA,
    ctx: Optional[PrecisionContext] = None,
    workers: int = 1,
) -> TvResult:
    """
    TV_r 정확값과 s-윈도우 분해

    |J_M|² 는 로그 영역에서 고정된 쌍별 축약으로 더하므로 workers 수와 무관하게
    같은 결과가 나온다.
    """
    ctx = ctx or PrecisionContext()
    N = _check_level(r, minimum=5)
    ok, message = ValidationUtils.validate_windows(zeta, delta)
    if not ok:
        raise DomainError(message, zeta=zeta, delta=delta)

    start = time.time()
    local = ensure_precision(ctx, N)
    m = local.mp
    logs = log_abs_squares(N, local, workers)
    log_eta2 = 2 * m.log(eta_prime(r, local))

    members = window_members(N, zeta, delta)
    window_sums = {
        label: LogComplex(
            log_eta2 + LogUtils.log_sum_exp(m, [logs[M - 1] for M in members[label]]),
            m.zero,
        )
        for label in WINDOW_LABELS
    }
    log_total = log_eta2 + LogUtils.log_sum_exp(m, logs)

    elapsed = time.time() - start
    counts = {label: len(members[label]) for label in WINDOW_LABELS}
    logger.debug(f"[TV] r={r} N={N} bits={local.precision_bits} windows={counts}")
    if elapsed > 1.0:
        logger.info(f"[PERF] [TV] r={r} - {elapsed:.2f}s")

    return TvResult(
        r=r,
        value=LogComplex(log_total, m.zero),
        window_sums=window_sums,
        growth_rate=2 * m.pi / r * log_total,
        log_abs_squares=tuple(logs),
    )


def tv_growth_table(
    r_list: Sequence[int],
    ctx: Optional[PrecisionContext] = None,
    workers: int = 1,
) -> List[SweepRow]:
    """(r, TV_r, 성장률, 성장률 − Vol)"""
    ctx = ctx or PrecisionContext()
    vol = hyperbolic_volume(ctx)
    rows = []
    for r in r_list:
        result = tv_invariant(r, ctx=ctx, workers=workers)
        rows.append(SweepRow(
            params={"r": r},
            exact=result.value,
            growth_rate=result.growth_rate,
            extra={"deviation": result.growth_rate - vol},
        ))
    return rows

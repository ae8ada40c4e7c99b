"""
점근 전개식 (AEF) 평가기

모든 값은 prefactor · exp(exponent) 형태로 로그 영역에서 조립한다.
exp(r·Vol/2π) 는 r ≈ 450 근처에서 binary64 를 넘기 때문.
"""

import logging
from typing import Any, Callable, Dict, List, Optional, Sequence

from . import config
from .errors import DomainError, WindowError
from .jones import colored_jones_exact, ensure_precision, kashaev_invariant
from .models import AsymptoticEstimate, LogComplex, PrecisionContext, RootSpec, SweepRow, TheoremTag
from .potentials import (
    FamilyKind,
    build_family,
    chern_simons_S,
    fixed_a_phase_factor,
    psi_second_derivative,
    solve_saddle_half,
    solve_saddle_quadratic,
    torsion_T,
)
from .special_functions import hyperbolic_volume
from .turaev_viro import WINDOW_HALF, WINDOW_S1, eta_prime, tv_invariant
from .utils import ParallelUtils

logger = logging.getLogger("fig8asym")


def _ctx(ctx: Optional[PrecisionContext]) -> PrecisionContext:
    return ctx if ctx is not None else PrecisionContext()


def _estimate(m, prefactor, exponent, tag: TheoremTag, **params) -> AsymptoticEstimate:
    prefactor = m.mpc(prefactor)
    exponent = m.mpc(exponent)
    value = LogComplex.from_log(m, m.log(prefactor) + exponent)
    logger.debug(f"[AEF] {tag.value} {params} log|AEF|={m.nstr(value.log_mag, 12)}")
    return AsymptoticEstimate(prefactor, exponent, value, tag, params)


def _is_positive_integer(a) -> bool:
    return a > 0 and a == int(a)


def _sinc(m, a):
    """sin(aπ)/(aπ), a = 0 이면 1"""
    return m.one if a == 0 else m.sinpi(a) / (a * m.pi)


# ======================== Kashaev 점, 고정 a ========================

def aef_kashaev(N: int, ctx: Optional[PrecisionContext] = None) -> AsymptoticEstimate:
    """J_N(4₁; e^{2πi/N}) ~ 3^{−1/4} N^{3/2} exp(N·Vol/2π)"""
    if N < 2:
        raise DomainError(f"N 은 2 이상이어야 합니다: N={N}", N=N)
    ctx = _ctx(ctx)
    m = ctx.mp
    prefactor = m.power(3, -m.mpf(0.25)) * m.power(N, m.mpf(1.5))
    exponent = N * hyperbolic_volume(ctx) / (2 * m.pi)
    return _estimate(m, prefactor, exponent, TheoremTag.CVC2, N=N)


def _printed_torsion_form(scale, ctx: PrecisionContext) -> Any:
    """2π^{3/2} (2/√(−3))^{1/2} (scale/2πi)^{3/2} exp(scale · i·Vol/(2πi)), 복소 로그값"""
    m = ctx.mp
    two_pi_i = m.mpc(0, 2 * m.pi)
    torsion = 2 / m.sqrt(m.mpc(-3))
    return (
        m.log(2 * m.power(m.pi, m.mpf(1.5)))
        + m.log(m.sqrt(torsion))
        + m.mpf(1.5) * m.log(scale / two_pi_i)
        + scale * m.mpc(0, hyperbolic_volume(ctx)) / two_pi_i
    )


def aef_kashaev_printed(N: int, ctx: Optional[PrecisionContext] = None) -> LogComplex:
    """토션 형태의 두 번째 표기. 주 분지에서 aef_kashaev 와 부호(−1)만 다르다"""
    ctx = _ctx(ctx)
    return LogComplex.from_log(ctx.mp, _printed_torsion_form(ctx.mp.mpf(N), ctx))


def _fixed_a_estimate(u, a, M: int, tag: TheoremTag, ctx: PrecisionContext) -> AsymptoticEstimate:
    """
    e^{−2aπi} · exp(aξz₀)(1−e^{u−ξz₀})^a/(1−e^{u+ξz₀})^a
      · √(−π)/(2 sinh(u/2)) · T(u)^{1/2} · ((M+a)/ξ)^{1/2} · exp((M+a) S(u)/ξ)
    """
    m = ctx.mp
    u, a = m.mpf(u), m.mpf(a)
    scale = M + a
    xi = m.mpc(u, 2 * m.pi)
    prefactor = (
        m.expj(-2 * a * m.pi)
        * fixed_a_phase_factor(u, a, ctx)
        * m.sqrt(m.mpc(-m.pi))
        * m.sqrt(torsion_T(u, ctx))
        / (2 * m.sinh(u / 2))
        * m.sqrt(scale / xi)
    )
    exponent = scale * chern_simons_S(u, ctx) / xi
    return _estimate(m, prefactor, exponent, tag, u=u, a=a, M=M)


def aef_fixed_a(u, a, M: int, ctx: Optional[PrecisionContext] = None) -> AsymptoticEstimate:
    """
    q = exp(ξ/(M+a)) 에서의 J_M 점근식

    u = 0 이면 sinh(u/2) 의 극 때문에 sinc 형태 (aef_fixed_a_u0) 로 넘긴다.
    u = 0, a ∈ ℕ 은 퇴화.
    """
    ctx = _ctx(ctx)
    if u == 0:
        if _is_positive_integer(a):
            raise DomainError(f"u = 0 에서 a = {a} ∈ ℕ 은 퇴화합니다", a=a)
        return aef_fixed_a_u0(a, M, ctx)
    return _fixed_a_estimate(u, a, M, TheoremTag.MAINTHM1, ctx)


def aef_murakami(u, N: int, ctx: Optional[PrecisionContext] = None) -> AsymptoticEstimate:
    """J_N(4₁; e^{ξ/N}) ~ √(−π)/(2 sinh(u/2)) T(u)^{1/2} (N/ξ)^{1/2} exp(N S(u)/ξ), u > 0"""
    if not u > 0:
        raise DomainError(f"u 는 양수여야 합니다: u={u}", u=u)
    return _fixed_a_estimate(u, 0, N, TheoremTag.ASYMSU2, _ctx(ctx))


def aef_fixed_a_u0(a, M: int, ctx: Optional[PrecisionContext] = None) -> AsymptoticEstimate:
    """(sin aπ/aπ) 3^{−1/4} (M+a)^{3/2} exp((M+a)Vol/2π)"""
    if a < 0 or _is_positive_integer(a):
        raise DomainError(f"a 는 0 이상이고 자연수가 아니어야 합니다: a={a}", a=a)
    ctx = _ctx(ctx)
    m = ctx.mp
    a = m.mpf(a)
    scale = M + a
    prefactor = _sinc(m, a) * m.power(3, -m.mpf(0.25)) * m.power(scale, m.mpf(1.5))
    exponent = scale * hyperbolic_volume(ctx) / (2 * m.pi)
    return _estimate(m, prefactor, exponent, TheoremTag.MAINTHM1_5, a=a, M=M)


def aef_fixed_a_u0_printed(a, M: int, ctx: Optional[PrecisionContext] = None) -> LogComplex:
    """(sin aπ/aπ) · 토션 형태. 크기는 aef_fixed_a_u0 와 같다"""
    ctx = _ctx(ctx)
    m = ctx.mp
    a = m.mpf(a)
    log_value = m.log(_sinc(m, a)) + _printed_torsion_form(M + a, ctx)
    return LogComplex.from_log(m, log_value)


# ======================== s ≈ 1, s ≈ 1/2 ========================

def aef_s_near_1(
    M: int,
    N: int,
    ctx: Optional[PrecisionContext] = None,
    zeta: float = config.DEFAULT_ZETA,
) -> AsymptoticEstimate:
    """
    J_M(4₁; e^{2πi/(N+1/2)}) ~ 1/(i sin sπ) (N+1/2)^{1/2} √(2π) exp((N+1/2)Φ̃(z_M)) / √Φ̃''(z_M)

    s = M/(N+1/2) ∈ (1 − ζ, 1)
    """
    s = M / (N + 0.5)
    if not (1 - zeta < s < 1 and M <= N):
        raise WindowError(f"s={s:.6f} 가 (1 − {zeta}, 1) 밖입니다", M=M, N=N)
    ctx = _ctx(ctx)
    m = ctx.mp
    family = build_family(FamilyKind.S_FAMILY, ctx, M=M, N=N)
    saddle = solve_saddle_quadratic(family)
    level = N + m.mpf(0.5)
    s_hp = family.params["s"]
    prefactor = (
        1 / (m.mpc(0, 1) * m.sinpi(s_hp))
        * m.sqrt(level)
        * m.sqrt(2 * m.pi)
        / m.sqrt(saddle.second_derivative)
    )
    exponent = level * saddle.potential_value
    return _estimate(m, prefactor, exponent, TheoremTag.MAINTHM2, M=M, N=N)


def aef_upper_bound_half(
    M: int,
    N: int,
    ctx: Optional[PrecisionContext] = None,
    delta: float = config.DEFAULT_DELTA,
) -> AsymptoticEstimate:
    """
    |J_M| 상한의 포락선 (상수 없음)
    |1/(1 + e^{−2πi(s−1/2)})| (N+1/2)^{1/2} √(2π/|χ''(x_M)|) exp((N+1/2) χ(x_M))
    """
    ctx = _ctx(ctx)
    m = ctx.mp
    saddle = solve_saddle_half(M, N, ctx, delta=delta)
    level = N + m.mpf(0.5)
    s = m.mpf(M) / level
    prefactor = (
        abs(1 / (1 + m.expj(-2 * m.pi * (s - m.mpf(0.5)))))
        * m.sqrt(level)
        * m.sqrt(2 * m.pi / abs(saddle.second_derivative.real))
    )
    exponent = level * saddle.potential_value.real
    return _estimate(m, prefactor, exponent, TheoremTag.MAINTHM3_BOUND, M=M, N=N)


# ======================== Turaev–Viro ========================

def _check_odd(r: int) -> None:
    if r < 5 or r % 2 == 0:
        raise DomainError(f"r 은 5 이상의 홀수여야 합니다: r={r}", r=r)


def aef_tv(r: int, ctx: Optional[PrecisionContext] = None) -> AsymptoticEstimate:
    """TV_r ~ r^{1/2} √2 π^{7/2} (2π√3)^{−3/2} exp(r·Vol/2π)"""
    _check_odd(r)
    ctx = _ctx(ctx)
    m = ctx.mp
    prefactor = (
        m.sqrt(r) * m.sqrt(2) * m.power(m.pi, m.mpf(3.5))
        * m.power(2 * m.pi * m.sqrt(3), -m.mpf(1.5))
    )
    exponent = r * hyperbolic_volume(ctx) / (2 * m.pi)
    return _estimate(m, prefactor, exponent, TheoremTag.MAINTHM4, r=r)


def aef_tv_torsion_form(r: int, ctx: Optional[PrecisionContext] = None) -> AsymptoticEstimate:
    """같은 값의 토션 표기: (π^{5/2}/4)(r/2π)^{1/2} |2/√(−3)|^{3/2} exp(r·Vol/2π)"""
    _check_odd(r)
    ctx = _ctx(ctx)
    m = ctx.mp
    prefactor = (
        m.power(m.pi, m.mpf(2.5)) / 4
        * m.sqrt(r / (2 * m.pi))
        * m.power(abs(2 / m.sqrt(m.mpc(-3))), m.mpf(1.5))
    )
    exponent = r * hyperbolic_volume(ctx) / (2 * m.pi)
    return _estimate(m, prefactor, exponent, TheoremTag.MAINTHM4, r=r)


def aef_window_s1(N: int, ctx: Optional[PrecisionContext] = None) -> AsymptoticEstimate:
    """
    s ≈ 1 윈도우의 Σ|J_M|² 예측 (η'² 제외)
    (2N+1)^{3/2}/2 · π^{3/2}/√2 · (2π√3)^{−3/2} · (N+1/2)² · exp((2N+1)Vol/2π)

    최대점이 경계 s = 1 에 있어 Laplace 계수 1/2 가 붙는다.
    """
    ctx = _ctx(ctx)
    m = ctx.mp
    r = 2 * N + 1
    level = N + m.mpf(0.5)
    prefactor = (
        m.power(r, m.mpf(1.5)) / 2
        * m.power(m.pi, m.mpf(1.5)) / m.sqrt(2)
        * m.power(2 * m.pi * m.sqrt(3), -m.mpf(1.5))
        * level ** 2
    )
    exponent = r * hyperbolic_volume(ctx) / (2 * m.pi)
    return _estimate(m, prefactor, exponent, TheoremTag.WINDOW_S1, N=N)


def aef_window_half(
    N: int,
    ctx: Optional[PrecisionContext] = None,
    numeric_curvature: bool = False,
) -> AsymptoticEstimate:
    """
    s ≈ 1/2 윈도우의 Σ|J_M|² 예측 (η'² 제외)
    (2N+1)^{3/2} π^{3/2}/√2 · (1/|Υ(1/2)|) · |Ψ''(1/2)|^{−1/2} · (1/4) · exp((2N+1)Vol/2π)

    |Υ(1/2)| = |Ψ''(1/2)| = 2π√3. numeric_curvature 이면 Ψ'' 를 차분으로 다시 계산.
    """
    ctx = _ctx(ctx)
    m = ctx.mp
    r = 2 * N + 1
    curvature = 2 * m.pi * m.sqrt(3)
    if numeric_curvature:
        curvature_fd = abs(psi_second_derivative(m.mpf(0.5), ctx))
        inverse_curvature = 1 / (curvature * m.sqrt(curvature_fd))
    else:
        inverse_curvature = m.power(curvature, -m.mpf(1.5))
    prefactor = (
        m.power(r, m.mpf(1.5))
        * m.power(m.pi, m.mpf(1.5)) / m.sqrt(2)
        * inverse_curvature
        / 4
    )
    exponent = r * hyperbolic_volume(ctx) / (2 * m.pi)
    return _estimate(m, prefactor, exponent, TheoremTag.WINDOW_HALF, N=N)


# ======================== 비율 스윕 ========================

def _jones_log(spec: RootSpec, ctx: PrecisionContext) -> LogComplex:
    return colored_jones_exact(spec, ensure_precision(ctx, spec.M)).log_form


def _window_log(r: int, label: str, ctx: PrecisionContext) -> LogComplex:
    """윈도우 합에서 η'² 를 뺀 값"""
    result = tv_invariant(r, ctx=ctx)
    m = ctx.mp
    window = result.window_sums[label]
    return LogComplex(window.log_mag - 2 * m.log(eta_prime(r, ctx)), m.zero)


def _row_kashaev(p: Dict[str, Any], ctx: PrecisionContext):
    N = p["N"]
    return kashaev_invariant(N, ensure_precision(ctx, N)).log_form, aef_kashaev(N, ctx)


def _row_murakami(p, ctx):
    spec = RootSpec(M=p["N"], a=0.0, u=p["u"])
    return _jones_log(spec, ctx), aef_murakami(p["u"], p["N"], ctx)


def _row_fixed_a(p, ctx):
    spec = RootSpec(M=p["M"], a=p["a"], u=p["u"])
    return _jones_log(spec, ctx), aef_fixed_a(p["u"], p["a"], p["M"], ctx)


def _row_fixed_a_u0(p, ctx):
    spec = RootSpec(M=p["M"], a=p["a"], u=0.0)
    return _jones_log(spec, ctx), aef_fixed_a_u0(p["a"], p["M"], ctx)


def _row_s_near_1(p, ctx):
    spec = RootSpec.from_color_level(p["M"], p["N"])
    return _jones_log(spec, ctx), aef_s_near_1(p["M"], p["N"], ctx)


def _row_bound_half(p, ctx):
    spec = RootSpec.from_color_level(p["M"], p["N"])
    exact = _jones_log(spec, ctx)
    return LogComplex(exact.log_mag, ctx.mp.zero), aef_upper_bound_half(p["M"], p["N"], ctx)


def _row_tv(p, ctx):
    return tv_invariant(p["r"], ctx=ctx).value, aef_tv(p["r"], ctx)


def _row_window_s1(p, ctx):
    return _window_log(p["r"], WINDOW_S1, ctx), aef_window_s1((p["r"] - 1) // 2, ctx)


def _row_window_half(p, ctx):
    return _window_log(p["r"], WINDOW_HALF, ctx), aef_window_half((p["r"] - 1) // 2, ctx)


_ROW_BUILDERS: Dict[TheoremTag, Callable] = {
    TheoremTag.CVC2: _row_kashaev,
    TheoremTag.ASYMSU2: _row_murakami,
    TheoremTag.MAINTHM1: _row_fixed_a,
    TheoremTag.MAINTHM1_5: _row_fixed_a_u0,
    TheoremTag.MAINTHM2: _row_s_near_1,
    TheoremTag.MAINTHM3_BOUND: _row_bound_half,
    TheoremTag.MAINTHM4: _row_tv,
    TheoremTag.WINDOW_S1: _row_window_s1,
    TheoremTag.WINDOW_HALF: _row_window_half,
}


def ratio_sweep(
    theorem_tag,
    param_grid: Sequence[Dict[str, Any]],
    ctx: Optional[PrecisionContext] = None,
    workers: int = 1,
) -> List[SweepRow]:
    """
    격자점마다 (정확값, AEF, log(정확값/AEF))

    log_ratio 의 허수부는 (−π, π] 로 감은 위상 차이. 결과 순서는 입력 순서와 같다.
    """
    ctx = _ctx(ctx)
    builder = _ROW_BUILDERS[TheoremTag(theorem_tag)]

    def row(params: Dict[str, Any]) -> SweepRow:
        m = ctx.mp
        exact, estimate = builder(params, ctx)
        ratio = exact.divide(estimate.value, m)
        return SweepRow(
            params=dict(params),
            exact=exact,
            aef=estimate.value,
            log_ratio=ratio.log_value(m),
        )

    rows = ParallelUtils.map_ordered(row, list(param_grid), workers)
    logger.info(f"[AEF] ratio_sweep {TheoremTag(theorem_tag).value} rows={len(rows)}")
    return rows

"""
독립 수치 검증
- 윤곽 적분 표현으로 다시 계산한 J_M (유수 정리)
- Laplace/안장점 근사
- Riemann 합 ↔ 적분 동치
- TV 윈도우 우세 보고서
"""

import logging
import math
import time
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Tuple

from . import config
from .aef import aef_window_half, aef_window_s1
from .errors import DomainError, HypothesisError, QuadratureError
from .jones import head_split_index
from .models import LogComplex, PrecisionContext, RootSpec, SaddleSolution
from .potentials import PotentialFamily
from .special_functions import quantum_dilog_log, s_ratio_fixed_a
from .turaev_viro import WINDOW_BULK, WINDOW_HALF, WINDOW_LABELS, WINDOW_S1, eta_prime, tv_invariant
from .utils import ValidationUtils

logger = logging.getLogger("fig8asym")

# 윤곽 적분을 지원하는 최대 M
CONTOUR_MAX_M = 12
# 최댓값 탐색용 표본 수
_SCAN_POINTS = 400


def _ctx(ctx: Optional[PrecisionContext]) -> PrecisionContext:
    return ctx if ctx is not None else PrecisionContext()


# ======================== 윤곽 ========================

class ContourLabel(str, Enum):
    C_PLUS = "C_plus"
    C_MINUS = "C_minus"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Contour:
    vertices: Tuple[Any, ...]
    label: ContourLabel = ContourLabel.CUSTOM

    def length(self, m):
        return m.fsum(abs(b - a) for a, b in zip(self.vertices, self.vertices[1:]))


def default_epsilon(spec: RootSpec, m):
    """ε = (2a + 1/2) / (2(M+a))"""
    return (2 * m.mpf(spec.a) + m.mpf(0.5)) / (2 * spec.scale(m))


def contour_vertices(spec: RootSpec, epsilon=None, ctx: Optional[PrecisionContext] = None) -> Tuple[Contour, Contour]:
    """
    C₊(ε): 1−ε → 1−u/2π−ε+i → −u/2π+ε+i → ε
    C₋(ε): ε → ε+u/2π−i → 1−ε+u/2π−i → 1−ε
    """
    m = _ctx(ctx).mp
    eps = default_epsilon(spec, m) if epsilon is None else m.mpf(epsilon)
    shift = m.mpf(spec.u) / (2 * m.pi)
    plus = Contour(
        (m.mpc(1 - eps), m.mpc(1 - shift - eps, 1), m.mpc(-shift + eps, 1), m.mpc(eps)),
        ContourLabel.C_PLUS,
    )
    minus = Contour(
        (m.mpc(eps), m.mpc(eps + shift, -1), m.mpc(1 - eps + shift, -1), m.mpc(1 - eps)),
        ContourLabel.C_MINUS,
    )
    return plus, minus


def _g_function(spec: RootSpec, ctx: PrecisionContext) -> Callable:
    """
    g_M(z) = exp(−(M+a)(u − aξ/(M+a))z)
             · S_γ(π − iu + iξz + iξa/(M+a)) / S_γ(−π − iu − iξz + iξa/(M+a))
    """
    m = ctx.mp
    scale = spec.scale(m)
    xi = spec.xi(m)
    gamma = spec.gamma(m)
    u = m.mpf(spec.u)
    shift = m.mpc(0, 1) * xi * m.mpf(spec.a) / scale
    slope = scale * u - m.mpf(spec.a) * xi
    iu = m.mpc(0, u)

    def g(z):
        iz = m.mpc(0, 1) * xi * z
        log_num = quantum_dilog_log(m.pi - iu + iz + shift, gamma, ctx)
        log_den = quantum_dilog_log(-m.pi - iu - iz + shift, gamma, ctx)
        return m.exp(-slope * z + log_num - log_den)

    return g


def _head_sum(spec: RootSpec, count: int, m):
    """Habiro 합의 앞쪽 count 개 항 (k = 0..count−1)"""
    q = spec.q(m)
    M = spec.M
    total, term = m.mpc(0), m.mpc(1)
    for k in range(min(count, M)):
        if k > 0:
            term *= q ** (-M) * (1 - q ** (M - k)) * (1 - q ** (M + k))
        total += term
    return total


def _prefactor(spec: RootSpec, ctx: PrecisionContext):
    """S 비율 · (M+a)i/2 · exp(u/2 − aξ/(2(M+a)))"""
    m = ctx.mp
    scale = spec.scale(m)
    ratio = s_ratio_fixed_a(spec.a, spec.u, spec.M, ctx)
    return ratio * scale * m.mpc(0, 1) / 2 * m.exp(m.mpf(spec.u) / 2 - m.mpf(spec.a) * spec.xi(m) / (2 * scale))


def panel_nodes(contour: Contour, scale, m) -> List[Any]:
    """
    다각 경로를 구적 구간으로 나눈 분점 목록 (꼭짓점 포함, 순서대로)

    추가 분점은 실수부가 tan 의 영점 k/(M+a) 인 점이라 극 (2k+1)/(2(M+a)) 의
    실수부에서 1/(2(M+a)) 만큼 떨어져 있다.
    """
    vertices = contour.vertices
    nodes = [vertices[0]]
    for p, q in zip(vertices, vertices[1:]):
        dx = m.re(q - p)
        cuts = []
        if dx != 0:
            lo, hi = sorted((m.re(p) * scale, m.re(q) * scale))
            for k in range(int(m.ceil(lo)), int(m.floor(hi)) + 1):
                t = (k / scale - m.re(p)) / dx
                if 0 < t < 1:
                    cuts.append(t)
        nodes.extend(p + t * (q - p) for t in sorted(cuts))
        nodes.append(q)
    return nodes


def _path_integral(fn: Callable, contour: Contour, scale, ctx: PrecisionContext):
    m = ctx.mp
    value, err = m.quad(fn, panel_nodes(contour, scale, m), error=True)
    ok, message = ValidationUtils.validate_quadrature(value, err, ctx.quad_tol)
    if not ok:
        raise QuadratureError(f"{contour.label.value} 적분 {message}", estimate=value)
    logger.debug(f"[VERIFY] {contour.label.value} err={m.nstr(err, 3)}")
    return value


def contour_jones(spec: RootSpec, epsilon=None, ctx: Optional[PrecisionContext] = None):
    """
    J_M = [k ≤ a − 1/4 인 Habiro 항] + S 비율 · (M+a)i/2 · e^{u/2 − aξ/(2(M+a))} ∫_{C(ε)} tan((M+a)πz) g_M(z) dz

    윤곽 안의 tan 극 (2k+1)/(2(M+a)) 마다 유수가 Habiro 항 하나를 돌려준다.
    """
    ctx = _ctx(ctx)
    if spec.M > CONTOUR_MAX_M:
        raise DomainError(f"윤곽 적분은 M ≤ {CONTOUR_MAX_M} 만 지원합니다: M={spec.M}", M=spec.M)
    if spec.u == 0 and spec.a > 0 and spec.a == int(spec.a):
        raise DomainError(f"u = 0 에서 a = {spec.a} ∈ ℕ 은 퇴화합니다", a=spec.a)
    m = ctx.mp
    start = time.time()

    scale = spec.scale(m)
    g = _g_function(spec, ctx)

    def integrand(z):
        return m.tan(scale * m.pi * z) * g(z)

    total = m.mpc(0)
    for contour in contour_vertices(spec, epsilon, ctx):
        total += _path_integral(integrand, contour, scale, ctx)

    head = _head_sum(spec, head_split_index(spec.a), m)
    result = head + _prefactor(spec, ctx) * total

    elapsed = time.time() - start
    if elapsed > 1.0:
        logger.info(f"[PERF] [VERIFY] contour_jones M={spec.M} a={spec.a} u={spec.u} - {elapsed:.2f}s")
    return result


def tan_approximation_residual(spec: RootSpec, sign: int = 1, ctx: Optional[PrecisionContext] = None):
    """
    G_± = ∫_{C±} tan((M+a)πz) g = ±i ∫_{C±} g + ∫_{C±} (tan ∓ i) g
    (G, ±i∫g, ∫(tan ∓ i)g) 를 돌려준다. 세 번째 항은 1/(M+a) 로 줄어든다.
    """
    if sign not in (1, -1):
        raise DomainError(f"sign 은 ±1 이어야 합니다: {sign}")
    ctx = _ctx(ctx)
    m = ctx.mp
    scale = spec.scale(m)
    g = _g_function(spec, ctx)
    plus, minus = contour_vertices(spec, None, ctx)
    contour = plus if sign == 1 else minus
    i_sign = m.mpc(0, sign)

    main = _path_integral(g, contour, scale, ctx)
    residual = _path_integral(lambda z: (m.tan(scale * m.pi * z) - i_sign) * g(z), contour, scale, ctx)
    main = i_sign * main
    return main + residual, main, residual


# ======================== Laplace ========================

def line_integral(family: PotentialFamily, path, scale, ctx: Optional[PrecisionContext] = None):
    """∫_path exp(scale · Φ(z)) dz (다각 경로, 직접 구적)"""
    m = _ctx(ctx).mp
    scale = m.mpf(scale)
    value, _ = m.quad(lambda z: m.exp(scale * family.value(z)), list(path), error=True)
    return value


def laplace_estimate(
    family: PotentialFamily,
    saddle: SaddleSolution,
    prefactor_fn: Optional[Callable] = None,
    scale=1,
) -> LogComplex:
    """
    √(2π/(scale · (−Φ''(z_s)))) f(z_s) exp(scale · Φ(z_s))

    |arg √(−Φ''(z_s))| < π/4 가 아니면 HypothesisError. O(1/scale) 꼬리는 추정하지 않음.
    """
    m = family.ctx.mp
    scale = m.mpf(scale)
    root = m.sqrt(-m.mpc(saddle.second_derivative))
    if not abs(m.arg(root)) < m.pi / 4:
        raise HypothesisError(
            f"|arg √(−Φ'')| = {m.nstr(abs(m.arg(root)), 6)} ≥ π/4", z=saddle.z
        )
    f_value = m.mpc(1) if prefactor_fn is None else m.mpc(prefactor_fn(saddle.z))
    log_value = (
        (m.log(2 * m.pi) - m.log(scale)) / 2
        - m.log(root)
        + m.log(f_value)
        + scale * saddle.potential_value
    )
    return LogComplex.from_log(m, log_value)


class RiemannComparison(NamedTuple):
    sum: Any
    integral: Any
    ratio: Any


def _locate_maximum(f: Callable, a, b, m):
    """[a, b] 위 Re f 의 최대점. 내부면 f' = 0 으로 다듬음. (x, 경계 여부)"""
    grid = [a + (b - a) * k / _SCAN_POINTS for k in range(_SCAN_POINTS + 1)]
    values = [m.re(f(x)) for x in grid]
    best = max(range(len(grid)), key=lambda k: values[k])
    if best in (0, len(grid) - 1):
        return grid[best], True
    try:
        x = m.findroot(lambda t: m.re(m.diff(f, t)), grid[best])
    except (ValueError, ZeroDivisionError):
        x = grid[best]
    return m.re(x), False


def riemann_vs_integral(
    f: Callable,
    h: Callable,
    a,
    b,
    N: int,
    ctx: Optional[PrecisionContext] = None,
    boundary_max: bool = False,
) -> RiemannComparison:
    """
    Σ_k (1/(N+1/2)) h(x_k) |exp((N+1/2) f(x_k))|, x_k = a + (2k+1)/(2N+1) ≤ b
    와 ∫_a^b h |exp((N+1/2) f)| dx

    최대점이 경계에 있으면 boundary_max=True 일 때만 허용.
    """
    ctx = _ctx(ctx)
    m = ctx.mp
    a, b = m.mpf(a), m.mpf(b)
    level = N + m.mpf(0.5)
    x_max, on_boundary = _locate_maximum(f, a, b, m)
    if on_boundary and not boundary_max:
        raise HypothesisError(f"Re f 의 최댓값이 경계 x={m.nstr(x_max, 8)} 에 있습니다", x=x_max)

    # 지수 기준점을 빼서 넘침 방지
    peak = m.re(f(x_max))

    def weight(x):
        return h(x) * m.exp(level * (m.re(f(x)) - peak))

    total = m.zero
    k = 0
    while True:
        x = a + m.mpf(2 * k + 1) / (2 * N + 1)
        if x > b:
            break
        total += weight(x) / level
        k += 1

    split = [a, x_max, b] if a < x_max < b else [a, b]
    integral = m.quad(weight, split)
    scale = m.exp(level * peak)
    return RiemannComparison(total * scale, integral * scale, total / integral)


def laplace_interval_estimate(
    f: Callable,
    h: Callable,
    a,
    b,
    N: int,
    ctx: Optional[PrecisionContext] = None,
    boundary_max: bool = False,
):
    """
    ∫_a^b h e^{(N+1/2) Re f} dx ≈ h(x*) e^{(N+1/2) Re f(x*)} √(2π/((N+1/2)|(Re f)''(x*)|))

    최대점이 경계에 있으면 1/2 을 곱한다.
    """
    ctx = _ctx(ctx)
    m = ctx.mp
    a, b = m.mpf(a), m.mpf(b)
    level = N + m.mpf(0.5)
    x_max, on_boundary = _locate_maximum(f, a, b, m)
    if on_boundary and not boundary_max:
        raise HypothesisError(f"Re f 의 최댓값이 경계 x={m.nstr(x_max, 8)} 에 있습니다", x=x_max)
    curvature = abs(m.diff(lambda t: m.re(f(t)), x_max, 2))
    if curvature == 0:
        raise HypothesisError("퇴화된 최대점입니다 ((Re f)'' = 0)", x=x_max)
    value = h(x_max) * m.exp(level * m.re(f(x_max))) * m.sqrt(2 * m.pi / (level * curvature))
    return value / 2 if on_boundary else value


# ======================== 윈도우 우세 ========================

@dataclass(frozen=True)
class WindowReport:
    """η'² 를 뺀 윈도우별 Σ|J_M|² 와 예측"""

    r: int
    N: int
    window_sums: Dict[str, LogComplex]
    prediction_s1: LogComplex
    prediction_half: LogComplex
    log_empirical_ratio: Any
    log_predicted_ratio: Any
    # (1/r) log Σ|J_M|². s ≈ 1 윈도우는 Vol/2π 근처
    growth_rates: Dict[str, Any]

    @property
    def s1_dominates(self) -> bool:
        s1 = self.window_sums[WINDOW_S1].log_mag
        return s1 > self.window_sums[WINDOW_HALF].log_mag and s1 > self.window_sums[WINDOW_BULK].log_mag

    @property
    def bulk_exceeds_half(self) -> bool:
        return self.window_sums[WINDOW_BULK].log_mag > self.window_sums[WINDOW_HALF].log_mag

    @property
    def bulk_below_windows(self) -> bool:
        bulk = self.window_sums[WINDOW_BULK].log_mag
        return bulk < self.window_sums[WINDOW_S1].log_mag and bulk < self.window_sums[WINDOW_HALF].log_mag

    @property
    def log_prediction_gap(self):
        """경험 비와 예측 비의 log 차이"""
        return self.log_empirical_ratio - self.log_predicted_ratio

    def ratio_within(self, factor: float) -> bool:
        return abs(self.log_prediction_gap) < math.log(factor)


def window_dominance_report(
    r: int,
    ctx: Optional[PrecisionContext] = None,
    zeta: float = config.DEFAULT_ZETA,
    delta: float = config.DEFAULT_DELTA,
    workers: int = 1,
) -> WindowReport:
    """s ≈ 1, s ≈ 1/2 윈도우 합과 그 예측, 두 윈도우의 비 (예측 2(N+1/2)²)"""
    ctx = _ctx(ctx)
    m = ctx.mp
    result = tv_invariant(r, zeta=zeta, delta=delta, ctx=ctx, workers=workers)
    N = (r - 1) // 2
    log_eta2 = 2 * m.log(eta_prime(r, ctx))
    sums = {
        label: LogComplex(result.window_sums[label].log_mag - log_eta2, m.zero)
        for label in WINDOW_LABELS
    }
    s1 = aef_window_s1(N, ctx).value
    half = aef_window_half(N, ctx).value
    report = WindowReport(
        r=r,
        N=N,
        window_sums=sums,
        prediction_s1=s1,
        prediction_half=half,
        log_empirical_ratio=sums[WINDOW_S1].log_mag - sums[WINDOW_HALF].log_mag,
        log_predicted_ratio=s1.log_mag - half.log_mag,
        growth_rates={label: sums[label].log_mag / r for label in WINDOW_LABELS},
    )
    logger.info(
        f"[VERIFY] windows r={r} log_ratio empirical={m.nstr(report.log_empirical_ratio, 8)} "
        f"predicted={m.nstr(report.log_predicted_ratio, 8)}"
    )
    if not report.ratio_within(3):
        # s ≈ 1/2 윈도우는 지수적으로 작아 예측 e^{N·Vol/2π} 스케일과 맞지 않음
        logger.warning(
            f"[VERIFY] windows r={r} half window off prediction: log gap={m.nstr(report.log_prediction_gap, 8)} "
            f"half rate={m.nstr(report.growth_rates[WINDOW_HALF], 6)} bulk>half={report.bulk_exceeds_half}"
        )
    return report

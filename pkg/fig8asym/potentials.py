"""
포텐셜 함수와 안장점
Φ_M, Φ_0 (고정 a), Φ̃^(s) (s≈1), χ^(s) (s≈1/2) 와 Θ, Ξ, Ψ, Υ, S(u), T(u), φ(u), H(x, y)

모든 로그는 주 분지. d/dμ Li₂(e^μ) = −log(1 − e^μ) 로 1·2계 도함수를 닫힌 형식으로 만든다.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence

from . import config
from .cache_manager import cache_manager
from .errors import BranchError, DomainError, NoRootError, WindowError
from .models import Branch, PrecisionContext, SaddleSolution, SweepRow
from .special_functions import dilog, hyperbolic_volume, lobachevsky
from .utils import CacheUtils, Constants, ValidationUtils

logger = logging.getLogger("fig8asym")

# 안장점 Newton 반복 상한
_NEWTON_MAX_ITER = 50
# s≈1/2 안장점 탐색 구간
HALF_BRACKET = (0.0, 5.0 / 12.0)


class FamilyKind(str, Enum):
    FIXED_A = "fixed_a"
    S_FAMILY = "s_family"
    HALF_FAMILY = "half_family"
    LIMIT_S = "limit_s"
    LIMIT_HALF = "limit_half"
    CUSTOM = "custom"


@dataclass(frozen=True)
class PotentialFamily:
    """value/d1/d2 를 닫은 불변 포텐셜"""

    kind: FamilyKind
    params: Dict[str, Any]
    value: Callable
    d1: Callable
    d2: Callable
    ctx: PrecisionContext = field(repr=False, default_factory=PrecisionContext)


@dataclass(frozen=True)
class GeometricConstants:
    vol: Any
    torsion_mag: Any
    xi_at_1: Any


def _ctx(ctx: Optional[PrecisionContext]) -> PrecisionContext:
    return ctx if ctx is not None else PrecisionContext()


def _check_u(u) -> None:
    ok, message = ValidationUtils.validate_deformation(float(u))
    if not ok:
        raise DomainError(message, u=u)


def geometric_constants(ctx: Optional[PrecisionContext] = None) -> GeometricConstants:
    ctx = _ctx(ctx)
    m = ctx.mp
    return GeometricConstants(
        vol=hyperbolic_volume(ctx),
        torsion_mag=2 / m.sqrt(3),
        xi_at_1=2 * m.pi * m.sqrt(3),
    )


# ======================== φ(u), S(u), T(u) ========================

def _theta_angle(u, m):
    """θ(u) = arccos(cosh u − 1/2) ∈ (0, π/3]"""
    return m.acos(m.cosh(u) - m.mpf(0.5))


def phi_u(u, ctx: Optional[PrecisionContext] = None):
    """φ(u) = arccosh(cosh u − 1/2) 의 분지 중 φ(0) = −5πi/3 에서 연속인 것: iθ(u) − 2πi"""
    _check_u(u)
    m = _ctx(ctx).mp
    return m.mpc(0, _theta_angle(m.mpf(u), m) - 2 * m.pi)


def saddle_z0(u, ctx: Optional[PrecisionContext] = None):
    """Φ_0 의 안장점 z₀ = −φ(u)/ξ. u = 0 이면 5/6"""
    ctx = _ctx(ctx)
    m = ctx.mp
    xi = m.mpc(u, 2 * m.pi)
    return -phi_u(u, ctx) / xi


def torsion_T(u, ctx: Optional[PrecisionContext] = None):
    """T(u) = 2/√((2cosh u + 1)(2cosh u − 3)), 주 제곱근. T(0) = 2/√(−3)"""
    _check_u(u)
    m = _ctx(ctx).mp
    c = 2 * m.cosh(m.mpf(u))
    radicand = m.mpc((c + 1) * (c - 3))
    if radicand == 0:
        raise DomainError("T(u) 의 극입니다", u=u)
    return 2 / m.sqrt(radicand)


def chern_simons_S_literal(u, phi, ctx: Optional[PrecisionContext] = None):
    """S(u) = Li₂(e^{u−φ}) − Li₂(e^{u+φ}) − uφ 를 주어진 분지 φ 에서 그대로 계산"""
    ctx = _ctx(ctx)
    m = ctx.mp
    u, phi = m.mpf(u), m.mpc(phi)
    return dilog(m.exp(u - phi), ctx) - dilog(m.exp(u + phi), ctx) - u * phi


def chern_simons_S(u, ctx: Optional[PrecisionContext] = None):
    """
    S(u) := ξ·Φ_0(z₀) + 2πiu

    u = 0 에서도 연속이며 S(0) = i·Vol. 분지 −iθ(u) 에서의 문자 그대로의 식과 같다.
    """
    ctx = _ctx(ctx)
    _check_u(u)
    m = ctx.mp
    family = build_family(FamilyKind.FIXED_A, ctx=ctx, u=u, a=0, M=None)
    xi = m.mpc(u, 2 * m.pi)
    return xi * family.value(saddle_z0(u, ctx)) + 2j * m.pi * m.mpf(u)


def fixed_a_phase_factor(u, a, ctx: Optional[PrecisionContext] = None):
    """exp(aξz₀)(1 − e^{u−ξz₀})^a / (1 − e^{u+ξz₀})^a. u = 0 이면 e^{aπi}"""
    ctx = _ctx(ctx)
    m = ctx.mp
    u, a = m.mpf(u), m.mpf(a)
    w = m.mpc(u, 2 * m.pi) * saddle_z0(u, ctx)
    return m.exp(a * w) * m.power(1 - m.exp(u - w), a) / m.power(1 - m.exp(u + w), a)


# ======================== 포텐셜 족 ========================

def _fixed_a(u, a, M, ctx: PrecisionContext) -> PotentialFamily:
    """
    Φ_M(z) = (1/ξ)[Li₂(e^{u−(z+a')ξ}) − Li₂(e^{u+(z−a')ξ})] − uz, a' = a/(M+a)
    M 이 None 이면 극한 Φ_0 (a' = 0)
    """
    _check_u(u)
    m = ctx.mp
    u = m.mpf(u)
    xi = m.mpc(u, 2 * m.pi)
    shift = m.zero if M is None else m.mpf(a) / (M + m.mpf(a))

    def args(z):
        return u - (z + shift) * xi, u + (z - shift) * xi

    def value(z):
        f1, f2 = args(m.mpc(z))
        return (dilog(m.exp(f1), ctx) - dilog(m.exp(f2), ctx)) / xi - u * z

    def d1(z):
        f1, f2 = args(m.mpc(z))
        return m.log(1 - m.exp(f1)) + m.log(1 - m.exp(f2)) - u

    def d2(z):
        f1, f2 = args(m.mpc(z))
        e1, e2 = m.exp(f1), m.exp(f2)
        return xi * (e1 / (1 - e1) - e2 / (1 - e2))

    params = {"u": u, "a": m.mpf(a), "M": M, "shift": shift, "xi": xi}
    return PotentialFamily(FamilyKind.FIXED_A, params, value, d1, d2, ctx)


def _s_family(kind: FamilyKind, s, ctx: PrecisionContext, extra: Dict[str, Any]) -> PotentialFamily:
    """Φ̃^(s)(z) = (1/2πi)[Li₂(β/ω) − Li₂(βω)] + 2πi(1−s)z, β = e^{2πis}, ω = e^{2πiz}"""
    m = ctx.mp
    s = m.mpf(s)
    beta = m.expj(2 * m.pi * s)
    two_pi_i = m.mpc(0, 2 * m.pi)

    def value(z):
        z = m.mpc(z)
        omega = m.exp(two_pi_i * z)
        return (dilog(beta / omega, ctx) - dilog(beta * omega, ctx)) / two_pi_i + two_pi_i * (1 - s) * z

    def d1(z):
        omega = m.exp(two_pi_i * m.mpc(z))
        return m.log(1 - beta / omega) + m.log(1 - beta * omega) + two_pi_i * (1 - s)

    def d2(z):
        omega = m.exp(two_pi_i * m.mpc(z))
        x, y = beta / omega, beta * omega
        return two_pi_i * (x / (1 - x) - y / (1 - y))

    return PotentialFamily(kind, dict(extra, s=s, beta=beta), value, d1, d2, ctx)


def _half_family(kind: FamilyKind, s, ctx: PrecisionContext, extra: Dict[str, Any]) -> PotentialFamily:
    """χ^(s)(x) = (1/2πi)[Li₂(β'/ω') − Li₂(β'ω')], β' = e^{2πi(s−1/2)}, ω' = e^{2πi(x+1/2)}"""
    m = ctx.mp
    s = m.mpf(s)
    beta = m.expj(2 * m.pi * (s - m.mpf(0.5)))
    two_pi_i = m.mpc(0, 2 * m.pi)

    def omega_of(x):
        return m.exp(two_pi_i * (m.mpc(x) + m.mpf(0.5)))

    def value(x):
        omega = omega_of(x)
        return (dilog(beta / omega, ctx) - dilog(beta * omega, ctx)) / two_pi_i

    def d1(x):
        omega = omega_of(x)
        return m.log(1 - beta / omega) + m.log(1 - beta * omega)

    def d2(x):
        omega = omega_of(x)
        p, q = beta / omega, beta * omega
        return two_pi_i * (p / (1 - p) - q / (1 - q))

    return PotentialFamily(kind, dict(extra, s=s, beta=beta), value, d1, d2, ctx)


def _level_ratio(M: int, N: int) -> float:
    if not 1 <= M <= N:
        raise DomainError(f"1 ≤ M ≤ N 이어야 합니다: M={M}, N={N}", M=M, N=N)
    return M / (N + 0.5)


def build_family(kind, ctx: Optional[PrecisionContext] = None, **params) -> PotentialFamily:
    """
    포텐셜 족 생성

    fixed_a(u, a, M)  : Φ_M (M=None 이면 Φ_0)
    s_family(M, N)    : Φ̃^(s)_M, s = M/(N+1/2)
    limit_s(s)        : Φ̃^(s)_0
    half_family(M, N) : χ^(s)_M
    limit_half(s)     : χ^(s)_0
    """
    ctx = _ctx(ctx)
    kind = FamilyKind(kind)
    m = ctx.mp
    if kind is FamilyKind.FIXED_A:
        return _fixed_a(params.get("u", 0), params.get("a", 0), params.get("M"), ctx)
    if kind is FamilyKind.S_FAMILY:
        M, N = params["M"], params["N"]
        _level_ratio(M, N)
        return _s_family(kind, m.mpf(M) / (N + m.mpf(0.5)), ctx, {"M": M, "N": N})
    if kind is FamilyKind.LIMIT_S:
        return _s_family(kind, params["s"], ctx, {})
    if kind is FamilyKind.HALF_FAMILY:
        M, N = params["M"], params["N"]
        _level_ratio(M, N)
        return _half_family(kind, m.mpf(M) / (N + m.mpf(0.5)), ctx, {"M": M, "N": N})
    if kind is FamilyKind.LIMIT_HALF:
        return _half_family(kind, params["s"], ctx, {})
    raise DomainError("custom 족은 custom_family 로 만드세요")


# ======================== 안장점 ========================

def _newton(family: PotentialFamily, z, m):
    """d1 에 대한 Newton 반복. residual 이 기준 아래로 떨어지면 멈춤"""
    tol = m.mpf(Constants.SADDLE_RESIDUAL_MAX) / 100
    for _ in range(_NEWTON_MAX_ITER):
        g = family.d1(z)
        if abs(g) < tol:
            break
        z = z - g / family.d2(z)
    return z


def _finish(family: PotentialFamily, z, omega, branch: Branch) -> SaddleSolution:
    m = family.ctx.mp
    residual = abs(family.d1(z))
    d2 = family.d2(z)
    if residual > Constants.SADDLE_RESIDUAL_MAX:
        raise BranchError(f"안장점 잔차 {m.nstr(residual, 5)} 가 너무 큽니다", family=family.kind.value)
    if abs(d2) < Constants.SADDLE_D2_MIN:
        raise BranchError("퇴화된 안장점입니다 (Φ'' ≈ 0)", family=family.kind.value)
    return SaddleSolution(
        z=z,
        omega=omega,
        potential_value=family.value(z),
        second_derivative=d2,
        residual=residual,
        branch=branch,
        family=family.kind.value,
    )


def _quadratic_roots(m, a2, a1, a0):
    """a2 ω² − a1 ω + a0 = 0 의 (−근, +근)"""
    root = m.sqrt(a1 * a1 - 4 * a2 * a0)
    return (a1 - root) / (2 * a2), (a1 + root) / (2 * a2)


def s_family_omega_roots(s, ctx: Optional[PrecisionContext] = None):
    """βω² − (β² + 1 − β)ω + β = 0 의 두 근"""
    m = _ctx(ctx).mp
    beta = m.expj(2 * m.pi * m.mpf(s))
    return _quadratic_roots(m, beta, beta * beta + 1 - beta, beta)


def printed_omega_root(s, ctx: Optional[PrecisionContext] = None):
    """[(β²+1−β) − √((−β²+1−β)(3β²+1−β))]/(2β). β = 1 에서만 정확한 근이며 분지 선택에만 쓴다"""
    m = _ctx(ctx).mp
    beta = m.expj(2 * m.pi * m.mpf(s))
    radicand = (-beta * beta + 1 - beta) * (3 * beta * beta + 1 - beta)
    return (beta * beta + 1 - beta - m.sqrt(radicand)) / (2 * beta)


def _z_from_omega_unit(m, omega):
    """z = log(ω)/(2πi), 실수부를 (0, 1) 로"""
    z = m.log(omega) / m.mpc(0, 2 * m.pi)
    return z - m.floor(z.real)


def _solve_s_family(family: PotentialFamily) -> SaddleSolution:
    ctx = family.ctx
    m = ctx.mp
    s = family.params["s"]
    minus, plus = s_family_omega_roots(s, ctx)
    target = printed_omega_root(s, ctx)
    ordered = [(minus, Branch.MINUS_ROOT), (plus, Branch.PLUS_ROOT)]
    ordered.sort(key=lambda item: abs(item[0] - target))

    for omega, branch in ordered:
        z = _newton(family, _z_from_omega_unit(m, omega), m)
        try:
            solution = _finish(family, z, m.exp(m.mpc(0, 2 * m.pi) * z), branch)
        except BranchError:
            continue
        if solution.potential_value.real > 0:
            return solution
    raise BranchError(f"s={m.nstr(s, 8)} 에서 Re Φ̃ > 0 인 안장점이 없습니다", s=s)


def _solve_fixed_a(family: PotentialFamily) -> SaddleSolution:
    """ABω² − (A² + B² − AB²)ω + AB = 0 (A = e^u, B = e^{a'ξ}, ω = e^{zξ}); z₀ 에 가장 가까운 분지"""
    ctx = family.ctx
    m = ctx.mp
    u, xi, shift = family.params["u"], family.params["xi"], family.params["shift"]
    A, B = m.exp(u), m.exp(shift * xi)
    minus, plus = _quadratic_roots(m, A * B, A * A + B * B - A * B * B, A * B)
    z0 = saddle_z0(u, ctx)
    two_pi_i = m.mpc(0, 2 * m.pi)

    candidates = []
    for omega, branch in ((minus, Branch.MINUS_ROOT), (plus, Branch.PLUS_ROOT)):
        base = m.log(omega)
        for k in (-1, 0, 1, 2):
            candidates.append(((base + k * two_pi_i) / xi, branch))
    z, branch = min(candidates, key=lambda item: abs(item[0] - z0))
    z = _newton(family, z, m)
    return _finish(family, z, m.exp(z * xi), branch)


def solve_saddle_quadratic(family: PotentialFamily) -> SaddleSolution:
    """
    2차 안장점 방정식을 정확히 풀고 Newton 으로 다듬음

    s 족: 인쇄된 근 공식에 가장 가까운 정확한 근을 고르고 Re Φ̃ > 0 을 확인.
    고정 a 족: Φ_0 의 안장점 z₀ = −φ(u)/ξ 에 가장 가까운 z.
    """
    if family.kind in (FamilyKind.S_FAMILY, FamilyKind.LIMIT_S):
        key = CacheUtils.generate_cache_key(family.kind.value, family.params["s"], family.ctx.precision_bits)
        cached = cache_manager.saddle_cache.get(key) if cache_manager.enabled else None
        if cached is not None:
            return cached
        solution = _solve_s_family(family)
        if cache_manager.enabled:
            cache_manager.saddle_cache.set(key, solution)
    elif family.kind is FamilyKind.FIXED_A:
        solution = _solve_fixed_a(family)
    else:
        raise DomainError(f"{family.kind.value} 족은 solve_saddle_half 를 사용하세요")
    logger.debug(f"[SADDLE] {family.kind.value} z={family.ctx.mp.nstr(solution.z, 12)} residual={float(solution.residual):.2e}")
    return solution


def _half_residual_fn(s, m):
    """log|4 sin(π(s−x)) sin(π(s+x))|, 0 이면 |sin(A+B) sin(−A+B)| = 1/4"""
    def f(x):
        return m.log(abs(4 * m.sinpi(s - x) * m.sinpi(s + x)))

    def df(x):
        return -m.pi * m.cot(m.pi * (s - x)) + m.pi * m.cot(m.pi * (s + x))

    return f, df


def half_saddle_x(s, ctx: Optional[PrecisionContext] = None):
    """d/dx Re χ^(s)(x) = 0 의 [0, 5/12] 안의 근. s = 1/2 이면 1/3"""
    m = _ctx(ctx).mp
    s = m.mpf(s)
    f, df = _half_residual_fn(s, m)
    lo, hi = m.mpf(HALF_BRACKET[0]), m.mpf(HALF_BRACKET[1])
    if f(lo) * f(hi) > 0:
        raise NoRootError(f"[0, 5/12] 에서 부호 변화가 없습니다 (s={m.nstr(s, 8)})", s=s)
    try:
        x = m.findroot(f, (lo, hi), solver="anderson")
        x = m.findroot(f, x, solver="newton", df=df)
    except (ValueError, ZeroDivisionError) as e:
        raise NoRootError(f"s={m.nstr(s, 8)} 에서 근 찾기 실패: {e}", s=s) from e
    return m.mpf(m.re(x))


def solve_saddle_half(
    M: int,
    N: int,
    ctx: Optional[PrecisionContext] = None,
    delta: float = config.DEFAULT_DELTA,
) -> SaddleSolution:
    """s = M/(N+1/2) ∈ (1/2 − δ, 1/2 + δ) 에서 χ^(s)_M 의 실 안장점 x^(s)_M"""
    ctx = _ctx(ctx)
    m = ctx.mp
    s = _level_ratio(M, N)
    if not abs(s - 0.5) < delta:
        raise WindowError(f"s={s:.6f} 가 (1/2 − {delta}, 1/2 + {delta}) 밖입니다", M=M, N=N)
    family = build_family(FamilyKind.HALF_FAMILY, ctx, M=M, N=N)
    s_hp = family.params["s"]
    x = half_saddle_x(s_hp, ctx)
    # 실 안장점이므로 (Re χ)' = Re d1. Im d1 = 2π(s − 1/2) 은 남음
    residual = abs(m.re(family.d1(x)))
    if residual > Constants.SADDLE_RESIDUAL_MAX:
        raise NoRootError(f"안장점 잔차 {m.nstr(residual, 5)} 가 너무 큽니다", M=M, N=N)
    return SaddleSolution(
        z=x,
        omega=m.exp(m.mpc(0, 2 * m.pi) * (x + m.mpf(0.5))),
        potential_value=family.value(x),
        second_derivative=family.d2(x),
        residual=residual,
        branch=Branch.MINUS_ROOT,
        family=family.kind.value,
    )


# ======================== Θ, Ξ, Ψ, Υ ========================

def _check_s1_window(s, zeta) -> None:
    if not 1 - zeta < s <= 1:
        raise WindowError(f"s={float(s):.6f} 가 (1 − {zeta}, 1] 밖입니다", s=s)


def _check_half_window(s, delta) -> None:
    if not abs(s - 0.5) < delta:
        raise WindowError(f"s={float(s):.6f} 가 (1/2 − {delta}, 1/2 + {delta}) 밖입니다", s=s)


def s_saddle(s, ctx: Optional[PrecisionContext] = None) -> SaddleSolution:
    """Φ̃^(s)_0 의 안장점 z(s). z(1) = 5/6"""
    return solve_saddle_quadratic(build_family(FamilyKind.LIMIT_S, ctx, s=s))


def theta_s(s, ctx: Optional[PrecisionContext] = None, zeta: float = config.DEFAULT_ZETA):
    """Θ(s) = Φ̃^(s)_0(z(s))"""
    _check_s1_window(s, zeta)
    return s_saddle(s, ctx).potential_value


def xi_s(s, ctx: Optional[PrecisionContext] = None, zeta: float = config.DEFAULT_ZETA):
    """Ξ(s) = 2πi e^{2πis}(e^{−2πiz(s)} − e^{2πiz(s)}). |Ξ(s)| = |Φ̃''(z(s))|, Ξ(1) = 2πi√(−3)"""
    _check_s1_window(s, zeta)
    ctx = _ctx(ctx)
    m = ctx.mp
    omega = s_saddle(s, ctx).omega
    return m.mpc(0, 2 * m.pi) * m.expj(2 * m.pi * m.mpf(s)) * (1 / omega - omega)


def theta_derivatives(s, ctx: Optional[PrecisionContext] = None, h: float = 1e-4):
    """중앙 차분 (Θ'(s), Θ''(s)). 창 밖 s ± h 도 해석적 연장으로 평가"""
    ctx = _ctx(ctx)
    m = ctx.mp
    s, h = m.mpf(s), m.mpf(h)
    left, mid, right = (s_saddle(t, ctx).potential_value for t in (s - h, s, s + h))
    return (right - left) / (2 * h), (right - 2 * mid + left) / (h * h)


def _psi_unchecked(s, ctx: PrecisionContext):
    m = ctx.mp
    s = m.mpf(s)
    x = half_saddle_x(s, ctx)
    return (lobachevsky(m.pi * (s - x), ctx) + lobachevsky(-m.pi * (x + s), ctx)) / m.pi


def psi_s(s, ctx: Optional[PrecisionContext] = None, delta: float = config.DEFAULT_DELTA):
    """Ψ(s) = Re χ^(s)_0(x(s)) = (1/π)(Λ(π(s − x)) + Λ(−π(x + s))). Ψ(1/2) = Vol/2π"""
    _check_half_window(s, delta)
    return _psi_unchecked(s, _ctx(ctx))


def psi_second_derivative(s, ctx: Optional[PrecisionContext] = None, h: float = 1e-4):
    """Ψ''(s) 중앙 차분. Ψ''(1/2) = −2π√3"""
    ctx = _ctx(ctx)
    m = ctx.mp
    s, h = m.mpf(s), m.mpf(h)
    return (_psi_unchecked(s + h, ctx) - 2 * _psi_unchecked(s, ctx) + _psi_unchecked(s - h, ctx)) / (h * h)


def upsilon_s(s, ctx: Optional[PrecisionContext] = None, delta: float = config.DEFAULT_DELTA):
    """Υ(s) = 2πi e^{2πi(s−1/2)}(e^{−2πix(s)} − e^{2πix(s)}). Υ(1/2) = 2π√3"""
    _check_half_window(s, delta)
    ctx = _ctx(ctx)
    m = ctx.mp
    s = m.mpf(s)
    x = half_saddle_x(s, ctx)
    two_pi_i = m.mpc(0, 2 * m.pi)
    return two_pi_i * m.exp(two_pi_i * (s - m.mpf(0.5))) * (m.exp(-two_pi_i * x) - m.exp(two_pi_i * x))


# ======================== H(x, y) ========================

def h_function(x, y, ctx: Optional[PrecisionContext] = None):
    """H(x, y) = Li₂(1/(xy)) − Li₂(x/y) + log x · log y"""
    ctx = _ctx(ctx)
    m = ctx.mp
    x, y = m.mpc(x), m.mpc(y)
    return dilog(1 / (x * y), ctx) - dilog(x / y, ctx) + m.log(x) * m.log(y)


def h_cross_check(M: int, N: int, ctx: Optional[PrecisionContext] = None) -> Dict[str, Any]:
    """
    Φ̃^(s)_M(z_M) − [H(ω, 1/β)/(2πi) + 2πi(1 − s)] 와
    exp((N+1/2)Φ̃) / exp((N+1/2)H/(2πi)) (= −1 이어야 함)
    """
    ctx = _ctx(ctx)
    m = ctx.mp
    family = build_family(FamilyKind.S_FAMILY, ctx, M=M, N=N)
    saddle = solve_saddle_quadratic(family)
    s, beta = family.params["s"], family.params["beta"]
    two_pi_i = m.mpc(0, 2 * m.pi)
    h = h_function(saddle.omega, 1 / beta, ctx)
    level = N + m.mpf(0.5)
    return {
        "residual": abs(saddle.potential_value - (h / two_pi_i + two_pi_i * (1 - s))),
        "exp_ratio": m.exp(level * saddle.potential_value - level * h / two_pi_i),
        "h": h,
    }


# ======================== 극한 보조정리 점검 ========================

def diff_lemma_checks(
    u,
    a,
    M_list: Sequence[int],
    z=None,
    ctx: Optional[PrecisionContext] = None,
) -> List[SweepRow]:
    """
    M 별로
      diff1 = (M+a)(Φ_M(z) − Φ_0(z)) − a[log(1 − e^{u−zξ}) − log(1 − e^{u+zξ})]
      diff2 = (M+a)(Φ_0(z_M) − Φ_0(z₀))
    둘 다 M 이 커지면 0 으로 간다. a = 0 이면 Φ_M = Φ_0 이라 처음부터 0
    """
    ctx = _ctx(ctx)
    m = ctx.mp
    u, a = m.mpf(u), m.mpf(a)
    z = m.mpc(0.8, 0.05) if z is None else m.mpc(z)
    xi = m.mpc(u, 2 * m.pi)
    limit = build_family(FamilyKind.FIXED_A, ctx, u=u, a=a, M=None)
    z0_value = limit.value(saddle_z0(u, ctx))
    expected = a * (m.log(1 - m.exp(u - z * xi)) - m.log(1 - m.exp(u + z * xi)))

    rows = []
    for M in M_list:
        scale = M + a
        family = build_family(FamilyKind.FIXED_A, ctx, u=u, a=a, M=M)
        diff1 = scale * (family.value(z) - limit.value(z)) - expected
        z_M = solve_saddle_quadratic(family).z
        diff2 = scale * (limit.value(z_M) - z0_value)
        rows.append(SweepRow(params={"u": u, "a": a, "M": M}, extra={"diff1": diff1, "diff2": diff2}))
    return rows


def custom_family(value: Callable, d1: Callable, d2: Callable, ctx: Optional[PrecisionContext] = None) -> PotentialFamily:
    """임의의 해석함수로 만든 족 (Laplace 검증용)"""
    return PotentialFamily(FamilyKind.CUSTOM, {}, value, d1, d2, _ctx(ctx))

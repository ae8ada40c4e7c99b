"""
특수함수
복소 다이로그, 클라우젠/로바체프스키 함수, 양자 다이로그 S_γ(z) 와 S 비율 공식

S_γ(z) = exp(¼ ∫_{C_R} e^{zt} / (t sinh(πt) sinh(γt)) dt)
C_R = (−∞, −R] ∪ (원점 위 반원) ∪ [R, ∞)
"""

import logging
from typing import Callable, Optional, Tuple

from .errors import CutError, DomainError, PrecisionError, QuadratureError
from .models import PrecisionContext
from .utils import ValidationUtils

logger = logging.getLogger("fig8asym")

# 급수 반복 상한 = 계수 × 정밀도 비트
_SERIES_CAP_FACTOR = 4
# 함수방정식 연속 적용 최대 횟수
_MAX_CONTINUATION_STEPS = 100000

# |I_γ(z)| ≤ A(1/(π−Re z) + 1/(π+Re z))|γ| + B(1 + e^{−R·Im z})|γ| 의 상수 (기본 R 기준)
CORRECTION_BOUND_A = 1.0
CORRECTION_BOUND_B = 1.0


def _context(ctx: Optional[PrecisionContext]) -> PrecisionContext:
    return ctx if ctx is not None else PrecisionContext()


# ======================== 다이로그 ========================

def _li2_series(m, z):
    """Σ z^k / k², |z| ≤ 1/2"""
    total = m.mpc(0)
    power = m.mpc(1)
    for k in range(1, _SERIES_CAP_FACTOR * m.prec + 100):
        power *= z
        term = power / (k * k)
        total += term
        if abs(term) <= m.eps * abs(total):
            return total
    raise PrecisionError(f"Li2 급수가 수렴하지 않았습니다 (z={m.nstr(z, 10)})")


def _li2_bernoulli(m, z):
    """Li₂(z) = Σ B_n w^{n+1}/(n+1)!, w = −log(1−z), |w| < 2π"""
    w = -m.log(1 - z)
    total = w - w * w / 4
    w2 = w * w
    scaled = w * w2 / 6  # w^{n+1}/(n+1)! at n = 2
    n = 2
    while n < _SERIES_CAP_FACTOR * m.prec + 100:
        term = m.bernoulli(n) * scaled
        total += term
        if abs(term) <= m.eps * abs(total):
            return total
        scaled *= w2 / ((n + 2) * (n + 3))
        n += 2
    raise PrecisionError(f"Li2 Bernoulli 급수가 수렴하지 않았습니다 (z={m.nstr(z, 10)})")


def dilog(z, ctx: Optional[PrecisionContext] = None):
    """
    주 분지 복소 다이로그 Li₂(z) = −∫₀^z log(1−x)/x dx

    |z| ≤ 1/2 는 멱급수, |z| > 2 는 역수 변환, |1−z| ≤ 1/2 는 반사 공식,
    나머지는 w = −log(1−z) 에 대한 Bernoulli 급수로 계산한다.
    실수 z > 1 (분지선)은 CutError.
    """
    m = _context(ctx).mp
    z = m.mpc(z)
    if z == 0:
        return m.mpc(0)
    if z == 1:
        return m.mpc(m.pi ** 2 / 6)
    if z.imag == 0 and z.real > 1:
        raise CutError(f"Li2 분지선 위의 점입니다: z={m.nstr(z, 15)}", z=z)

    with m.extraprec(20):
        if abs(z) <= 0.5:
            value = _li2_series(m, z)
        elif abs(z) > 2:
            value = -m.pi ** 2 / 6 - m.log(-z) ** 2 / 2 - _li2_series(m, 1 / z)
        elif abs(1 - z) <= 0.5:
            value = m.pi ** 2 / 6 - m.log(z) * m.log(1 - z) - _li2_series(m, 1 - z)
        else:
            value = _li2_bernoulli(m, z)
    return +value


def clausen(theta, ctx: Optional[PrecisionContext] = None):
    """Cl₂(θ) = Im Li₂(e^{iθ}). 홀함수, 주기 2π, 최댓값은 θ = π/3"""
    m = _context(ctx).mp
    theta = m.fmod(m.mpf(theta), 2 * m.pi)
    if theta == 0:
        return m.mpf(0)
    return dilog(m.expj(theta), ctx).imag


def lobachevsky(theta, ctx: Optional[PrecisionContext] = None):
    """Λ(θ) = −∫₀^θ log|2 sin t| dt = Cl₂(2θ)/2"""
    m = _context(ctx).mp
    return clausen(2 * m.mpf(theta), ctx) / 2


def hyperbolic_volume(ctx: Optional[PrecisionContext] = None):
    """Vol(S³ \\ 4₁) = 2 Cl₂(π/3) = 2.029883212819..."""
    m = _context(ctx).mp
    return 2 * clausen(m.pi / 3, ctx)


# ======================== C_R 위의 적분 ========================

def _ray_rotation(m, rate_of: Callable) -> Tuple:
    """반직선 회전각 φ ∈ {0, ±π/4} 중 감쇠율이 가장 큰 것 (동률이면 0 우선)"""
    best_phi, best_rate = m.zero, rate_of(m.one)
    for k in (1, -1):
        phi = k * m.pi / 4
        rate = rate_of(m.expj(phi))
        if rate > best_rate:
            best_phi, best_rate = phi, rate
    return best_phi, best_rate


def _ray_nodes(m, rate, bits: int):
    """감쇠 e^{−rate·ρ} 가 2^{−bits} 아래로 떨어지는 지점까지의 기하 분할점"""
    end = (bits * m.ln2 + 10) / rate
    nodes = [m.zero]
    step = m.mpf(0.5)
    while step < end:
        nodes.append(step)
        step *= 2
    nodes.append(end)
    return nodes


def contour_cr_integral(kernel: Callable, R, left_w, right_w, ctx: PrecisionContext):
    """
    ∫_{C_R} kernel(t) dt

    left_w, right_w 는 무한대에서 |kernel| ~ e^{Re(left_w·t)} (t → −∞),
    e^{Re(right_w·t)} (t → +∞) 가 되도록 주는 지수 계수.
    반직선은 감쇠가 가장 빠른 방향으로 ±π/4 까지 회전한다. 회전 범위 안에는
    1/sinh(πt), 1/sinh(γt) 의 극이 없다 (Re γ > 0, |arg γ| < π/4).
    """
    m = ctx.mp
    tol = m.mpf(ctx.quad_tol)
    with m.workprec(ctx.quad_bits):
        R = m.mpf(R)
        left_w, right_w = m.mpc(left_w), m.mpc(right_w)
        phi_l, rate_l = _ray_rotation(m, lambda e: (e * left_w).real)
        phi_r, rate_r = _ray_rotation(m, lambda e: -(e * right_w).real)
        if rate_l <= 0 or rate_r <= 0:
            raise DomainError("C_R 적분이 무한대에서 감쇠하지 않습니다 (띠 영역 밖)")
        el, er = m.expj(phi_l), m.expj(phi_r)

        left, err_l = m.quad(lambda rho: kernel(-R - rho * el), _ray_nodes(m, rate_l, m.prec), error=True)
        right, err_r = m.quad(lambda rho: kernel(R + rho * er), _ray_nodes(m, rate_r, m.prec), error=True)

        def arc(theta):
            t = R * m.expj(m.pi - theta)
            return kernel(t) * (-1j) * t

        middle, err_m = m.quad(arc, [0, m.pi / 2, m.pi], error=True)
        total = el * left + middle + er * right
        err = err_l + err_m + err_r

    ok, message = ValidationUtils.validate_quadrature(total, err, tol)
    if not ok:
        raise QuadratureError(f"C_R 적분 {message}", estimate=total)
    return +total


# ======================== 양자 다이로그 ========================

def _check_gamma(m, gamma):
    gamma = m.mpc(gamma)
    if gamma.real <= 0:
        raise DomainError(f"Re(γ) > 0 이어야 합니다: γ={m.nstr(gamma, 10)}")
    return gamma


def _log_s_base(z, gamma, ctx: PrecisionContext):
    m = ctx.mp
    pi = m.pi

    def kernel(t):
        return m.exp(z * t) / (t * m.sinh(pi * t) * m.sinh(gamma * t))

    R = ctx.radius_for(gamma)
    return contour_cr_integral(kernel, R, z + pi + gamma, z - pi - gamma, ctx) / 4


def quantum_dilog_log(z, gamma, ctx: Optional[PrecisionContext] = None):
    """
    log S_γ(z)

    기본 띠 |Re z| < π + Re γ 는 직접 적분, 밖은 함수방정식
    (1 + e^{iz}) S_γ(z+γ) = S_γ(z−γ) 을 반복 적용해 띠 안으로 옮긴다.
    띠 경계 Re z = ±(π + Re γ) 에 떨어지는 점은 DomainError.
    """
    ctx = _context(ctx)
    m = ctx.mp
    gamma = _check_gamma(m, gamma)
    w = m.mpc(z)
    bound = m.pi + gamma.real
    shift = m.mpc(0)

    steps = 0
    while abs(w.real) >= bound:
        if abs(w.real) == bound or steps > _MAX_CONTINUATION_STEPS:
            raise DomainError(f"S_γ 가 정의되지 않는 직선 위의 점입니다: z={m.nstr(m.mpc(z), 15)}", z=z)
        if w.real < 0:
            # S(w) = (1 + e^{i(w+γ)}) S(w+2γ)
            factor = 1 + m.expj(w + gamma)
            if factor == 0:
                raise DomainError("1 + e^{iz} = 0 인 점을 지납니다", z=z)
            shift += m.log(factor)
            w += 2 * gamma
        else:
            # S(w) = S(w−2γ) / (1 + e^{i(w−γ)})
            factor = 1 + m.expj(w - gamma)
            if factor == 0:
                raise DomainError("1 + e^{iz} = 0 인 점을 지납니다", z=z)
            shift -= m.log(factor)
            w -= 2 * gamma
        steps += 1

    return shift + _log_s_base(w, gamma, ctx)


def quantum_dilog(z, gamma, ctx: Optional[PrecisionContext] = None):
    """S_γ(z)"""
    ctx = _context(ctx)
    return ctx.mp.exp(quantum_dilog_log(z, gamma, ctx))


def quantum_dilog_correction(z, gamma, ctx: Optional[PrecisionContext] = None):
    """
    I_γ(z) = ¼ ∫_{C_R} e^{zt}/(t sinh(πt)) (1/sinh(γt) − 1/(γt)) dt, |Re z| < π

    S_γ(z) = exp(Li₂(−e^{iz})/(2iγ) + I_γ(z)). γ = π/(N+1/2) 이면 1/(2iγ) = (N+1/2)/(2πi).
    """
    ctx = _context(ctx)
    m = ctx.mp
    gamma = _check_gamma(m, gamma)
    z = m.mpc(z)
    if abs(z.real) >= m.pi:
        raise DomainError(f"|Re z| < π 이어야 합니다: z={m.nstr(z, 15)}", z=z)
    pi = m.pi

    def kernel(t):
        return m.exp(z * t) / (t * m.sinh(pi * t)) * (1 / m.sinh(gamma * t) - 1 / (gamma * t))

    R = ctx.radius_for(gamma)
    return contour_cr_integral(kernel, R, z + pi, z - pi, ctx) / 4


def correction_bound(z, gamma, ctx: Optional[PrecisionContext] = None):
    """|I_γ(z)| 의 상계 A(1/(π−Re z)+1/(π+Re z))|γ| + B(1+e^{−R Im z})|γ|"""
    ctx = _context(ctx)
    m = ctx.mp
    z, gamma = m.mpc(z), m.mpc(gamma)
    R = ctx.radius_for(gamma)
    g = abs(gamma)
    return (
        CORRECTION_BOUND_A * (1 / (m.pi - z.real) + 1 / (m.pi + z.real)) * g
        + CORRECTION_BOUND_B * (1 + m.exp(-R * z.imag)) * g
    )


def functional_equation_residual(z, gamma, ctx: Optional[PrecisionContext] = None):
    """|(1+e^{iz})S_γ(z+γ) − S_γ(z−γ)| / |S_γ(z−γ)|"""
    ctx = _context(ctx)
    m = ctx.mp
    z, gamma = m.mpc(z), m.mpc(gamma)
    lhs = (1 + m.expj(z)) * quantum_dilog(z + gamma, gamma, ctx)
    rhs = quantum_dilog(z - gamma, gamma, ctx)
    return abs(lhs - rhs) / abs(rhs)


# ======================== S 비율 닫힌 형식 ========================

def _is_positive_integer(a) -> bool:
    return a > 0 and a == int(a)


def s_ratio_fixed_a(a, u, M: int, ctx: Optional[PrecisionContext] = None):
    """
    S_γ(−π−iu−(2a−1)γ) / S_γ(π−iu−(2a+1)γ), γ = (2π−iu)/(2(M+a))

    = (e^{uπ/γ − 2aπi} − 1) / (e^{u − 2aγi} − 1).
    u = 0 이면 e^{−aπi} sin(aπ) / (e^{−aγi} sin(aγ)), a = u = 0 은 극한값 π/γ = M.
    """
    ctx = _context(ctx)
    m = ctx.mp
    a, u = m.mpf(a), m.mpf(u)
    if u == 0 and _is_positive_integer(a):
        raise DomainError(f"u = 0, a = {a} ∈ ℕ 에서는 비율이 퇴화합니다", a=a)
    if u == 0 and a == 0:
        return m.mpc(M)
    gamma = m.mpc(2 * m.pi, -u) / (2 * (M + a))
    num = m.exp(u * m.pi / gamma - 2j * a * m.pi) - 1
    den = m.exp(u - 2j * a * gamma) - 1
    return num / den


def s_ratio_fixed_a_asymptotic(a, u, M: int, ctx: Optional[PrecisionContext] = None):
    """s_ratio_fixed_a 의 M → ∞ 선두항"""
    ctx = _context(ctx)
    m = ctx.mp
    a, u = m.mpf(a), m.mpf(u)
    if u == 0 and _is_positive_integer(a):
        raise DomainError(f"u = 0, a = {a} ∈ ℕ 에서는 비율이 퇴화합니다", a=a)
    gamma = m.mpc(2 * m.pi, -u) / (2 * (M + a))
    if u > 0:
        return m.exp(u * m.pi / gamma - 2j * a * m.pi) / (m.exp(u) - 1)
    sinc = m.one if a == 0 else m.sin(a * m.pi) / (a * m.pi)
    return m.exp(-1j * a * m.pi + 1j * a * gamma) * sinc * (M + a)


def s_ratio_half_window(M: int, N: int, ctx: Optional[PrecisionContext] = None):
    """
    S_γ(c+γ)/S_γ(c−γ), c = 2π(M/(N+1/2) − 1/2), γ = π/(N+1/2)

    함수방정식에서 바로 1/(1 + e^{ic}). |·| 는 1/(1 + e^{−ic}) 와 같다.
    """
    if not 1 <= M <= N:
        raise DomainError(f"1 ≤ M ≤ N 이어야 합니다: M={M}, N={N}", M=M, N=N)
    m = _context(ctx).mp
    c = 2 * m.pi * (m.mpf(M) / (N + m.mpf(0.5)) - m.mpf(0.5))
    return 1 / (1 + m.expj(c))


def s_ratio_kashaev_point(N: int, ctx: Optional[PrecisionContext] = None):
    """S_γ(−π+γ)/S_γ(π−γ) = N + 1/2, γ = π/(N+1/2)"""
    m = _context(ctx).mp
    return N + m.mpf(0.5)


def s_ratio_center(ctx: Optional[PrecisionContext] = None):
    """S_γ(γ)/S_γ(−γ) = 1/2"""
    m = _context(ctx).mp
    return m.mpf(0.5)

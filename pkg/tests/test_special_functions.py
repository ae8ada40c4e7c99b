import random

import pytest

from fig8asym.errors import CutError, DomainError
from fig8asym.models import PrecisionContext
from fig8asym.special_functions import (
    clausen,
    contour_cr_integral,
    correction_bound,
    dilog,
    functional_equation_residual,
    hyperbolic_volume,
    lobachevsky,
    quantum_dilog,
    quantum_dilog_correction,
    quantum_dilog_log,
    s_ratio_center,
    s_ratio_fixed_a,
    s_ratio_half_window,
    s_ratio_kashaev_point,
)


@pytest.mark.parametrize("z", [0.3 + 0.1j, -0.7 + 0.4j, 0.9j, 0.5 + 0.5j, 1.5 + 0.8j, -3 + 2j, 0.8 - 0.6j])
def test_dilog_matches_mpmath_polylog(ctx, z):
    m = ctx.mp
    expected = m.polylog(2, m.mpc(z))
    assert abs(dilog(z, ctx) - expected) < m.mpf(10) ** -25 * max(1, abs(expected))


def test_dilog_special_values(ctx):
    m = ctx.mp
    assert dilog(0, ctx) == 0
    assert abs(dilog(1, ctx) - m.pi ** 2 / 6) < m.mpf(10) ** -30
    assert abs(dilog(-1, ctx) + m.pi ** 2 / 12) < m.mpf(10) ** -30
    assert abs(dilog(0.5, ctx) - (m.pi ** 2 / 12 - m.ln2 ** 2 / 2)) < m.mpf(10) ** -30


def test_dilog_rejects_branch_cut(ctx):
    with pytest.raises(CutError):
        dilog(2, ctx)


def test_volume_and_clausen(ctx, vol):
    m = ctx.mp
    assert abs(hyperbolic_volume(ctx) - vol) < m.mpf(10) ** -30
    assert abs(float(vol) - 2.029883212819307) < 1e-14
    # Λ(π/6) = Cl₂(π/3)/2 = Vol/4
    assert abs(lobachevsky(m.pi / 6, ctx) - vol / 4) < m.mpf(10) ** -30
    assert abs(clausen(-m.pi / 3, ctx) + vol / 2) < m.mpf(10) ** -30


def test_cr_integral_of_half_step(ctx):
    m = ctx.mp
    value = contour_cr_integral(lambda t: 1 / (t * m.sinh(m.pi * t)), m.mpf(0.5), m.pi, -m.pi, ctx)
    assert abs(value + 2 * m.ln2) < 1e-10


def test_functional_equation(ctx):
    m = ctx.mp
    gamma = m.pi / m.mpf(10.5)
    assert functional_equation_residual(m.mpc(0.3, 0.2), gamma, ctx) < 1e-10
    # 띠 밖의 점도 연장으로 같은 관계를 만족
    assert functional_equation_residual(m.mpc(3.1, -0.1), gamma, ctx) < 1e-10


@pytest.mark.slow
def test_functional_equation_grid(ctx):
    m = ctx.mp
    # 띠 안의 z 10개 × γ = π/(N+1/2), N = 5..14
    points = [m.mpc(-2.7 + 0.6 * k, 0.2 * (k % 3) - 0.2) for k in range(10)]
    gammas = [m.pi / (N + m.mpf(0.5)) for N in range(5, 15)]
    worst = max(functional_equation_residual(z, gamma, ctx) for z in points for gamma in gammas)
    assert worst < 1e-10


@pytest.mark.parametrize("N", [5, 10, 20])
def test_kashaev_point_ratio(ctx, N):
    m = ctx.mp
    gamma = m.pi / (N + m.mpf(0.5))
    ratio = quantum_dilog(-m.pi + gamma, gamma, ctx) / quantum_dilog(m.pi - gamma, gamma, ctx)
    expected = s_ratio_kashaev_point(N, ctx)
    assert abs(ratio / expected - 1) < 1e-6


def test_center_ratio(ctx):
    m = ctx.mp
    gamma = m.pi / m.mpf(10.5)
    center = quantum_dilog(gamma, gamma, ctx) / quantum_dilog(-gamma, gamma, ctx)
    assert abs(center - s_ratio_center(ctx)) < 1e-8


def test_quantum_dilog_independent_of_radius():
    values = []
    for R in (0.1, 0.3, 0.9):
        local = PrecisionContext(precision_bits=128, contour_R=R)
        m = local.mp
        values.append(quantum_dilog(m.mpc(0.4, 0.1), m.pi / m.mpf(10.5), local))
    assert abs(values[1] / values[0] - 1) < 1e-10
    assert abs(values[2] / values[0] - 1) < 1e-10


def test_correction_shrinks_with_level(ctx):
    m = ctx.mp
    coarse = quantum_dilog_correction(0.4, m.pi / m.mpf(20.5), ctx)
    fine = quantum_dilog_correction(0.4, m.pi / m.mpf(80.5), ctx)
    assert abs(fine) < abs(coarse)


def test_dilog_derivative(ctx):
    m = ctx.mp
    rng = random.Random(20)
    h = m.mpf(10) ** -12
    for _ in range(20):
        # Im μ 가 0 에서 떨어져 있으면 e^μ 는 [1, ∞) 밖
        mu = m.mpc(rng.uniform(-2.0, 1.0), rng.choice([-1, 1]) * rng.uniform(0.3, 2.8))
        numeric = (dilog(m.exp(mu + h), ctx) - dilog(m.exp(mu - h), ctx)) / (2 * h)
        expected = -m.log(1 - m.exp(mu))
        assert abs(numeric - expected) < 1e-14 * abs(expected)


@pytest.mark.parametrize("theta", [0.3, 1.0, 2.5])
def test_lobachevsky_matches_integral(ctx, theta):
    m = ctx.mp
    theta = m.mpf(theta)
    integral = -m.quad(lambda t: m.log(2 * m.sin(t)), [0, theta])
    assert abs(lobachevsky(theta, ctx) - integral) < 1e-15


@pytest.mark.parametrize("theta", [0.2, 1.0, 2.0, 3.0, 4.5, 6.0])
def test_clausen_symmetries(ctx, theta):
    m = ctx.mp
    theta = m.mpf(theta)
    value = clausen(theta, ctx)
    assert abs(clausen(theta + 2 * m.pi, ctx) - value) < 1e-25
    assert abs(clausen(-theta, ctx) + value) < 1e-25
    assert abs(value) <= clausen(m.pi / 3, ctx)


def test_half_window_ratio_against_direct(ctx):
    m = ctx.mp
    M, N = 5, 10
    level = N + m.mpf(0.5)
    gamma = m.pi / level
    c = 2 * m.pi * (M / level - m.mpf(0.5))
    direct = quantum_dilog(c + gamma, gamma, ctx) / quantum_dilog(c - gamma, gamma, ctx)
    assert abs(direct - s_ratio_half_window(M, N, ctx)) < 1e-8


@pytest.mark.parametrize("a, u, M", [(0.5, 0.0, 4), (0.3, 0.2, 5)])
def test_fixed_a_ratio_against_direct(ctx, a, u, M):
    m = ctx.mp
    gamma = m.mpc(2 * m.pi, -u) / (2 * (M + m.mpf(a)))
    iu = m.mpc(0, u)
    num = quantum_dilog(-m.pi - iu - (2 * a - 1) * gamma, gamma, ctx)
    den = quantum_dilog(m.pi - iu - (2 * a + 1) * gamma, gamma, ctx)
    closed = s_ratio_fixed_a(a, u, M, ctx)
    assert abs(num / den - closed) < 1e-7 * abs(closed)


def test_fixed_a_ratio_degenerate(ctx):
    assert s_ratio_fixed_a(0, 0, 7, ctx) == 7
    with pytest.raises(DomainError):
        s_ratio_fixed_a(2, 0, 7, ctx)


def test_correction_splits_dilog(ctx):
    m = ctx.mp
    gamma = m.pi / m.mpf(20.5)
    z = m.mpc(0.4, 0.1)
    correction = quantum_dilog_correction(z, gamma, ctx)
    recomposed = m.exp(dilog(-m.expj(z), ctx) / (2j * gamma) + correction)
    direct = m.exp(quantum_dilog_log(z, gamma, ctx))
    assert abs(recomposed / direct - 1) < 1e-8
    assert abs(correction) <= correction_bound(z, gamma, ctx)


def test_quantum_dilog_domain(ctx):
    with pytest.raises(DomainError):
        quantum_dilog(0.1, -0.2, ctx)
    with pytest.raises(DomainError):
        quantum_dilog_correction(4.0, 0.1, ctx)

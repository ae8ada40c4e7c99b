import pytest

from fig8asym.cache_manager import cache_manager
from fig8asym.errors import DomainError, WindowError
from fig8asym.models import PrecisionContext
from fig8asym.potentials import (
    FamilyKind,
    build_family,
    chern_simons_S,
    chern_simons_S_literal,
    custom_family,
    diff_lemma_checks,
    geometric_constants,
    h_cross_check,
    half_saddle_x,
    phi_u,
    psi_s,
    psi_second_derivative,
    s_family_omega_roots,
    s_saddle,
    saddle_z0,
    solve_saddle_half,
    solve_saddle_quadratic,
    theta_derivatives,
    theta_s,
    torsion_T,
    upsilon_s,
    xi_s,
)


@pytest.fixture
def fine():
    return PrecisionContext(precision_bits=256)


def test_geometric_constants(ctx, vol):
    m = ctx.mp
    consts = geometric_constants(ctx)
    assert abs(consts.vol - vol) < 1e-30
    assert abs(consts.torsion_mag - abs(torsion_T(0, ctx))) < 1e-30
    assert abs(consts.xi_at_1 - 2 * m.pi * m.sqrt(3)) < 1e-30


def test_undeformed_point(ctx, vol):
    m = ctx.mp
    assert abs(phi_u(0, ctx) - m.mpc(0, -5 * m.pi / 3)) < 1e-30
    assert abs(saddle_z0(0, ctx) - m.mpf(5) / 6) < 1e-30
    assert abs(torsion_T(0, ctx) - 2 / m.sqrt(m.mpc(-3))) < 1e-30
    assert abs(chern_simons_S(0, ctx) - m.mpc(0, vol)) < 1e-25


def test_chern_simons_literal_branch(ctx):
    m = ctx.mp
    u = m.mpf(0.3)
    theta = m.acos(m.cosh(u) - m.mpf(0.5))
    literal = chern_simons_S_literal(u, m.mpc(0, -theta), ctx)
    assert abs(chern_simons_S(u, ctx) - literal) < 1e-20


def test_deformation_range(ctx):
    with pytest.raises(DomainError):
        torsion_T(1.0, ctx)
    with pytest.raises(DomainError):
        phi_u(-0.1, ctx)


def test_s1_saddle(ctx, vol):
    m = ctx.mp
    saddle = s_saddle(1, ctx)
    assert abs(saddle.z - m.mpf(5) / 6) < 1e-25
    assert abs(saddle.omega - m.expj(-m.pi / 3)) < 1e-25
    assert abs(saddle.potential_value.real - vol / (2 * m.pi)) < 1e-25
    assert abs(saddle.second_derivative + 2 * m.pi * m.sqrt(3)) < 1e-25
    assert saddle.residual < 1e-12


def test_omega_roots_solve_quadratic(ctx):
    m = ctx.mp
    s = m.mpf(0.97)
    beta = m.expj(2 * m.pi * s)
    for omega in s_family_omega_roots(s, ctx):
        assert abs(beta * omega ** 2 - (beta ** 2 + 1 - beta) * omega + beta) < 1e-30


def test_s_family_saddle_has_positive_real_part(ctx):
    family = build_family(FamilyKind.S_FAMILY, ctx, M=190, N=199)
    saddle = solve_saddle_quadratic(family)
    assert saddle.potential_value.real > 0
    assert saddle.family == FamilyKind.S_FAMILY.value


def test_saddle_cache_hit(ctx):
    s_saddle(1, ctx)
    s_saddle(1, ctx)
    assert cache_manager.saddle_cache.get_stats()["hit_count"] >= 1


def test_fixed_a_saddle_near_limit(ctx):
    m = ctx.mp
    family = build_family(FamilyKind.FIXED_A, ctx, u=0.3, a=0.5, M=50)
    saddle = solve_saddle_quadratic(family)
    assert saddle.residual < 1e-12
    assert abs(saddle.z - saddle_z0(m.mpf(0.3), ctx)) < 0.05


def test_theta_and_xi_at_one(fine, vol):
    m = fine.mp
    assert abs(theta_s(1, fine).real - vol / (2 * m.pi)) < 1e-25
    assert abs(xi_s(1, fine) + 2 * m.pi * m.sqrt(3)) < 1e-25
    first, second = theta_derivatives(1, fine)
    assert abs(first.real) < 1e-6
    assert abs(abs(second.real) - 2 * m.pi * m.sqrt(3)) < 1e-3


def test_s1_window_enforced(ctx):
    with pytest.raises(WindowError):
        theta_s(0.5, ctx)
    with pytest.raises(WindowError):
        xi_s(0.9, ctx, zeta=0.05)


def test_half_saddle_values(fine, vol):
    m = fine.mp
    assert abs(half_saddle_x(0.5, fine) - m.mpf(1) / 3) < 1e-25
    assert abs(psi_s(0.5, fine) - vol / (2 * m.pi)) < 1e-25
    assert abs(upsilon_s(0.5, fine) - 2 * m.pi * m.sqrt(3)) < 1e-25
    assert abs(psi_second_derivative(0.5, fine) + 2 * m.pi * m.sqrt(3)) < 1e-4
    limit = build_family(FamilyKind.LIMIT_HALF, fine, s=0.5)
    assert abs(limit.value(m.mpf(1) / 3).real - vol / (2 * m.pi)) < 1e-25


def test_half_window_enforced(ctx):
    with pytest.raises(WindowError):
        psi_s(0.9, ctx)
    with pytest.raises(WindowError):
        solve_saddle_half(190, 199, ctx)


def test_solve_saddle_half(ctx):
    m = ctx.mp
    saddle = solve_saddle_half(100, 200, ctx)
    assert abs(saddle.z - 1 / 3) < 0.01
    family = build_family(FamilyKind.HALF_FAMILY, ctx, M=100, N=200)
    slope = family.d1(saddle.z)
    assert saddle.residual == abs(slope.real)
    assert saddle.residual < 1e-12
    # 실 x 에서 남는 허수부
    s = m.mpf(100) / m.mpf(200.5)
    assert abs(abs(slope.imag) - 2 * m.pi * abs(s - m.mpf(0.5))) < 1e-20


def test_h_identity(ctx):
    check = h_cross_check(190, 199, ctx)
    assert check["residual"] < 1e-10
    assert abs(check["exp_ratio"] + 1) < 1e-8


def test_limit_differences_shrink(ctx):
    rows = diff_lemma_checks(0.3, 0.5, [20, 80, 320], ctx=ctx)
    diff1 = [abs(row.extra["diff1"]) for row in rows]
    diff2 = [abs(row.extra["diff2"]) for row in rows]
    assert diff1[0] > diff1[1] > diff1[2]
    assert diff2[0] > diff2[1] > diff2[2]


def test_limit_differences_vanish_without_shift(ctx):
    for row in diff_lemma_checks(0.3, 0, [20, 80], ctx=ctx):
        assert abs(row.extra["diff1"]) < 1e-25
        assert abs(row.extra["diff2"]) < 1e-20


def test_custom_family_needs_own_builder(ctx):
    with pytest.raises(DomainError):
        build_family(FamilyKind.CUSTOM, ctx)
    family = custom_family(lambda z: -z * z / 2, lambda z: -z, lambda z: -1, ctx)
    assert family.kind is FamilyKind.CUSTOM


_FAMILY_POINTS = [
    (FamilyKind.FIXED_A, {"u": 0.3, "a": 0.5, "M": 50}, (0.8, 0.05)),
    (FamilyKind.FIXED_A, {"u": 0.0, "a": 0.0, "M": None}, (0.8, -0.03)),
    (FamilyKind.S_FAMILY, {"M": 40, "N": 40}, (0.8, 0.05)),
    (FamilyKind.LIMIT_S, {"s": 0.98}, (0.82, -0.04)),
    (FamilyKind.HALF_FAMILY, {"M": 20, "N": 40}, (0.3, 0.02)),
    (FamilyKind.LIMIT_HALF, {"s": 0.5}, (0.35, -0.02)),
]


@pytest.mark.parametrize("kind, params, point", _FAMILY_POINTS)
def test_family_derivatives_match_differences(ctx, kind, params, point):
    m = ctx.mp
    family = build_family(kind, ctx, **params)
    z = m.mpc(*point)
    h = m.mpf(10) ** -12
    d1 = (family.value(z + h) - family.value(z - h)) / (2 * h)
    d2 = (family.d1(z + h) - family.d1(z - h)) / (2 * h)
    assert abs(d1 - family.d1(z)) < 1e-12 * abs(family.d1(z))
    assert abs(d2 - family.d2(z)) < 1e-12 * abs(family.d2(z))


@pytest.mark.parametrize("kind, params, point", _FAMILY_POINTS)
def test_family_value_is_holomorphic(ctx, kind, params, point):
    m = ctx.mp
    family = build_family(kind, ctx, **params)
    h = m.mpf(10) ** -10
    for dx, dy in [(0, 0), (0.01, 0), (0, 0.01), (-0.01, 0.01)]:
        z = m.mpc(point[0] + dx, point[1] + dy)
        along_x = (family.value(z + h) - family.value(z - h)) / (2 * h)
        along_y = (family.value(z + 1j * h) - family.value(z - 1j * h)) / (2j * h)
        assert abs(along_x - along_y) < 1e-8


def test_s_family_saddle_approaches_limit(ctx):
    m = ctx.mp
    target = m.mpf(5) / 6
    gaps = []
    for N in (100, 400):
        saddle = solve_saddle_quadratic(build_family(FamilyKind.S_FAMILY, ctx, M=N, N=N))
        gaps.append(abs(saddle.z - target))
    assert gaps[1] < gaps[0]

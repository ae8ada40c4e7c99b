import pytest

from fig8asym.aef import (
    aef_fixed_a,
    aef_fixed_a_u0,
    aef_fixed_a_u0_printed,
    aef_kashaev,
    aef_kashaev_printed,
    aef_murakami,
    aef_s_near_1,
    aef_tv,
    aef_tv_torsion_form,
    aef_upper_bound_half,
    aef_window_half,
    aef_window_s1,
    ratio_sweep,
)
from fig8asym.errors import DomainError, WindowError
from fig8asym.models import TheoremTag


def test_kashaev_ratio_tends_to_one(ctx):
    rows = ratio_sweep(TheoremTag.CVC2, [{"N": 50}, {"N": 200}], ctx)
    errors = [abs(row.log_ratio.real) for row in rows]
    assert errors[1] < errors[0]
    assert errors[1] < 0.02
    assert abs(rows[1].log_ratio.imag) < 1e-6


def test_kashaev_printed_form_magnitude(ctx):
    estimate = aef_kashaev(40, ctx)
    printed = aef_kashaev_printed(40, ctx)
    assert abs(estimate.value.log_mag - printed.log_mag) < 1e-25
    assert abs(estimate.recomposed(ctx.mp).log_mag - estimate.value.log_mag) < 1e-30


def test_fixed_a_u0_delegation(ctx):
    direct = aef_fixed_a_u0(0.5, 30, ctx)
    delegated = aef_fixed_a(0, 0.5, 30, ctx)
    assert delegated.theorem_tag is TheoremTag.MAINTHM1_5
    assert delegated.value == direct.value
    printed = aef_fixed_a_u0_printed(0.5, 30, ctx)
    assert abs(printed.log_mag - direct.value.log_mag) < 1e-25


def test_fixed_a_u0_magnitude(ctx):
    rows = ratio_sweep(TheoremTag.MAINTHM1_5, [{"a": 0.5, "M": 200}], ctx)
    assert abs(rows[0].log_ratio.real) < 0.1


@pytest.mark.parametrize("u", [0.3, 0.6])
def test_murakami_magnitude(ctx, u):
    rows = ratio_sweep(TheoremTag.ASYMSU2, [{"u": u, "N": 100}, {"u": u, "N": 200}], ctx)
    assert abs(rows[1].log_ratio.real) < 0.1


def test_fixed_a_magnitude(ctx):
    rows = ratio_sweep(TheoremTag.MAINTHM1, [{"u": 0.3, "a": 0.5, "M": 200}], ctx)
    assert abs(rows[0].log_ratio.real) < 0.1


def test_fixed_a_domain(ctx):
    with pytest.raises(DomainError):
        aef_fixed_a(0, 2, 30, ctx)
    with pytest.raises(DomainError):
        aef_murakami(0, 30, ctx)


def test_s_near_1_ratio(ctx):
    rows = ratio_sweep(TheoremTag.MAINTHM2, [{"M": 190, "N": 199}], ctx)
    assert 0.5 < ctx.mp.exp(rows[0].log_ratio.real) < 2


def test_s_near_1_window(ctx):
    with pytest.raises(WindowError):
        aef_s_near_1(100, 199, ctx)


def test_upper_bound_half_envelope(ctx):
    rows = ratio_sweep(TheoremTag.MAINTHM3_BOUND, [{"M": 50, "N": 99}, {"M": 100, "N": 199}], ctx)
    for row in rows:
        assert row.log_ratio.real < 3
    with pytest.raises(WindowError):
        aef_upper_bound_half(190, 199, ctx)


def test_tv_forms_agree(ctx):
    for r in (5, 101, 1001):
        assert abs(aef_tv(r, ctx).value.log_mag - aef_tv_torsion_form(r, ctx).value.log_mag) < 1e-25


def test_tv_estimate_domain(ctx):
    with pytest.raises(DomainError):
        aef_tv(100, ctx)
    with pytest.raises(DomainError):
        aef_tv_torsion_form(3, ctx)


def test_large_level_stays_finite(ctx):
    # exp(r·Vol/2π) 는 r = 2001 에서 binary64 범위를 넘음
    estimate = aef_tv(2001, ctx)
    assert estimate.value.log_mag > 700


def test_window_half_numeric_curvature(ctx):
    closed = aef_window_half(50, ctx)
    numeric = aef_window_half(50, ctx, numeric_curvature=True)
    assert abs(closed.value.log_mag - numeric.value.log_mag) < 1e-4


def test_window_prediction_ratio(ctx):
    m = ctx.mp
    N = 100
    ratio = aef_window_s1(N, ctx).value.log_mag - aef_window_half(N, ctx).value.log_mag
    assert abs(ratio - m.log(2 * (N + m.mpf(0.5)) ** 2)) < 1e-25


@pytest.mark.slow
def test_tv_estimate_captures_exponential_rate(ctx):
    m = ctx.mp
    rows = ratio_sweep(TheoremTag.MAINTHM4, [{"r": 101}, {"r": 201}], ctx)
    # 남는 차이는 r 의 다항식 차수뿐이므로 (2π/r)·log 비는 작음
    for row in rows:
        assert abs(row.log_ratio.real) * 2 * m.pi / row.params["r"] < 0.2
        assert abs(row.log_ratio.imag) < 1e-10


def test_ratio_sweep_preserves_order(ctx):
    grid = [{"N": N} for N in (30, 10, 20)]
    rows = ratio_sweep(TheoremTag.CVC2, grid, ctx, workers=3)
    assert [row.params["N"] for row in rows] == [30, 10, 20]

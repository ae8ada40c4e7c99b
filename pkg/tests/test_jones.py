import pytest

from fig8asym.errors import DomainError, PrecisionError
from fig8asym.jones import (
    colored_jones_at,
    colored_jones_exact,
    ensure_precision,
    g_maximizer,
    g_product,
    gj_nonvanishing_check,
    growth_rate_bound,
    head_split_index,
    kashaev_growth_table,
    kashaev_invariant,
    required_precision,
)
from fig8asym.models import PrecisionContext, RootSpec
from fig8asym.special_functions import hyperbolic_volume


@pytest.mark.parametrize("N, expected", [(1, 1), (2, 5), (3, 13), (4, 27)])
def test_kashaev_small_values(ctx, N, expected):
    value = kashaev_invariant(N, ctx).value
    assert abs(value.real - expected) < 1e-30
    assert abs(value.imag) < 1e-30


def test_second_colored_jones_polynomial(ctx):
    m = ctx.mp
    q = m.mpc(0.7, 0.2)
    expected = q ** 2 - q + 1 - 1 / q + q ** -2
    assert abs(colored_jones_at(2, q, ctx).value - expected) < 1e-30


def test_term_count_and_log_form(ctx):
    m = ctx.mp
    result = colored_jones_exact(RootSpec(M=6, a=0.3, u=0.2), ctx)
    assert result.term_count == 6
    assert result.precision_bits == 128
    assert abs(result.log_form.to_complex(m) - result.value) < 1e-30


def test_precision_policy():
    assert required_precision(10) == 128
    assert required_precision(100) == 264
    low = PrecisionContext(precision_bits=128)
    with pytest.raises(PrecisionError):
        colored_jones_exact(RootSpec.kashaev(100), low)
    assert ensure_precision(low, 100).precision_bits == 264
    assert ensure_precision(low, 10) is low


def test_kashaev_growth_decreases_toward_volume(ctx, vol):
    rows = kashaev_growth_table([50, 100, 200], ctx)
    rates = [row.growth_rate for row in rows]
    assert rates[0] > rates[1] > rates[2] > vol
    assert abs(rows[2].extra["deviation"] - (rates[2] - hyperbolic_volume(ctx))) < 1e-30
    # (2π/N)(3/2 log N − log 3 / 4) ≈ 0.24 이 N = 200 에서 남음
    assert rows[2].extra["deviation"] < 0.15 * vol


@pytest.mark.parametrize("M, a, u", [(6, 0.0, 0.0), (9, 0.5, 0.0), (12, 0.3, 0.2)])
def test_conjugate_root_gives_same_modulus(ctx, M, a, u):
    m = ctx.mp
    q = RootSpec(M=M, a=a, u=u).q(m)
    value = colored_jones_at(M, q, ctx).value
    mirrored = colored_jones_at(M, m.conj(q), ctx).value
    assert abs(abs(mirrored) - abs(value)) < 1e-25 * abs(value)
    assert abs(mirrored - m.conj(value)) < 1e-25 * abs(value)


@pytest.mark.parametrize("a, expected", [(0, 0), (0.2, 0), (0.25, 1), (0.5, 1), (1.25, 2), (1.3, 2)])
def test_head_split_index(a, expected):
    assert head_split_index(a) == expected


def test_g_maximizer_positions(ctx):
    k, _ = g_maximizer(RootSpec.from_color_level(200, 200), ctx)
    assert abs(k - 167) <= 1
    k, _ = g_maximizer(RootSpec.from_color_level(100, 200), ctx)
    assert abs(k - 67) <= 1


def test_g_product_matches_maximizer(ctx):
    spec = RootSpec.from_color_level(40, 60)
    k, value = g_maximizer(spec, ctx)
    assert abs(g_product(spec, k, ctx) - value) < 1e-20 * value
    assert all(g_product(spec, j, ctx) <= value * (1 + 1e-20) for j in range(1, spec.M))


def test_g_requires_root_of_unity(ctx):
    with pytest.raises(DomainError):
        g_product(RootSpec(M=5, a=0.5, u=0.3), 2, ctx)


def test_growth_rate_bound_maximum(ctx, vol):
    m = ctx.mp
    target = vol / (4 * m.pi)
    assert abs(growth_rate_bound(0.5, m.mpf(5) / 12, ctx) - target) < 1e-30
    assert abs(growth_rate_bound(0.25, m.mpf(1) / 6, ctx) - target) < 1e-30
    assert growth_rate_bound(0.5, 0.3, ctx) < target


@pytest.mark.parametrize("N", [5, 10, 50])
def test_gj_factors_nonvanishing(ctx, N):
    assert gj_nonvanishing_check(N, ctx)

import pytest

from fig8asym.errors import DomainError
from fig8asym.jones import colored_jones_at
from fig8asym.turaev_viro import (
    WINDOW_BULK,
    WINDOW_HALF,
    WINDOW_LABELS,
    WINDOW_S1,
    eta_prime,
    tv_growth_table,
    tv_invariant,
    window_members,
    window_of,
)
from fig8asym.utils import LogUtils


def test_eta_prime(ctx):
    m = ctx.mp
    assert abs(eta_prime(5, ctx) - 2 * m.sin(2 * m.pi / 5) / m.sqrt(5)) < 1e-35


def test_window_classification():
    assert window_of(100, 100, 0.05, 0.05) == WINDOW_S1
    assert window_of(50, 100, 0.05, 0.05) == WINDOW_HALF
    assert window_of(75, 100, 0.05, 0.05) == WINDOW_BULK
    members = window_members(100, 0.05, 0.05)
    assert sorted(sum(members.values(), [])) == list(range(1, 101))


def test_tv_matches_direct_sum(ctx):
    m = ctx.mp
    r, N = 7, 3
    q = m.expj(2 * m.pi / (N + m.mpf(0.5)))
    direct = eta_prime(r, ctx) ** 2 * m.fsum(abs(colored_jones_at(M, q, ctx).value) ** 2 for M in range(1, N + 1))
    result = tv_invariant(r, ctx=ctx)
    assert abs(result.value.to_complex(m) - direct) < 1e-30 * direct
    assert result.value.arg == 0


def test_window_sums_partition_total(ctx):
    m = ctx.mp
    result = tv_invariant(41, ctx=ctx)
    combined = LogUtils.log_sum_exp(m, [result.window_sums[label].log_mag for label in WINDOW_LABELS])
    assert abs(combined - result.value.log_mag) < 1e-30


def test_tv_workers_deterministic(ctx):
    single = tv_invariant(31, ctx=ctx, workers=1)
    pooled = tv_invariant(31, ctx=ctx, workers=4)
    assert single.value.log_mag == pooled.value.log_mag
    assert single.log_abs_squares == pooled.log_abs_squares


@pytest.mark.parametrize("r", [3, 4, 10])
def test_tv_rejects_bad_level(ctx, r):
    with pytest.raises(DomainError):
        tv_invariant(r, ctx=ctx)


def test_tv_rejects_overlapping_windows(ctx):
    with pytest.raises(DomainError):
        tv_invariant(11, zeta=0.45, delta=0.2, ctx=ctx)


@pytest.mark.slow
def test_tv_growth_rate_approaches_volume(ctx, vol):
    rows = tv_growth_table([101, 401], ctx)
    assert abs(rows[1].extra["deviation"]) < abs(rows[0].extra["deviation"])
    assert abs(rows[1].growth_rate - vol) < 0.05 * vol

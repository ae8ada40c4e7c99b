import csv
import io
import json

from fig8asym.cache_manager import AdaptiveLRUCache, CacheManager
from fig8asym.models import Branch, LogComplex, RootSpec, SweepRow
from fig8asym.services import JonesService, ReportService


def test_lru_eviction_order():
    cache = AdaptiveLRUCache(base_capacity=2, max_capacity=2)
    cache.set("a", 1)
    cache.set("b", 2)
    assert cache.get("a") == 1
    cache.set("c", 3)
    assert cache.get("b") is None
    assert cache.get("a") == 1 and cache.get("c") == 3
    stats = cache.get_stats()
    assert stats["hit_count"] == 3 and stats["miss_count"] == 1
    cache.clear()
    assert len(cache) == 0


def test_jones_service_caches_values(ctx):
    cache = CacheManager(enabled=True)
    service = JonesService(ctx, cache=cache)
    spec = RootSpec(M=8, a=0.5, u=0.1)
    first = service.evaluate(spec)
    second = service.evaluate(spec)
    assert first is second
    assert cache.get_global_stats()["caches"]["jones"]["hit_count"] == 1


def test_jones_service_without_cache(ctx):
    cache = CacheManager(enabled=False)
    service = JonesService(ctx, cache=cache)
    service.evaluate(RootSpec(M=8))
    assert len(cache.jones_cache) == 0


def test_sweep_keeps_input_order(ctx):
    service = JonesService(ctx, workers=4, cache=CacheManager(enabled=False))
    rows = service.sweep([RootSpec(M=M, a=0.5) for M in (7, 3, 5)])
    assert [row.params["M"] for row in rows] == [7, 3, 5]


def test_csv_columns(ctx):
    m = ctx.mp
    row = SweepRow(
        params={"M": 3, "N": 4},
        exact=LogComplex.from_complex(m, m.mpc(1, 1)),
        extra={"branch": Branch.PLUS_ROOT, "z": m.mpc(0.5, 0.25), "x": m.mpf(0.125)},
    )
    text = ReportService(128).to_csv([row])
    record = next(csv.DictReader(io.StringIO(text)))
    assert record["M"] == "3"
    assert record["branch"] == "plus_root"
    assert float(record["z_re"]) == 0.5 and float(record["z_im"]) == 0.25
    assert float(record["x"]) == 0.125
    assert abs(float(record["exact_arg"]) - float(m.pi / 4)) < 1e-15


def test_json_records(ctx):
    m = ctx.mp
    huge = LogComplex(m.mpf(5000), m.zero)
    rows = [SweepRow(params={"r": 5}, exact=huge, growth_rate=m.mpf(2))]
    records = json.loads(ReportService(128, "json").render(rows))
    assert records[0]["params"] == {"r": 5}
    assert records[0]["exact"]["decimal_string_if_representable"] is None
    assert float(records[0]["growth_rate"]) == 2.0


def test_write_creates_file(ctx, tmp_path):
    path = tmp_path / "nested" / "rows.csv"
    text = ReportService(128).write([SweepRow(params={"N": 1})], path)
    assert path.read_text(encoding="utf-8") == text

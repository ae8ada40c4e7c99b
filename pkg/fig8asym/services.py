"""
서비스 클래스
Jones 값 계산(캐시 적용)과 결과 표 출력을 분리
"""

import csv
import io
import json
import logging
import time
from pathlib import Path
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

from .cache_manager import CacheManager, cache_manager
from .jones import colored_jones_exact, ensure_precision
from .models import JonesValue, LogComplex, PrecisionContext, RootSpec, SweepRow, TvResult
from .turaev_viro import WINDOW_LABELS, tv_invariant
from .utils import CacheUtils, FormatUtils, ParallelUtils

logger = logging.getLogger("fig8asym")


class JonesService:
    """색 Jones 다항식 계산 서비스"""

    def __init__(self, ctx: PrecisionContext, workers: int = 1, cache: CacheManager = cache_manager):
        self.ctx = ctx
        self.workers = workers
        self.cache = cache

    def evaluate(self, spec: RootSpec) -> JonesValue:
        """J_M 정확값 (캐시 적용)"""
        local = ensure_precision(self.ctx, spec.M)
        cache_key = CacheUtils.generate_cache_key(spec.M, spec.a, spec.u, local.precision_bits)

        if self.cache.enabled:
            cached = self.cache.jones_cache.get(cache_key)
            if cached is not None:
                return cached

        value = colored_jones_exact(spec, local)

        if self.cache.enabled:
            self.cache.jones_cache.set(cache_key, value)
        return value

    def row(self, spec: RootSpec) -> SweepRow:
        value = self.evaluate(spec)
        params: Dict[str, Any] = {"M": spec.M, "a": spec.a, "u": spec.u}
        if spec.N is not None:
            params["N"] = spec.N
        return SweepRow(params=params, exact=value.log_form, extra={"value": value.value})

    def sweep(self, specs: Sequence[RootSpec]) -> List[SweepRow]:
        """여러 평가점을 병렬로. 결과 순서는 입력 순서"""
        start = time.time()
        rows = ParallelUtils.map_ordered(self.row, list(specs), self.workers)
        elapsed = time.time() - start
        if elapsed > 1.0:
            logger.info(f"[PERF] [JONES] sweep n={len(rows)} - {elapsed:.2f}s")
        return rows

    def tv_rows(self, r_list: Sequence[int], zeta: float, delta: float) -> List[SweepRow]:
        rows = []
        for r in r_list:
            result: TvResult = tv_invariant(r, zeta=zeta, delta=delta, ctx=self.ctx, workers=self.workers)
            extra = {f"window_{label}_log_mag": result.window_sums[label].log_mag for label in WINDOW_LABELS}
            rows.append(SweepRow(params={"r": r}, exact=result.value, growth_rate=result.growth_rate, extra=extra))
        return rows


class ReportService:
    """SweepRow 목록을 CSV/JSON 으로 직렬화. 같은 입력이면 같은 바이트"""

    def __init__(self, precision_bits: int, output_format: str = "csv"):
        self.precision_bits = precision_bits
        self.output_format = output_format

    # ---------- 셀 변환 ----------

    def _scalar(self, value: Any) -> Any:
        if value is None:
            return ""
        if isinstance(value, Enum):
            return value.value
        if isinstance(value, (bool, int, str)):
            return value
        return FormatUtils.decimal_string(value, self.precision_bits)

    def _cells(self, name: str, value: Any) -> Dict[str, Any]:
        """복소수는 _re/_im, LogComplex 는 _log_mag/_arg 두 열로 펼침"""
        if isinstance(value, LogComplex):
            return {f"{name}_log_mag": self._scalar(value.log_mag), f"{name}_arg": self._scalar(value.arg)}
        if hasattr(value, "imag") and not isinstance(value, (int, float, bool)) and value.imag != 0:
            return {f"{name}_re": self._scalar(value.real), f"{name}_im": self._scalar(value.imag)}
        if hasattr(value, "real") and not isinstance(value, (int, float, bool)):
            return {name: self._scalar(value.real)}
        return {name: self._scalar(value)}

    def _flat(self, row: SweepRow) -> Dict[str, Any]:
        record: Dict[str, Any] = {}
        for key, value in row.params.items():
            record.update(self._cells(key, value))
        for key in ("exact", "aef", "log_ratio", "growth_rate"):
            value = getattr(row, key)
            if value is not None:
                record.update(self._cells(key, value))
        for key in sorted(row.extra):
            record.update(self._cells(key, row.extra[key]))
        return record

    def _json_value(self, value: Any) -> Any:
        if isinstance(value, LogComplex):
            return value.to_record(self.precision_bits)
        if isinstance(value, Enum):
            return value.value
        if value is None or isinstance(value, (bool, int, str)):
            return value
        if hasattr(value, "imag") and not isinstance(value, float) and value.imag != 0:
            return {
                "re": FormatUtils.decimal_string(value.real, self.precision_bits),
                "im": FormatUtils.decimal_string(value.imag, self.precision_bits),
            }
        return FormatUtils.decimal_string(getattr(value, "real", value), self.precision_bits)

    # ---------- 출력 ----------

    def to_csv(self, rows: Sequence[SweepRow]) -> str:
        records = [self._flat(row) for row in rows]
        columns: List[str] = []
        for record in records:
            for key in record:
                if key not in columns:
                    columns.append(key)
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for record in records:
            writer.writerow(record)
        return buffer.getvalue()

    def to_json(self, rows: Sequence[SweepRow]) -> str:
        records = []
        for row in rows:
            record = {"params": {k: self._json_value(v) for k, v in row.params.items()}}
            for key in ("exact", "aef", "log_ratio", "growth_rate"):
                value = getattr(row, key)
                if value is not None:
                    record[key] = self._json_value(value)
            if row.extra:
                record["extra"] = {k: self._json_value(row.extra[k]) for k in sorted(row.extra)}
            records.append(record)
        return json.dumps(records, ensure_ascii=False, indent=2) + "\n"

    def render(self, rows: Sequence[SweepRow]) -> str:
        return self.to_json(rows) if self.output_format == "json" else self.to_csv(rows)

    def write(self, rows: Sequence[SweepRow], path: Optional[Path] = None) -> str:
        """path 가 있으면 파일로 쓰고, 렌더링된 문자열을 돌려줌"""
        text = self.render(rows)
        if path is not None:
            path = Path(path)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
            logger.info(f"[CLI] {len(rows)} rows -> {path}")
        return text

import os
from pathlib import Path
from math import floor

_TRUTHY = {"1", "true", "yes", "y", "on"}

# ===== 정밀도 / 수치 적분 =====
# 기본 작업 정밀도(비트). CLI --precision 이 없을 때 이 값을 사용
DEFAULT_PRECISION_BITS = int(os.getenv("FIG8_PRECISION_BITS", "256"))
# 양자 다이로그 적분의 상대 허용오차
DEFAULT_QUAD_TOL = float(os.getenv("FIG8_QUAD_TOL", "1e-15"))
# Jones 합 최소 정밀도 정책: max(128, 2M + 64)
JONES_MIN_PRECISION_BITS = 128
JONES_GUARD_BITS = 64

# ===== 윈도우 =====
DEFAULT_ZETA = float(os.getenv("FIG8_WINDOW_ZETA", "0.05"))
DEFAULT_DELTA = float(os.getenv("FIG8_WINDOW_DELTA", "0.05"))

# ===== 동시성 =====
CPU_COUNT = os.cpu_count() or 4

# 워커 기본: CPU의 75%, 최소 1개
def _default_workers():
    return max(1, floor(CPU_COUNT * 0.75))

DEFAULT_WORKERS = int(os.getenv("FIG8_WORKERS", str(_default_workers())))

# ===== 캐시 =====
CACHE_ENABLED = os.getenv("FIG8_CACHE_ENABLED", "1").strip().lower() in _TRUTHY
JONES_CACHE_SIZE = int(os.getenv("FIG8_JONES_CACHE_SIZE", "512"))
JONES_CACHE_MAX = int(os.getenv("FIG8_JONES_CACHE_MAX", "2048"))
SADDLE_CACHE_SIZE = int(os.getenv("FIG8_SADDLE_CACHE_SIZE", "256"))

# ===== 출력 / 로깅 =====
DEFAULT_OUTPUT_FORMAT = os.getenv("FIG8_OUTPUT_FORMAT", "csv").strip().lower()
LOG_LEVEL = os.getenv("FIG8_LOG_LEVEL", "INFO").strip().upper()
LOG_CONFIG_PATH = Path(
    os.getenv("FIG8_LOG_CONFIG", str(Path(__file__).resolve().parent.parent / "logging.json"))
)

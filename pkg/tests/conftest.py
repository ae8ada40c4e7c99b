import pytest

from fig8asym.cache_manager import cache_manager
from fig8asym.models import PrecisionContext


@pytest.fixture
def ctx():
    return PrecisionContext(precision_bits=128)


@pytest.fixture
def quad_ctx():
    """윤곽 적분용 저정밀 컨텍스트"""
    return PrecisionContext(precision_bits=64, quad_tol=1e-10)


@pytest.fixture
def vol(ctx):
    """mpmath 내장 Clausen 함수로 계산한 Vol(S³ \\ 4₁)"""
    m = ctx.mp
    return 2 * m.clsin(2, m.pi / 3)


@pytest.fixture(autouse=True)
def clear_caches():
    cache_manager.clear_all_caches()
    yield
    cache_manager.clear_all_caches()

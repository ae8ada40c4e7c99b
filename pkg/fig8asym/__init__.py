# fig8asym: 8자 매듭 양자 불변량의 점근 전개 계산
__version__ = "1.0.1"
__author__ = "fig8asym Team"

from . import config
from .errors import Fig8Error
from .models import LogComplex, PrecisionContext, RootSpec

__all__ = ["config", "Fig8Error", "LogComplex", "PrecisionContext", "RootSpec"]

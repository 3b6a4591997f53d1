"""utility modules for xychain"""

from .result_formatter import ResultFormatter
from .validators import ParameterValidator

__all__ = ["ParameterValidator", "ResultFormatter"]

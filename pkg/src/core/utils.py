"""
Small helpers shared across modules.
"""
import math
from decimal import ROUND_HALF_UP, Decimal
from typing import Union


def format_number(value: float) -> str:
    """Shortest round-trip decimal text for a float."""
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"cannot format non-finite value {value}")
    return repr(value)


def round_half_up(value: Union[float, Decimal]) -> int:
    """
    Round to the nearest integer, halves up.

    Floats are read through their shortest decimal text. Products such as
    fraction * n should be formed as Decimal first: 0.145 * 100 is
    14.499999999999998 in binary floating point.
    """
    exact = value if isinstance(value, Decimal) else Decimal(repr(float(value)))
    if exact < 0:
        raise ValueError(f"expected a non-negative value, got {value}")
    return int(exact.quantize(Decimal(1), rounding=ROUND_HALF_UP))

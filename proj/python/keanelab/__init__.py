"""Exact-arithmetic laboratory for Keane-family 4-interval exchange transformations.

All rationals cross the boundary as "p/q" strings in lowest terms and all big
integers as Python ints; `frac` converts the strings to `fractions.Fraction`.
"""

from fractions import Fraction

from ._keanelab import *  # noqa: F401,F403
from ._keanelab import __version__  # noqa: F401


def frac(value):
    """Parse a "p/q" report string into a Fraction."""
    return Fraction(value)

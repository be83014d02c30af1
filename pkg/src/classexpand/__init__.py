"""Exact conjugacy-class expansion computations for symmetric, alternating
and classical groups, with a brute-force group oracle to check them."""

from .cycle_types import (
    CycleType,
    SplitPair,
    class_size_alt,
    class_size_sym,
    enumerate_cycle_types,
    star_sym,
    support,
)
from .errors import GuardExceeded, ParseError, SupportOverflow, SupportTooLarge
from .sym_expansion import BoundReport, Epsilon

__version__ = "0.1.0"

"""Verification toolkit for Wirtinger/Alzer-type inequalities."""

from .expr import Interval, parse, evaluate, differentiate, to_text
from .quad import integrate, sup_norm, mean_zero_shift

__all__ = [
    "Interval",
    "parse",
    "evaluate",
    "differentiate",
    "to_text",
    "integrate",
    "sup_norm",
    "mean_zero_shift",
]

__version__ = "0.1.0"

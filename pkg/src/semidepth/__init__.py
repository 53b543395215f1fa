"""Finite semigroup engine: Green structure, rank and depth of the minimal ideal."""

from .transform_core import UNDEF, PartialMap, compose, parse, format_map
from .semigroup_engine import FiniteSemigroup, close, kernel, depth

__all__ = ["UNDEF", "PartialMap", "compose", "parse", "format_map", "FiniteSemigroup", "close", "kernel", "depth"]
__version__ = "0.1.0"

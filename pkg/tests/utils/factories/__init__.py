"""Test data factories for qsc_ldpc.

Usage:
    from tests.utils.factories import tree_code, ChannelParamsFactory
"""

from .base import BaseFactory
from .channel import ChannelParamsFactory, QscStarParamsFactory, random_llrs, random_symbols
from .codes import (
    SMALL_H,
    TREE_CHECKS,
    ConstructionSpecFactory,
    random_sparse_code,
    small_code,
    tree_code,
)

__all__ = [
    "BaseFactory",
    "ChannelParamsFactory",
    "ConstructionSpecFactory",
    "QscStarParamsFactory",
    "SMALL_H",
    "TREE_CHECKS",
    "random_llrs",
    "random_sparse_code",
    "random_symbols",
    "small_code",
    "tree_code",
]

"""Bitmask helpers shared by the score tables and the subset DP."""

from itertools import combinations
from typing import Iterator, List, Optional, Sequence

import numpy as np


def bits(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def iter_subsets(mask: int, max_size: Optional[int] = None) -> Iterator[int]:
    """Every submask of ``mask`` exactly once, by ascending cardinality.

    Within one cardinality, subsets come in lexicographic order of their
    member indices. ``max_size`` truncates the enumeration.
    """
    members = bits(mask)
    top = len(members) if max_size is None else min(max_size, len(members))
    for size in range(top + 1):
        for combo in combinations(members, size):
            sub = 0
            for member in combo:
                sub |= 1 << member
            yield sub


def to_local(mask: int, nodes: Sequence[int]) -> int:
    """Re-express a global node mask over the positions of ``nodes``."""
    local = 0
    for position, node in enumerate(nodes):
        if mask >> node & 1:
            local |= 1 << position
    return local


def to_global(local: int, nodes: Sequence[int]) -> int:
    mask = 0
    for position in bits(local):
        mask |= 1 << nodes[position]
    return mask


def drop_bit(masks: np.ndarray, bit: int) -> np.ndarray:
    """Remove bit position ``bit`` from each mask, shifting higher bits down."""
    low = masks & ((1 << bit) - 1)
    high = (masks >> (bit + 1)) << bit
    return low | high


def popcount_table(width: int) -> np.ndarray:
    counts = np.zeros(1 << width, dtype=np.int8)
    index = np.arange(1 << width, dtype=np.int64)
    for bit in range(width):
        counts += ((index >> bit) & 1).astype(np.int8)
    return counts

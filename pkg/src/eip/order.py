"""The recursive total order on N^d whose initial segments are minimizers.

``x < y`` when ``max x < max y``; on ties, compare the tuples with every
sub-maximal entry replaced by 1, reading right to left; if those agree
(and the common maximum exceeds 2) drop the maximal entries and recurse.
"""
from __future__ import annotations

from enum import Enum
from functools import lru_cache
from typing import Sequence

from .errors import InvariantViolation, ValidationError
from .lattice import Config


class Cmp(Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"

    def __str__(self) -> str:
        return self.value


def _check_key(x: Sequence[int]) -> tuple[int, ...]:
    x = tuple(int(v) for v in x)
    if not x:
        raise ValidationError("order keys need at least one coordinate")
    if any(v < 1 for v in x):
        raise ValidationError(f"order keys live in N^d (entries >= 1), got {x}")
    return x


def _flatten(x: tuple[int, ...], m: int) -> tuple[int, ...]:
    return tuple(v if v == m else 1 for v in x)


def compare(x: Sequence[int], y: Sequence[int]) -> Cmp:
    x, y = _check_key(x), _check_key(y)
    if len(x) != len(y):
        raise ValidationError(f"dimension mismatch: {len(x)} vs {len(y)}")
    return _compare(x, y)


def _compare(x: tuple[int, ...], y: tuple[int, ...]) -> Cmp:
    if x == y:
        return Cmp.EQUAL
    if len(x) == 1:
        return Cmp.LESS if x[0] < y[0] else Cmp.GREATER
    mx, my = max(x), max(y)
    if mx != my:
        return Cmp.LESS if mx < my else Cmp.GREATER
    fx, fy = _flatten(x, mx), _flatten(y, my)
    if fx != fy:
        for a, b in zip(reversed(fx), reversed(fy)):
            if a != b:
                return Cmp.LESS if a < b else Cmp.GREATER
    if mx <= 2:
        # with max <= 2 the flattened tuple is the tuple itself, so equal
        # flattenings of distinct keys would break totality
        raise InvariantViolation(f"order undefined for {x} vs {y} (max {mx})")
    xs = tuple(v for v in x if v != mx)
    ys = tuple(v for v in y if v != my)
    return _compare(xs, ys)


def precedes(x: Sequence[int], y: Sequence[int]) -> bool:
    return compare(x, y) is Cmp.LESS


def order_key(x: Sequence[int]) -> tuple:
    """Sort key equivalent to :func:`compare`; nested tuples compare the same way."""
    x = tuple(x)
    if not x:
        return ()
    m = max(x)
    flat = _flatten(x, m)
    rest = tuple(v for v in x if v != m)
    return (m, flat[::-1], order_key(rest))


@lru_cache(maxsize=64)
def _sorted_cube(m: int, d: int) -> tuple[tuple[int, ...], ...]:
    from itertools import product

    return tuple(sorted(product(range(1, m + 1), repeat=d), key=order_key))


def initial_segment_points(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """The first ``n`` points of N^d, in order."""
    if n < 0:
        raise ValidationError("n must be >= 0")
    if d < 1:
        raise ValidationError("d must be >= 1")
    if n == 0:
        return ()
    m = 1
    while m**d < n:
        m += 1
    return _sorted_cube(m, d)[:n]


def initial_segment(n: int, d: int) -> Config:
    return Config(d, initial_segment_points(n, d))

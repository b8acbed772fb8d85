"""Scaling parameter, the extremal slab families, and the fluctuation exponent."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Sequence

from .errors import ValidationError
from .lattice import Box, Config, iroot

MATERIALIZE_LIMIT = 10**7


@dataclass(frozen=True)
class ScalingParams:
    """h = ell^(2^(1-d)) and c = 1 - 2^(1-d).

    ``h`` is irrational in general, so only its floor is stored exactly;
    ``h_float`` is for display.
    """

    ell: int
    d: int

    def __post_init__(self):
        if self.ell < 1 or self.d < 1:
            raise ValidationError("ScalingParams needs ell >= 1 and d >= 1")

    @property
    def root_degree(self) -> int:
        return 2 ** (self.d - 1)

    @property
    def h_floor(self) -> int:
        return iroot(self.ell, self.root_degree)

    @property
    def h_float(self) -> float:
        return self.ell ** (1.0 / self.root_degree)

    @property
    def c(self) -> Fraction:
        return 1 - Fraction(1, self.root_degree)


def scaling_floor(ell: int, d: int) -> int:
    """floor(ell^(2^(1-d))) in exact integer arithmetic."""
    if ell < 1 or d < 1:
        raise ValidationError("scaling_floor needs ell >= 1 and d >= 1")
    return iroot(ell, 2 ** (d - 1))


def converse_threshold_met(ell: int, d: int, twop: int) -> bool:
    """Whether 2p >= 4^c_d * h_{ell,d}, decided by raising both sides to the
    power N = 2^(d-1):  (2p)^N >= 4^(N-1) * ell."""
    if twop < 0 or twop % 2:
        raise ValidationError(f"2p must be a nonnegative even integer, got {twop}")
    N = 2 ** (d - 1)
    return twop**N >= 4 ** (N - 1) * ell


def converse_threshold_ceil(ell: int, d: int) -> int:
    """Smallest even 2p meeting :func:`converse_threshold_met`."""
    N = 2 ** (d - 1)
    # (2p)^N >= 4^(N-1) ell  <=>  2p >= ceil root of the right side
    rhs = 4 ** (N - 1) * ell
    r = iroot(rhs, N)
    if r**N < rhs:
        r += 1
    return r + (r % 2)


def scaling_exponent(d: int) -> Fraction:
    """(d - 1 + 2^(1-d)) / d."""
    if d < 2:
        raise ValidationError("scaling_exponent needs d >= 2")
    return (d - 1 + Fraction(1, 2 ** (d - 1))) / d


class BoxSet:
    """Implicit axis-aligned box ``{1..a_1} x ... x {1..a_d}`` (shifted by
    ``origin``); perimeter and cardinality without enumerating points."""

    def __init__(self, extents: Sequence[int], origin: Sequence[int] | None = None):
        self.extents = tuple(int(a) for a in extents)
        self.dim = len(self.extents)
        if self.dim < 1 or any(a < 1 for a in self.extents):
            raise ValidationError(f"box extents must be >= 1, got {self.extents}")
        self.origin = tuple(origin) if origin is not None else (0,) * self.dim

    @property
    def box(self) -> Box:
        return Box(self.origin, self.extents)

    def __len__(self) -> int:
        return prod(self.extents)

    def closed_form_perimeter(self) -> int:
        """2 * sum_i prod_{j != i} a_j."""
        return 2 * sum(prod(self.extents[:i] + self.extents[i + 1:]) for i in range(self.dim))

    def bonds(self) -> int:
        return sum((a - 1) * prod(self.extents[:i] + self.extents[i + 1:])
                   for i, a in enumerate(self.extents))

    def materialize(self) -> Config:
        if len(self) > MATERIALIZE_LIMIT:
            raise ValidationError(
                f"refusing to materialize {len(self)} cells (limit {MATERIALIZE_LIMIT})"
            )
        return self.box.to_config()

    def __repr__(self) -> str:
        return f"BoxSet({self.extents}, origin={self.origin})"


def slab(ell: int, d: int, p: int) -> BoxSet:
    """{1..ell-p} x {1..ell}^(d-1)."""
    if d < 1 or ell < 1:
        raise ValidationError("slab needs ell >= 1 and d >= 1")
    if not 0 <= p < ell:
        raise ValidationError(f"slab needs 0 <= p < ell, got p={p}, ell={ell}")
    return BoxSet((ell - p,) + (ell,) * (d - 1))


def padded_slab(ell: int, j: int, d: int, twop: int) -> BoxSet:
    """{1..ell-2p} x {1..ell+1}^j x {1..ell}^(d-1-j)."""
    if d < 1 or ell < 1:
        raise ValidationError("padded_slab needs ell >= 1 and d >= 1")
    if not 0 <= j <= d - 1:
        raise ValidationError(f"j must be in 0..{d - 1}, got {j}")
    if twop < 0 or twop % 2:
        raise ValidationError(f"2p must be a nonnegative even integer, got {twop}")
    if twop >= ell:
        raise ValidationError(f"padded_slab needs 2p < ell, got 2p={twop}, ell={ell}")
    return BoxSet((ell - twop,) + (ell + 1,) * j + (ell,) * (d - 1 - j))

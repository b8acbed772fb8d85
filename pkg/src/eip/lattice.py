"""Finite point sets in Z^d and their edge-perimeter arithmetic.

A :class:`Config` keeps two interchangeable views of the same set: a
frozenset of integer tuples and a dense boolean mask over the minimal
rectangle. Whichever view is missing is built lazily. Bond and perimeter
counts go through the mask whenever the bounding box is small enough,
since that is where all the bulk counting in the test suites happens.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy import signal

from .errors import ValidationError

INT32_MIN = -(2**31)
INT32_MAX = 2**31 - 1

# cells; above this only the hash-set path is used
DENSE_LIMIT = 1 << 26

Point = tuple[int, ...]


def _check_coord(v: int) -> int:
    if not INT32_MIN <= v <= INT32_MAX:
        raise OverflowError(f"coordinate {v} outside signed 32-bit range")
    return v


class Config:
    """Immutable finite subset of Z^d."""

    __slots__ = ("dim", "_points", "_mask", "_origin", "__dict__")

    def __init__(self, dim: int, points: Iterable[Sequence[int]] = ()):
        if dim < 1:
            raise ValidationError(f"dimension must be >= 1, got {dim}")
        pts = set()
        for p in points:
            t = tuple(int(v) for v in p)
            if len(t) != dim:
                raise ValidationError(f"point {t} has length {len(t)}, expected {dim}")
            for v in t:
                _check_coord(v)
            pts.add(t)
        self.dim = dim
        self._points: frozenset[Point] | None = frozenset(pts)
        self._mask: np.ndarray | None = None
        self._origin: Point | None = None

    @classmethod
    def from_mask(cls, mask: np.ndarray, origin: Sequence[int] | None = None) -> "Config":
        """Wrap a boolean array; ``mask[0, ..., 0]`` sits at ``origin``
        (default all ones)."""
        mask = np.asarray(mask, dtype=bool)
        if mask.ndim < 1:
            raise ValidationError("mask must have at least one axis")
        self = cls.__new__(cls)
        self.dim = mask.ndim
        origin = tuple(origin) if origin is not None else (1,) * mask.ndim
        if len(origin) != mask.ndim:
            raise ValidationError("origin length does not match mask dimension")
        self._points = None
        if not mask.any():
            self._mask = np.zeros((0,) * mask.ndim, dtype=bool)
            self._origin = (0,) * mask.ndim
            self._points = frozenset()
            return self
        # trim to the minimal rectangle
        idx = np.argwhere(mask)
        lo, hi = idx.min(axis=0), idx.max(axis=0)
        sl = tuple(slice(a, b + 1) for a, b in zip(lo, hi))
        self._mask = mask[sl]
        self._origin = tuple(int(o + a) for o, a in zip(origin, lo))
        for o, n in zip(self._origin, self._mask.shape):
            _check_coord(o)
            _check_coord(o + n - 1)
        return self

    # -- views ---------------------------------------------------------

    @property
    def points(self) -> frozenset[Point]:
        if self._points is None:
            idx = np.argwhere(self._mask)
            idx += np.asarray(self._origin)
            self._points = frozenset(map(tuple, idx.tolist()))
        return self._points

    @cached_property
    def array(self) -> np.ndarray:
        """Points as an ``(n, d)`` int64 array in sorted order."""
        if self._points is None:
            idx = np.argwhere(self._mask).astype(np.int64)
            return idx + np.asarray(self._origin, dtype=np.int64)
        if not self._points:
            return np.zeros((0, self.dim), dtype=np.int64)
        return np.array(sorted(self._points), dtype=np.int64)

    def bbox(self) -> tuple[Point, Point]:
        """Inclusive per-axis (min, max) corners. Undefined for the empty set."""
        if self._mask is not None and self._origin is not None:
            lo = self._origin
            return lo, tuple(o + n - 1 for o, n in zip(lo, self._mask.shape))
        a = self.array
        return tuple(a.min(axis=0).tolist()), tuple(a.max(axis=0).tolist())

    def bbox_cells(self) -> int:
        lo, hi = self.bbox()
        out = 1
        for a, b in zip(lo, hi):
            out *= b - a + 1
        return out

    def dense(self) -> tuple[np.ndarray, Point]:
        """(mask, origin) over the minimal rectangle."""
        if self._mask is None:
            if not self._points:
                self._mask = np.zeros((0,) * self.dim, dtype=bool)
                self._origin = (0,) * self.dim
            else:
                lo, hi = self.bbox()
                shape = tuple(b - a + 1 for a, b in zip(lo, hi))
                m = np.zeros(shape, dtype=bool)
                idx = self.array - np.asarray(lo)
                m[tuple(idx.T)] = True
                self._mask, self._origin = m, lo
        return self._mask, self._origin

    def has_dense(self) -> bool:
        return self._mask is not None

    def prefers_dense(self) -> bool:
        n = len(self)
        if self._mask is not None:
            return True
        if n < 48:
            return False
        cells = self.bbox_cells()
        return cells <= DENSE_LIMIT and cells <= 64 * n

    # -- set protocol --------------------------------------------------

    def __len__(self) -> int:
        if self._points is not None:
            return len(self._points)
        return int(self._mask.sum())

    def __iter__(self) -> Iterator[Point]:
        return iter(sorted(self.points))

    def __contains__(self, p) -> bool:
        return tuple(p) in self.points

    def __eq__(self, other) -> bool:
        if not isinstance(other, Config):
            return NotImplemented
        if self.dim != other.dim:
            return False
        if self._mask is not None and other._mask is not None:
            return (
                self._origin == other._origin
                and self._mask.shape == other._mask.shape
                and bool(np.array_equal(self._mask, other._mask))
            )
        return self.points == other.points

    def __hash__(self) -> int:
        return hash((self.dim, self.points))

    def __repr__(self) -> str:
        n = len(self)
        if n <= 8:
            return f"Config(dim={self.dim}, points={sorted(self.points)})"
        return f"Config(dim={self.dim}, n={n})"

    def __or__(self, other: "Config") -> "Config":
        _same_dim(self, other)
        return Config(self.dim, self.points | other.points)

    def __sub__(self, other: "Config") -> "Config":
        _same_dim(self, other)
        return Config(self.dim, self.points - other.points)

    def __and__(self, other: "Config") -> "Config":
        _same_dim(self, other)
        return Config(self.dim, self.points & other.points)

    def __xor__(self, other: "Config") -> "Config":
        _same_dim(self, other)
        return Config(self.dim, self.points ^ other.points)

    def issubset(self, other: "Config") -> bool:
        return self.points <= other.points

    # -- interchange ---------------------------------------------------

    def to_json_obj(self) -> dict:
        return {"dim": self.dim, "points": [list(p) for p in sorted(self.points)]}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Config":
        try:
            dim = int(obj["dim"])
            pts = obj["points"]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"point-set file needs 'dim' and 'points': {exc}") from None
        return cls(dim, pts)


def _same_dim(a: Config, b: Config) -> None:
    if a.dim != b.dim:
        raise ValidationError(f"dimension mismatch: {a.dim} vs {b.dim}")


def read_config(path) -> Config:
    with open(path) as fh:
        return Config.from_json_obj(json.load(fh))


def write_config(config: Config, path) -> None:
    with open(path, "w") as fh:
        json.dump(config.to_json_obj(), fh)
        fh.write("\n")


@dataclass(frozen=True)
class Box:
    """``origin + {1..a_1} x ... x {1..a_d}``."""

    origin: Point
    extents: tuple[int, ...]

    def __post_init__(self):
        if len(self.origin) != len(self.extents):
            raise ValidationError("origin and extents differ in length")
        if any(a < 1 for a in self.extents):
            raise ValidationError(f"box extents must be >= 1, got {self.extents}")

    @property
    def dim(self) -> int:
        return len(self.extents)

    @property
    def cells(self) -> int:
        out = 1
        for a in self.extents:
            out *= a
        return out

    @property
    def lo(self) -> Point:
        return tuple(o + 1 for o in self.origin)

    @property
    def hi(self) -> Point:
        return tuple(o + a for o, a in zip(self.origin, self.extents))

    def __contains__(self, p) -> bool:
        return all(o < v <= o + a for v, o, a in zip(p, self.origin, self.extents))

    def to_config(self) -> Config:
        return Config.from_mask(np.ones(self.extents, dtype=bool), self.lo)


# -- counting ---------------------------------------------------------------

def _neighbors(p: Point) -> Iterator[Point]:
    for i in range(len(p)):
        q = list(p)
        q[i] += 1
        yield tuple(q)
        q[i] -= 2
        yield tuple(q)


def bond_count(C: Config) -> int:
    """Number of unordered nearest-neighbour pairs inside ``C``."""
    if len(C) == 0:
        return 0
    if C.prefers_dense():
        m, _ = C.dense()
        total = 0
        for ax in range(m.ndim):
            a = np.take(m, range(0, m.shape[ax] - 1), axis=ax)
            b = np.take(m, range(1, m.shape[ax]), axis=ax)
            total += int(np.count_nonzero(a & b))
        return total
    pts = C.points
    total = 0
    for p in pts:
        for i in range(C.dim):
            q = p[:i] + (p[i] + 1,) + p[i + 1:]
            if q in pts:
                total += 1
    return total


def edge_perimeter(C) -> int:
    """Count of lattice edges with exactly one endpoint in ``C``.

    Counted directly (not via the bond identity) so the identity can be
    used as a check. Implicit boxes are evaluated in closed form.
    """
    if hasattr(C, "closed_form_perimeter"):
        return C.closed_form_perimeter()
    if len(C) == 0:
        return 0
    if C.prefers_dense():
        m, _ = C.dense()
        padded = np.pad(m, 1)
        total = 0
        for ax in range(padded.ndim):
            total += int(np.count_nonzero(np.diff(padded, axis=ax)))
        return total
    pts = C.points
    return sum(1 for p in pts for q in _neighbors(p) if q not in pts)


def translate(C: Config, shift: Sequence[int]) -> Config:
    """``C + shift``; raises OverflowError instead of wrapping."""
    shift = tuple(int(s) for s in shift)
    if len(shift) != C.dim:
        raise ValidationError("shift dimension mismatch")
    if len(C) == 0:
        return C
    if C.has_dense():
        m, o = C.dense()
        return Config.from_mask(m, tuple(_check_coord(a + b) for a, b in zip(o, shift)))
    return Config(C.dim, (tuple(_check_coord(a + b) for a, b in zip(p, shift)) for p in C.points))


def permute_axes(C: Config, perm: Sequence[int]) -> Config:
    """New axis ``i`` is old axis ``perm[i]`` (0-based)."""
    return Config(C.dim, (tuple(p[j] for j in perm) for p in C.points))


def reflect(C: Config, axis: int) -> Config:
    """Mirror along a 0-based axis."""
    return Config(C.dim, (p[:axis] + (-p[axis],) + p[axis + 1:] for p in C.points))


def canonical_translate(C: Config) -> Config:
    """Translate so every axis starts at coordinate 1."""
    if len(C) == 0:
        return C
    lo, _ = C.bbox()
    return translate(C, tuple(1 - v for v in lo))


def section(C: Config, axis: int, level: int) -> Config:
    """Points with ``x[axis] == level`` (axis 1-based), axis coordinate dropped."""
    d = C.dim
    if d < 2:
        raise ValidationError("sections need d >= 2")
    if not 1 <= axis <= d:
        raise ValidationError(f"axis must be in 1..{d}, got {axis}")
    i = axis - 1
    if len(C) == 0:
        return Config(d - 1)
    if C.has_dense():
        m, o = C.dense()
        k = level - o[i]
        if not 0 <= k < m.shape[i]:
            return Config(d - 1)
        return Config.from_mask(np.take(m, k, axis=i), o[:i] + o[i + 1:])
    return Config(d - 1, (p[:i] + p[i + 1:] for p in C.points if p[i] == level))


def section_sizes(C: Config, axis: int) -> dict[int, int]:
    """level -> cardinality of the section, nonempty levels only."""
    i = axis - 1
    if len(C) == 0:
        return {}
    if C.has_dense():
        m, o = C.dense()
        counts = m.sum(axis=tuple(a for a in range(m.ndim) if a != i))
        return {o[i] + k: int(c) for k, c in enumerate(counts) if c}
    out: dict[int, int] = {}
    for p in C.points:
        out[p[i]] = out.get(p[i], 0) + 1
    return out


def minimal_rectangle(C: Config) -> Box:
    if len(C) == 0:
        raise ValidationError("empty configuration")
    lo, hi = C.bbox()
    return Box(tuple(v - 1 for v in lo), tuple(b - a + 1 for a, b in zip(lo, hi)))


# -- integer roots and the Wulff cube -------------------------------------

def iroot(n: int, k: int) -> int:
    """Largest integer ``r`` with ``r**k <= n``."""
    if n < 0:
        raise ValidationError("iroot of a negative number")
    if k < 1:
        raise ValidationError("root degree must be >= 1")
    if n < 2 or k == 1:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def wulff_side(n: int, d: int) -> int:
    if n < 1:
        raise ValidationError("wulff shape needs n >= 1")
    return iroot(n, d)


def wulff(n: int, d: int) -> Config:
    """The cube ``{1..floor(n^(1/d))}^d``."""
    w = wulff_side(n, d)
    return Config.from_mask(np.ones((w,) * d, dtype=bool))


# -- translation-optimised symmetric difference --------------------------

def min_translate_symdiff(C: Config, D: Config) -> tuple[int, Point]:
    """Minimum over integer ``a`` of ``#((C - a) ^ D)`` and the lexicographically
    smallest minimising ``a``.

    Only translations whose minimal rectangles overlap are scanned; every
    other shift gives ``#C + #D``.
    """
    _same_dim(C, D)
    if len(C) == 0 or len(D) == 0:
        raise ValidationError("min_translate_symdiff needs nonempty configurations")
    mc, oc = C.dense()
    md, od = D.dense()
    # full correlation index k <-> a = oc - od + k - (shape_d - 1)
    corr = signal.correlate(mc.astype(np.float64), md.astype(np.float64), mode="full")
    corr = np.rint(corr).astype(np.int64)
    best = int(corr.max())
    k = np.argwhere(corr == best)[0]
    shift = tuple(int(oc[i] - od[i] + k[i] - (md.shape[i] - 1)) for i in range(C.dim))
    return len(C) + len(D) - 2 * best, shift


def _overlap_1d(lo1: int, n1: int, lo2: int, n2: int) -> tuple[int, int]:
    """Max overlap of ``[lo1, lo1+n1) - a`` with ``[lo2, lo2+n2)`` and the least
    maximising ``a``."""
    # maximal exactly when one interval contains the other; those shifts run
    # between lo1 - lo2 and lo1 + n1 - lo2 - n2, whichever order they come in
    return min(n1, n2), min(lo1 - lo2, lo1 + n1 - lo2 - n2)


def box_symdiff(b1: Box, b2: Box) -> tuple[int, Point]:
    """Closed-form :func:`min_translate_symdiff` for two boxes."""
    if b1.dim != b2.dim:
        raise ValidationError("dimension mismatch")
    overlap = 1
    shift = []
    for lo1, n1, lo2, n2 in zip(b1.lo, b1.extents, b2.lo, b2.extents):
        o, a = _overlap_1d(lo1, n1, lo2, n2)
        overlap *= o
        shift.append(a)
    return b1.cells + b2.cells - 2 * overlap, tuple(shift)


def symmetry_orbit(C: Config) -> Iterator[Config]:
    """All images of ``C`` under the 2^d d! lattice symmetries fixing the origin."""
    from itertools import permutations

    for perm in permutations(range(C.dim)):
        base = permute_axes(C, perm)
        for signs in product((1, -1), repeat=C.dim):
            yield Config(C.dim, (tuple(s * v for s, v in zip(signs, p)) for p in base.points))

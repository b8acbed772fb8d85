"""Daisies: the canonical edge-isoperimetric minimizers.

A d-dimensional daisy is a DO1 box (nonincreasing extents, oscillation at
most one) followed by a cascade of lower-dimensional DO1 boxes, each one
laid flat against a face of the previous one. We store it by its layer
tuples; :class:`DaisyMatrix` is the dot/number matrix form, where a dot in
column ``j`` stands for the single coordinate "first number above, plus
one".
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import prod
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .lattice import Config, edge_perimeter, iroot

class DaisyValidationError(ValidationError):
    def __init__(self, rule: str, detail: str):
        self.rule = rule
        super().__init__(f"{rule}: {detail}")


# -- DO1 tuples ---------------------------------------------------------------

def is_do1(t: Sequence[int]) -> bool:
    if not t or any(v < 1 for v in t):
        return False
    if any(a < b for a, b in zip(t, t[1:])):
        return False
    return t[0] - t[-1] <= 1


def value_change_position(t: Sequence[int]) -> int:
    """1 for a constant tuple, otherwise the first (1-based) index of a drop.

    The defining display writes the non-constant branch as ``n_k - n_1 = 1``;
    for a nonincreasing tuple that can only mean ``n_1 - n_k = 1``.
    """
    if not is_do1(t):
        raise DaisyValidationError("DO1", f"{tuple(t)} is not a DO1 tuple")
    for j in range(1, len(t)):
        if t[j] < t[j - 1]:
            return j + 1
    return 1


def do1_of(base: int, s: int, length: int) -> tuple[int, ...]:
    """``s`` copies of ``base + 1`` followed by ``base``."""
    return (base + 1,) * s + (base,) * (length - s)


def largest_do1(mass: int, length: int) -> tuple[int, ...] | None:
    """Largest DO1 tuple of the given length with product <= mass.

    Along the order DO1 tuples run t^L < (t+1) t^(L-1) < ... < (t+1)^L, so
    the largest one is fixed by the integer L-th root and a scan over how
    many leading entries get bumped.
    """
    if mass < 1:
        return None
    t = iroot(mass, length)
    s = 0
    while s < length - 1 and (t + 1) ** (s + 1) * t ** (length - s - 1) <= mass:
        s += 1
    return do1_of(t, s, length)


def larger(a: Sequence[int], b: Sequence[int]) -> bool:
    """``a`` is dominated by ``b`` through the map skipping b's value-change
    position, strictly somewhere. ``len(b) == len(a) + 1``."""
    if len(b) != len(a) + 1 or not is_do1(a) or not is_do1(b):
        return False
    s = value_change_position(b)
    rest = tuple(b[:s - 1]) + tuple(b[s:])
    return all(x <= y for x, y in zip(a, rest)) and any(x < y for x, y in zip(a, rest))


def box_bonds(extents: Sequence[int]) -> int:
    """Bonds of a full box: sum_i (p_i - 1) prod_{j != i} p_j."""
    total = 0
    for i, p in enumerate(extents):
        total += (p - 1) * prod(extents[:i] + extents[i + 1:]) if p else 0
    return total


# -- specs ------------------------------------------------------------------

@dataclass(frozen=True)
class Frame:
    """Embedding of a k-dimensional sub-daisy into its host's coordinates.

    ``free`` lists the host columns (0-based) the sub-daisy spans, in
    order; every other column is pinned at ``fixed[col]``.
    """

    host_dim: int
    free: tuple[int, ...]
    fixed: tuple[tuple[int, int], ...]

    @property
    def dim(self) -> int:
        return len(self.free)

    def embed(self, pts) -> list[tuple[int, ...]]:
        out = []
        base = [0] * self.host_dim
        for c, v in self.fixed:
            base[c] = v
        for p in pts:
            q = list(base)
            for c, v in zip(self.free, p):
                q[c] = v
            out.append(tuple(q))
        return out

    def restrict(self, pinned: dict[int, int]) -> "Frame":
        """Pin some of this frame's own axes (0-based, local) to values."""
        free = tuple(c for i, c in enumerate(self.free) if i not in pinned)
        fixed = dict(self.fixed)
        for i, v in pinned.items():
            fixed[self.free[i]] = v
        return Frame(self.host_dim, free, tuple(sorted(fixed.items())))


@dataclass(frozen=True)
class DaisySpec:
    """Layer tuples of a daisy; layer ``k`` has length ``dim - k``.

    An empty ``layers`` tuple is the empty daisy (cardinality 0).
    """

    dim: int
    layers: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(tuple(int(v) for v in t) for t in self.layers))
        if self.dim < 1:
            raise DaisyValidationError("dimension", f"dim must be >= 1, got {self.dim}")
        if len(self.layers) > self.dim:
            raise DaisyValidationError("layer count", f"{len(self.layers)} layers in dimension {self.dim}")
        for k, t in enumerate(self.layers):
            if len(t) != self.dim - k:
                raise DaisyValidationError("layer length", f"layer {k} is {t}, expected length {self.dim - k}")
            if not is_do1(t):
                raise DaisyValidationError("DO1", f"layer {k} {t} is not a DO1 tuple")
            if k and not larger(t, self.layers[k - 1]):
                raise DaisyValidationError("larger", f"layer {k} {t} is not dominated by {self.layers[k - 1]}")

    @property
    def cardinality(self) -> int:
        return sum(prod(t) for t in self.layers)

    @property
    def h(self) -> int:
        return len(self.layers) - 1

    @property
    def is_perfect(self) -> bool:
        return len(self.layers) == 1

    def layer(self, m: int) -> tuple[int, ...] | None:
        """The m-dimensional layer tuple, or None when that layer is empty."""
        k = self.dim - m
        return self.layers[k] if 0 <= k < len(self.layers) else None

    def sub_daisy(self, k: int) -> "DaisySpec":
        """Layers ``k, k+1, ...`` as a ``(dim - k)``-dimensional daisy."""
        return DaisySpec(self.dim - k, self.layers[k:])

    def placement(self) -> list[Frame]:
        """Frame of every sub-daisy ``sub_daisy(k)``; also valid one past the
        last layer when ``len(layers) < dim``."""
        frames = []
        free = list(range(self.dim))
        fixed: dict[int, int] = {}
        for k in range(self.dim):
            frames.append(Frame(self.dim, tuple(free), tuple(sorted(fixed.items()))))
            if k >= len(self.layers):
                break
            t = self.layers[k]
            s = value_change_position(t)
            col = free[s - 1]
            fixed[col] = t[s - 1] + 1
            free.pop(s - 1)
        return frames

    def value_change_columns(self) -> list[int]:
        """s_1, s_2, ... as 1-based host columns."""
        frames = self.placement()
        out = []
        for k in range(len(self.layers)):
            s = value_change_position(self.layers[k])
            out.append(frames[k].free[s - 1] + 1)
        return out

    def layer_boxes(self) -> list[tuple[tuple[int, int], ...]]:
        """Per layer, per host column, the inclusive coordinate range."""
        frames = self.placement()
        out = []
        for k, t in enumerate(self.layers):
            fr = frames[k]
            rng = [None] * self.dim
            for c, v in fr.fixed:
                rng[c] = (v, v)
            for c, v in zip(fr.free, t):
                rng[c] = (1, v)
            out.append(tuple(rng))
        return out


def perfect(extents: Sequence[int]) -> DaisySpec:
    return DaisySpec(len(extents), (tuple(extents),))


@lru_cache(maxsize=1 << 16)
def daisy_of_cardinality(n: int, d: int) -> DaisySpec:
    """The unique d-dimensional daisy with n points, built greedily."""
    if n < 0:
        raise ValidationError("cardinality must be >= 0")
    if d < 1:
        raise ValidationError("dimension must be >= 1")
    layers = []
    rest = n
    for k in range(d):
        if rest == 0:
            break
        t = largest_do1(rest, d - k)
        layers.append(t)
        rest -= prod(t)
    assert rest == 0
    return DaisySpec(d, tuple(layers))


def materialize_mask(spec: DaisySpec) -> np.ndarray:
    """Dense mask of the daisy; index 0 on each axis is coordinate 1."""
    return _cached_mask(spec).copy()


@lru_cache(maxsize=4096)
def _cached_mask(spec: DaisySpec) -> np.ndarray:
    boxes = spec.layer_boxes()
    if not boxes:
        return np.zeros((0,) * spec.dim, dtype=bool)
    shape = tuple(max(b[c][1] for b in boxes) for c in range(spec.dim))
    m = np.zeros(shape, dtype=bool)
    for b in boxes:
        m[tuple(slice(lo - 1, hi) for lo, hi in b)] = True
    return m


def materialize(spec: DaisySpec) -> Config:
    if not spec.layers:
        return Config(spec.dim)
    return Config.from_mask(materialize_mask(spec))


def layer_points(spec: DaisySpec, k: int) -> list[tuple[int, ...]]:
    """Host coordinates of layer ``k`` alone."""
    from itertools import product

    box = spec.layer_boxes()[k]
    return list(product(*(range(lo, hi + 1) for lo, hi in box)))


def sub_daisy_points(spec: DaisySpec, k: int) -> list[tuple[int, ...]]:
    """Host coordinates of layers ``k, k+1, ...``."""
    out = []
    for i in range(k, len(spec.layers)):
        out.extend(layer_points(spec, i))
    return out


# -- matrices -------------------------------------------------------------------

@dataclass(frozen=True)
class DaisyMatrix:
    """(h+1) x d grid; ``None`` marks a dot."""

    rows: tuple[tuple[int | None, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(v if v is None else int(v) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows:
            raise DaisyValidationError("shape", "matrix has no rows")
        d = len(rows[0])
        if any(len(r) != d for r in rows):
            raise DaisyValidationError("shape", "rows have different lengths")
        if len(rows) > d:
            raise DaisyValidationError("shape", f"{len(rows)} rows for {d} columns")
        dots: list[int] = []
        prev = None
        for i, r in enumerate(rows):
            where = [j for j, v in enumerate(r) if v is None]
            if where != sorted(dots):
                raise DaisyValidationError(
                    "dot placement",
                    f"row {i + 1} has dots at columns {[j + 1 for j in where]}, "
                    f"expected {[j + 1 for j in sorted(dots)]}",
                )
            nums = tuple(v for v in r if v is not None)
            if not is_do1(nums):
                raise DaisyValidationError("DO1", f"row {i + 1} numbers {nums} are not DO1")
            if prev is not None and not larger(nums, prev):
                raise DaisyValidationError("larger", f"row {i + 1} {nums} is not dominated by {prev}")
            free = [j for j in range(d) if j not in dots]
            dots.append(free[value_change_position(nums) - 1])
            prev = nums

    @property
    def dim(self) -> int:
        return len(self.rows[0])

    def format(self) -> str:
        return "\n".join(" ".join("." if v is None else str(v) for v in r) for r in self.rows)

    @classmethod
    def parse(cls, text: str) -> "DaisyMatrix":
        rows = []
        for line in text.strip().splitlines():
            toks = line.split()
            if not toks:
                continue
            row = []
            for tok in toks:
                if tok in (".", "·"):
                    row.append(None)
                else:
                    try:
                        row.append(int(tok))
                    except ValueError:
                        raise DaisyValidationError("token", f"cannot parse {tok!r}") from None
            rows.append(tuple(row))
        return cls(tuple(rows))


def to_matrix(spec: DaisySpec) -> DaisyMatrix:
    if not spec.layers:
        raise ValidationError("the empty daisy has no matrix")
    rows = []
    for fr, t in zip(spec.placement(), spec.layers):
        row: list[int | None] = [None] * spec.dim
        for c, v in zip(fr.free, t):
            row[c] = v
        rows.append(tuple(row))
    return DaisyMatrix(tuple(rows))


def from_matrix(m: DaisyMatrix) -> DaisySpec:
    return DaisySpec(m.dim, tuple(tuple(v for v in r if v is not None) for r in m.rows))


def phi(m: DaisyMatrix) -> tuple[int, ...]:
    """Last row with each dot replaced by (first number above it) + 1.

    This is the order-largest point of the daisy.
    """
    last = list(m.rows[-1])
    for j, v in enumerate(last):
        if v is None:
            for r in reversed(m.rows[:-1]):
                if r[j] is not None:
                    last[j] = r[j] + 1
                    break
    return tuple(last)


def psi(x: Sequence[int]) -> DaisyMatrix:
    """Inverse of :func:`phi`: peel off the largest DO1 row dominated by x,
    anchored at the rightmost maximum, until what is left is DO1."""
    x = tuple(int(v) for v in x)
    if not x or any(v < 1 for v in x):
        raise ValidationError(f"psi needs a point of N^d, got {x}")
    d = len(x)
    cols = list(range(d))
    rows = []
    while True:
        vals = tuple(x[c] for c in cols)
        row: list[int | None] = [None] * d
        if is_do1(vals):
            for c, v in zip(cols, vals):
                row[c] = v
            rows.append(tuple(row))
            break
        top = max(vals)
        j = max(i for i, v in enumerate(vals) if v == top)
        for i, c in enumerate(cols):
            row[c] = top if i < j else top - 1
        rows.append(tuple(row))
        cols.pop(j)
    return DaisyMatrix(tuple(rows))


# -- perimeter ----------------------------------------------------------------

def daisy_bonds(spec: DaisySpec) -> int:
    """Closed form: top box bonds + one bond per point of the residual
    daisy (it lies flat on a face) + the residual's own bonds."""
    total = 0
    for t in spec.layers:
        total += box_bonds(t)
    # every point of layer k touches each of the k earlier layers once
    for k, t in enumerate(spec.layers):
        total += k * prod(t)
    return total


def daisy_perimeter(spec: DaisySpec) -> int:
    return 2 * spec.dim * spec.cardinality - 2 * daisy_bonds(spec)


def eip_value(n: int, d: int) -> int:
    """Minimal edge perimeter of an n-point subset of Z^d."""
    if n == 0:
        return 0
    return daisy_perimeter(daisy_of_cardinality(n, d))


def is_minimizer(C) -> bool:
    n = len(C)
    if n == 0:
        return True
    return edge_perimeter(C) == eip_value(n, C.dim)


def nth_point(n: int, d: int) -> tuple[int, ...]:
    """The n-th point of N^d in the order (1-based)."""
    return phi(to_matrix(daisy_of_cardinality(n, d)))

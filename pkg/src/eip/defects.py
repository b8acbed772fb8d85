"""Defects of daisies, defect filling, and normalization of minimizers.

A daisy ``P`` (or one of its lower-dimensional tails) *has a defect* with
respect to a perfect daisy ``R`` containing it when a section of ``R`` sits
at distance one from ``P``; the defect is the set of cells of that section
adjacent to ``P``. Because daisies are downward closed, such a section is
always the slab just above ``P`` along an axis where ``P`` is shorter than
``R``, and the defect is the top face of ``P`` pushed out by one.

:func:`normalize_minimizer` uses defect filling to push mass from the top
level of a minimizer down into lower levels without ever losing a bond,
until the minimizer is a box with a daisy on top and one lateral slab.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .daisy import (
    DaisySpec,
    DaisyValidationError,
    Frame,
    daisy_of_cardinality,
    is_minimizer,
    materialize,
    materialize_mask,
    phi,
    to_matrix,
    value_change_position,
)
from .errors import InvariantViolation, ValidationError
from .lattice import (
    Config,
    bond_count,
    canonical_translate,
    minimal_rectangle,
    permute_axes,
    section_sizes,
)
from .rearrange import decreasing_rearrangement

Pt = tuple[int, ...]


# -- small geometry helpers ---------------------------------------------------

def _mask_points(mask: np.ndarray) -> list[Pt]:
    return [tuple(int(v) + 1 for v in p) for p in np.argwhere(mask)]


def _canonical_points(spec: DaisySpec) -> list[Pt]:
    if not spec.layers:
        return []
    return _mask_points(materialize_mask(spec))


def _box_points(extents: Sequence[int]) -> list[Pt]:
    return list(product(*(range(1, a + 1) for a in extents)))


def _bbox_extents(spec: DaisySpec) -> tuple[int, ...]:
    """Extents of the smallest box holding the daisy (a DO1 tuple)."""
    top = spec.layers[0]
    if len(spec.layers) == 1:
        return top
    s = value_change_position(top)
    return top[:s - 1] + (top[s - 1] + 1,) + top[s:]


def _drop(t: Sequence[int], i: int) -> tuple[int, ...]:
    return tuple(t[:i]) + tuple(t[i + 1:])


def _le(a: Sequence[int], b: Sequence[int] | None) -> bool:
    """Box with extents ``a`` sits inside box ``b`` (both at the origin)."""
    if b is None:
        return False
    return len(a) == len(b) and all(x <= y for x, y in zip(a, b))


def place_into(donor: Iterable[Pt], target: Iterable[Pt]) -> list[Pt] | None:
    """First rigid copy of ``donor`` inside ``target``: axis permutations
    (identity first) times translations, anchored at target cells in
    lexicographic order. Returns the placed points or None."""
    donor = list(donor)
    target_set = set(target)
    if not donor:
        return []
    q = len(donor[0])
    anchors = sorted(target_set)
    for perm in permutations(range(q)):
        pd = [tuple(p[i] for i in perm) for p in donor]
        lo = min(pd)
        for t in anchors:
            shift = tuple(a - b for a, b in zip(t, lo))
            placed = [tuple(a + b for a, b in zip(p, shift)) for p in pd]
            if all(p in target_set for p in placed):
                return placed
    return None


def _neighbors(p: Pt):
    for i in range(len(p)):
        yield p[:i] + (p[i] - 1,) + p[i + 1:]
        yield p[:i] + (p[i] + 1,) + p[i + 1:]


# -- defects ------------------------------------------------------------------

@dataclass(frozen=True)
class Defect:
    """Defect of a daisy part along one axis.

    ``cells`` are in the host daisy's coordinates (dimension of the daisy),
    ``projected`` drops the pinned axes so the defect reads as a set in the
    ``(k-1)``-dimensional section it lives in (``k`` = dimension of the part
    carrying the defect).
    """

    host_axis: int
    host_level: int
    cells: Config
    host: Config
    frame: Frame
    projected: tuple[Pt, ...]

    @property
    def dim(self) -> int:
        return self.frame.dim


def _host_and_reference(spec: DaisySpec, reference):
    """(host spec of dim k, reference extents, frame of host in spec coords)."""
    if isinstance(reference, int) and not isinstance(reference, bool):
        m = reference
        if not 2 <= m <= spec.dim:
            raise ValidationError(f"layer index m must be in 2..{spec.dim}, got {m}")
        top = spec.layer(m)
        k = spec.dim - m + 1  # layer index of P^(m-1)
        if top is None or k >= len(spec.layers):
            return None, None, None
        z = value_change_position(top)
        return spec.sub_daisy(k), _drop(top, z - 1), spec.placement()[k]
    if isinstance(reference, DaisySpec):
        if not reference.is_perfect:
            raise ValidationError("reference daisy must be perfect")
        ref = reference.layers[0]
    else:
        ref = tuple(int(v) for v in reference)
    if len(ref) != spec.dim:
        raise ValidationError(f"reference has dimension {len(ref)}, host has {spec.dim}")
    frame = Frame(spec.dim, tuple(range(spec.dim)), ())
    return spec, ref, frame


def _defects_of(host: DaisySpec, ref: Sequence[int], frame: Frame) -> list[Defect]:
    if not host.layers:
        return []
    hat = _bbox_extents(host)
    if any(h > r for h, r in zip(hat, ref)):
        raise ValidationError(
            f"reference {tuple(ref)} is strictly smaller than the host (needs {hat})"
        )
    mask = materialize_mask(host)
    host_pts = Config(frame.host_dim, frame.embed(_mask_points(mask)))
    out = []
    for a, (h, r) in enumerate(zip(hat, ref)):
        if h >= r:
            continue
        face = np.take(mask, h - 1, axis=a)
        proj = tuple(sorted(_mask_points(face))) if face.ndim else ((),)
        sub = frame.restrict({a: h + 1})
        cells = Config(frame.host_dim, sub.embed(proj))
        out.append(Defect(frame.free[a] + 1, h + 1, cells, host_pts, sub, proj))
    return out


def find_defects(spec: DaisySpec, reference) -> list[Defect]:
    """All defects of ``spec`` w.r.t. a perfect reference (extents tuple or
    perfect :class:`DaisySpec`), or of its tail ``P^(m-1) u ... u P^(1)``
    w.r.t. ``P^(m)`` when ``reference`` is the integer ``m``.

    Empty exactly when the smallest perfect daisy around the host equals the
    reference.
    """
    host, ref, frame = _host_and_reference(spec, reference)
    if host is None:
        return []
    return _defects_of(host, ref, frame)


def find_defect(spec: DaisySpec, reference) -> Defect | None:
    found = find_defects(spec, reference)
    return found[0] if found else None


def defect_union(defects: Sequence[Defect]) -> Config:
    if not defects:
        raise ValidationError("no defects to unite")
    out = defects[0].cells
    for df in defects[1:]:
        out = out | df.cells
    return out


def defect_contains_face(spec: DaisySpec, defect: Defect) -> tuple[bool, Config | None]:
    """Look for a copy of the smallest face of the host's top layer inside
    the defect; every point of that copy must touch the top layer."""
    # the host's top layer is the layer whose frame is one up from the defect
    host_top = None
    for k, fr in enumerate(spec.placement()[: len(spec.layers)]):
        if set(fr.free) >= set(defect.frame.free) and fr.dim == defect.frame.dim + 1:
            pinned = {c: v for c, v in fr.fixed}
            if all(pinned.get(c) == v for c, v in defect.frame.fixed if c in pinned):
                host_top = (k, fr)
                break
    if host_top is None:
        return False, None
    k, fr = host_top
    top = spec.layers[k]
    face = _box_points(top[1:])
    placed = place_into(face, defect.projected)
    if placed is None:
        return False, None
    F = Config(spec.dim, defect.frame.embed(placed))
    layer_pts = set(fr.embed(_box_points(top)))
    if not all(any(q in layer_pts for q in _neighbors(p)) for p in F):
        return False, None
    return True, F


def defect_contains_lower_layers(spec: DaisySpec, defect: Defect) -> tuple[bool, Config | None]:
    """Whether a rigid copy of the host's layers below its top fits in the
    defect (always true for daisies)."""
    host_dim = defect.frame.dim + 1
    k = spec.dim - host_dim  # layer index of the host top
    lower = spec.sub_daisy(k + 1) if k + 1 < len(spec.layers) else None
    if lower is None or not lower.layers:
        return True, Config(spec.dim)
    placed = place_into(_canonical_points(lower), defect.projected)
    if placed is None:
        return False, None
    return True, Config(spec.dim, defect.frame.embed(placed))


def fill_defect(C: Config, defect: Defect | Sequence[Defect] | Config, donor: Config,
                host: Config | None = None) -> Config:
    """Add a rigid copy of ``donor`` lying inside the defect cells.

    Every added point must have exactly one bond with the host (the daisy
    part that carries the defect; defaults to ``C``).
    """
    if isinstance(defect, Defect):
        cells, host = defect.cells, host if host is not None else defect.host
    elif isinstance(defect, Config):
        cells = defect
    else:
        defect = list(defect)
        cells = defect_union(defect)
        host = host if host is not None else defect[0].host
    host = host if host is not None else C
    if donor.dim != C.dim or cells.dim != C.dim:
        raise ValidationError("donor, defect and configuration must share a dimension")
    if len(donor) == 0:
        raise ValidationError("donor must be nonempty")
    if len(donor) > len(cells):
        raise ValidationError(f"donor of {len(donor)} points does not fit inside a defect of {len(cells)}")
    placed = place_into(list(donor), [p for p in cells if p not in C])
    if placed is None:
        raise ValidationError("donor does not fit inside defect")
    hp = host.points
    for p in placed:
        nb = sum(1 for q in _neighbors(p) if q in hp)
        if nb != 1:
            raise ValidationError(f"filled cell {p} has {nb} bonds with the host, expected exactly one")
    return C | Config(C.dim, placed)


# -- normalization ------------------------------------------------------------

@dataclass(frozen=True)
class NormalForm:
    """``{1..l_1} x ... x {1..l_(d-1)} x {1..a_d - 1}  u  F1  u  F2``.

    ``F1`` is the top level (a daisy in ``x_d = a_d``); ``F2`` sits in
    ``x_j = l_j + 1`` for ``j = lateral_axis``. Coordinates are those of the
    input after ``axis_order`` was applied and after translating to start at 1.
    """

    block_extents: tuple[int, ...]
    height: int
    top_daisy: DaisySpec
    lateral_residue: Config
    lateral_axis: int | None
    axis_order: tuple[int, ...]
    trace: tuple[dict, ...] = field(default=(), compare=False, repr=False)

    @property
    def dim(self) -> int:
        return len(self.block_extents) + 1

    @property
    def ell(self) -> int:
        return self.block_extents[0]

    @property
    def lateral_level(self) -> int | None:
        if self.lateral_axis is None:
            return None
        return self.block_extents[self.lateral_axis - 1] + 1

    @property
    def total(self) -> int:
        return prod(self.block_extents) * (self.height - 1) + self.top_daisy.cardinality + len(self.lateral_residue)

    def materialize(self) -> Config:
        d = self.dim
        pts = set()
        if self.height > 1:
            pts.update(product(*(range(1, a + 1) for a in self.block_extents), range(1, self.height)))
        pts.update(p + (self.height,) for p in _canonical_points(self.top_daisy))
        pts.update(self.lateral_residue.points)
        return Config(d, pts)


class _Levels:
    """A configuration stored level by level along the last axis."""

    def __init__(self, e: int, sizes: Sequence[int]):
        self.e = e
        self.sets: list[set[Pt]] = [set(_canonical_points(daisy_of_cardinality(c, e))) for c in sizes]

    def config(self) -> Config:
        return Config(self.e + 1, (p + (i + 1,) for i, s in enumerate(self.sets) for p in s))


def _orient(C: Config) -> tuple[Config, tuple[int, ...]]:
    """Move the longest side of the minimal rectangle (smallest index among
    ties) to the last axis and translate to start at 1."""
    ext = minimal_rectangle(C).extents
    d = C.dim
    a = ext.index(max(ext))
    perm = list(range(d))
    perm[a], perm[d - 1] = perm[d - 1], perm[a]
    return canonical_translate(permute_axes(C, perm)), tuple(perm)


def _sizes(C: Config) -> list[int]:
    return sorted(section_sizes(C, C.dim).values(), reverse=True)


class _Mover:
    """Executes one mass transfer from the top level to level ``j``."""

    def __init__(self, lv: _Levels, j: int, B: tuple[int, ...]):
        self.lv = lv
        self.e = lv.e
        self.j = j  # 0-based level index
        self.B = B
        H = len(lv.sets)
        self.top = H - 1
        self.Q = daisy_of_cardinality(len(lv.sets[j]), self.e)
        self.Qh = daisy_of_cardinality(len(lv.sets[self.top]), self.e)
        self.Qf = self.Q.placement()
        self.Qhf = self.Qh.placement()

    # Q's tail of dimension k: layers of dimension k, k-1, ...
    def qsub(self, k: int) -> DaisySpec | None:
        i = self.e - k
        return self.Q.sub_daisy(i) if i < len(self.Q.layers) else None

    def ref(self, k: int) -> tuple[int, ...]:
        if k == self.e:
            return self.B
        t = self.Q.layer(k + 1)
        return _drop(t, value_change_position(t) - 1)

    def defects(self, k: int) -> list[tuple[int, list[Pt], Frame]]:
        """(axis, projected cells, frame) per defect of Q's k-tail."""
        sub = self.qsub(k)
        if sub is None:
            return []
        frame = self.Qf[self.e - k]
        return [(df.host_axis, list(df.projected), df.frame) for df in _defects_of(sub, self.ref(k), frame)]

    def move(self, src: list[Pt], dst: list[Pt]) -> None:
        top, lvl = self.lv.sets[self.top], self.lv.sets[self.j]
        for p in src:
            if p not in top:
                raise InvariantViolation(f"point {p} to move is not on the top level")
            top.remove(p)
        for p in dst:
            if p in lvl:
                raise InvariantViolation(f"target {p} on level {self.j + 1} is occupied")
            lvl.add(p)

    def fill(self, k: int, donor: list[Pt], src: list[Pt]) -> str:
        """Put a rigid copy of ``donor`` (canonical, dim k-1) into a defect of
        Q's k-tail; remove ``src`` from the top."""
        for _, proj, frame in self.defects(k):
            placed = place_into(donor, proj)
            if placed is not None:
                self.move(src, frame.embed(placed))
                return f"axis {frame}"
        raise InvariantViolation(f"no defect of the {k}-tail on level {self.j + 1} holds the donor")

    def face_of_top(self, k: int, frozen: int) -> list[Pt]:
        """Points of the top daisy's k-layer with the first ``frozen`` local
        coordinates at their maximum."""
        t = self.Qh.layer(k)
        fr = self.Qhf[self.e - k]
        sub = fr.restrict({i: t[i] for i in range(frozen)})
        return sub.embed(_box_points(t[frozen:]))

    # -- the cases ----------------------------------------------------------
    def case1(self) -> tuple[str, int] | None:
        mbar = None
        for m in range(1, self.e):
            qh = self.Qh.layer(m)
            if qh is None:
                continue
            q = self.Q.layer(m) or (0,) * m
            if any(a < b for a, b in zip(q, qh)):
                mbar = m
        if mbar is None:
            return None
        cut = self.e - mbar
        try:
            new_j = DaisySpec(self.e, self.Q.layers[:cut] + self.Qh.layers[cut:])
            new_top = DaisySpec(self.e, self.Qh.layers[:cut] + self.Q.layers[cut:])
        except DaisyValidationError as exc:
            raise InvariantViolation(f"layer exchange produced an invalid daisy: {exc}") from exc
        moved = sum(prod(t) for t in self.Qh.layers[cut:]) + sum(prod(t) for t in self.Q.layers[cut:])
        self.lv.sets[self.j] = set(_canonical_points(new_j))
        self.lv.sets[self.top] = set(_canonical_points(new_top))
        return f"case1(m={mbar})", moved

    def case2(self) -> tuple[str, int]:
        e, Q, Qh = self.e, self.Q, self.Qh
        k = e
        while k >= 2 and not self.defects(k) and Qh.layer(k - 1) is not None:
            if k == 2:
                # A: move the order-last point of the top into Q^(1)'s point defect
                x = phi(to_matrix(Qh))
                a = Q.layer(1)
                fr = self.Qf[e - 1]
                self.move([x], fr.embed([(a[0] + 1,)]))
                return "A", 1
            k -= 1
        if self.defects(k) and k >= 2 and Qh.layer(k - 1) is not None:
            # B: the top's (k-1)-tail fills a defect of Q's k-tail
            tail = Qh.sub_daisy(e - k + 1)
            src = self.Qhf[e - k + 1].embed(_canonical_points(tail))
            self.fill(k, _canonical_points(tail), src)
            return f"B(k={k})", len(src)
        t = Qh.layer(k)
        if t is None:
            raise InvariantViolation(f"top level has no {k}-layer")
        if self.defects(k):
            # C1: the smallest face of the top's k-layer fills the defect
            if prod(t) == 1:
                raise InvariantViolation("C1 would exhaust a single-point layer")
            src = self.face_of_top(k, 1)
            self.fill(k, _box_points(t[1:]), src)
            return f"C1(k={k})", len(src)
        # C2: no defect at k; h = lowest nonempty layer of Q
        h = e - len(Q.layers) + 1
        if h >= k:
            raise InvariantViolation(f"C2 reached with no layer of Q below {k}")
        faces = {i: t[k - i:] for i in range(0, k + 1)}
        if _le(faces[h], Q.layer(h)):
            src = self.face_of_top(k, k - h + 1)
            self.fill(h, _box_points(faces[h - 1]), src)
            return f"C2-fill(k={k},h={h})", len(src)
        i = max(i for i in range(h, k) if not _le(faces[i], Q.layer(i)))
        return self._exchange(k, i, t)

    def _exchange(self, k: int, i: int, t: tuple[int, ...]) -> tuple[str, int]:
        e = self.e
        qtail = self.qsub(i)
        q_frame = self.Qf[e - i]
        q_pts = q_frame.embed(_canonical_points(qtail))
        s_frame = self.Qhf[e - k].restrict({a: t[a] for a in range(k - i)})
        s_ext = t[k - i:]
        s_pts = s_frame.embed(_box_points(s_ext))
        ref = self.ref(i)
        box_perm = next((p for p in permutations(range(i)) if _le([s_ext[a] for a in p], ref)), None)
        q_can = _canonical_points(qtail)
        q_perm = next((p for p in permutations(range(i))
                       if all(all(x[a] <= s_ext[b] for b, a in enumerate(p)) for x in q_can)), None)
        if box_perm is None or q_perm is None:
            raise InvariantViolation(f"exchange of the {i}-tail does not fit")
        s_new = q_frame.embed(_box_points([s_ext[a] for a in box_perm]))
        q_new = s_frame.embed([tuple(x[a] for a in q_perm) for x in q_can])
        top, lvl = self.lv.sets[self.top], self.lv.sets[self.j]
        top.difference_update(s_pts)
        lvl.difference_update(q_pts)
        if top & set(q_new) or lvl & set(s_new):
            raise InvariantViolation("exchange targets are occupied")
        top.update(q_new)
        lvl.update(s_new)
        return f"C2-exchange(k={k},i={i})", len(s_pts) + len(q_pts)


def normalize_minimizer(C: Config, max_steps: int | None = None) -> NormalForm:
    """Rearrange a minimizer into a box with a daisy on top and one lateral
    slab, logging every move. Every move is checked to keep the bond count."""
    if len(C) == 0:
        raise ValidationError("empty configuration")
    d = C.dim
    if d < 2:
        raise ValidationError("normalization needs d >= 2")
    if not is_minimizer(C):
        raise ValidationError("not a minimizer")
    e = d - 1
    X, perm = _orient(C)
    bonds = bond_count(X)
    n = len(X)
    trace: list[dict] = []
    steps = 0
    max_steps = max_steps if max_steps is not None else 4 * n + 10

    def check(Y: Config, what: str) -> None:
        if len(Y) != n:
            raise InvariantViolation(f"{what}: cardinality {len(Y)} != {n}")
        b = bond_count(Y)
        if b != bonds:
            raise InvariantViolation(f"{what}: bond count {b} != {bonds}")

    while True:
        Y = decreasing_rearrangement(X, d)
        check(Y, "rearrangement")
        if Y != X:
            trace.append({"step": len(trace), "type": "rearrange", "axis": d, "bond_delta": 0})
        X = Y
        sizes = _sizes(X)
        H = len(sizes)
        B = daisy_of_cardinality(sizes[0], e).layers[0]
        nB = prod(B)
        k0 = max((i + 1 for i, c in enumerate(sizes) if c > nB), default=0)
        cand = [i for i in range(k0, H - 1) if sizes[i] < nB]
        if not cand:
            break
        steps += 1
        if steps > max_steps:
            raise InvariantViolation(f"normalization did not terminate in {max_steps} steps")
        j = cand[0]
        lv = _Levels(e, sizes)
        before = [set(s) for s in lv.sets]
        mv = _Mover(lv, j, B)
        res = mv.case1()
        kind, moved = res if res is not None else mv.case2()
        Y = lv.config()
        check(Y, kind)
        top_before = len(before[-1])
        trace.append({
            "step": len(trace),
            "type": kind,
            "level": j + 1,
            "top_level": H,
            "moved": moved,
            "to_level": len(lv.sets[j]) - len(before[j]),
            "from_top": top_before - len(lv.sets[-1]),
            "bond_delta": bond_count(Y) - bonds,
        })
        X = Y

    sizes = _sizes(X)
    H = len(sizes)
    B = daisy_of_cardinality(sizes[0], e).layers[0]
    top = daisy_of_cardinality(sizes[-1], e)
    lateral = [p for p in X if p[-1] < H and any(v > b for v, b in zip(p, B))]
    axis = None
    if lateral:
        c = value_change_position(B)
        axis = c
        if any(p[c - 1] != B[c - 1] + 1 for p in lateral):
            raise InvariantViolation("lateral residue is not contained in one hyperplane")
    nf = NormalForm(B, H, top, Config(d, lateral), axis, perm, tuple(trace))
    if nf.materialize() != X:
        raise InvariantViolation("normal form does not reproduce the rearranged minimizer")
    return nf


def height_bound_holds(nf: NormalForm) -> bool:
    """a_d - l <= 4^(c_d) l^(2^(1-d)) + 6, in integers: with L = a_d - l - 6
    and N = 2^(d-1), true if L <= 0 or L^N <= 4^(N-1) l."""
    d = nf.dim
    ell = nf.ell
    L = nf.height - ell - 6
    if L <= 0:
        return True
    N = 2 ** (d - 1)
    return L**N <= 4 ** (N - 1) * ell

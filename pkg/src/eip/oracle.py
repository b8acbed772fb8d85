"""Exhaustive ground truth for tiny instances.

Connected sets are enumerated once each as fixed lattice animals
(Redelmeier's algorithm). Disconnected sets are excluded by a split bound:
a set with two mutually non-adjacent parts of sizes a and n-a has perimeter
at least EIP(a) + EIP(n-a), so if that exceeds the connected minimum for
every a, no disconnected set can tie. At the smallest sizes a literal scan
of all n-subsets of an n^d box is run on top, as an independent check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Callable

import numpy as np

from .errors import BudgetExceeded, ValidationError
from .lattice import Config, canonical_translate

BUDGET = {2: 12, 3: 7}
SUBSET_SCAN_LIMIT = 2_500_000


def check_budget(n: int, d: int) -> None:
    if n < 1:
        raise ValidationError("oracle needs n >= 1")
    limit = BUDGET.get(d)
    if limit is None:
        raise BudgetExceeded(f"oracle budget: only d in {sorted(BUDGET)} is enumerable, got d={d}")
    if n > limit:
        raise BudgetExceeded(f"oracle budget: d={d} allows n <= {limit}, got n={n}")


def _animal_extremes(n: int, d: int):
    """Max bonds over connected n'-cell animals for every n' <= n, and the
    maximizing animals at size n (as tuples of encoded cells)."""
    W = 2 * n + 1
    strides = [W**i for i in range(d)]
    origin = sum(n * s for s in strides)
    best = [-1] * (n + 1)
    counts = [0] * (n + 1)
    winners: list[tuple[int, ...]] = []
    inside: set[int] = set()
    animal: list[int] = []
    seen = {origin}

    def neighbors(c):
        for s in strides:
            yield c + s
            yield c - s

    def grow(untried: list[int], bonds: int) -> None:
        nonlocal winners
        untried = list(untried)
        while untried:
            c = untried.pop()
            b = bonds + sum(1 for q in neighbors(c) if q in inside)
            inside.add(c)
            animal.append(c)
            size = len(animal)
            counts[size] += 1
            if b > best[size]:
                best[size] = b
                if size == n:
                    winners = [tuple(animal)]
            elif b == best[size] and size == n:
                winners.append(tuple(animal))
            if size < n:
                fresh = [q for q in neighbors(c) if q > origin and q not in seen]
                seen.update(fresh)
                grow(untried + fresh, b)
                seen.difference_update(fresh)
            animal.pop()
            inside.discard(c)

    grow([origin], 0)

    def decode(code):
        out = []
        for _ in range(d):
            code, r = divmod(code, W)
            out.append(r)
        return tuple(out)

    shapes = [[decode(c) for c in w] for w in winners]
    return best, counts, shapes


def _subset_scan(n: int, d: int):
    """Literal scan of all n-subsets of {1..n}^d: (max bonds, maximizers)."""
    side = n
    cells = np.array(np.unravel_index(np.arange(side**d), (side,) * d)).T + 1
    adj = (np.abs(cells[:, None, :] - cells[None, :, :]).sum(-1) == 1).astype(np.int8)
    total = comb(side**d, n)
    flat = np.fromiter(
        (i for c in combinations(range(side**d), n) for i in c),
        dtype=np.int16,
        count=total * n,
    ).reshape(total, n)
    bonds = np.zeros(total, dtype=np.int16)
    for i in range(n):
        for j in range(i + 1, n):
            bonds += adj[flat[:, i], flat[:, j]]
    top = int(bonds.max()) if total else 0
    rows = flat[bonds == top]
    shapes = {canonical_translate(Config(d, (tuple(cells[k]) for k in r))) for r in rows}
    return top, shapes


@dataclass
class OracleReport:
    n: int
    d: int
    eip: int
    minimizers: list[Config]
    count: int
    animals: int = 0
    disconnected_check: str = "split-bound"
    split_margin: int = 0

    def to_json_obj(self, with_list: bool = True) -> dict:
        out = {
            "n": self.n,
            "d": self.d,
            "eip": self.eip,
            "count": self.count,
            "animals": self.animals,
            "disconnected_check": self.disconnected_check,
            "split_margin": self.split_margin,
        }
        if with_list:
            out["minimizers"] = [[list(p) for p in C] for C in self.minimizers]
        return out


@lru_cache(maxsize=None)
def _eip_table(n_max: int, d: int) -> tuple[int, ...]:
    """Exact EIP for sizes 0..n_max, by the same enumeration (used for the
    split bound)."""
    best, _, _ = _animal_extremes(n_max, d)
    return tuple(0 if k == 0 else 2 * d * k - 2 * best[k] for k in range(n_max + 1))


@lru_cache(maxsize=None)
def eip_bruteforce(n: int, d: int) -> OracleReport:
    check_budget(n, d)
    best, counts, shapes = _animal_extremes(n, d)
    eip = 2 * d * n - 2 * best[n]
    table = [0 if k == 0 else 2 * d * k - 2 * best[k] for k in range(n + 1)]
    margin = min((table[a] + table[n - a] - eip for a in range(1, n)), default=1)
    mins = sorted({canonical_translate(Config(d, s)) for s in shapes}, key=lambda C: list(C))
    check = "split-bound"
    if margin <= 0:
        # a disconnected set might tie; only a literal scan can settle it
        if comb(n**d, n) > SUBSET_SCAN_LIMIT:
            raise BudgetExceeded(
                f"split bound inconclusive for n={n}, d={d} and subset scan exceeds {SUBSET_SCAN_LIMIT}"
            )
    if comb(n**d, n) <= SUBSET_SCAN_LIMIT:
        top, scanned = _subset_scan(n, d)
        scan_eip = 2 * d * n - 2 * top
        if scan_eip < eip:
            raise AssertionError(f"subset scan found perimeter {scan_eip} < {eip}")
        if scan_eip == eip:
            mins = sorted(set(mins) | scanned, key=lambda C: list(C))
        check = "split-bound+subset-scan"
    return OracleReport(n, d, eip, mins, len(mins), counts[n], check, margin)


@dataclass
class CrossRow:
    d: int
    n: int
    oracle_eip: int
    claimed_eip: int
    daisy_listed: bool
    ok: bool
    witness: list | None = None


@dataclass
class CrossValidation:
    rows: list[CrossRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def failures(self) -> list[CrossRow]:
        return [r for r in self.rows if not r.ok]


def cross_validate(
    n_max_2d: int,
    n_max_3d: int,
    eip_fn: Callable[[int, int], int] | None = None,
    daisy_fn: Callable[[int, int], Config] | None = None,
) -> CrossValidation:
    """Compare the oracle with the daisy construction for every size in range.

    ``eip_fn``/``daisy_fn`` default to the daisy module and can be swapped
    for fault injection.
    """
    from .daisy import daisy_of_cardinality, eip_value, materialize

    eip_fn = eip_fn or eip_value
    daisy_fn = daisy_fn or (lambda n, d: materialize(daisy_of_cardinality(n, d)))
    check_budget(max(n_max_2d, 1), 2)
    check_budget(max(n_max_3d, 1), 3)
    out = CrossValidation()
    for d, n_max in ((2, n_max_2d), (3, n_max_3d)):
        for n in range(1, n_max + 1):
            rep = eip_bruteforce(n, d)
            claimed = eip_fn(n, d)
            daisy = canonical_translate(daisy_fn(n, d))
            listed = daisy in rep.minimizers
            ok = claimed == rep.eip and listed
            witness = None
            if not ok:
                w = rep.minimizers[0] if claimed != rep.eip else daisy
                witness = [list(p) for p in w]
            out.rows.append(CrossRow(d, n, rep.eip, claimed, listed, ok, witness))
    return out

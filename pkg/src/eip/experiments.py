"""Fluctuation scans around the Wulff cube and the log-log exponent fit."""
from __future__ import annotations

import csv
import io
from dataclasses import astuple, dataclass, fields
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .bounds import scaling_exponent, scaling_floor
from .daisy import daisy_of_cardinality, materialize
from .errors import ValidationError
from .lattice import Box, box_symdiff, iroot, min_translate_symdiff, wulff

FAMILIES = ("slab-extremal", "daisy")
MATERIALIZE_LIMIT = 10**7


@dataclass(frozen=True)
class FluctuationRow:
    d: int
    ell: int
    p: int
    n: int
    symdiff: int
    exponent_pred: Fraction

    def as_csv_row(self) -> list:
        return [self.d, self.ell, self.p, self.n, self.symdiff, str(self.exponent_pred)]


ROW_FIELDS = [f.name for f in fields(FluctuationRow)]


def slab_row(d: int, ell: int) -> FluctuationRow:
    """Extremal slab {1..ell-p} x {1..ell}^(d-1), p = floor(h), against W_n,
    via closed-form box overlaps."""
    p = scaling_floor(ell, d)
    if p >= ell:
        raise ValidationError(f"slab family needs floor(h) < ell, got ell={ell}")
    ext = (ell - p,) + (ell,) * (d - 1)
    n = int(np.prod(ext, dtype=object))
    w = iroot(n, d)
    s, _ = box_symdiff(Box((0,) * d, ext), Box((0,) * d, (w,) * d))
    return FluctuationRow(d, ell, p, n, s, scaling_exponent(d))


def daisy_row(d: int, ell: int, offset: int = 1) -> FluctuationRow:
    """Daisy with ell^d - offset points against W_n, by point sets."""
    n = ell**d - offset
    if n < 1:
        raise ValidationError(f"daisy family needs ell^d - offset >= 1, got {n}")
    if n > MATERIALIZE_LIMIT:
        raise ValidationError(f"daisy family: n={n} is too large to materialize")
    C = materialize(daisy_of_cardinality(n, d))
    s, _ = min_translate_symdiff(C, wulff(n, d))
    return FluctuationRow(d, ell, 0, n, s, scaling_exponent(d))


def _row(args):
    d, ell, family, offset = args
    return slab_row(d, ell) if family == "slab-extremal" else daisy_row(d, ell, offset)


def fluctuation_scan(d: int, ells: Iterable[int], family: str = "slab-extremal",
                     offset: int = 1, threads: int = 1) -> list[FluctuationRow]:
    if family not in FAMILIES:
        raise ValidationError(f"family must be one of {FAMILIES}, got {family!r}")
    if d not in (2, 3):
        raise ValidationError(f"fluctuation scans support d in (2, 3), got {d}")
    jobs = [(d, int(ell), family, offset) for ell in ells]
    if threads > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(threads) as ex:
            return list(ex.map(_row, jobs))
    return [_row(j) for j in jobs]


@dataclass(frozen=True)
class ScanConfig:
    """One fluctuation scan: ell runs over ell_min..ell_max in steps."""

    d: int
    ell_min: int
    ell_max: int
    ell_step: int = 1
    family: str = "slab-extremal"
    offset: int = 1
    threads: int = 1

    def __post_init__(self):
        if self.ell_min < 1 or self.ell_max < self.ell_min or self.ell_step < 1:
            raise ValidationError("need 1 <= ell_min <= ell_max and ell_step >= 1")

    @property
    def ells(self) -> range:
        return range(self.ell_min, self.ell_max + 1, self.ell_step)

    def run(self) -> list[FluctuationRow]:
        return fluctuation_scan(self.d, self.ells, self.family, self.offset, self.threads)


@dataclass(frozen=True)
class Fit:
    slope: float
    constant: float
    residual: float


def fit_exponent(rows: Sequence) -> Fit:
    """OLS of log(symdiff) on log(n); rows with symdiff == 0 are skipped."""
    pts = [(r.n, r.symdiff) for r in rows if r.symdiff > 0]
    if len(pts) < 5:
        raise ValidationError(f"fit needs at least 5 rows with symdiff > 0, got {len(pts)}")
    x = np.log(np.array([float(a) for a, _ in pts]))
    y = np.log(np.array([float(b) for _, b in pts]))
    A = np.column_stack([x, np.ones_like(x)])
    (slope, icpt), *_ = np.linalg.lstsq(A, y, rcond=None)
    res = float(np.max(np.abs(y - A @ np.array([slope, icpt]))))
    return Fit(float(slope), float(np.exp(icpt)), res)


def rows_to_csv(rows: Sequence[FluctuationRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ROW_FIELDS)
    for r in rows:
        w.writerow(r.as_csv_row())
    return buf.getvalue()


def rows_from_csv(text: str) -> list[FluctuationRow]:
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        out.append(FluctuationRow(
            int(rec["d"]), int(rec["ell"]), int(rec["p"]), int(rec["n"]),
            int(rec["symdiff"]), Fraction(rec["exponent_pred"]),
        ))
    return out

"""Decreasing rearrangement along one axis and the section-minimality test."""
from __future__ import annotations

import numpy as np

from .daisy import daisy_of_cardinality, is_minimizer, materialize_mask
from .errors import ValidationError
from .lattice import Config, section, section_sizes


def level_mask(sizes, e: int) -> np.ndarray:
    """Stack canonical e-dimensional daisies of the given (nonincreasing)
    sizes along a new last axis. Nested daisies share one bounding box,
    which is that of the first."""
    first = materialize_mask(daisy_of_cardinality(sizes[0], e))
    out = np.zeros(first.shape + (len(sizes),), dtype=bool)
    for k, c in enumerate(sizes):
        m = materialize_mask(daisy_of_cardinality(c, e))
        out[tuple(slice(0, s) for s in m.shape) + (k,)] = m
    return out


def decreasing_rearrangement(C: Config, axis: int) -> Config:
    """Replace the sections along ``axis`` by daisies of the same sizes,
    largest first, stacked on levels 1, 2, ...; the result starts at 1 on
    every axis."""
    d = C.dim
    if d < 2:
        raise ValidationError("decreasing_rearrangement needs d >= 2")
    if not 1 <= axis <= d:
        raise ValidationError(f"axis must be in 1..{d}, got {axis}")
    if len(C) == 0:
        raise ValidationError("empty configuration")
    sizes = sorted(section_sizes(C, axis).values(), reverse=True)
    m = level_mask(sizes, d - 1)
    # the stacking axis is last; move it into place
    m = np.moveaxis(m, -1, axis - 1)
    return Config.from_mask(m)


def sections_are_minimizers(C: Config) -> bool:
    d = C.dim
    if d < 2:
        raise ValidationError("sections need d >= 2")
    for s in range(1, d + 1):
        for level in section_sizes(C, s):
            if not is_minimizer(section(C, s, level)):
                return False
    return True

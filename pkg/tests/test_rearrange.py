from collections import Counter

import pytest
from hypothesis import given

from conftest import configs
from eip.daisy import is_minimizer
from eip.errors import ValidationError
from eip.lattice import Config, edge_perimeter, section_sizes
from eip.oracle import eip_bruteforce
from eip.rearrange import decreasing_rearrangement, sections_are_minimizers


def test_fixed_point():
    sq = Config(2, [(1, 1), (1, 2), (2, 1), (2, 2)])
    for s in (1, 2):
        assert decreasing_rearrangement(sq, s) == sq


def test_l_tromino():
    C = Config(2, [(1, 1), (2, 1), (2, 2)])
    out = decreasing_rearrangement(C, 2)
    assert out == Config(2, [(1, 1), (2, 1), (1, 2)])
    assert edge_perimeter(C) == edge_perimeter(out) == 8


def test_disconnected_pair_stacks_along_axis():
    # the two one-point sections are stacked on levels 1, 2 of axis 1
    C = Config(2, [(1, 1), (3, 1)])
    out = decreasing_rearrangement(C, 1)
    assert out == Config(2, [(1, 1), (2, 1)])
    assert edge_perimeter(C) == 8 and edge_perimeter(out) == 6


def test_errors():
    with pytest.raises(ValidationError):
        decreasing_rearrangement(Config(2), 1)
    with pytest.raises(ValidationError):
        decreasing_rearrangement(Config(1, [(1,)]), 1)
    with pytest.raises(ValidationError):
        decreasing_rearrangement(Config(2, [(1, 1)]), 3)


@given(configs(dims=(2, 3, 4), min_points=1))
def test_properties(C):
    for s in range(1, C.dim + 1):
        R = decreasing_rearrangement(C, s)
        assert len(R) == len(C)
        assert Counter(section_sizes(R, s).values()) == Counter(section_sizes(C, s).values())
        assert sorted(section_sizes(R, s)) == list(range(1, len(section_sizes(R, s)) + 1))
        assert edge_perimeter(R) <= edge_perimeter(C)
        assert decreasing_rearrangement(R, s) == R
        if is_minimizer(C):
            assert is_minimizer(R)


def test_sections_are_minimizers():
    assert sections_are_minimizers(Config(2, [(a, b) for a in range(1, 4) for b in range(1, 4)]))
    line = Config(2, [(k, 1) for k in range(1, 5)])
    assert sections_are_minimizers(line) and not is_minimizer(line)
    for n in range(1, 11):
        for C in eip_bruteforce(n, 2).minimizers:
            assert sections_are_minimizers(C)
    for n in range(1, 6):
        for C in eip_bruteforce(n, 3).minimizers:
            assert sections_are_minimizers(C)

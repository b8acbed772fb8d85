import itertools
from functools import cmp_to_key

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eip.daisy import daisy_of_cardinality, materialize
from eip.errors import ValidationError
from eip.lattice import Config
from eip.order import Cmp, compare, initial_segment, initial_segment_points, order_key, precedes


def test_examples():
    assert compare((1, 1), (2, 1)) is Cmp.LESS
    assert compare((2, 1), (1, 2)) is Cmp.LESS
    assert compare((1, 3, 3), (2, 3, 3)) is Cmp.LESS
    assert compare((4,), (2,)) is Cmp.GREATER
    assert compare((2, 2), (2, 2)) is Cmp.EQUAL
    assert str(Cmp.LESS) == "Less"


def test_rejects_bad_keys():
    with pytest.raises(ValidationError):
        compare((1, 2), (1, 2, 3))
    with pytest.raises(ValidationError):
        compare((0, 1), (1, 1))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_total_order_on_small_cube(d):
    """Totality, antisymmetry, transitivity; also that the flattening trap
    for max <= 2 never fires."""
    cube = list(itertools.product(range(1, 5), repeat=d))
    ordered = sorted(cube, key=cmp_to_key(lambda a, b: {"Less": -1, "Equal": 0, "Greater": 1}[str(compare(a, b))]))
    for i, x in enumerate(ordered):
        for y in ordered[i + 1:]:
            assert compare(x, y) is Cmp.LESS
            assert compare(y, x) is Cmp.GREATER
    assert ordered == sorted(cube, key=order_key)


@given(st.integers(1, 4).flatmap(lambda d: st.tuples(*[st.tuples(*[st.integers(1, 9)] * d)] * 3)))
def test_transitive_and_key_consistent(xyz):
    x, y, z = xyz
    if precedes(x, y) and precedes(y, z):
        assert precedes(x, z)
    assert precedes(x, y) == (order_key(x) < order_key(y))


def test_initial_segment_examples():
    assert initial_segment(2, 2) == Config(2, [(1, 1), (2, 1)])
    assert initial_segment(4, 2) == Config(2, [(1, 1), (2, 1), (1, 2), (2, 2)])
    assert initial_segment(1, 5) == Config(5, [(1,) * 5])


@pytest.mark.parametrize("d", [2, 3, 4])
def test_nested_and_downward_closed(d):
    prev = set()
    for n in range(1, 120):
        seg = set(initial_segment_points(n, d))
        assert prev < seg
        for x in seg:
            for i in range(d):
                if x[i] > 1:
                    assert x[:i] + (x[i] - 1,) + x[i + 1:] in seg
        prev = seg


@pytest.mark.parametrize("d", [1, 2, 3])
def test_matches_daisy(d):
    for n in range(1, 200):
        assert initial_segment(n, d) == materialize(daisy_of_cardinality(n, d))

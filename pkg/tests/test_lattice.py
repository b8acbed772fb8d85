import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import configs
from eip.errors import ValidationError
from eip.lattice import (Box, Config, bond_count, box_symdiff, edge_perimeter, iroot, min_translate_symdiff,
                         minimal_rectangle, permute_axes, read_config, reflect, section, section_sizes,
                         symmetry_orbit, translate, wulff, write_config)


def box(*ext):
    return Config(len(ext), itertools.product(*(range(1, a + 1) for a in ext)))


def slow_perimeter(C):
    pts = set(C)
    return sum(1 for p in pts for i in range(C.dim) for s in (-1, 1)
               if p[:i] + (p[i] + s,) + p[i + 1:] not in pts)


def slow_symdiff(C, D):
    (clo, chi), (dlo, dhi) = C.bbox(), D.bbox()
    best = None
    for a in itertools.product(*(range(cl - dh, ch - dl + 1) for cl, ch, dl, dh in zip(clo, chi, dlo, dhi))):
        moved = {tuple(x - y for x, y in zip(p, a)) for p in C}
        val = len(moved ^ set(D))
        if best is None or val < best[0]:
            best = (val, a)
    return best


class TestBonds:
    def test_single_point(self):
        assert bond_count(Config(2, [(1, 1)])) == 0

    def test_unit_square(self):
        assert bond_count(box(2, 2)) == 4

    def test_three_by_two(self):
        assert bond_count(box(3, 2)) == 7

    def test_empty(self):
        assert bond_count(Config(3)) == 0
        assert edge_perimeter(Config(3)) == 0


class TestPerimeter:
    def test_isolated_points(self):
        assert edge_perimeter(Config(2, [(1, 1)])) == 4
        assert edge_perimeter(Config(3, [(1, 1, 1)])) == 6

    def test_rectangle(self):
        assert edge_perimeter(box(2, 4)) == 12

    @given(configs(dims=(1, 2, 3, 4)))
    def test_identity(self, C):
        assert edge_perimeter(C) + 2 * bond_count(C) == 2 * C.dim * len(C)

    @given(configs())
    def test_matches_direct_count(self, C):
        assert edge_perimeter(C) == slow_perimeter(C)

    @given(configs(min_points=1), st.data())
    def test_invariant_under_symmetries(self, C, data):
        p0, b0 = edge_perimeter(C), bond_count(C)
        shift = data.draw(st.tuples(*[st.integers(-50, 50)] * C.dim))
        perm = data.draw(st.permutations(range(C.dim)))
        ax = data.draw(st.integers(0, C.dim - 1))
        for D in (translate(C, shift), permute_axes(C, perm), reflect(C, ax)):
            assert (edge_perimeter(D), bond_count(D)) == (p0, b0)

    def test_dense_and_sparse_paths_agree(self):
        rng = np.random.default_rng(5)
        m = rng.random((9, 8, 7)) < 0.6
        C = Config.from_mask(m)
        sparse = Config(3, list(C))
        assert not sparse.has_dense()
        assert edge_perimeter(C) == slow_perimeter(sparse)
        assert bond_count(C) == bond_count(sparse)


class TestSection:
    def test_examples(self):
        sq = box(2, 2)
        assert section(sq, 2, 1) == Config(1, [(1,), (2,)])
        assert section(sq, 2, 5) == Config(1)
        C = box(3, 2) | Config(2, [(1, 3)])
        assert section(C, 2, 3) == Config(1, [(1,)])

    def test_needs_two_dims(self):
        with pytest.raises(ValidationError):
            section(Config(1, [(1,)]), 1, 1)

    @given(configs(min_points=1))
    def test_sections_partition(self, C):
        for s in range(1, C.dim + 1):
            sizes = section_sizes(C, s)
            assert sum(sizes.values()) == len(C)
            for lvl, c in sizes.items():
                assert len(section(C, s, lvl)) == c


class TestRectangleAndWulff:
    def test_examples(self):
        r = minimal_rectangle(box(2, 2))
        assert r.origin == (0, 0) and r.extents == (2, 2)
        assert minimal_rectangle(Config(2, [(1, 1), (3, 1)])).extents == (3, 1)
        r = minimal_rectangle(Config(2, [(5, 7)]))
        assert r.origin == (4, 6) and r.extents == (1, 1)

    def test_empty_errors(self):
        with pytest.raises(ValidationError, match="empty configuration"):
            minimal_rectangle(Config(2))

    @given(configs(min_points=1))
    def test_idempotent_and_tight(self, C):
        r = minimal_rectangle(C)
        assert all(p in r for p in C)
        assert minimal_rectangle(r.to_config()) == r
        lo, hi = r.lo, r.hi
        for i in range(C.dim):
            assert any(p[i] == lo[i] for p in C) and any(p[i] == hi[i] for p in C)

    def test_wulff(self):
        assert wulff(9, 2) == box(3, 3)
        assert wulff(8, 2) == box(2, 2)
        assert wulff(26, 3) == box(2, 2, 2)

    @given(st.integers(1, 10**40), st.integers(1, 7))
    def test_iroot_exact(self, n, k):
        r = iroot(n, k)
        assert r**k <= n < (r + 1) ** k

    def test_iroot_at_perfect_powers(self):
        for k in range(2, 6):
            for r in (10**6 - 1, 10**6, 3**20):
                assert iroot(r**k, k) == r
                assert iroot(r**k - 1, k) == r - 1


class TestSymdiff:
    def test_examples(self):
        sq = box(2, 2)
        assert min_translate_symdiff(sq, sq) == (0, (0, 0))
        assert min_translate_symdiff(translate(sq, (10, 10)), sq) == (0, (10, 10))
        C, D = box(2, 4), box(3, 3)
        assert min_translate_symdiff(C, D) == slow_symdiff(C, D)
        assert min_translate_symdiff(C, D)[0] == 5

    @given(configs(dims=(2, 3), max_side=3, max_points=10, min_points=1),
           configs(dims=(2, 3), max_side=3, max_points=10, min_points=1))
    def test_matches_window_scan(self, C, D):
        if C.dim != D.dim:
            return
        assert min_translate_symdiff(C, D) == slow_symdiff(C, D)

    @given(configs(dims=(2,), max_side=3, max_points=10, min_points=1),
           configs(dims=(2,), max_side=3, max_points=10, min_points=1))
    def test_symmetric_value(self, C, D):
        assert min_translate_symdiff(C, D)[0] == min_translate_symdiff(D, C)[0]
        assert min_translate_symdiff(C, C)[0] == 0

    @given(st.lists(st.integers(1, 6), min_size=2, max_size=3), st.data())
    def test_box_closed_form(self, ext1, data):
        d = len(ext1)
        ext2 = data.draw(st.lists(st.integers(1, 6), min_size=d, max_size=d))
        o1 = data.draw(st.tuples(*[st.integers(-4, 4)] * d))
        o2 = data.draw(st.tuples(*[st.integers(-4, 4)] * d))
        b1, b2 = Box(o1, tuple(ext1)), Box(o2, tuple(ext2))
        assert box_symdiff(b1, b2) == min_translate_symdiff(b1.to_config(), b2.to_config())

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            min_translate_symdiff(box(2, 2), box(2, 2, 2))


class TestConfig:
    def test_overflow_is_checked(self):
        with pytest.raises((OverflowError, ValidationError)):
            translate(Config(1, [(2**31 - 1,)]), (1,))
        with pytest.raises((OverflowError, ValidationError)):
            Config(1, [(2**31,)])

    def test_json_round_trip(self, tmp_path):
        C = Config(3, [(3, 1, 2), (1, 1, 1), (-4, 0, 2)])
        path = tmp_path / "c.json"
        write_config(C, path)
        import json

        obj = json.loads(path.read_text())
        assert obj["dim"] == 3 and obj["points"] == sorted(obj["points"])
        assert read_config(path) == C

    def test_mask_and_points_equal(self):
        C = box(3, 2)
        assert Config.from_mask(np.ones((3, 2), bool)) == C
        assert hash(Config.from_mask(np.ones((3, 2), bool))) == hash(C)

    def test_orbit_size(self):
        L = Config(2, [(1, 1), (2, 1), (1, 2)])
        orbit = {min(sorted(D)) and tuple(sorted(D)) for D in
                 (Config(2, [tuple(x - y for x, y in zip(p, D.bbox()[0])) for p in D]) for D in symmetry_orbit(L))}
        assert len(orbit) == 4

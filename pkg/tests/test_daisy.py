import itertools
from math import prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eip.daisy import (DaisyMatrix, DaisySpec, DaisyValidationError, daisy_bonds, daisy_of_cardinality,
                       daisy_perimeter, eip_value, from_matrix, is_do1, is_minimizer, larger, largest_do1,
                       materialize, nth_point, phi, psi, to_matrix, value_change_position)
from eip.lattice import Config, bond_count, edge_perimeter, section, section_sizes
from eip.order import _sorted_cube, order_key


def box(*ext):
    return Config(len(ext), itertools.product(*(range(1, a + 1) for a in ext)))


daisy_args = st.integers(1, 5).flatmap(lambda d: st.tuples(st.integers(1, 3000), st.just(d)))


class TestDO1:
    def test_value_change_position(self):
        assert value_change_position((3, 3, 3)) == 1
        assert value_change_position((4, 3, 3)) == 2
        assert value_change_position((4, 4, 3)) == 3

    def test_not_do1(self):
        assert not is_do1((3, 1)) and not is_do1((2, 3)) and not is_do1(())
        with pytest.raises(DaisyValidationError):
            value_change_position((5, 3))

    @given(st.integers(1, 10**6), st.integers(1, 6))
    def test_largest_do1_is_largest(self, m, L):
        t = largest_do1(m, L)
        assert is_do1(t) and len(t) == L and prod(t) <= m
        # the next DO1 tuple in the chain overshoots
        s = value_change_position(t)
        nxt = tuple(v + 1 if i == s - 1 else v for i, v in enumerate(t)) if t[0] != t[-1] else (t[0] + 1,) + t[1:]
        assert prod(nxt) > m

    def test_larger(self):
        assert larger((2,), (3, 2))
        assert not larger((3,), (3, 3))
        assert larger((3, 3), (4, 4, 3))
        assert not larger((2, 2), (2, 2, 2))


class TestConstruction:
    def test_examples(self):
        assert daisy_of_cardinality(4, 2).layers == ((2, 2),)
        assert daisy_of_cardinality(8, 2).layers == ((3, 2), (2,))
        spec = daisy_of_cardinality(1731, 5)
        assert spec.layers == ((5, 5, 4, 4, 4), (4, 3, 3, 3), (3, 3, 2), (2, 2), (1,))
        assert [prod(t) for t in spec.layers] == [1600, 108, 18, 4, 1]

    def test_materialize_examples(self):
        assert materialize(DaisySpec(2, ((2, 2),))) == box(2, 2)
        assert materialize(DaisySpec(2, ((3, 2), (2,)))) == box(3, 2) | Config(2, [(1, 3), (2, 3)])
        assert materialize(DaisySpec(2, ((2, 1), (1,)))) == Config(2, [(1, 1), (2, 1), (1, 2)])

    def test_spec_validation_names_rule(self):
        with pytest.raises(DaisyValidationError, match="larger"):
            DaisySpec(2, ((2, 2), (2,)))
        with pytest.raises(DaisyValidationError, match="DO1"):
            DaisySpec(2, ((3, 1),))
        with pytest.raises(DaisyValidationError, match="layer length"):
            DaisySpec(3, ((2, 2),))

    @given(daisy_args)
    def test_cardinality_and_chain(self, nd):
        n, d = nd
        spec = daisy_of_cardinality(n, d)
        assert spec.cardinality == n == len(materialize(spec))
        assert DaisySpec(spec.dim, spec.layers) == spec

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_nested(self, d):
        prev = materialize(daisy_of_cardinality(1, d))
        for n in range(2, 300):
            cur = materialize(daisy_of_cardinality(n, d))
            assert prev.issubset(cur)
            prev = cur

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_sections_are_daisies(self, d):
        for n in range(1, 301, 7):
            Q = materialize(daisy_of_cardinality(n, d))
            for s in range(1, d + 1):
                for lvl, c in section_sizes(Q, s).items():
                    assert section(Q, s, lvl) == materialize(daisy_of_cardinality(c, d - 1))

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_levels_shrink_upward(self, d):
        for n in range(1, 301, 5):
            sizes = section_sizes(materialize(daisy_of_cardinality(n, d)), d)
            vals = [sizes[k] for k in sorted(sizes)]
            assert vals == sorted(vals, reverse=True)


class TestMatrix:
    def test_round_trips(self):
        m = to_matrix(DaisySpec(2, ((3, 2), (2,))))
        assert m.rows == ((3, 2), (2, None))
        assert m.format() == "3 2\n2 ."
        text = "7 7 7 7 7\n. 4 3 3 3\n. 3 . 3 2"
        spec = from_matrix(DaisyMatrix.parse(text))
        assert spec.cardinality == 7**5 + 4 * 27 + 18 == 16933
        assert to_matrix(spec).format() == text
        assert to_matrix(DaisySpec(2, ((2, 2),))).rows == ((2, 2),)

    def test_dot_display(self):
        m = to_matrix(daisy_of_cardinality(1731, 5))
        assert m.format() == "5 5 4 4 4\n4 3 . 3 3\n3 . . 3 2\n2 . . 2 .\n. . . 1 ."

    @pytest.mark.parametrize("text,rule", [
        ("3 2\n. 2", "dot placement"),
        ("3 1\n2 .", "DO1"),
        ("3 3\n. 3", "larger"),
        ("3 x", "token"),
    ])
    def test_validation_names_rule(self, text, rule):
        with pytest.raises(DaisyValidationError, match=rule):
            DaisyMatrix.parse(text)

    def test_phi_psi_examples(self):
        assert phi(DaisyMatrix(((2, 1), (1, None)))) == (1, 2)
        assert psi((1, 2)).rows == ((2, 1), (1, None))
        assert psi((4, 4, 3)).rows == ((4, 4, 3),)

    @given(daisy_args)
    def test_bijections(self, nd):
        n, d = nd
        spec = daisy_of_cardinality(n, d)
        m = to_matrix(spec)
        assert from_matrix(m) == spec
        x = phi(m)
        assert psi(x) == m and phi(psi(x)) == x

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_phi_is_nth_point(self, d):
        cube = _sorted_cube(5, d)
        for n in range(1, len(cube) + 1, 3):
            assert nth_point(n, d) == cube[n - 1]


class TestPerimeter:
    def test_examples(self):
        assert daisy_perimeter(DaisySpec(2, ((2, 2),))) == 8
        assert daisy_perimeter(DaisySpec(2, ((3, 2), (2,)))) == 12
        for ell, d in [(3, 2), (4, 3), (5, 4), (10**4, 5)]:
            assert daisy_perimeter(DaisySpec(d, ((ell,) * d,))) == 2 * d * ell ** (d - 1)

    def test_eip_values(self):
        assert eip_value(0, 3) == 0
        assert eip_value(1, 2) == 4
        assert eip_value(8, 2) == 12
        assert eip_value(9, 2) == 12

    @given(daisy_args)
    def test_closed_form_matches_count(self, nd):
        n, d = nd
        spec = daisy_of_cardinality(n, d)
        Q = materialize(spec)
        assert daisy_bonds(spec) == bond_count(Q)
        assert daisy_perimeter(spec) == edge_perimeter(Q)

    def test_huge_exact(self):
        spec = daisy_of_cardinality(10**20 + 12345, 5)
        assert spec.cardinality == 10**20 + 12345
        assert daisy_perimeter(spec) > 0

    def test_is_minimizer(self):
        assert is_minimizer(box(2, 2))
        assert not is_minimizer(Config(2, [(1, k) for k in range(1, 5)]))
        assert is_minimizer(box(2, 4))
        assert is_minimizer(Config(3))

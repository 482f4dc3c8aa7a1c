import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import det, random_int_matrix, rational_rank
from maptc.linalg import (
    DimensionError,
    Field,
    FieldMatrix,
    IntMatrix,
    Q,
    Subspace,
    image_basis,
    int_rank,
    intersect,
    kernel_basis,
    rref,
    smith_normal_form,
)

F2 = Field(2)


def check_snf(m: IntMatrix):
    d, u, v = smith_normal_form(m)
    assert u @ m @ v == d
    assert (d.rows, d.cols) == (m.rows, m.cols)
    for i in range(d.rows):
        for j in range(d.cols):
            if i != j:
                assert d[i, j] == 0
    diag = d.diagonal()
    assert all(x >= 0 for x in diag)
    for a, b in zip(diag, diag[1:]):
        if a == 0:
            assert b == 0
        else:
            assert b % a == 0
    assert abs(det(u.entries)) == 1
    assert abs(det(v.entries)) == 1
    return d


def test_snf_diag_2_3():
    d = check_snf(IntMatrix.from_rows([[2, 0], [0, 3]]))
    assert d.diagonal() == [1, 6]


def test_snf_zero_and_identity():
    z = IntMatrix.zeros(2, 3)
    assert check_snf(z) == z
    i3 = IntMatrix.identity(3)
    assert check_snf(i3) == i3


def test_snf_degenerate_shapes():
    for r, c in [(0, 0), (0, 3), (3, 0), (1, 1)]:
        check_snf(IntMatrix.zeros(r, c))


def test_snf_known_invariants():
    m = IntMatrix.from_rows([[12, 6, 4], [3, 9, 6], [2, 16, 14]])
    assert check_snf(m).diagonal() == [1, 10, 30]


def test_snf_big_integers():
    big = 10**40 + 7
    m = IntMatrix.from_rows([[big, 3 * big], [2, 5]])
    d = check_snf(m)
    assert d.diagonal()[0] * d.diagonal()[1] == abs(det(m.entries))


@pytest.mark.parametrize(
    "rows, expected",
    [
        ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3),
        ([[2, 0, 0], [0, 3, 0]], 2),
        ([[0, 0], [0, 0]], 0),
    ],
)
def test_int_rank_examples(rows, expected):
    m = IntMatrix.from_rows(rows)
    assert int_rank(m) == expected == rational_rank(rows)


def test_snf_and_rank_on_200_random_matrices():
    rng = random.Random(1234)
    for _ in range(200):
        rows = random_int_matrix(rng, 8, 9)
        cols = len(rows[0]) if rows else rng.randint(0, 8)
        m = IntMatrix.from_rows(rows, cols)
        check_snf(m)
        assert int_rank(m) == rational_rank(rows)


matrices = st.integers(0, 6).flatmap(
    lambda r: st.integers(0, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r).map(
            lambda rows: IntMatrix.from_rows(rows, c)
        )
    )
)


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_snf_postconditions(m):
    check_snf(m)
    assert int_rank(m) == rational_rank(m.entries)
    assert int_rank(m) == int_rank(m.transpose())


def test_matrix_json_roundtrip():
    m = IntMatrix.from_rows([[2, -3], [10**30, 0]])
    obj = m.to_json()
    assert obj["entries"][1][0] == str(10**30)
    assert IntMatrix.from_json(obj) == m
    assert IntMatrix.from_json({"rows": 1, "cols": 2, "entries": [[" 4", 5]]}) == IntMatrix.from_rows([[4, 5]])


@pytest.mark.parametrize(
    "obj",
    [
        {"rows": 2, "cols": 2, "entries": [[1, 2]]},
        {"rows": 1, "cols": 1},
        {"rows": 1, "cols": 1, "entries": [["x"]]},
    ],
)
def test_matrix_json_rejects_malformed(obj):
    with pytest.raises(ValueError):
        IntMatrix.from_json(obj)


# -- fields -----------------------------------------------------------------


def test_field_parsing_and_coercion():
    assert Field.parse("Q") == Q
    assert Field.parse(5) == Field.parse("5") == Field.parse("F_5") == Field(5)
    with pytest.raises(ValueError):
        Field(4)
    assert Field(5)(Fraction(1, 2)) == 3
    assert Q("-3/2") == Fraction(-3, 2)
    with pytest.raises(ZeroDivisionError):
        Field(3)(Fraction(1, 3))


def test_kernel_of_identity_is_zero():
    for F in (Q, F2, Field(7)):
        assert kernel_basis(FieldMatrix.identity(F, 4)).dim == 0


def test_f2_kernel_by_enumeration():
    a = FieldMatrix.from_rows(F2, [[1, 1]])
    brute = [v for v in itertools.product(range(2), repeat=2) if (v[0] + v[1]) % 2 == 0]
    assert brute == [(0, 0), (1, 1)]
    k = kernel_basis(a)
    assert k.dim == 1 and k.contains((1, 1))
    assert k == Subspace.span(F2, 2, [(1, 1)])


def test_intersect_example_grassmann():
    s1 = Subspace.span(Q, 3, [(1, 0, 0), (0, 1, 0)])
    s2 = Subspace.span(Q, 3, [(0, 1, 0), (0, 0, 1)])
    meet = intersect(s1, s2)
    assert meet == Subspace.span(Q, 3, [(0, 1, 0)])
    assert meet.dim == s1.dim + s2.dim - (s1 + s2).dim


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        intersect(Subspace.full(Q, 2), Subspace.full(Q, 3))
    with pytest.raises(ValueError):
        intersect(Subspace.full(Q, 2), Subspace.full(F2, 2))


def field_matrices(max_dim=5):
    @st.composite
    def build(draw):
        F = Field(draw(st.sampled_from([None, 2, 3, 5])))
        r, c = draw(st.integers(1, max_dim)), draw(st.integers(1, max_dim))
        rows = draw(st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r))
        return FieldMatrix.from_rows(F, rows, c)

    return build()


@given(field_matrices())
@settings(max_examples=100, deadline=None)
def test_rref_idempotent_and_rank_nullity(a):
    r, piv = rref(a)
    assert rref(r) == (r, piv)
    assert list(piv) == sorted(set(piv))
    assert kernel_basis(a).dim + image_basis(a).dim == a.cols
    for v in kernel_basis(a).vectors():
        assert all(x == 0 for x in a.apply(v))


@given(field_matrices(), field_matrices())
@settings(max_examples=100, deadline=None)
def test_intersect_commutative_and_contained(a, b):
    if a.field != b.field or a.cols != b.cols:
        b = FieldMatrix.from_rows(a.field, [[x for x in row[: a.cols]] + [0] * (a.cols - len(row)) for row in b.entries], a.cols)
    s1, s2 = Subspace.span(a.field, a.cols, a.entries), Subspace.span(a.field, a.cols, b.entries)
    meet = intersect(s1, s2)
    assert meet == intersect(s2, s1)
    assert meet.is_subspace_of(s1) and meet.is_subspace_of(s2)
    assert meet.dim == s1.dim + s2.dim - (s1 + s2).dim

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from maptc.free_group import (
    FreeHom,
    apply_hom,
    cat_free_hom,
    compose,
    contains,
    fold,
    fold_words,
    image_rank,
    inverse,
    reduce_word,
    tc_free_hom,
)

X, Y = 1, 2
CONST = FreeHom(2, 1, ((X,), (X,)))  # a -> x, b -> x
SQ_CUBE = FreeHom(2, 1, ((X, X), (X, X, X)))  # a -> x^2, b -> x^3
ID2 = FreeHom.identity(2)
TRIVIAL = FreeHom.trivial(2, 2)


def test_reduce_word_examples():
    assert reduce_word([1, -1]) == ()
    assert reduce_word([1, 2, -2, 1]) == (1, 1)
    assert reduce_word([2, 1, -1, -2, 3]) == (3,)


@pytest.mark.parametrize("bad, rank", [([0], None), ([1, 3], 2), ([-3], 2)])
def test_reduce_word_rejects(bad, rank):
    with pytest.raises(ValueError):
        reduce_word(bad, rank)


letters = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=20)


@given(letters)
def test_inverse_law(w):
    r = reduce_word(w)
    assert reduce_word(list(r) + list(inverse(r))) == ()
    assert reduce_word(r) == r
    assert all(a != -b for a, b in zip(r, r[1:]))


def test_apply_hom_examples():
    assert apply_hom(ID2, (1, -2, 1)) == (1, -2, 1)
    assert apply_hom(CONST, (1, -2)) == ()
    assert apply_hom(SQ_CUBE, (-1, 2)) == (X,)
    with pytest.raises(ValueError):
        apply_hom(CONST, (3,))


def test_fold_examples():
    g = fold(CONST)
    assert (g.num_vertices, g.edges) == (1, ((0, 0, X),))
    g = fold(TRIVIAL)
    assert (g.num_vertices, g.edges) == (1, ())
    g = fold(FreeHom(2, 2, ((X,), (Y,))))
    assert (g.num_vertices, g.edges) == (1, ((0, 0, X), (0, 0, Y)))


def test_fold_keeps_stem_to_base():
    # <x y x^-1> is a conjugate of <y>: base joined to a y-loop by an x-edge
    g = fold(FreeHom(1, 2, ((X, Y, -X),)))
    assert g.num_vertices == 2 and g.rank == 1
    assert g.contains((X, Y, Y, -X)) and not g.contains((Y,))


@pytest.mark.parametrize("f, rank", [(SQ_CUBE, 1), (TRIVIAL, 0), (ID2, 2), (CONST, 1)])
def test_image_rank_examples(f, rank):
    assert image_rank(f) == rank


def test_contains_examples():
    g = fold(CONST)
    assert contains(g, ())
    assert not contains(g, (Y,))
    assert contains(fold(SQ_CUBE), (X,))  # x = x^-2 x^3


@pytest.mark.parametrize(
    "f, tc, cat",
    [
        (TRIVIAL, 0, 0),
        (CONST, 1, 1),
        (SQ_CUBE, 1, 1),
        (ID2, 2, 1),
        (FreeHom(2, 2, ((X,), (Y,))), 2, 1),
        (FreeHom.identity(1), 1, 1),
        (FreeHom.identity(4), 2, 1),
    ],
)
def test_classification_table(f, tc, cat):
    assert tc_free_hom(f) == tc
    assert cat_free_hom(f) == cat


def test_json_roundtrip():
    f = FreeHom.from_json({"domain_rank": 2, "codomain_rank": 2, "images": [[1, 2, -2], []]})
    assert f.images == ((1,), ())
    assert FreeHom.from_json(f.to_json()) == f
    with pytest.raises(ValueError):
        FreeHom.from_json({"domain_rank": 2, "codomain_rank": 1, "images": [[1]]})
    with pytest.raises(ValueError):
        FreeHom.from_json({"domain_rank": 1, "codomain_rank": 1, "images": [[2]]})


def random_hom(rng: random.Random, max_rank=4, max_len=8) -> FreeHom:
    n, m = rng.randint(1, max_rank), rng.randint(1, max_rank)
    letters = [g for k in range(1, m + 1) for g in (k, -k)]
    images = []
    for _ in range(n):
        w = [rng.choice(letters) for _ in range(rng.randint(0, max_len))]
        images.append(reduce_word(w))
    return FreeHom(n, m, tuple(images))


def random_word(rng, n, max_len=10):
    letters = [g for k in range(1, n + 1) for g in (k, -k)]
    return reduce_word(rng.choice(letters) for _ in range(rng.randint(0, max_len)))


def test_folded_graph_invariants_500_random():
    rng = random.Random(7)
    for _ in range(500):
        f = random_hom(rng)
        g = fold(f)
        assert g.is_deterministic() and g.is_core() and g.is_connected()
        assert 0 <= g.rank <= max(f.domain_rank, 0)
        for _ in range(3):
            u = random_word(rng, f.domain_rank)
            assert contains(g, apply_hom(f, u))
        assert tc_free_hom(f) <= 2
        assert (tc_free_hom(f) == 0) == (cat_free_hom(f) == 0)


def test_fold_independent_of_generator_order():
    rng = random.Random(11)
    for _ in range(200):
        f = random_hom(rng)
        imgs = list(f.images)
        rng.shuffle(imgs)
        assert fold_words(imgs) == fold(f)
        # adding redundant generators (products of existing ones) changes nothing
        extra = reduce_word(list(imgs[0]) + list(imgs[-1]))
        assert fold_words(imgs + [extra]) == fold(f)


def test_image_rank_invariant_under_nielsen_moves():
    rng = random.Random(3)
    for _ in range(300):
        f = random_hom(rng)
        imgs = list(f.images)
        perm = imgs[:]
        rng.shuffle(perm)
        assert image_rank(FreeHom(f.domain_rank, f.codomain_rank, tuple(perm))) == image_rank(f)
        if len(imgs) >= 2:
            a, b = imgs[0], imgs[1]
            moved = [a, reduce_word(list(a) + list(b))] + imgs[2:]
            assert image_rank(FreeHom(f.domain_rank, f.codomain_rank, tuple(moved))) == image_rank(f)


def test_rank_one_codomain_matches_exponent_sums():
    # a subgroup of Z = F(1) is trivial iff every generator has exponent sum 0
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(1, 4)
        images = tuple(tuple(rng.choice([1, -1]) for _ in range(rng.randint(0, 6))) for _ in range(n))
        f = FreeHom(n, 1, images)
        nontrivial = any(sum(w) != 0 for w in images)
        assert image_rank(f) == (1 if nontrivial else 0)


def test_absent_generator_rejected():
    rng = random.Random(9)
    for _ in range(100):
        f = random_hom(rng)
        used = {abs(x) for w in f.images for x in w}
        g = fold(f)
        absent = [k for k in range(1, f.codomain_rank + 2) if k not in used]
        w = list(random_word(rng, f.codomain_rank, 4))
        w.insert(rng.randint(0, len(w)), absent[0])
        assert not contains(g, w) or reduce_word(w) != tuple(w)


def test_composition():
    f = FreeHom(1, 2, ((X, Y),))
    g = FreeHom(2, 1, ((X,), (-X,)))
    assert compose(g, f).images == ((),)
    assert tc_free_hom(compose(g, f)) == 0

"""Independent oracles and random generators shared by the tests."""

from __future__ import annotations

import random
from fractions import Fraction

from maptc.graded import GradedAlgebra, exterior_algebra, tensor_product, truncated_polynomial
from maptc.linalg import Field


def rational_rank(rows) -> int:
    """Rank by Gaussian elimination over Q (no Smith form involved)."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank, ncols = 0, len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                q = m[i][c] / m[rank][c]
                m[i] = [a - q * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def det(rows) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n, d = len(m), Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            q = m[i][c] / m[c][c]
            m[i] = [a - q * b for a, b in zip(m[i], m[c])]
    return d


def random_int_matrix(rng: random.Random, max_dim: int = 8, bound: int = 9):
    r, c = rng.randint(0, max_dim), rng.randint(0, max_dim)
    return [[rng.randint(-bound, bound) for _ in range(c)] for _ in range(r)]


def _invert(F: Field, m):
    n = len(m)
    a = [list(row) + [F.one if i == j else F.zero for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next(i for i in range(c, n) if a[i][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        inv = F.inv(a[c][c])
        a[c] = [F.norm(x * inv) for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                q = a[i][c]
                a[i] = [F.norm(x - q * y) for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


def change_basis(A: GradedAlgebra, rng: random.Random) -> GradedAlgebra:
    """Same algebra in a random degree-preserving basis (the unit is kept)."""
    F = A.field
    n = A.dim
    while True:
        p = [[F.zero] * n for _ in range(n)]
        for i in range(n):
            for k in range(n):
                if A.degrees[i] == A.degrees[k] and i != A.unit and k != A.unit:
                    p[k][i] = F(rng.randint(-2, 2))
        p[A.unit][A.unit] = F.one
        try:
            pinv = _invert(F, p)
            break
        except StopIteration:
            continue
    # new basis b_i = sum_k p[k][i] a_k
    cols = [[p[k][i] for k in range(n)] for i in range(n)]
    table = {}
    for i in range(n):
        for j in range(n):
            prod = A.mul(cols[i], cols[j])
            new = [F.norm(sum((pinv[r][k] * prod[k] for k in range(n)), F.zero)) for r in range(n)]
            terms = {r: c for r, c in enumerate(new) if c != 0}
            if terms:
                table[(i, j)] = terms
    names = tuple(f"b{i}" if i != A.unit else "1" for i in range(n))
    return GradedAlgebra(F, names, A.degrees, A.unit, table)


def random_algebra(rng: random.Random, max_dim: int = 8) -> GradedAlgebra:
    """Random valid graded-commutative algebra: a tensor product of exterior and
    truncated polynomial pieces over Q, F_2, F_3 or F_5, then a basis change."""
    F = Field(rng.choice([None, None, 2, 3, 5]))
    pieces = []
    dim = 1
    for _ in range(rng.randint(1, 3)):
        if rng.random() < 0.5:
            piece = exterior_algebra([f"e{len(pieces)}"], rng.choice([1, 1, 3]), F)
        else:
            piece = truncated_polynomial(f"u{len(pieces)}", rng.choice([2, 4]), rng.randint(2, 3), F)
        if dim * piece.dim > max_dim:
            continue
        dim *= piece.dim
        pieces.append(piece)
    A = pieces[0]
    for piece in pieces[1:]:
        A = tensor_product(A, piece)
    return change_basis(A, rng)


def brute_cuplength(A: GradedAlgebra, vectors) -> int:
    """Cup-length of span(vectors) by trying every ordered product of spanning
    vectors (products are multilinear, so spanning vectors suffice)."""
    import itertools

    gens = [tuple(v) for v in vectors]
    best = 0
    for k in range(1, A.top_degree + 2):
        found = False
        for combo in itertools.product(gens, repeat=k):
            p = combo[0]
            for v in combo[1:]:
                p = A.mul(p, v)
            if any(x != 0 for x in p):
                found = True
                break
        if not found:
            break
        best = k
    return best

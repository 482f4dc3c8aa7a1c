"""Finite-dimensional graded-commutative algebras and cup-length bounds.

An algebra is a basis with degrees plus structure constants
``a_i * a_j = sum_k c_ijk a_k`` over Q or F_p. Elements are dense coordinate
tuples in that basis. Maps between algebras are matrices whose columns are the
images of source basis elements.

Cup-length of a subspace ``V`` of positive-degree classes is computed by the
iterated span ``W_1 = V``, ``W_{k+1} = V * W_k``; by multilinearity some
``k``-fold product of elements of ``V`` is non-zero iff ``W_k != 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .linalg import (
    DimensionError,
    Field,
    FieldMatrix,
    Q,
    Subspace,
    image_basis,
    intersect,
    kernel_basis,
)

Vector = tuple


class InvalidAlgebra(ValueError):
    def __init__(self, violations: list[Violation], what: str = "algebra"):
        self.violations = violations
        shown = "; ".join(str(v) for v in violations[:5])
        more = f" (+{len(violations) - 5} more)" if len(violations) > 5 else ""
        super().__init__(f"invalid {what}: {shown}{more}")


@dataclass(frozen=True)
class Violation:
    kind: str
    indices: tuple
    detail: str = ""

    def __str__(self):
        return f"{self.kind}{self.indices}: {self.detail}" if self.detail else f"{self.kind}{self.indices}"


@dataclass(frozen=True, eq=False)
class GradedAlgebra:
    field: Field
    names: tuple[str, ...]
    degrees: tuple[int, ...]
    unit: int
    # sparse structure constants: (i, j) -> {k: c}; missing pairs multiply to zero
    products: Mapping[tuple[int, int], Mapping[int, object]] = field(repr=False)

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise ValueError("names and degrees differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate basis names")
        if not 0 <= self.unit < len(self.names):
            raise ValueError("unit index out of range")

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def top_degree(self) -> int:
        return max(self.degrees, default=0)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown basis element {name!r}") from None

    def basis_vector(self, i: int) -> Vector:
        F = self.field
        return tuple(F.one if k == i else F.zero for k in range(self.dim))

    def zero(self) -> Vector:
        return (self.field.zero,) * self.dim

    def element(self, terms: Mapping[str, object]) -> Vector:
        """Build an element from ``{basis_name: coeff}``."""
        F = self.field
        v = [F.zero] * self.dim
        for name, c in terms.items():
            i = self.index(name)
            v[i] = F.norm(v[i] + F(c))
        return tuple(v)

    def basis_product(self, i: int, j: int) -> Vector:
        v = [self.field.zero] * self.dim
        for k, c in self.products.get((i, j), {}).items():
            v[k] = c
        return tuple(v)

    def mul(self, u: Sequence, v: Sequence) -> Vector:
        F = self.field
        out = [F.zero] * self.dim
        nz_v = [(j, b) for j, b in enumerate(v) if b != 0]
        for i, a in enumerate(u):
            if a == 0:
                continue
            for j, b in nz_v:
                for k, c in self.products.get((i, j), {}).items():
                    out[k] += a * b * c
        return tuple(F.norm(x) for x in out)

    def positive_part(self) -> Subspace:
        return Subspace.coordinate(self.field, self.dim, (i for i, d in enumerate(self.degrees) if d > 0))

    def format(self, v: Sequence) -> str:
        terms = []
        for c, name in zip(v, self.names):
            if c == 0:
                continue
            terms.append(name if c == 1 else f"{c}*{name}")
        return " + ".join(terms) if terms else "0"

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_table(
        cls,
        field: Field,
        basis: Sequence[tuple[str, int]],
        unit: str,
        products: Mapping[tuple[str, str], Mapping[str, object]],
        implicit_unit: bool = True,
    ) -> GradedAlgebra:
        """Build from named basis and ``{(left, right): {result: coeff}}``.

        With ``implicit_unit`` the products with the unit that are not listed
        default to ``unit * a = a * unit = a``.
        """
        names = tuple(n for n, _ in basis)
        degrees = tuple(int(d) for _, d in basis)
        idx = {n: i for i, n in enumerate(names)}
        if unit not in idx:
            raise ValueError(f"unit {unit!r} is not a basis element")
        table: dict[tuple[int, int], dict[int, object]] = {}
        for (l, r), result in products.items():
            if l not in idx or r not in idx:
                raise ValueError(f"product of unknown basis elements {l!r}, {r!r}")
            terms: dict[int, object] = {}
            for name, c in result.items():
                if name not in idx:
                    raise ValueError(f"unknown basis element {name!r} in product")
                k = idx[name]
                terms[k] = field.norm(terms.get(k, field.zero) + field(c))
            terms = {k: c for k, c in terms.items() if c != 0}
            if terms:
                table[(idx[l], idx[r])] = terms
            else:
                table.pop((idx[l], idx[r]), None)
        if implicit_unit:
            u = idx[unit]
            listed = set(products)
            for n, i in idx.items():
                if (unit, n) not in listed:
                    table[(u, i)] = {i: field.one}
                if (n, unit) not in listed:
                    table[(i, u)] = {i: field.one}
        return cls(field, names, degrees, idx[unit], table)

    @classmethod
    def from_json(cls, obj: dict) -> GradedAlgebra:
        """Parse the algebra file format (omitted non-unit products are zero)."""
        try:
            F = Field.parse(obj.get("field", "Q"))
            basis = [(str(b["name"]), int(b["degree"])) for b in obj["basis"]]
            products = {}
            for p in obj.get("products", []):
                key = (str(p["left"]), str(p["right"]))
                res: dict[str, object] = {}
                for t in p.get("result", []):
                    res[str(t["basis"])] = F.norm(res.get(str(t["basis"]), F.zero) + F(t["coeff"]))
                products[key] = res
            return cls.from_table(F, basis, str(obj["unit"]), products)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed algebra object: {exc}") from exc

    def to_json(self) -> dict:
        out = []
        for (i, j), terms in sorted(self.products.items()):
            out.append(
                {
                    "left": self.names[i],
                    "right": self.names[j],
                    "result": [{"coeff": str(c), "basis": self.names[k]} for k, c in sorted(terms.items())],
                }
            )
        return {
            "field": self.field.to_json(),
            "basis": [{"name": n, "degree": d} for n, d in zip(self.names, self.degrees)],
            "unit": self.names[self.unit],
            "products": out,
        }


def _vec_degree_violation(A: GradedAlgebra, v: Sequence, degree: int) -> bool:
    return any(c != 0 and A.degrees[k] != degree for k, c in enumerate(v))


def validate_algebra(A: GradedAlgebra) -> list[Violation]:
    """Every violated axiom instance; an empty list means ``A`` is valid."""
    F = A.field
    out: list[Violation] = []
    n = A.dim
    for i, d in enumerate(A.degrees):
        if d < 0:
            out.append(Violation("degree", (i,), f"{A.names[i]} has negative degree {d}"))
    if A.degrees[A.unit] != 0:
        out.append(Violation("unit", (A.unit,), "unit is not in degree 0"))
    for i in range(n):
        e = A.basis_vector(i)
        if A.basis_product(A.unit, i) != e or A.basis_product(i, A.unit) != e:
            out.append(Violation("unit", (i,), f"unit does not act as identity on {A.names[i]}"))
    for i in range(n):
        for j in range(n):
            p = A.basis_product(i, j)
            if _vec_degree_violation(A, p, A.degrees[i] + A.degrees[j]):
                out.append(Violation("grading", (i, j), f"{A.names[i]}*{A.names[j]} leaves degree {A.degrees[i] + A.degrees[j]}"))
            if j >= i:
                sign = -1 if (A.degrees[i] * A.degrees[j]) % 2 else 1
                q = tuple(F.norm(sign * x) for x in A.basis_product(j, i))
                if p != q:
                    out.append(Violation("commutativity", (i, j), f"{A.names[i]}*{A.names[j]} != (-1)^|a||b| {A.names[j]}*{A.names[i]}"))
    for i, j, k in itertools.product(range(n), repeat=3):
        left = A.mul(A.basis_product(i, j), A.basis_vector(k))
        right = A.mul(A.basis_vector(i), A.basis_product(j, k))
        if left != right:
            out.append(Violation("associativity", (i, j, k), f"({A.names[i]}{A.names[j]}){A.names[k]} != {A.names[i]}({A.names[j]}{A.names[k]})"))
    return out


def require_valid(A: GradedAlgebra) -> None:
    bad = validate_algebra(A)
    if bad:
        raise InvalidAlgebra(bad)


# ---------------------------------------------------------------------------
# Standard algebras
# ---------------------------------------------------------------------------


def point(field: Field = Q) -> GradedAlgebra:
    return GradedAlgebra.from_table(field, [("1", 0)], "1", {})


def truncated_polynomial(name: str, degree: int, height: int, field: Field = Q) -> GradedAlgebra:
    """``F[u]/(u^height)`` with ``|u| = degree``."""
    if height < 1 or degree < 1:
        raise ValueError("need degree >= 1 and height >= 1")
    names = ["1"] + [name if k == 1 else f"{name}^{k}" for k in range(1, height)]
    basis = [(nm, k * degree) for k, nm in enumerate(names)]
    products = {}
    for a in range(1, height):
        for b in range(1, height):
            if a + b < height:
                products[(names[a], names[b])] = {names[a + b]: 1}
    return GradedAlgebra.from_table(field, basis, "1", products)


def exterior_algebra(generators: Sequence[str], degree: int | Sequence[int] = 1, field: Field = Q) -> GradedAlgebra:
    """Exterior algebra on odd-degree generators; basis = subsets in index order."""
    gens = list(generators)
    degs = [degree] * len(gens) if isinstance(degree, int) else list(degree)
    if any(d % 2 == 0 for d in degs):
        raise ValueError("exterior generators must have odd degree")
    subsets = [s for r in range(len(gens) + 1) for s in itertools.combinations(range(len(gens)), r)]

    def name(s):
        return "1" if not s else "".join(gens[i] for i in s)

    basis = [(name(s), sum(degs[i] for i in s)) for s in subsets]
    products = {}
    for s in subsets:
        for t in subsets:
            if set(s) & set(t) or not s or not t:
                continue
            seq = list(s) + list(t)
            inversions = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
            products[(name(s), name(t))] = {name(tuple(sorted(seq))): -1 if inversions % 2 else 1}
    return GradedAlgebra.from_table(field, basis, "1", products)


def sphere(n: int, field: Field = Q) -> GradedAlgebra:
    """Cohomology of S^n: basis ``1, u`` with ``|u| = n`` and ``u^2 = 0``."""
    return truncated_polynomial("u", n, 2, field)


def torus(n: int, field: Field = Q) -> GradedAlgebra:
    """Cohomology of T^n: exterior algebra on ``n`` degree-one generators."""
    if n == 0:
        return point(field)
    gens = [f"x{i}" for i in range(1, n + 1)] if n > 3 else list("xyz"[:n])
    return exterior_algebra(gens, 1, field)


def tensor_product(A: GradedAlgebra, B: GradedAlgebra) -> GradedAlgebra:
    """``A ⊗ B`` with the Koszul sign ``(a⊗b)(c⊗d) = (-1)^{|b||c|} ac⊗bd``."""
    if A.field != B.field:
        raise ValueError("field mismatch")
    F = A.field
    nb = B.dim
    names = tuple(f"{a}⊗{b}" for a in A.names for b in B.names)
    degrees = tuple(da + db for da in A.degrees for db in B.degrees)
    table: dict[tuple[int, int], dict[int, object]] = {}
    for (a, c), ac in A.products.items():
        for (b, d), bd in B.products.items():
            sign = -1 if (B.degrees[b] * A.degrees[c]) % 2 else 1
            terms = {}
            for k, x in ac.items():
                for l, y in bd.items():
                    val = F.norm(sign * x * y)
                    if val != 0:
                        terms[k * nb + l] = val
            if terms:
                table[(a * nb + b, c * nb + d)] = terms
    return GradedAlgebra(F, names, degrees, A.unit * nb + B.unit, table)


def tensor_square(A: GradedAlgebra) -> GradedAlgebra:
    """Künneth model of the cohomology of ``X × X`` from that of ``X``."""
    require_valid(A)
    return tensor_product(A, A)


# ---------------------------------------------------------------------------
# Maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AlgebraMap:
    """Linear map ``source -> target``; column ``j`` is the image of source basis ``j``."""

    source: GradedAlgebra
    target: GradedAlgebra
    matrix: FieldMatrix

    def __post_init__(self):
        if self.source.field != self.target.field or self.matrix.field != self.source.field:
            raise ValueError("field mismatch between source, target and matrix")
        if (self.matrix.rows, self.matrix.cols) != (self.target.dim, self.source.dim):
            raise DimensionError(
                f"matrix is {self.matrix.rows}x{self.matrix.cols}, expected {self.target.dim}x{self.source.dim}"
            )

    def __call__(self, v: Sequence) -> Vector:
        return self.matrix.apply(v)

    @classmethod
    def from_values(
        cls,
        source: GradedAlgebra,
        target: GradedAlgebra,
        values: Mapping[str, Mapping[str, object]],
    ) -> AlgebraMap:
        """Map given on named basis elements; unlisted elements go to zero, except the
        unit, which goes to the target unit unless listed."""
        cols = []
        for i, name in enumerate(source.names):
            if name in values:
                cols.append(target.element(values[name]))
            elif i == source.unit:
                cols.append(target.basis_vector(target.unit))
            else:
                cols.append(target.zero())
        for name in values:
            source.index(name)
        return cls(source, target, FieldMatrix.from_columns(source.field, cols, target.dim))

    @classmethod
    def identity(cls, A: GradedAlgebra) -> AlgebraMap:
        return cls(A, A, FieldMatrix.identity(A.field, A.dim))

    @classmethod
    def from_json(cls, obj: dict, load: Callable[[object], GradedAlgebra] | None = None) -> AlgebraMap:
        """Parse ``{"source", "target", "values"}``; algebra entries go through ``load``."""
        load = load or GradedAlgebra.from_json
        try:
            src, tgt = load(obj["source"]), load(obj["target"])
            values = {
                str(k): {str(t["basis"]): t["coeff"] for t in terms}
                for k, terms in obj.get("values", {}).items()
            }
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed map object: {exc}") from exc
        return cls.from_values(src, tgt, values)

    def to_json(self) -> dict:
        values = {}
        for j, name in enumerate(self.source.names):
            col = self.matrix.column(j)
            values[name] = [{"coeff": str(c), "basis": self.target.names[k]} for k, c in enumerate(col) if c != 0]
        return {"source": self.source.to_json(), "target": self.target.to_json(), "values": values}


def validate_map(phi: AlgebraMap) -> list[Violation]:
    """Violations of degree preservation, unitality and multiplicativity."""
    S, T = phi.source, phi.target
    out: list[Violation] = []
    images = [phi(S.basis_vector(j)) for j in range(S.dim)]
    for j, img in enumerate(images):
        if _vec_degree_violation(T, img, S.degrees[j]):
            out.append(Violation("degree", (j,), f"image of {S.names[j]} leaves degree {S.degrees[j]}"))
    if images[S.unit] != T.basis_vector(T.unit):
        out.append(Violation("unit", (S.unit,), "unit not sent to unit"))
    for i in range(S.dim):
        for j in range(S.dim):
            if phi(S.basis_product(i, j)) != T.mul(images[i], images[j]):
                out.append(Violation("multiplicativity", (i, j), f"f({S.names[i]}*{S.names[j]}) != f({S.names[i]})f({S.names[j]})"))
    return out


def _require_valid_map(phi: AlgebraMap) -> None:
    bad = validate_algebra(phi.source) + validate_algebra(phi.target) + validate_map(phi)
    if bad:
        raise InvalidAlgebra(bad, "map")


def mult_map(A: GradedAlgebra) -> AlgebraMap:
    """Cup product ``A ⊗ A -> A``, ``a⊗b -> ab`` (the map induced by the diagonal)."""
    sq = tensor_square(A)
    cols = [A.basis_product(i, j) for i in range(A.dim) for j in range(A.dim)]
    return AlgebraMap(sq, A, FieldMatrix.from_columns(A.field, cols, A.dim))


def tensor_square_map(phi: AlgebraMap) -> AlgebraMap:
    """``phi ⊗ phi`` between the tensor squares (Kronecker product of matrices)."""
    S, T = tensor_square(phi.source), tensor_square(phi.target)
    F = phi.source.field
    m = phi.matrix.entries
    rows = []
    for a in range(phi.target.dim):
        for b in range(phi.target.dim):
            rows.append(
                [F.norm(m[a][i] * m[b][j]) for i in range(phi.source.dim) for j in range(phi.source.dim)]
            )
    return AlgebraMap(S, T, FieldMatrix(F, T.dim, S.dim, tuple(tuple(r) for r in rows)))


# ---------------------------------------------------------------------------
# Cup-length
# ---------------------------------------------------------------------------


def subspace_cuplength(A: GradedAlgebra, V: Subspace) -> int:
    """Largest ``k`` with some non-zero ``k``-fold product of elements of ``V``.

    ``V`` must avoid degree 0. Returns 0 for the zero subspace.
    """
    if V.ambient != A.dim:
        raise DimensionError(f"subspace of F^{V.ambient} in an algebra of dimension {A.dim}")
    if V.field != A.field:
        raise ValueError("field mismatch")
    deg0 = [i for i, d in enumerate(A.degrees) if d == 0]
    gens = V.vectors()
    if any(v[i] != 0 for v in gens for i in deg0):
        raise ValueError("subspace has a degree-0 component")
    k, W = 0, V
    while W.dim:
        k += 1
        if k > A.top_degree:
            raise InvalidAlgebra([Violation("grading", (), "products of positive classes never vanish")])
        W = Subspace.span(A.field, A.dim, (A.mul(v, w) for v in gens for w in W.vectors()))
    return k


def zero_divisors(A: GradedAlgebra) -> Subspace:
    """Positive-degree part of the kernel of the cup product ``A ⊗ A -> A``."""
    m = mult_map(A)
    return intersect(kernel_basis(m.matrix), m.source.positive_part())


def zero_divisor_cuplength(A: GradedAlgebra) -> int:
    """Cup-length of the zero-divisor ideal: a lower bound for TC of the space."""
    return subspace_cuplength(tensor_square(A), zero_divisors(A))


def map_zero_divisors(phi: AlgebraMap) -> Subspace:
    """``im(phi ⊗ phi) ∩ ker(cup product)`` in positive degrees, inside ``target ⊗ target``."""
    _require_valid_map(phi)
    sq = tensor_square_map(phi)
    return intersect(image_basis(sq.matrix), zero_divisors(phi.target))


def tc_map_lower_bound(phi: AlgebraMap) -> int:
    """Cup-length lower bound for TC of a map ``f`` given ``phi = f^*: H*(Y) -> H*(X)``."""
    return subspace_cuplength(tensor_square(phi.target), map_zero_divisors(phi))


def cat_map_lower_bound(phi: AlgebraMap) -> int:
    """Cup-length of the positive-degree kernel of ``phi = f^*``: a lower bound for cat f."""
    _require_valid_map(phi)
    ker = intersect(kernel_basis(phi.matrix), phi.source.positive_part())
    return subspace_cuplength(phi.source, ker)


def exhaustive_cuplength(A: GradedAlgebra, vectors: Iterable[Sequence]) -> int:
    """Longest non-zero product of the given vectors, by depth-first enumeration.

    Slow; kept as an independent check on :func:`subspace_cuplength`.
    """
    gens = [tuple(v) for v in vectors if any(x != 0 for x in v)]
    best = 0
    frontier = {g for g in gens}
    length = 1 if frontier else 0
    while frontier:
        best = length
        products = (A.mul(f, g) for f in frontier for g in gens)
        frontier = {p for p in products if any(x != 0 for x in p)}
        length += 1
        if length > A.top_degree + 1:
            break
    return best

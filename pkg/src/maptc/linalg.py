"""Exact linear algebra over the integers and over prime fields / the rationals.

Integer matrices get a Smith normal form with unimodular transforms; field
matrices get row reduction, kernels, images and subspace intersection.
Everything is exact: Python ints and :class:`fractions.Fraction`, never floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class DimensionError(ValueError):
    """Raised when operands live in spaces of different dimension."""


# ---------------------------------------------------------------------------
# Integer matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntMatrix:
    """An ``rows x cols`` integer matrix, i.e. a homomorphism Z^cols -> Z^rows."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries do not match shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def from_json(cls, obj: dict) -> IntMatrix:
        """Parse ``{"rows": n, "cols": m, "entries": [[...], ...]}``.

        Entries may be decimal strings (the canonical form) or JSON integers.
        """
        try:
            rows, cols = int(obj["rows"]), int(obj["cols"])
            entries = [[_parse_int(x) for x in r] for r in obj["entries"]]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed matrix object: {exc}") from exc
        return cls(rows, cols, tuple(tuple(r) for r in entries))

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[str(x) for x in r] for r in self.entries],
        }

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols_b = list(zip(*other.entries)) if other.rows else [()] * other.cols
        data = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols_b) for row in self.entries
        )
        return IntMatrix(self.rows, other.cols, data)

    def transpose(self) -> IntMatrix:
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)),
        )

    def diagonal(self) -> list[int]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]


def _parse_int(x) -> int:
    if isinstance(x, bool):
        raise ValueError("booleans are not integers")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        return int(x.strip())
    raise ValueError(f"not an integer: {x!r}")


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(D, U, V)`` with ``U @ m @ V == D`` and ``D`` in Smith form.

    ``U`` and ``V`` are unimodular. The diagonal of ``D`` is non-negative and
    satisfies ``d1 | d2 | ...``. The pivot at each stage is an entry of smallest
    non-zero absolute value in the remaining block.
    """
    nr, nc = m.rows, m.cols
    a = m.to_lists()
    u = IntMatrix.identity(nr).to_lists()
    v = IntMatrix.identity(nc).to_lists()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(nr, nc)):
        while True:
            best = None
            for i in range(t, nr):
                for j in range(t, nc):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = a[t][t]

            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue  # a smaller remainder appeared; re-pivot

            bad_row = next(
                (i for i in range(t + 1, nr) if any(a[i][j] % p for j in range(t + 1, nc))),
                None,
            )
            if bad_row is None:
                break
            add_row(t, bad_row, 1)

        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    return (
        IntMatrix.from_rows(a, nc),
        IntMatrix.from_rows(u, nr),
        IntMatrix.from_rows(v, nc),
    )


def int_rank(m: IntMatrix) -> int:
    """Rank of the homomorphism ``m``: the number of non-zero Smith invariants."""
    d, _, _ = smith_normal_form(m)
    return sum(1 for x in d.diagonal() if x)


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class Field:
    """The rationals (``p=None``) or the prime field F_p.

    Elements are :class:`~fractions.Fraction` for Q and ints in ``[0, p)`` for
    F_p. Arithmetic is done with plain operators followed by :meth:`norm`.
    """

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def parse(cls, value) -> Field:
        """Accept ``"Q"``, ``None``, a prime int, or strings like ``"5"`` / ``"F_5"``."""
        if value is None or value == "Q":
            return cls(None)
        if isinstance(value, bool):
            raise ValueError(f"bad field {value!r}")
        if isinstance(value, int):
            return cls(value)
        if isinstance(value, str):
            s = value.strip()
            if s.upper().startswith("F_"):
                s = s[2:]
            if s.isdigit():
                return cls(int(s))
        raise ValueError(f"bad field {value!r}")

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"F_{self.p}"

    def to_json(self):
        return "Q" if self.p is None else self.p

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def norm(self, x):
        return x if self.p is None else x % self.p

    def __call__(self, x):
        """Coerce an int, Fraction or string like ``"-3/2"`` into the field."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} is undefined in {self.name}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x):
        if self.p is None:
            return 1 / Fraction(x)
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def format(self, x) -> str:
        return str(x)


Q = Field(None)


@dataclass(frozen=True)
class FieldMatrix:
    """A ``rows x cols`` matrix over a :class:`Field`; acts as F^cols -> F^rows."""

    field: Field
    rows: int
    cols: int
    entries: tuple[tuple, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries do not match shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, field: Field, rows: Iterable[Sequence], cols: int | None = None) -> FieldMatrix:
        data = tuple(tuple(field(x) for x in r) for r in rows)
        if cols is None:
            if not data:
                raise ValueError("cols must be given for a matrix with no rows")
            cols = len(data[0])
        return cls(field, len(data), cols, data)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> FieldMatrix:
        return cls(field, rows, cols, tuple((field.zero,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: Field, n: int) -> FieldMatrix:
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], rows: int) -> FieldMatrix:
        if not columns:
            return cls.zeros(field, rows, 0)
        return cls.from_rows(field, zip(*columns), len(columns)) if rows else cls.zeros(field, 0, len(columns))

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> FieldMatrix:
        return FieldMatrix(self.field, self.cols, self.rows, tuple(self.columns()))

    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.cols:
            raise DimensionError(f"vector of length {len(vec)} for {self.cols} columns")
        F = self.field
        return tuple(F.norm(sum((a * b for a, b in zip(row, vec)), F.zero)) for row in self.entries)

    def __matmul__(self, other: FieldMatrix) -> FieldMatrix:
        if self.field != other.field:
            raise ValueError("field mismatch")
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols = [other.column(j) for j in range(other.cols)]
        return FieldMatrix(
            self.field,
            self.rows,
            other.cols,
            tuple(tuple(self.apply(c)[i] for c in cols) for i in range(self.rows))
            if cols
            else tuple(() for _ in range(self.rows)),
        )

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)


def rref(a: FieldMatrix) -> tuple[FieldMatrix, tuple[int, ...]]:
    """Reduced row-echelon form and pivot columns. Zero rows stay at the bottom."""
    F = a.field
    m = [list(r) for r in a.entries]
    pivots: list[int] = []
    r = 0
    for c in range(a.cols):
        if r == a.rows:
            break
        piv = next((i for i in range(r, a.rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.norm(x * inv) for x in m[r]]
        for i in range(a.rows):
            if i != r and m[i][c] != 0:
                q = m[i][c]
                m[i] = [F.norm(x - q * y) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return FieldMatrix(F, a.rows, a.cols, tuple(tuple(row) for row in m)), tuple(pivots)


@dataclass(frozen=True)
class Subspace:
    """A subspace of F^ambient, stored as a reduced row-echelon basis."""

    field: Field
    ambient: int
    basis: FieldMatrix
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, field: Field, ambient: int, vectors: Iterable[Sequence]) -> Subspace:
        vecs = [tuple(field(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise DimensionError(f"vector of length {len(v)} in ambient dimension {ambient}")
        if not vecs:
            return cls.zero(field, ambient)
        r, piv = rref(FieldMatrix(field, len(vecs), ambient, tuple(vecs)))
        basis = FieldMatrix(field, len(piv), ambient, r.entries[: len(piv)])
        return cls(field, ambient, basis, piv)

    @classmethod
    def zero(cls, field: Field, ambient: int) -> Subspace:
        return cls(field, ambient, FieldMatrix.zeros(field, 0, ambient), ())

    @classmethod
    def full(cls, field: Field, ambient: int) -> Subspace:
        return cls(field, ambient, FieldMatrix.identity(field, ambient), tuple(range(ambient)))

    @classmethod
    def coordinate(cls, field: Field, ambient: int, indices: Iterable[int]) -> Subspace:
        """Span of the standard basis vectors at ``indices``."""
        idx = sorted(set(indices))
        vecs = [[field.one if k == i else field.zero for k in range(ambient)] for i in idx]
        return cls.span(field, ambient, vecs)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def vectors(self) -> list[tuple]:
        return list(self.basis.entries)

    def reduce(self, v: Sequence) -> tuple:
        """Remainder of ``v`` after eliminating the pivot coordinates."""
        F = self.field
        w = [F(x) for x in v]
        if len(w) != self.ambient:
            raise DimensionError(f"vector of length {len(w)} in ambient dimension {self.ambient}")
        for row, c in zip(self.basis.entries, self.pivots):
            q = w[c]
            if q != 0:
                w = [F.norm(x - q * y) for x, y in zip(w, row)]
        return tuple(w)

    def contains(self, v: Sequence) -> bool:
        return all(x == 0 for x in self.reduce(v))

    def is_subspace_of(self, other: Subspace) -> bool:
        _check_same(self, other)
        return all(other.contains(v) for v in self.vectors())

    def __add__(self, other: Subspace) -> Subspace:
        _check_same(self, other)
        return Subspace.span(self.field, self.ambient, self.vectors() + other.vectors())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient == other.ambient
            and self.basis.entries == other.basis.entries
        )

    def __hash__(self):
        return hash((self.field, self.ambient, self.basis.entries))


def _check_same(s1: Subspace, s2: Subspace) -> None:
    if s1.field != s2.field:
        raise ValueError(f"field mismatch: {s1.field.name} vs {s2.field.name}")
    if s1.ambient != s2.ambient:
        raise DimensionError(f"ambient dimensions differ: {s1.ambient} vs {s2.ambient}")


def kernel_basis(a: FieldMatrix) -> Subspace:
    """Kernel of ``x -> a x`` as a subspace of F^cols."""
    F = a.field
    r, piv = rref(a)
    free = [c for c in range(a.cols) if c not in set(piv)]
    vecs = []
    for f in free:
        v = [F.zero] * a.cols
        v[f] = F.one
        for i, c in enumerate(piv):
            v[c] = F.norm(-r.entries[i][f])
        vecs.append(v)
    return Subspace.span(F, a.cols, vecs)


def image_basis(a: FieldMatrix) -> Subspace:
    """Column space of ``a`` as a subspace of F^rows."""
    return Subspace.span(a.field, a.rows, a.columns())


def intersect(s1: Subspace, s2: Subspace) -> Subspace:
    """``s1 ∩ s2``, found from the kernel of ``[B1^T | -B2^T]``."""
    _check_same(s1, s2)
    F = s1.field
    if s1.dim == 0 or s2.dim == 0:
        return Subspace.zero(F, s1.ambient)
    cols = s1.vectors() + [tuple(F.norm(-x) for x in v) for v in s2.vectors()]
    stacked = FieldMatrix.from_columns(F, cols, s1.ambient)
    ker = kernel_basis(stacked)
    b1 = s1.vectors()
    out = []
    for coeffs in ker.vectors():
        v = [F.zero] * s1.ambient
        for c, row in zip(coeffs[: s1.dim], b1):
            if c != 0:
                v = [F.norm(x + c * y) for x, y in zip(v, row)]
        out.append(v)
    return Subspace.span(F, s1.ambient, out)

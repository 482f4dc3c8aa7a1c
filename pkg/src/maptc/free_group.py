"""Free groups, homomorphisms between them, and Stallings folding.

Generators of F(m) are numbered 1..m; the signed integer ``-g`` stands for the
inverse of generator ``g``. A word is a tuple of such letters.

The folded core graph of ``im(f)`` decides the rank of the image, which in
turn classifies the topological complexity of ``f``: 0 for the trivial
homomorphism, 1 when the image is infinite cyclic, 2 otherwise.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

Word = tuple[int, ...]


def reduce_word(letters: Iterable[int], rank: int | None = None) -> Word:
    """Freely reduce ``letters``; ``rank`` bounds the generator indices if given."""
    out: list[int] = []
    for x in letters:
        x = int(x)
        if x == 0:
            raise ValueError("generator index 0 is reserved")
        if rank is not None and abs(x) > rank:
            raise ValueError(f"generator {x} out of range for F({rank})")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def word_str(w: Sequence[int], alphabet: str = "xyzwuvst") -> str:
    if not w:
        return "1"
    parts = []
    for x in w:
        g = alphabet[abs(x) - 1] if abs(x) <= len(alphabet) else f"g{abs(x)}"
        parts.append(g if x > 0 else g + "^-1")
    return " ".join(parts)


@dataclass(frozen=True)
class FreeHom:
    """A homomorphism F(domain_rank) -> F(codomain_rank) given on generators."""

    domain_rank: int
    codomain_rank: int
    images: tuple[Word, ...]

    def __post_init__(self):
        if self.domain_rank < 0 or self.codomain_rank < 0:
            raise ValueError("ranks must be non-negative")
        if len(self.images) != self.domain_rank:
            raise ValueError(f"expected {self.domain_rank} images, got {len(self.images)}")
        reduced = tuple(reduce_word(w, self.codomain_rank) for w in self.images)
        object.__setattr__(self, "images", reduced)

    @classmethod
    def identity(cls, n: int) -> FreeHom:
        return cls(n, n, tuple((g,) for g in range(1, n + 1)))

    @classmethod
    def trivial(cls, n: int, m: int) -> FreeHom:
        return cls(n, m, ((),) * n)

    @classmethod
    def from_json(cls, obj: dict) -> FreeHom:
        """Parse ``{"domain_rank": n, "codomain_rank": m, "images": [[...], ...]}``."""
        try:
            n, m = int(obj["domain_rank"]), int(obj["codomain_rank"])
            images = tuple(tuple(int(x) for x in w) for w in obj["images"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed homomorphism object: {exc}") from exc
        return cls(n, m, images)

    def to_json(self) -> dict:
        return {
            "domain_rank": self.domain_rank,
            "codomain_rank": self.codomain_rank,
            "images": [list(w) for w in self.images],
        }

    def is_trivial(self) -> bool:
        return all(not w for w in self.images)

    def __call__(self, w: Sequence[int]) -> Word:
        return apply_hom(self, w)


def apply_hom(f: FreeHom, w: Sequence[int]) -> Word:
    """Image of the word ``w`` (over F(n)) under ``f``, freely reduced."""
    letters: list[int] = []
    for x in reduce_word(w, f.domain_rank):
        img = f.images[abs(x) - 1]
        letters.extend(img if x > 0 else inverse(img))
    return reduce_word(letters)


def compose(g: FreeHom, f: FreeHom) -> FreeHom:
    """``g ∘ f``."""
    if f.codomain_rank != g.domain_rank:
        raise ValueError("cannot compose: rank mismatch")
    return FreeHom(f.domain_rank, g.codomain_rank, tuple(apply_hom(g, w) for w in f.images))


@dataclass(frozen=True)
class FoldedGraph:
    """A folded, base-pointed core graph; vertex 0 is the base.

    ``edges`` holds ``(source, target, label)`` with positive labels; reading
    an edge backwards spells the inverse letter.
    """

    num_vertices: int
    edges: tuple[tuple[int, int, int], ...]
    base: int = 0

    @cached_property
    def _step(self) -> dict[tuple[int, int], int]:
        step = {}
        for s, t, g in self.edges:
            step[(s, g)] = t
            step[(t, -g)] = s
        return step

    @property
    def rank(self) -> int:
        """Rank of the subgroup the graph represents: |E| - |V| + 1."""
        return len(self.edges) - self.num_vertices + 1

    def degree(self, v: int) -> int:
        return sum((s == v) + (t == v) for s, t, _ in self.edges)

    def is_deterministic(self) -> bool:
        seen = set()
        for s, t, g in self.edges:
            if (s, g) in seen or (t, -g) in seen:
                return False
            seen.add((s, g))
            seen.add((t, -g))
        return True

    def is_core(self) -> bool:
        return all(self.degree(v) >= 2 for v in range(self.num_vertices) if v != self.base)

    def is_connected(self) -> bool:
        adj: dict[int, set[int]] = {v: set() for v in range(self.num_vertices)}
        for s, t, _ in self.edges:
            adj[s].add(t)
            adj[t].add(s)
        seen = {self.base}
        todo = [self.base]
        while todo:
            v = todo.pop()
            for w in adj[v] - seen:
                seen.add(w)
                todo.append(w)
        return len(seen) == self.num_vertices

    def trace(self, w: Sequence[int]) -> int | None:
        """End vertex of the path spelling ``w`` from the base, or None if it falls off."""
        v = self.base
        for x in w:
            v = self._step.get((v, x))
            if v is None:
                return None
        return v

    def contains(self, w: Sequence[int]) -> bool:
        return contains(self, w)


def contains(g: FoldedGraph, w: Sequence[int]) -> bool:
    """Membership of ``w`` in the subgroup: the reduced word must loop at the base."""
    return g.trace(reduce_word(w)) == g.base


@dataclass
class _Folder:
    # union-find over vertices; out[v] maps a signed label to a (possibly stale) neighbour
    parent: list[int] = field(default_factory=lambda: [0])
    out: list[dict[int, int]] = field(default_factory=lambda: [{}])
    pending: deque = field(default_factory=deque)

    def new_vertex(self) -> int:
        self.parent.append(len(self.parent))
        self.out.append({})
        return len(self.parent) - 1

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def _attach(self, u: int, label: int, v: int) -> None:
        prev = self.out[u].get(label)
        if prev is None:
            self.out[u][label] = v
        elif self.find(prev) != self.find(v):
            self.pending.append((prev, v))

    def add_edge(self, u: int, label: int, v: int) -> None:
        self._attach(u, label, v)
        self._attach(v, -label, u)

    def fold(self) -> None:
        while self.pending:
            a, b = self.pending.popleft()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            if b == 0:  # keep the base as a representative
                a, b = b, a
            self.parent[b] = a
            moved, self.out[b] = self.out[b], {}
            for label, t in moved.items():
                self._attach(a, label, self.find(t))


def fold_words(words: Iterable[Sequence[int]]) -> FoldedGraph:
    """Core graph of the subgroup generated by ``words`` (internal helper for :func:`fold`)."""
    st = _Folder()
    for w in words:
        w = reduce_word(w)
        if not w:
            continue
        v = 0
        for i, x in enumerate(w):
            nxt = 0 if i == len(w) - 1 else st.new_vertex()
            if x > 0:
                st.add_edge(v, x, nxt)
            else:
                st.add_edge(nxt, -x, v)
            v = nxt
        st.fold()

    reps = {st.find(v) for v in range(len(st.parent))}
    edges = set()
    for u in reps:
        for label, t in st.out[u].items():
            if label > 0:
                edges.add((u, st.find(t), label))
    return _canonical(_trim(reps, edges))


def _trim(vertices: set[int], edges: set[tuple[int, int, int]]):
    vertices, edges = set(vertices), set(edges)
    while True:
        deg = dict.fromkeys(vertices, 0)
        for s, t, _ in edges:
            deg[s] += 1
            deg[t] += 1
        leaves = {v for v, d in deg.items() if d <= 1 and v != 0}
        if not leaves:
            return vertices, edges
        vertices -= leaves
        edges = {e for e in edges if e[0] not in leaves and e[1] not in leaves}


def _canonical(graph) -> FoldedGraph:
    # relabel by BFS from the base, visiting letters in the order 1, -1, 2, -2, ...
    vertices, edges = graph
    step: dict[int, list[tuple[int, int]]] = {v: [] for v in vertices}
    for s, t, g in edges:
        step[s].append((g, t))
        step[t].append((-g, s))
    order = {0: 0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for _, t in sorted(step[v], key=lambda p: (abs(p[0]), p[0] < 0)):
            if t not in order:
                order[t] = len(order)
                queue.append(t)
    relabelled = tuple(sorted((order[s], order[t], g) for s, t, g in edges))
    return FoldedGraph(len(order), relabelled, 0)


def fold(f: FreeHom) -> FoldedGraph:
    """Stallings core graph of ``im(f)``; the trivial image gives a bare base vertex."""
    return fold_words(f.images)


def image_rank(f: FreeHom) -> int:
    return fold(f).rank


def tc_free_hom(f: FreeHom) -> int:
    """TC of ``f``: 0 if trivial, 1 if the image is infinite cyclic, else 2."""
    r = image_rank(f)
    return min(r, 2)


def cat_free_hom(f: FreeHom) -> int:
    """LS-category of ``f``: 0 iff ``f`` is trivial, otherwise 1 (cd of a free group)."""
    return 0 if f.is_trivial() else 1

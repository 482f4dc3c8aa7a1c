"""Interval propagation over TC / cat / halfTC / MTC / robotTC of spaces and maps.

Each quantity of each entity carries an integer interval ``[lo, hi]`` with
``-1 <= lo <= hi <= cap``. Rules are monotone inequalities between quantities,
so repeatedly tightening bounds reaches the same least fixpoint whatever order
the rules fire in. Every bound change is recorded as an immutable :class:`Fact`
that cites the facts it was derived from; explanations walk those citations
back to given, catalog or attribute leaves.
"""

from __future__ import annotations

import copy
import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator

from . import catalog
from .catalog import Interval, SpaceId

QUANTITIES = ("cat", "TC", "halfTC", "MTC", "robotTC")
SPACE_QUANTITIES = ("cat", "TC")
FLAGS = (
    "nullhomotopic",
    "has_left_homotopy_inverse",
    "has_right_homotopy_inverse",
    "domain_is_H_space",
    "is_fibration",
    "domain_is_ENR_codomain_Hausdorff",
)
TRUTH = ("yes", "no", "unknown")
STRUCTURES = ("compose", "product", "identity", "inclusion", "quotient_product", "diagonal_quotient")
DEFAULT_CAP = 64

RULES: dict[str, str] = {
    "R1": "TC(f) <= min(TC X, TC Y)",
    "R2": "cat f <= TC(f) <= cat(f x f)",
    "R3": "TC(f) = 0 iff f is nullhomotopic",
    "R4": "TC(f x g) <= TC(f) + TC(g)",
    "R5": "TC(g o f) <= min(TC g, TC f)",
    "R6": "right homotopy inverse => TC(f) = TC Y; left => TC(f) = TC X",
    "R7": "cup-length of ker(cup) ∩ im (f x f)* <= TC(f)",
    "R8": "domain an H-space => TC(f) = cat f",
    "R9": "cat Y <= halfTC f <= TC Y and cat f <= halfTC f",
    "R10": "f nullhomotopic => halfTC f = cat Y",
    "R11": "halfTC(g o f) <= halfTC(g)",
    "R12": "TC(f) <= halfTC f <= robotTC f",
    "R13": "f a fibration => halfTC f = robotTC f",
    "R14": "TC(f) <= MTC f, and MTC f <= TC(f) + 1 for X an ENR, Y Hausdorff",
    "R15": "cat(q(f x f)) <= TC(f) and cat(f_diag) <= MTC f",
    "R16": "halfTC f = 0 iff cat Y = 0",
    "R17": "right homotopy inverse => halfTC f = TC Y",
    "C1": "cat f <= cat X and cat f <= cat Y",
    "S1": "cat X <= TC X <= 2 cat X",
    "ID": "cat(Id_X) = cat X",
}

LEAVES = ("given", "catalog", "attribute", "empty-map", "identity-map")


class Contradiction(Exception):
    """Two provenances force an empty interval (or opposite attribute values)."""

    def __init__(self, message: str, first: str, second: str):
        super().__init__(f"{message}\n  one side: {first}\n  other side: {second}")
        self.first = first
        self.second = second


@dataclass(frozen=True)
class Entity:
    id: str
    kind: str  # "space" or "map"
    domain: str | None = None
    codomain: str | None = None
    structure: str | None = None
    parts: tuple[str, ...] = ()
    space: SpaceId | None = None
    empty: bool = False

    @property
    def quantities(self) -> tuple[str, ...]:
        return QUANTITIES if self.kind == "map" else SPACE_QUANTITIES


@dataclass(frozen=True)
class Fact:
    """One recorded bound (``side`` is ``"lo"``/``"hi"``) or attribute (``side == "attr"``)."""

    id: int
    entity: str
    quantity: str
    side: str
    value: object
    rule: str
    premises: tuple[int, ...] = ()
    note: str = ""

    def describe(self) -> str:
        if self.side == "attr":
            head = f"{self.entity}.{self.quantity} = {self.value}"
        else:
            rel = ">=" if self.side == "lo" else "<="
            head = f"{self.quantity}({self.entity}) {rel} {self.value}"
        if self.rule in RULES:
            why = f"{self.rule}: {RULES[self.rule]}"
        else:
            why = self.rule
        return f"{head}  [{why}{': ' + self.note if self.note else ''}]"


@dataclass
class FactStore:
    cap: int = DEFAULT_CAP
    entities: dict[str, Entity] = field(default_factory=dict)
    facts: list[Fact] = field(default_factory=list)
    _bounds: dict[tuple[str, str, str], int] = field(default_factory=dict)
    _attrs: dict[tuple[str, str], int] = field(default_factory=dict)

    # -- entities -------------------------------------------------------------

    def add_space(self, id: str, space: SpaceId | str | None = None, use_catalog: bool = True) -> Entity:
        if isinstance(space, str):
            space = catalog.parse_space(space)
        ent = Entity(id, "space", space=space)
        self._add(ent)
        if space is not None and use_catalog:
            for q in SPACE_QUANTITIES:
                interval, src = catalog.lookup(space, q)
                self._assert(id, q, interval, "catalog", f"{q}({space}) = {interval.lo} ({src})")
        return ent

    def add_map(
        self,
        id: str,
        domain: str | None = None,
        codomain: str | None = None,
        structure: str | None = None,
        parts: Iterable[str] = (),
        empty: bool = False,
    ) -> Entity:
        parts = tuple(parts)
        if structure is not None and structure not in STRUCTURES:
            raise ValueError(f"unknown structure {structure!r}")
        for ref in parts:
            self._require(ref, "map")
        if structure == "compose":
            if len(parts) != 2:
                raise ValueError("a composition needs exactly two parts [g, f]")
            g, f = (self.entities[p] for p in parts)
            if f.codomain is not None and g.domain is not None and f.codomain != g.domain:
                raise ValueError(f"cannot compose {g.id} o {f.id}: {f.codomain} != {g.domain}")
            domain = domain or f.domain
            codomain = codomain or g.codomain
        elif structure == "product" and len(parts) != 2:
            raise ValueError("a product needs exactly two parts")
        elif structure in ("quotient_product", "diagonal_quotient") and len(parts) != 1:
            raise ValueError(f"{structure} refers to exactly one map")
        elif structure == "identity":
            if parts:
                raise ValueError("identity takes no parts")
            domain = domain or codomain
            codomain = codomain or domain
            if domain != codomain or domain is None:
                raise ValueError("identity map needs equal domain and codomain")
        for ref in (domain, codomain):
            if ref is not None:
                self._require(ref)
        ent = Entity(id, "map", domain, codomain, structure, parts, empty=empty)
        self._add(ent)
        if empty:
            for q in QUANTITIES:
                self._assert(id, q, Interval(-1, -1), "empty-map", "f is the empty map")
        if structure == "identity":
            for flag in ("has_left_homotopy_inverse", "has_right_homotopy_inverse"):
                self._set_attr(id, flag, "yes", "identity-map", "")
        return ent

    def _add(self, ent: Entity) -> None:
        if ent.id in self.entities:
            raise ValueError(f"duplicate entity {ent.id!r}")
        self.entities[ent.id] = ent

    def _require(self, id: str, kind: str | None = None) -> Entity:
        if id not in self.entities:
            raise KeyError(f"unknown entity {id!r}")
        ent = self.entities[id]
        if kind is not None and ent.kind != kind:
            raise ValueError(f"{id!r} is a {ent.kind}, expected a {kind}")
        return ent

    # -- reading --------------------------------------------------------------

    def _check_quantity(self, entity: str, quantity: str) -> Entity:
        ent = self._require(entity)
        if quantity not in ent.quantities:
            raise ValueError(f"{quantity!r} is not defined for {ent.kind} {entity!r}")
        return ent

    def bound(self, entity: str, quantity: str, side: str) -> tuple[int, int | None]:
        """Current ``(value, fact_id)``; the fact id is None for the default bound."""
        fid = self._bounds.get((entity, quantity, side))
        if fid is not None:
            return self.facts[fid].value, fid
        if side == "hi":
            return self.cap, None
        return (-1 if self.entities[entity].empty else 0), None

    def interval(self, entity: str, quantity: str) -> Interval:
        self._check_quantity(entity, quantity)
        return Interval(self.bound(entity, quantity, "lo")[0], self.bound(entity, quantity, "hi")[0])

    def attribute(self, entity: str, flag: str) -> str:
        fid = self._attrs.get((entity, flag))
        return "unknown" if fid is None else self.facts[fid].value

    def _attr_fact(self, entity: str, flag: str) -> int | None:
        return self._attrs.get((entity, flag))

    def maps(self) -> Iterator[Entity]:
        return (e for e in self.entities.values() if e.kind == "map")

    def spaces(self) -> Iterator[Entity]:
        return (e for e in self.entities.values() if e.kind == "space")

    # -- writing --------------------------------------------------------------

    def _record(self, *args, **kw) -> Fact:
        fact = Fact(len(self.facts), *args, **kw)
        self.facts.append(fact)
        return fact

    def _tighten(self, entity, quantity, side, value, rule, premises=(), note="") -> bool:
        if quantity not in self.entities[entity].quantities:
            return False
        value = max(-1, min(self.cap, value))
        current, _ = self.bound(entity, quantity, side)
        if (side == "lo" and value <= current) or (side == "hi" and value >= current):
            return False
        premises = tuple(sorted({p for p in premises if p is not None}))
        fact = self._record(entity, quantity, side, value, rule, premises, note)
        other, other_id = self.bound(entity, quantity, "hi" if side == "lo" else "lo")
        lo, hi = (value, other) if side == "lo" else (other, value)
        if lo > hi:
            # the offending fact stays in the log for explanation but is not applied
            raise Contradiction(
                f"{quantity}({entity}): lower bound {lo} exceeds upper bound {hi}",
                self.explain_fact(fact.id, compact=True),
                self.explain_fact(other_id, compact=True),
            )
        self._bounds[(entity, quantity, side)] = fact.id
        return True

    def _assert(self, entity, quantity, interval: Interval, rule, note) -> bool:
        changed = self._tighten(entity, quantity, "lo", interval.lo, rule, (), note)
        changed |= self._tighten(entity, quantity, "hi", interval.hi, rule, (), note)
        return changed

    def assert_fact(self, entity: str, quantity: str, interval: Interval | tuple[int, int], label: str = "") -> FactStore:
        """Intersect the stored interval with ``interval`` (a given fact)."""
        self._check_quantity(entity, quantity)
        if not isinstance(interval, Interval):
            interval = Interval(*interval)
        if interval.lo < -1 or interval.hi < -1:
            raise ValueError("bounds below -1 are meaningless")
        self._assert(entity, quantity, interval, "given", label)
        return self

    def _set_attr(self, entity, flag, value, rule, note, premises=()) -> bool:
        if flag not in FLAGS:
            raise ValueError(f"unknown attribute {flag!r}")
        if value not in TRUTH:
            raise ValueError(f"attribute values are yes/no/unknown, got {value!r}")
        self._require(entity, "map")
        if value == "unknown":
            return False
        fid = self._attrs.get((entity, flag))
        if fid is not None:
            old = self.facts[fid]
            if old.value == value:
                return False
            fact = self._record(entity, flag, "attr", value, rule, tuple(p for p in premises if p is not None), note)
            raise Contradiction(
                f"{entity}.{flag} is both {old.value} and {value}",
                self.explain_fact(old.id, compact=True),
                self.explain_fact(fact.id, compact=True),
            )
        fact = self._record(entity, flag, "attr", value, rule, tuple(p for p in premises if p is not None), note)
        self._attrs[(entity, flag)] = fact.id
        return True

    def set_attribute(self, entity: str, flag: str, value: str, label: str = "") -> FactStore:
        self._set_attr(entity, flag, value, "attribute", label)
        return self

    # -- propagation ----------------------------------------------------------

    def propagate(self, seed: int | None = None, max_rounds: int = 100_000) -> FactStore:
        """Fire all rules until nothing changes. ``seed`` shuffles the rule order
        every round (the fixpoint does not depend on it)."""
        rng = random.Random(seed) if seed is not None else None
        rules = list(RULE_FUNCS)
        for _ in range(max_rounds):
            if rng is not None:
                rng.shuffle(rules)
            changed = False
            for _, fn in rules:
                changed |= fn(self)
            if not changed:
                return self
        raise RuntimeError("propagation did not converge")  # unreachable: bounds are finite

    def snapshot(self) -> FactStore:
        return copy.deepcopy(self)

    def intervals(self) -> dict[tuple[str, str], Interval]:
        return {(e.id, q): self.interval(e.id, q) for e in self.entities.values() for q in e.quantities}

    # -- explanation ----------------------------------------------------------

    def query(self, entity: str, quantity: str) -> tuple[Interval, dict]:
        """Interval plus a provenance tree ``{"lo": node, "hi": node}``."""
        iv = self.interval(entity, quantity)
        tree = {}
        for side in ("lo", "hi"):
            value, fid = self.bound(entity, quantity, side)
            tree[side] = self._tree(fid) if fid is not None else {"value": value, "rule": "default"}
        return iv, tree

    def _tree(self, fid: int) -> dict:
        f = self.facts[fid]
        node = {
            "fact": f.id,
            "entity": f.entity,
            "quantity": f.quantity,
            "side": f.side,
            "value": f.value,
            "rule": f.rule,
        }
        if f.rule in RULES:
            node["statement"] = RULES[f.rule]
        if f.note:
            node["note"] = f.note
        node["premises"] = [self._tree(p) for p in f.premises]
        return node

    def explain_fact(self, fid: int | None, compact: bool = False) -> str:
        if fid is None:
            return "default bound"
        if compact:
            f = self.facts[fid]
            leaves = sorted({self.facts[i].describe() for i in self._leaves(fid)})
            return f.describe() + ("" if f.premises == () else " <- " + "; ".join(leaves))
        lines: list[str] = []
        self._explain_lines(fid, 0, lines, set())
        return "\n".join(lines)

    def _leaves(self, fid: int) -> set[int]:
        f = self.facts[fid]
        if not f.premises:
            return {fid}
        return set().union(*(self._leaves(p) for p in f.premises))

    def _explain_lines(self, fid, depth, lines, seen) -> None:
        f = self.facts[fid]
        pad = "  " * depth
        if fid in seen:
            lines.append(f"{pad}{f.describe()}  (see above)")
            return
        seen.add(fid)
        lines.append(pad + f.describe())
        for p in f.premises:
            self._explain_lines(p, depth + 1, lines, seen)

    def explain(self, entity: str, quantity: str) -> str:
        """Derivation text for both ends of the interval."""
        iv = self.interval(entity, quantity)
        out = [f"{quantity}({entity}) = {iv}"]
        for side, word in (("lo", "lower"), ("hi", "upper")):
            value, fid = self.bound(entity, quantity, side)
            if fid is None:
                out.append(f"  {word} {value}: default")
                continue
            out.append(f"  {word} {value}:")
            sub: list[str] = []
            self._explain_lines(fid, 2, sub, set())
            out.extend(sub)
        return "\n".join(out)

    def rules_used(self, entity: str, quantity: str) -> set[str]:
        used = set()
        todo = [fid for side in ("lo", "hi") if (fid := self.bound(entity, quantity, side)[1]) is not None]
        while todo:
            f = self.facts[todo.pop()]
            used.add(f.rule)
            todo.extend(f.premises)
        return used


# ---------------------------------------------------------------------------
# Rules
# ---------------------------------------------------------------------------


def _le(store: FactStore, a, b, rule: str, offset: int = 0, extra=()) -> bool:
    """Encode ``a <= b + offset`` for ``a = (entity, qty)``, ``b = (entity, qty)``."""
    if a[0] is None or b[0] is None:
        return False
    if a[1] not in store.entities[a[0]].quantities or b[1] not in store.entities[b[0]].quantities:
        return False
    b_hi, b_hi_id = store.bound(*b, "hi")
    a_lo, a_lo_id = store.bound(*a, "lo")
    changed = False
    if b_hi_id is not None:
        changed |= store._tighten(*a, "hi", b_hi + offset, rule, (b_hi_id, *extra))
    if a_lo_id is not None:
        changed |= store._tighten(*b, "lo", a_lo - offset, rule, (a_lo_id, *extra))
    return changed


def _eq(store, a, b, rule, extra=()) -> bool:
    return _le(store, a, b, rule, extra=extra) | _le(store, b, a, rule, extra=extra)


def _le_sum(store: FactStore, a, b, c, rule: str) -> bool:
    """``a <= b + c``."""
    changed = False
    (b_hi, b_id), (c_hi, c_id) = store.bound(*b, "hi"), store.bound(*c, "hi")
    a_lo, a_id = store.bound(*a, "lo")
    if b_id is not None and c_id is not None:
        changed |= store._tighten(*a, "hi", b_hi + c_hi, rule, (b_id, c_id))
    if a_id is not None:
        c_hi, c_id = store.bound(*c, "hi")
        if c_id is not None:
            changed |= store._tighten(*b, "lo", a_lo - c_hi, rule, (a_id, c_id))
        b_hi, b_id = store.bound(*b, "hi")
        if b_id is not None:
            changed |= store._tighten(*c, "lo", a_lo - b_hi, rule, (a_id, b_id))
    return changed


def _flag(store: FactStore, ent: Entity, flag: str, value: str = "yes") -> tuple[bool, int | None]:
    fid = store._attr_fact(ent.id, flag)
    return (fid is not None and store.facts[fid].value == value), fid


def _structured(store, structure):
    return [e for e in store.maps() if e.structure == structure]


def r1(s: FactStore) -> bool:
    ch = False
    for f in s.maps():
        ch |= _le(s, (f.id, "TC"), (f.domain, "TC"), "R1")
        ch |= _le(s, (f.id, "TC"), (f.codomain, "TC"), "R1")
    return ch


def r2(s: FactStore) -> bool:
    ch = False
    for f in s.maps():
        ch |= _le(s, (f.id, "cat"), (f.id, "TC"), "R2")
    for p in _structured(s, "product"):
        if p.parts[0] == p.parts[1]:
            ch |= _le(s, (p.parts[0], "TC"), (p.id, "cat"), "R2")
    return ch


def r3(s: FactStore) -> bool:
    ch = False
    for f in s.maps():
        yes, fid = _flag(s, f, "nullhomotopic", "yes")
        if yes and not f.empty:
            ch |= s._tighten(f.id, "TC", "hi", 0, "R3", (fid,))
        no, fid = _flag(s, f, "nullhomotopic", "no")
        if no:
            ch |= s._tighten(f.id, "TC", "lo", 1, "R3", (fid,))
        hi, hi_id = s.bound(f.id, "TC", "hi")
        lo, lo_id = s.bound(f.id, "TC", "lo")
        if hi == 0 and lo == 0 and hi_id is not None:
            ch |= s._set_attr(f.id, "nullhomotopic", "yes", "R3", "", (hi_id, lo_id))
    return ch


def r4(s: FactStore) -> bool:
    ch = False
    for p in _structured(s, "product"):
        f, g = p.parts
        ch |= _le_sum(s, (p.id, "TC"), (f, "TC"), (g, "TC"), "R4")
    return ch


def r5(s: FactStore) -> bool:
    ch = False
    for c in _structured(s, "compose"):
        g, f = c.parts
        ch |= _le(s, (c.id, "TC"), (g, "TC"), "R5")
        ch |= _le(s, (c.id, "TC"), (f, "TC"), "R5")
    return ch


def r6(s: FactStore) -> bool:
    ch = False
    for f in s.maps():
        yes, fid = _flag(s, f, "has_right_homotopy_inverse")
        if yes:
            ch |= _eq(s, (f.id, "TC"), (f.codomain, "TC"), "R6", (fid,))
        yes, fid = _flag(s, f, "has_left_homotopy_inverse")
        if yes:
            ch |= _eq(s, (f.id, "TC"), (f.domain, "TC"), "R6", (fid,))
    return ch


def r8(s: FactStore) -> bool:
    ch = False
    for f in s.maps():
        yes, fid = _flag(s, f, "domain_is_H_space")
        if yes:
            ch |= _le(s, (f.id, "TC"), (f.id, "cat"), "R8", extra=(fid,))
    return ch


def r9(s: FactStore) -> bool:
    ch = False
    for f in s.maps():
        if not f.empty:  # halfTC of the empty map is -1 whatever Y is
            ch |= _le(s, (f.codomain, "cat"), (f.id, "halfTC"), "R9")
        ch |= _le(s, (f.id, "halfTC"), (f.codomain, "TC"), "R9")
        ch |= _le(s, (f.id, "cat"), (f.id, "halfTC"), "R9")
    return ch


def r10(s: FactStore) -> bool:
    ch = False
    for f in s.maps():
        yes, fid = _flag(s, f, "nullhomotopic")
        if yes and not f.empty:
            ch |= _eq(s, (f.id, "halfTC"), (f.codomain, "cat"), "R10", (fid,))
    return ch


def r11(s: FactStore) -> bool:
    ch = False
    for c in _structured(s, "compose"):
        ch |= _le(s, (c.id, "halfTC"), (c.parts[0], "halfTC"), "R11")
    return ch


def r12(s: FactStore) -> bool:
    ch = False
    for f in s.maps():
        ch |= _le(s, (f.id, "TC"), (f.id, "halfTC"), "R12")
        ch |= _le(s, (f.id, "halfTC"), (f.id, "robotTC"), "R12")
    return ch


def r13(s: FactStore) -> bool:
    ch = False
    for f in s.maps():
        yes, fid = _flag(s, f, "is_fibration")
        if yes:
            ch |= _le(s, (f.id, "robotTC"), (f.id, "halfTC"), "R13", extra=(fid,))
    return ch


def r14(s: FactStore) -> bool:
    ch = False
    for f in s.maps():
        ch |= _le(s, (f.id, "TC"), (f.id, "MTC"), "R14")
        yes, fid = _flag(s, f, "domain_is_ENR_codomain_Hausdorff")
        if yes:
            ch |= _le(s, (f.id, "MTC"), (f.id, "TC"), "R14", offset=1, extra=(fid,))
    return ch


def r15(s: FactStore) -> bool:
    ch = False
    for q in _structured(s, "quotient_product"):
        ch |= _le(s, (q.id, "cat"), (q.parts[0], "TC"), "R15")
    for d in _structured(s, "diagonal_quotient"):
        ch |= _le(s, (d.id, "cat"), (d.parts[0], "MTC"), "R15")
    return ch


def r16(s: FactStore) -> bool:
    ch = False
    for f in s.maps():
        if f.codomain is None or f.empty:
            continue
        hi, hi_id = s.bound(f.codomain, "cat", "hi")
        if hi_id is not None and hi <= 0:
            ch |= s._tighten(f.id, "halfTC", "hi", 0, "R16", (hi_id,))
    return ch


def r17(s: FactStore) -> bool:
    ch = False
    for f in s.maps():
        yes, fid = _flag(s, f, "has_right_homotopy_inverse")
        if yes:
            ch |= _eq(s, (f.id, "halfTC"), (f.codomain, "TC"), "R17", (fid,))
    return ch


def c1(s: FactStore) -> bool:
    ch = False
    for f in s.maps():
        ch |= _le(s, (f.id, "cat"), (f.domain, "cat"), "C1")
        ch |= _le(s, (f.id, "cat"), (f.codomain, "cat"), "C1")
    return ch


def s1(s: FactStore) -> bool:
    ch = False
    for x in s.spaces():
        ch |= _le(s, (x.id, "cat"), (x.id, "TC"), "S1")
        cat_hi, cat_hi_id = s.bound(x.id, "cat", "hi")
        if cat_hi_id is not None:
            ch |= s._tighten(x.id, "TC", "hi", 2 * cat_hi, "S1", (cat_hi_id,))
        tc_lo, tc_lo_id = s.bound(x.id, "TC", "lo")
        if tc_lo_id is not None:
            ch |= s._tighten(x.id, "cat", "lo", -(-tc_lo // 2), "S1", (tc_lo_id,))
    return ch


def id_rule(s: FactStore) -> bool:
    ch = False
    for f in _structured(s, "identity"):
        ch |= _le(s, (f.domain, "cat"), (f.id, "cat"), "ID")
    return ch


RULE_FUNCS: list[tuple[str, Callable[[FactStore], bool]]] = [
    ("R1", r1), ("R2", r2), ("R3", r3), ("R4", r4), ("R5", r5), ("R6", r6),
    ("R8", r8), ("R9", r9), ("R10", r10), ("R11", r11), ("R12", r12), ("R13", r13),
    ("R14", r14), ("R15", r15), ("R16", r16), ("R17", r17),
    ("C1", c1), ("S1", s1), ("ID", id_rule),
]


# ---------------------------------------------------------------------------
# Module-level API and fact files
# ---------------------------------------------------------------------------


def assert_fact(store: FactStore, entity: str, quantity: str, interval, label: str = "") -> FactStore:
    return store.assert_fact(entity, quantity, interval, label)


def propagate(store: FactStore, seed: int | None = None) -> FactStore:
    return store.propagate(seed)


def query(store: FactStore, entity: str, quantity: str) -> tuple[Interval, dict]:
    return store.query(entity, quantity)


def explain(store: FactStore, entity: str, quantity: str) -> str:
    return store.explain(entity, quantity)


def assert_cup_length_bound(store: FactStore, entity: str, phi, quantity: str = "TC") -> int:
    """Import a cohomological lower bound for ``entity`` from ``phi = f^*``.

    ``quantity="TC"`` uses the zero-divisor bound, ``"cat"`` the kernel bound.
    """
    from .graded import cat_map_lower_bound, tc_map_lower_bound

    if quantity == "TC":
        k, rule = tc_map_lower_bound(phi), "R7"
    elif quantity == "cat":
        k, rule = cat_map_lower_bound(phi), "given"
    else:
        raise ValueError("cup-length bounds exist for TC and cat only")
    store._check_quantity(entity, quantity)
    store._tighten(entity, quantity, "lo", k, rule, (), f"cup-length {k} computed from f^*")
    return k


_MAP_KEYS = ("domain", "codomain", "compose", "product", "identity", "inclusion", "quotient_product", "diagonal_quotient")


def _entity_refs(e: dict) -> list[str]:
    refs = [e.get("domain"), e.get("codomain")]
    for key in ("compose", "product"):
        refs.extend(e.get(key) or [])
    for key in ("quotient_product", "diagonal_quotient"):
        if isinstance(e.get(key), str):
            refs.append(e[key])
    if isinstance(e.get("identity"), str):
        refs.append(e["identity"])
    return [r for r in refs if isinstance(r, str)]


def _order_entities(entries: list[dict]) -> list[dict]:
    by_id = {}
    for e in entries:
        if "id" not in e:
            raise ValueError("entity without id")
        if e["id"] in by_id:
            raise ValueError(f"duplicate entity {e['id']!r}")
        by_id[e["id"]] = e
    order, state = [], {}

    def visit(i, trail):
        if state.get(i) == "done":
            return
        if state.get(i) == "active":
            raise ValueError(f"cyclic entity references: {' -> '.join(trail + [i])}")
        if i not in by_id:
            raise ValueError(f"unknown entity {i!r} referenced by {trail[-1] if trail else '?'}")
        state[i] = "active"
        for r in _entity_refs(by_id[i]):
            visit(r, trail + [i])
        state[i] = "done"
        order.append(by_id[i])

    for e in entries:
        visit(e["id"], [])
    return order


def load_facts(obj: dict, base_dir: Path | str | None = None) -> FactStore:
    """Build a store from the fact-file JSON (entities, attributes, facts)."""
    from .graded import AlgebraMap, GradedAlgebra

    base = Path(base_dir) if base_dir is not None else Path.cwd()
    store = FactStore(cap=int(obj.get("cap", DEFAULT_CAP)))
    for e in _order_entities(list(obj.get("entities", []))):
        kind = e.get("type") or ("map" if any(k in e for k in _MAP_KEYS) else "space")
        if kind == "space":
            store.add_space(e["id"], e.get("catalog"))
        elif kind == "map":
            structure, parts, domain = None, (), e.get("domain")
            for key in ("compose", "product"):
                if key in e:
                    structure, parts = key, tuple(e[key])
            for key in ("quotient_product", "diagonal_quotient"):
                if key in e:
                    structure, parts = key, (e[key],)
            if e.get("identity"):
                structure = "identity"
                if isinstance(e["identity"], str):
                    domain = e["identity"]
            if e.get("inclusion"):
                structure = "inclusion"
            store.add_map(e["id"], domain, e.get("codomain"), structure, parts, bool(e.get("empty", False)))
        else:
            raise ValueError(f"unknown entity type {kind!r}")

    for a in obj.get("attributes", []):
        label = a.get("label", "")
        for flag in FLAGS:
            if flag in a:
                store.set_attribute(a["entity"], flag, a[flag], label)
        unknown = set(a) - set(FLAGS) - {"entity", "label"}
        if unknown:
            raise ValueError(f"unknown attribute keys {sorted(unknown)}")

    def load_algebra(ref):
        if isinstance(ref, str):
            return GradedAlgebra.from_json(json.loads((base / ref).read_text(encoding="utf-8")))
        return GradedAlgebra.from_json(ref)

    for f in obj.get("facts", []):
        entity, quantity = f["entity"], f["quantity"]
        if "cohomology" in f:
            ref = f["cohomology"]
            mobj = json.loads((base / ref).read_text(encoding="utf-8")) if isinstance(ref, str) else ref
            assert_cup_length_bound(store, entity, AlgebraMap.from_json(mobj, load_algebra), quantity)
            continue
        if "value" in f:
            lo = hi = int(f["value"])
        else:
            lo, hi = f["interval"]
            lo = 0 if lo is None else int(lo)
            hi = store.cap if hi is None else int(hi)
        store.assert_fact(entity, quantity, Interval(lo, hi), f.get("label", ""))
    return store

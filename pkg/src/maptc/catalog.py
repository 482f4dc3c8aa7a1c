"""Known TC and LS-category values of standard spaces and groups.

Every entry carries a source tag. ``"theorem"`` marks values that follow from
results proved for maps and groups (odd spheres, graphs and free groups,
free abelian groups via the H-space equality, Eilenberg-Ganea, hyperbolic
groups). ``"external-standard"`` marks classical values imported from outside
that body of results (even spheres, sphere category, the point).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

KINDS = ("Point", "Sphere", "Torus", "Graph", "FreeGroup", "FreeAbelian", "HyperbolicGroup")

THEOREM = "theorem"
EXTERNAL = "external-standard"


class UnsupportedSpace(ValueError):
    pass


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, v: int) -> Interval:
        return cls(v, v)

    def __str__(self):
        return f"[{self.lo},{self.hi}]"

    def __iter__(self):
        return iter((self.lo, self.hi))


@dataclass(frozen=True)
class SpaceId:
    kind: str
    param: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UnsupportedSpace(f"unknown space kind {self.kind!r}")
        if self.kind == "Point":
            if self.param is not None:
                raise ValueError("Point takes no parameter")
            return
        if self.param is None or self.param < 0:
            raise ValueError(f"{self.kind} needs a non-negative parameter")
        if self.kind == "HyperbolicGroup" and self.param < 2:
            raise ValueError("torsion-free nonelementary hyperbolic groups have cd >= 2")

    def __str__(self):
        return {
            "Point": "pt",
            "Sphere": f"S^{self.param}",
            "Torus": f"T^{self.param}",
            "Graph": f"graph(b1={self.param})",
            "FreeGroup": f"F({self.param})",
            "FreeAbelian": f"Z^{self.param}",
            "HyperbolicGroup": f"hyp(cd={self.param})",
        }[self.kind]


_LITERALS = [
    (re.compile(r"pt|point"), lambda m: SpaceId("Point")),
    (re.compile(r"S\^(\d+)"), lambda m: SpaceId("Sphere", int(m[1]))),
    (re.compile(r"T\^(\d+)"), lambda m: SpaceId("Torus", int(m[1]))),
    (re.compile(r"graph\(b1=(\d+)\)"), lambda m: SpaceId("Graph", int(m[1]))),
    (re.compile(r"F\((\d+)\)"), lambda m: SpaceId("FreeGroup", int(m[1]))),
    (re.compile(r"Z\^(\d+)"), lambda m: SpaceId("FreeAbelian", int(m[1]))),
    (re.compile(r"hyp\(cd=(\d+)\)"), lambda m: SpaceId("HyperbolicGroup", int(m[1]))),
]


def parse_space(text: str) -> SpaceId:
    """Parse literals such as ``"S^3"``, ``"T^2"``, ``"graph(b1=4)"``, ``"F(2)"``,
    ``"Z^3"``, ``"hyp(cd=2)"`` and ``"pt"``."""
    s = text.strip().replace(" ", "")
    for pattern, build in _LITERALS:
        m = pattern.fullmatch(s)
        if m:
            return build(m)
    raise UnsupportedSpace(f"unrecognised space literal {text!r}")


def _tc(s: SpaceId) -> tuple[int, str]:
    k, n = s.kind, s.param
    if k == "Point":
        return 0, EXTERNAL
    if k == "Sphere":
        if n == 0:
            raise UnsupportedSpace("S^0 is disconnected; TC is not defined")
        return (1, THEOREM) if n % 2 else (2, EXTERNAL)
    if k in ("Torus", "FreeAbelian"):
        return n, THEOREM
    if k in ("Graph", "FreeGroup"):
        return min(2, n), THEOREM
    if k == "HyperbolicGroup":
        return 2 * n, THEOREM
    raise UnsupportedSpace(k)


def _cat(s: SpaceId) -> tuple[int, str]:
    k, n = s.kind, s.param
    if k == "Point":
        return 0, EXTERNAL
    if k == "Sphere":
        if n == 0:
            raise UnsupportedSpace("S^0 is disconnected; cat is not defined")
        return 1, EXTERNAL
    if k in ("Torus", "FreeAbelian"):
        return n, THEOREM
    if k in ("Graph", "FreeGroup"):
        return min(1, n), THEOREM
    if k == "HyperbolicGroup":
        return n, THEOREM
    raise UnsupportedSpace(k)


def lookup(s: SpaceId | str, quantity: str) -> tuple[Interval, str]:
    """``(interval, source_tag)`` for ``quantity`` in ``{"TC", "cat"}``."""
    if isinstance(s, str):
        s = parse_space(s)
    if quantity == "TC":
        v, src = _tc(s)
    elif quantity == "cat":
        v, src = _cat(s)
    else:
        raise UnsupportedSpace(f"no catalog values for {quantity!r}")
    return Interval.exact(v), src


def tc_of(s: SpaceId | str) -> Interval:
    return lookup(s, "TC")[0]


def cat_of(s: SpaceId | str) -> Interval:
    """LS-category. For S^n the two open hemispheres (each contractible) give cat = 1."""
    return lookup(s, "cat")[0]

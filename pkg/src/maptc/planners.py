"""Explicit f-motion planners on model spaces, and a sampling validator.

A planner for ``f: X -> Y`` is an ordered list of domains in ``X x X``; each
domain assigns to a pair ``(x0, x1)`` a path in ``Y`` from ``f(x0)`` to
``f(x1)``. Paths are sampled at ``K`` uniform times in ``[0, 1]``.

Domains here are a partition rather than an open cover (the antipodal set is
closed). For ANR spaces a partition into arbitrary subsets with planners gives
the same count as an open cover, so validating partitions is enough.

The validator checks coverage, the endpoint axioms, and a sampled step bound
as a proxy for continuity along each path. It proves nothing topological.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import asdict, dataclass, field
from functools import reduce
from typing import Callable

import numpy as np

ANTIPODAL_TOL = 1e-9
DEFAULT_PATH_SAMPLES = 64


# ---------------------------------------------------------------------------
# Model spaces
# ---------------------------------------------------------------------------


def _wrap(theta: np.ndarray) -> np.ndarray:
    """Angles reduced to ``[0, 2π)``."""
    return np.mod(theta, 2 * np.pi)


def _signed_angle(d: np.ndarray) -> np.ndarray:
    """Angle differences reduced to ``[-π, π)``."""
    return np.mod(d + np.pi, 2 * np.pi) - np.pi


@dataclass(frozen=True)
class ModelSpace:
    """``Sphere(n)``: unit vectors in R^{n+1}. ``RealProj(n)``: the same vectors up to
    sign. ``Torus(n)``: angle tuples mod 2π with the max-of-coordinates metric."""

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in ("Sphere", "RealProj", "Torus"):
            raise ValueError(f"unknown model space {self.kind!r}")
        if self.n < 1:
            raise ValueError("dimension must be >= 1")

    def __str__(self):
        return {"Sphere": "S^{}", "RealProj": "RP^{}", "Torus": "T^{}"}[self.kind].format(self.n)

    @property
    def coords(self) -> int:
        return self.n if self.kind == "Torus" else self.n + 1

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "Torus":
            return rng.uniform(0.0, 2 * np.pi, size=(size, self.n))
        x = rng.standard_normal((size, self.n + 1))
        return x / np.linalg.norm(x, axis=1, keepdims=True)

    def antipode(self, x: np.ndarray) -> np.ndarray:
        if self.kind == "Torus":
            return _wrap(x + np.pi)
        return -x

    def sample_pairs(self, rng: np.random.Generator, size: int) -> tuple[np.ndarray, np.ndarray]:
        """Random pairs with deliberate diagonal and antipodal cases mixed in.

        Spheres: 90% independent, 5% ``x1 = x0``, 5% ``x1 = -x0``. Tori mix the
        three cases per coordinate (80/10/10).
        """
        x0 = self.sample(rng, size)
        x1 = self.sample(rng, size)
        if self.kind == "Torus":
            pick = rng.choice(3, size=(size, self.n), p=[0.8, 0.1, 0.1])
            x1 = np.where(pick == 1, x0, x1)
            x1 = np.where(pick == 2, _wrap(x0 + np.pi), x1)
            return x0, x1
        pick = rng.choice(3, size=size, p=[0.9, 0.05, 0.05])
        x1 = np.where((pick == 1)[:, None], x0, x1)
        x1 = np.where((pick == 2)[:, None], -x0, x1)
        return x0, x1

    def dist(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Geodesic distance along the last axis (chord form, accurate near zero)."""
        if self.kind == "Torus":
            return np.max(np.abs(_signed_angle(a - b)), axis=-1)
        chord = np.linalg.norm(a - b, axis=-1)
        if self.kind == "RealProj":
            chord = np.minimum(chord, np.linalg.norm(a + b, axis=-1))
        return 2 * np.arcsin(np.clip(chord / 2, 0.0, 1.0))

    def metric_defects(self, rng: np.random.Generator, samples: int = 1000) -> dict[str, float]:
        """Worst symmetry and triangle-inequality defects on random triples."""
        x, y, z = (self.sample(rng, samples) for _ in range(3))
        dxy, dyx = self.dist(x, y), self.dist(y, x)
        triangle = dxy - (self.dist(x, z) + self.dist(z, y))
        return {
            "symmetry": float(np.max(np.abs(dxy - dyx))),
            "triangle": float(max(0.0, np.max(triangle))),
            "identity": float(np.max(self.dist(x, x))),
        }


@dataclass(frozen=True)
class ProductSpace:
    left: ModelSpace | ProductSpace
    right: ModelSpace | ProductSpace

    def __str__(self):
        return f"{self.left} x {self.right}"

    @property
    def coords(self) -> int:
        return self.left.coords + self.right.coords

    def split(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return x[..., : self.left.coords], x[..., self.left.coords :]

    def sample(self, rng, size):
        return np.concatenate([self.left.sample(rng, size), self.right.sample(rng, size)], axis=-1)

    def sample_pairs(self, rng, size):
        a0, a1 = self.left.sample_pairs(rng, size)
        b0, b1 = self.right.sample_pairs(rng, size)
        return np.concatenate([a0, b0], axis=-1), np.concatenate([a1, b1], axis=-1)

    def dist(self, a, b):
        (a1, a2), (b1, b2) = self.split(a), self.split(b)
        return np.maximum(self.left.dist(a1, b1), self.right.dist(a2, b2))

    def metric_defects(self, rng, samples: int = 1000):
        x, y, z = (self.sample(rng, samples) for _ in range(3))
        dxy = self.dist(x, y)
        return {
            "symmetry": float(np.max(np.abs(dxy - self.dist(y, x)))),
            "triangle": float(max(0.0, np.max(dxy - self.dist(x, z) - self.dist(z, y)))),
            "identity": float(np.max(self.dist(x, x))),
        }


def product_space(a, b):
    if isinstance(a, ModelSpace) and isinstance(b, ModelSpace) and a.kind == b.kind == "Torus":
        return ModelSpace("Torus", a.n + b.n)
    return ProductSpace(a, b)


# ---------------------------------------------------------------------------
# Planners
# ---------------------------------------------------------------------------

Membership = Callable[[np.ndarray, np.ndarray], np.ndarray]
PathMap = Callable[[np.ndarray, np.ndarray, int], np.ndarray]


@dataclass(frozen=True)
class Domain:
    name: str
    contains: Membership  # (N, d), (N, d) -> (N,) bool
    path: PathMap  # (N, d), (N, d), K -> (N, K, d_target)


@dataclass(frozen=True)
class Planner:
    name: str
    source: ModelSpace | ProductSpace
    target: ModelSpace | ProductSpace
    f: Callable[[np.ndarray], np.ndarray]
    domains: tuple[Domain, ...]
    partition: bool = True

    def membership(self, x0: np.ndarray, x1: np.ndarray) -> np.ndarray:
        """``(N, len(domains))`` boolean matrix."""
        if not self.domains:
            return np.zeros((len(x0), 0), dtype=bool)
        return np.stack([d.contains(x0, x1) for d in self.domains], axis=1)

    def assign(self, x0, x1) -> np.ndarray:
        """First domain containing each pair, ``-1`` when none does."""
        m = self.membership(x0, x1)
        if m.shape[1] == 0:
            return np.full(len(x0), -1)
        return np.where(m.any(axis=1), np.argmax(m, axis=1), -1)

    def plan(self, x0: np.ndarray, x1: np.ndarray, k: int = DEFAULT_PATH_SAMPLES) -> tuple[np.ndarray, np.ndarray]:
        """Domain index and sampled path for each pair (NaN path when uncovered)."""
        if k < 2:
            raise ValueError("paths need at least 2 samples")
        idx = self.assign(x0, x1)
        paths = np.full((len(x0), k, self.target.coords), np.nan)
        for i, dom in enumerate(self.domains):
            rows = np.flatnonzero(idx == i)
            if rows.size:
                paths[rows] = dom.path(x0[rows], x1[rows], k)
        return idx, paths

    def without_domain(self, i: int) -> Planner:
        doms = self.domains[:i] + self.domains[i + 1 :]
        return Planner(f"{self.name} minus {self.domains[i].name}", self.source, self.target, self.f, doms, self.partition)


def _times(k: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, k)


def slerp(x0: np.ndarray, x1: np.ndarray, k: int) -> np.ndarray:
    """Great-circle paths ``(N, K, d)`` from ``x0`` to ``x1`` (not antipodal).

    Endpoints are reproduced exactly: the weights at t=0 and t=1 are 1 and 0.
    """
    t = _times(k)[None, :, None]
    theta = (2 * np.arcsin(np.clip(np.linalg.norm(x0 - x1, axis=1) / 2, 0.0, 1.0)))[:, None, None]
    a, b = x0[:, None, :], x1[:, None, :]
    small = theta < 1e-12
    safe = np.where(small, 1.0, theta)
    s = np.sin(safe)
    geo = (np.sin((1 - t) * safe) * a + np.sin(t * safe) * b) / s
    lin = (1 - t) * a + t * b
    return np.where(small, lin, geo)


def sphere_cover_planner(n: int, tol: float = ANTIPODAL_TOL) -> Planner:
    """Planner for the double cover ``p: S^n -> RP^n`` with two domains.

    Non-antipodal pairs follow the great-circle geodesic, pushed to RP^n.
    Antipodal pairs (``x·y <= -1 + tol``) get the constant path at ``p(x)``,
    which is legitimate because ``p(x) = p(-x)``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")

    def dot(x0, x1):
        return np.einsum("ij,ij->i", x0, x1)

    def constant(x0, x1, k):
        return np.repeat(x0[:, None, :], k, axis=1)

    return Planner(
        name=f"sphere-cover({n})",
        source=ModelSpace("Sphere", n),
        target=ModelSpace("RealProj", n),
        f=lambda x: x,
        domains=(
            Domain("nonantipodal", lambda a, b: dot(a, b) > -1 + tol, slerp),
            Domain("antipodal", lambda a, b: dot(a, b) <= -1 + tol, constant),
        ),
    )


def circle_identity_planner(tol: float = ANTIPODAL_TOL) -> Planner:
    """Identity planner on S^1 = T^1: shorter arc, or the counterclockwise half-turn
    for antipodal pairs."""

    def delta(a, b):
        return _signed_angle(b - a)[:, 0]

    def antipodal(a, b):
        return np.cos(delta(a, b)) <= -1 + tol

    def short_arc(a, b, k):
        return _wrap(a[:, None, :] + _times(k)[None, :, None] * delta(a, b)[:, None, None])

    def half_turn(a, b, k):
        ccw = _wrap(b - a)  # in [0, 2π); close to π on this domain
        return _wrap(a[:, None, :] + _times(k)[None, :, None] * ccw[:, None, :])

    return Planner(
        name="circle",
        source=ModelSpace("Torus", 1),
        target=ModelSpace("Torus", 1),
        f=lambda x: x,
        domains=(
            Domain("shorter-arc", lambda a, b: ~antipodal(a, b), short_arc),
            Domain("half-turn", antipodal, half_turn),
        ),
    )


def _check_partition(p: Planner, probes: int = 512) -> None:
    if not p.partition:
        raise ValueError(f"{p.name} is a cover, not a partition")
    rng = np.random.default_rng(20240101)
    x0, x1 = p.source.sample_pairs(rng, probes)
    counts = p.membership(x0, x1).sum(axis=1)
    if np.any(counts != 1):
        bad = int(np.flatnonzero(counts != 1)[0])
        raise ValueError(f"{p.name}: probe pair {bad} lies in {int(counts[bad])} domains")


def product_planner(p: Planner, q: Planner) -> Planner:
    """Planner for ``f x g`` with ``a + b + 1`` domains from ``a + 1`` and ``b + 1``.

    Domain ``s`` is the union of ``D_i x E_j`` over ``i + j = s``; on each piece
    the path is the pair of component paths.
    """
    _check_partition(p)
    _check_partition(q)
    src = product_space(p.source, q.source)
    tgt = product_space(p.target, q.target)
    ns, nt = p.source.coords, p.target.coords

    def split(x):
        return x[:, :ns], x[:, ns:]

    def parts(x0, x1):
        (a0, b0), (a1, b1) = split(x0), split(x1)
        return p.membership(a0, a1), q.membership(b0, b1), (a0, a1, b0, b1)

    def member(s):
        def contains(x0, x1):
            mp, mq, _ = parts(x0, x1)
            out = np.zeros(len(x0), dtype=bool)
            for i in range(len(p.domains)):
                j = s - i
                if 0 <= j < len(q.domains):
                    out |= mp[:, i] & mq[:, j]
            return out

        return contains

    def path(s):
        def run(x0, x1, k):
            mp, mq, (a0, a1, b0, b1) = parts(x0, x1)
            out = np.full((len(x0), k, tgt.coords), np.nan)
            done = np.zeros(len(x0), dtype=bool)
            for i in range(len(p.domains)):
                j = s - i
                if not 0 <= j < len(q.domains):
                    continue
                rows = np.flatnonzero(mp[:, i] & mq[:, j] & ~done)
                if rows.size:
                    out[rows, :, :nt] = p.domains[i].path(a0[rows], a1[rows], k)
                    out[rows, :, nt:] = q.domains[j].path(b0[rows], b1[rows], k)
                    done[rows] = True
            return out

        return run

    def f(x):
        a, b = split(x)
        return np.concatenate([p.f(a), q.f(b)], axis=-1)

    count = len(p.domains) + len(q.domains) - 1
    doms = tuple(Domain(f"D{s}", member(s), path(s)) for s in range(count))
    return Planner(f"({p.name} x {q.name})", src, tgt, f, doms)


def torus_identity_planner(n: int, tol: float = ANTIPODAL_TOL) -> Planner:
    """Identity planner on T^n with ``n + 1`` domains, as an iterated product of circles."""
    if n < 1:
        raise ValueError("n must be >= 1")
    planner = reduce(product_planner, [circle_identity_planner(tol) for _ in range(n)])
    return Planner(f"torus({n})", planner.source, planner.target, planner.f, planner.domains)


BUILTIN = {
    "sphere-cover": sphere_cover_planner,
    "circle": lambda n=1: circle_identity_planner(),
    "torus": torus_identity_planner,
}


def builtin_planner(name: str, n: int = 1) -> Planner:
    if name not in BUILTIN:
        raise KeyError(f"unknown planner {name!r}; choose from {sorted(BUILTIN)}")
    return BUILTIN[name](n)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass
class ValidationReport:
    planner: str
    samples: int
    seed: int
    tol: float
    path_samples: int
    mode: str
    domains: int
    domain_counts: list[int]
    uncovered: int
    overlapping: int
    coverage: float
    endpoint_error: float
    max_step: float
    deterministic: bool
    digest: str
    failures: list[str] = field(default_factory=list)

    @property
    def exactly_one(self) -> bool:
        return self.uncovered == 0 and self.overlapping == 0

    @property
    def passed(self) -> bool:
        covered = self.exactly_one if self.mode == "partition" else self.uncovered == 0
        return covered and self.endpoint_error <= self.tol and self.deterministic

    def to_dict(self) -> dict:
        d = asdict(self)
        d["exactly_one"] = self.exactly_one
        d["passed"] = self.passed
        return d


@dataclass
class SampleRun:
    x0: np.ndarray
    x1: np.ndarray
    counts: np.ndarray
    index: np.ndarray
    paths: np.ndarray

    def digest(self) -> str:
        h = hashlib.sha256()
        for arr in (self.x0, self.x1, self.index, self.paths):
            h.update(np.ascontiguousarray(arr).tobytes())
        return h.hexdigest()


def sample_run(planner: Planner, samples: int, seed: int, path_samples: int = DEFAULT_PATH_SAMPLES) -> SampleRun:
    rng = np.random.default_rng(seed)
    x0, x1 = planner.source.sample_pairs(rng, samples)
    counts = planner.membership(x0, x1).sum(axis=1)
    idx, paths = planner.plan(x0, x1, path_samples)
    return SampleRun(x0, x1, counts, idx, paths)


def validate_planner(
    planner: Planner,
    samples: int = 10_000,
    seed: int = 0,
    tol: float = 1e-9,
    path_samples: int = DEFAULT_PATH_SAMPLES,
    mode: str | None = None,
) -> ValidationReport:
    """Check coverage, endpoint axioms and step size on seeded random pairs.

    ``mode`` is ``"partition"`` (each pair in exactly one domain) or ``"cover"``
    (at least one); it defaults to what the planner declares.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    mode = mode or ("partition" if planner.partition else "cover")
    run = sample_run(planner, samples, seed, path_samples)
    again = sample_run(planner, samples, seed, path_samples)
    digest = run.digest()

    failures = []
    uncovered = np.flatnonzero(run.counts == 0)
    overlapping = np.flatnonzero(run.counts > 1)
    for i in uncovered[:3]:
        failures.append(f"uncovered pair {int(i)}: x0={run.x0[i].tolist()} x1={run.x1[i].tolist()}")
    if mode == "partition":
        for i in overlapping[:3]:
            failures.append(f"pair {int(i)} lies in {int(run.counts[i])} domains")

    ok = run.index >= 0
    endpoint_error = 0.0
    max_step = 0.0
    if ok.any():
        paths = run.paths[ok]
        start = planner.target.dist(paths[:, 0, :], planner.f(run.x0[ok]))
        end = planner.target.dist(paths[:, -1, :], planner.f(run.x1[ok]))
        errs = np.maximum(start, end)
        endpoint_error = float(np.max(errs))
        worst = int(np.argmax(errs))
        if endpoint_error > tol:
            failures.append(f"endpoint error {endpoint_error:.3e} at pair {int(np.flatnonzero(ok)[worst])}")
        steps = planner.target.dist(paths[:, 1:, :], paths[:, :-1, :])
        max_step = float(np.max(steps))

    deterministic = digest == again.digest()
    if not deterministic:
        failures.append("two runs with the same seed differ")
    return ValidationReport(
        planner=planner.name,
        samples=samples,
        seed=seed,
        tol=tol,
        path_samples=path_samples,
        mode=mode,
        domains=len(planner.domains),
        domain_counts=[int(np.sum(run.index == i)) for i in range(len(planner.domains))],
        uncovered=int(uncovered.size),
        overlapping=int(overlapping.size),
        coverage=float(1.0 - uncovered.size / samples) if samples else 1.0,
        endpoint_error=endpoint_error,
        max_step=max_step,
        deterministic=deterministic,
        digest=digest,
        failures=failures,
    )


def write_paths_csv(path, run: SampleRun) -> int:
    """Write sampled paths as rows ``pair, domain_index, t, c0, c1, ...``; returns row count."""
    k = run.paths.shape[1]
    t = _times(k)
    ncoords = run.paths.shape[2]
    rows = 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["pair", "domain_index", "t"] + [f"c{i}" for i in range(ncoords)])
        for pair, (dom, pts) in enumerate(zip(run.index, run.paths)):
            if dom < 0:
                continue
            for tk, pt in zip(t, pts):
                w.writerow([pair, int(dom), repr(float(tk))] + [repr(float(c)) for c in pt])
                rows += 1
    return rows

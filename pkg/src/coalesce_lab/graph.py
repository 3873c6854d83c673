"""Rooted multigraphs used as simulation substrates.

Finite families (complete, cycle, path, torus, Erdos-Renyi, truncated
canopy) are built fully materialized and rooted uniformly at random.
Infinite families (augmented Galton-Watson, parallel-edge canopy) are
built lazily: only the root is expanded and further vertices are
materialized on demand with :meth:`RootedGraph.extend`.

Vertex ids are contiguous integers and the root is always ``0``.
Parallel edges are stored as integer multiplicities.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Any, Callable, Hashable

import numpy as np

__all__ = [
    "GraphParameterError",
    "GraphUsageError",
    "NotMaterializedError",
    "OffspringDistribution",
    "GraphSpec",
    "RootedGraph",
    "GraphFamily",
    "FAMILIES",
    "build",
    "degree",
    "directed_edges",
    "extend",
    "from_edges",
]

FAMILIES = (
    "complete",
    "cycle",
    "path",
    "torus",
    "erdos_renyi",
    "augmented_gw",
    "parallel_canopy",
)

# salt mixed into lazy per-vertex substreams so they never collide with
# replica streams built from the same integer seed
_LAZY_SALT = 0x6C617A79


class GraphParameterError(ValueError):
    """Invalid family parameters."""


class GraphUsageError(RuntimeError):
    """Operation not supported for this kind of graph."""


class NotMaterializedError(LookupError):
    """Vertex exists only as a frontier placeholder."""


@dataclass(frozen=True)
class OffspringDistribution:
    """Offspring law for Galton-Watson growth.

    Either an explicit finite ``pmf`` mapping ``k -> P(k)``, or a named
    ``family`` ("poisson" with mean ``param``, "geometric" on {0, 1, ...}
    with success probability ``param``).
    """

    pmf: tuple[tuple[int, float], ...] | None = None
    family: str | None = None
    param: float | None = None

    def __post_init__(self):
        if (self.pmf is None) == (self.family is None):
            raise GraphParameterError("give exactly one of pmf or family")
        if self.pmf is not None:
            ks = [k for k, _ in self.pmf]
            ps = [p for _, p in self.pmf]
            if any(int(k) != k or k < 0 for k in ks):
                raise GraphParameterError("pmf support must be nonnegative integers")
            if any(p < 0 for p in ps):
                raise GraphParameterError("pmf probabilities must be nonnegative")
            if abs(sum(ps) - 1.0) > 1e-12:
                raise GraphParameterError(f"pmf sums to {sum(ps)!r}, not 1")
        elif self.family == "poisson":
            if self.param is None or not self.param >= 0:
                raise GraphParameterError("poisson offspring needs mean >= 0")
        elif self.family == "geometric":
            if self.param is None or not 0 < self.param <= 1:
                raise GraphParameterError("geometric offspring needs p in (0, 1]")
        else:
            raise GraphParameterError(f"unknown offspring family {self.family!r}")

    @classmethod
    def from_pmf(cls, pmf: dict[int, float]) -> "OffspringDistribution":
        return cls(pmf=tuple(sorted((int(k), float(p)) for k, p in pmf.items())))

    @classmethod
    def poisson(cls, mean: float) -> "OffspringDistribution":
        return cls(family="poisson", param=float(mean))

    @classmethod
    def geometric(cls, p: float) -> "OffspringDistribution":
        return cls(family="geometric", param=float(p))

    @property
    def mean(self) -> float:
        if self.pmf is not None:
            return float(sum(k * p for k, p in self.pmf))
        if self.family == "poisson":
            return float(self.param)
        return (1.0 - self.param) / self.param

    def sample(self, rng: np.random.Generator) -> int:
        if self.pmf is not None:
            u = rng.random()
            acc = 0.0
            for k, p in self.pmf:
                acc += p
                if u < acc:
                    return k
            return self.pmf[-1][0]
        if self.family == "poisson":
            return int(rng.poisson(self.param))
        return int(rng.geometric(self.param)) - 1


@dataclass(frozen=True)
class GraphSpec:
    """Family name, family parameters and seed for :func:`build`.

    ``multiplicity`` maps canopy height ``n`` to the multiplicity of the
    edges between heights ``n`` and ``n + 1``; default ``4**n``.
    ``levels`` turns the canopy into a finite truncation with heights
    ``0 .. levels - 1``. ``root_height`` is an integer or ``"random"``
    (height ``n`` with probability ``(b - 1) b**-(n + 1)``); when unset
    the infinite canopy is rooted at a leaf and a truncation uniformly.
    """

    family: str
    n: int | None = None
    d: int | None = None
    p: float | None = None
    offspring: OffspringDistribution | None = None
    branching: int = 2
    multiplicity: Callable[[int], int] | None = None
    levels: int | None = None
    root_height: int | str | None = None
    seed: int = 0

    def validate(self) -> None:
        f = self.family
        if f not in FAMILIES:
            raise GraphParameterError(f"unknown graph family {f!r}")
        if f in ("complete", "path", "erdos_renyi"):
            if self.n is None or self.n < 1:
                raise GraphParameterError(f"{f} needs n >= 1")
        if f == "cycle" and (self.n is None or self.n < 3):
            raise GraphParameterError("cycle needs n >= 3")
        if f == "torus":
            if self.d is None or self.d < 1:
                raise GraphParameterError("torus needs d >= 1")
            if self.n is None or self.n < 3:
                raise GraphParameterError("torus needs side length n >= 3")
        if f == "erdos_renyi" and (self.p is None or not 0.0 <= self.p <= 1.0):
            raise GraphParameterError("erdos_renyi needs p in [0, 1]")
        if f == "augmented_gw":
            if self.offspring is None:
                raise GraphParameterError("augmented_gw needs an offspring distribution")
            if not np.isfinite(self.offspring.mean):
                raise GraphParameterError("offspring mean must be finite")
        if f == "parallel_canopy":
            if self.branching < 2:
                raise GraphParameterError("canopy branching must be >= 2")
            if self.levels is not None and self.levels < 1:
                raise GraphParameterError("canopy levels must be >= 1")
            if self.root_height not in (None, "random"):
                if int(self.root_height) < 0:
                    raise GraphParameterError("root_height must be >= 0")
                if self.levels is not None and self.root_height >= self.levels:
                    raise GraphParameterError("root_height outside truncation")

    @property
    def is_finite(self) -> bool:
        if self.family == "augmented_gw":
            return False
        if self.family == "parallel_canopy":
            return self.levels is not None
        return True


def _default_multiplicity(n: int) -> int:
    return 4**n


class RootedGraph:
    """Undirected multigraph with a root at vertex 0.

    ``adj[v]`` maps each neighbour of ``v`` to the edge multiplicity.
    Lazy graphs carry a ``growth`` object and a ``frontier`` of vertices
    whose neighbourhoods are not yet known.
    """

    def __init__(self, adj: list[dict[int, int]], labels: list[Hashable] | None = None,
                 growth: Any = None, frontier: set[int] | None = None):
        self.adj = adj
        self.labels = labels if labels is not None else list(range(len(adj)))
        self.growth = growth
        self.frontier = frontier if frontier is not None else set()
        self.root = 0

    def __repr__(self):
        kind = "lazy" if self.is_lazy else "finite"
        return f"<RootedGraph {kind} |V|={len(self.adj)} frontier={len(self.frontier)}>"

    @property
    def is_lazy(self) -> bool:
        return self.growth is not None

    @property
    def num_vertices(self) -> int:
        return len(self.adj)

    def __len__(self):
        return len(self.adj)

    def degree(self, v: int) -> int:
        if v in self.frontier:
            raise NotMaterializedError(f"vertex {v} is not expanded yet")
        return sum(self.adj[v].values())

    def directed_edges(self, v: int) -> list[tuple[int, int]]:
        if v in self.frontier:
            raise NotMaterializedError(f"vertex {v} is not expanded yet")
        return sorted(self.adj[v].items())

    def multiplicity(self, v: int, w: int) -> int:
        return self.adj[v].get(w, 0)

    def edges(self) -> list[tuple[int, int, int]]:
        """Undirected edges ``(v, w, m)`` with ``v < w``, sorted."""
        return sorted((v, w, m) for v, nb in enumerate(self.adj) for w, m in nb.items() if v < w)

    def degrees(self) -> np.ndarray:
        if self.frontier:
            raise NotMaterializedError("lazy graph has unexpanded vertices")
        return np.array([sum(nb.values()) for nb in self.adj], dtype=np.int64)

    def extend(self, v: int) -> None:
        if self.growth is None:
            raise GraphUsageError("extend() called on a finite graph")
        if v not in self.frontier:
            return
        self.frontier.discard(v)
        self.growth.expand(self, v)

    def add_vertex(self, label: Hashable, lazy: bool = False) -> int:
        v = len(self.adj)
        self.adj.append({})
        self.labels.append(label)
        if lazy:
            self.frontier.add(v)
        return v

    def add_edge(self, v: int, w: int, m: int = 1) -> None:
        if v == w:
            raise GraphParameterError("self-loops are not allowed")
        self.adj[v][w] = self.adj[v].get(w, 0) + m
        self.adj[w][v] = self.adj[w].get(v, 0) + m

    def rate_matrix(self) -> np.ndarray:
        """Generator of the edge-driven walk (rate ``m(v, w)`` from v to w)."""
        if self.is_lazy:
            raise GraphUsageError("rate matrix needs a finite graph")
        n = len(self.adj)
        q = np.zeros((n, n))
        for v, nb in enumerate(self.adj):
            for w, m in nb.items():
                q[v, w] = m
            q[v, v] = -sum(nb.values())
        return q

    def distances(self) -> np.ndarray:
        """All-pairs graph distances by BFS (``-1`` if unreachable)."""
        n = len(self.adj)
        dist = np.full((n, n), -1, dtype=np.int64)
        for s in range(n):
            dist[s, s] = 0
            queue = deque([s])
            while queue:
                v = queue.popleft()
                for w in self.adj[v]:
                    if dist[s, w] < 0:
                        dist[s, w] = dist[s, v] + 1
                        queue.append(w)
        return dist

    def is_connected(self) -> bool:
        seen = {0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for w in self.adj[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(self.adj)

    def relabeled(self, order: list[int]) -> "RootedGraph":
        """Copy with old vertex ``order[i]`` renamed to ``i``."""
        if self.is_lazy:
            raise GraphUsageError("cannot relabel a lazy graph")
        new_id = {old: i for i, old in enumerate(order)}
        adj = [{new_id[w]: m for w, m in self.adj[old].items()} for old in order]
        return RootedGraph(adj, [self.labels[old] for old in order])

    def rerooted(self, r: int) -> "RootedGraph":
        """Copy rooted at old vertex ``r`` (ids of ``0`` and ``r`` swapped)."""
        order = list(range(len(self.adj)))
        order[0], order[r] = order[r], order[0]
        return self.relabeled(order)


def from_edges(n: int, edges, labels=None) -> RootedGraph:
    """Finite graph on ``0..n-1`` from ``(v, w)`` or ``(v, w, m)`` tuples, rooted at 0."""
    g = RootedGraph([{} for _ in range(n)], labels)
    for e in edges:
        v, w = e[0], e[1]
        m = e[2] if len(e) > 2 else 1
        if m < 1:
            raise GraphParameterError("multiplicities must be positive")
        g.add_edge(v, w, m)
    return g


# ---------------------------------------------------------------------------
# lazy growth rules


def _vertex_rng(seed: int, key: tuple[int, ...]) -> np.random.Generator:
    return np.random.default_rng([_LAZY_SALT, seed % 2**64, len(key), *key])


class _GaltonWatsonGrowth:
    """Children of a vertex are drawn from a substream keyed by its tree address."""

    def __init__(self, offspring: OffspringDistribution, seed: int):
        self.offspring = offspring
        self.seed = seed

    def expand(self, g: RootedGraph, v: int) -> None:
        address = g.labels[v]
        k = self.offspring.sample(_vertex_rng(self.seed, address))
        if v == 0:
            k += 1  # augmented root
        for i in range(k):
            c = g.add_vertex(address + (i,), lazy=True)
            g.add_edge(v, c, 1)


class _CanopyGrowth:
    """Canopy tree seen from below; labels are ``(height, position)``.

    Vertex ``(h, j)`` has parent ``(h + 1, j // b)`` and, for ``h >= 1``,
    children ``(h - 1, j * b + i)``.
    """

    def __init__(self, branching: int, multiplicity: Callable[[int], int]):
        self.branching = branching
        self.multiplicity = multiplicity
        self.index: dict[tuple[int, int], int] = {}

    def _vertex(self, g: RootedGraph, label: tuple[int, int]) -> tuple[int, bool]:
        v = self.index.get(label)
        if v is not None:
            return v, False
        v = g.add_vertex(label, lazy=True)
        self.index[label] = v
        return v, True

    def expand(self, g: RootedGraph, v: int) -> None:
        h, j = g.labels[v]
        b = self.branching
        parent, new = self._vertex(g, (h + 1, j // b))
        if new:
            g.add_edge(v, parent, int(self.multiplicity(h)))
        if h >= 1:
            m = int(self.multiplicity(h - 1))
            for i in range(b):
                c, new = self._vertex(g, (h - 1, j * b + i))
                if new:
                    g.add_edge(v, c, m)


# ---------------------------------------------------------------------------
# builders


def _root_uniformly(g: RootedGraph, rng: np.random.Generator) -> RootedGraph:
    r = int(rng.integers(len(g.adj)))
    return g.rerooted(r) if r else g


def _complete(n):
    return from_edges(n, [(v, w) for v in range(n) for w in range(v + 1, n)])


def _cycle(n):
    return from_edges(n, [(v, (v + 1) % n) for v in range(n)])


def _path(n):
    return from_edges(n, [(v, v + 1) for v in range(n - 1)])


def _torus(d, n):
    coords = list(product(range(n), repeat=d))
    index = {c: i for i, c in enumerate(coords)}
    edges = []
    for c in coords:
        for axis in range(d):
            nxt = list(c)
            nxt[axis] = (nxt[axis] + 1) % n
            edges.append((index[c], index[tuple(nxt)]))
    return from_edges(len(coords), edges, labels=coords)


def _erdos_renyi(n, p, rng):
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    g = from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()))
    root = int(rng.integers(n))
    order = [root]
    seen = {root}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in sorted(g.adj[v]):
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    return g.relabeled(order)


def _canopy_root_height(spec: GraphSpec, rng: np.random.Generator) -> int:
    if spec.root_height is None:
        return 0
    if spec.root_height != "random":
        return int(spec.root_height)
    b = spec.branching
    top = spec.levels if spec.levels is not None else None
    # fraction of canopy vertices at height n is (b - 1) b^-(n + 1)
    h = int(rng.geometric(1.0 - 1.0 / b)) - 1
    if top is not None:
        while h >= top:
            h = int(rng.geometric(1.0 - 1.0 / b)) - 1
    return h


def _canopy_truncation(levels, b, mult):
    # heights 0..levels-1, single vertex at the top
    labels = []
    index = {}
    for h in range(levels - 1, -1, -1):
        for j in range(b ** (levels - 1 - h)):
            index[(h, j)] = len(labels)
            labels.append((h, j))
    edges = []
    for (h, j), v in index.items():
        if h + 1 < levels:
            edges.append((v, index[(h + 1, j // b)], int(mult(h))))
    return from_edges(len(labels), edges, labels=labels)


def build(spec: GraphSpec) -> RootedGraph:
    """Build a rooted graph from ``spec``.

    Finite families are rooted uniformly at random with ``spec.seed``;
    Erdos-Renyi returns the connected component of the sampled root.
    Lazy families come back with only the root expanded.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed % 2**64)
    f = spec.family
    if f == "complete":
        return _root_uniformly(_complete(spec.n), rng)
    if f == "cycle":
        return _root_uniformly(_cycle(spec.n), rng)
    if f == "path":
        return _root_uniformly(_path(spec.n), rng)
    if f == "torus":
        return _root_uniformly(_torus(spec.d, spec.n), rng)
    if f == "erdos_renyi":
        return _erdos_renyi(spec.n, spec.p, rng)
    mult = spec.multiplicity or _default_multiplicity
    if f == "parallel_canopy" and spec.levels is not None:
        g = _canopy_truncation(spec.levels, spec.branching, mult)
        if spec.root_height is None:
            return _root_uniformly(g, rng)
        h = _canopy_root_height(spec, rng)
        candidates = [v for v, lab in enumerate(g.labels) if lab[0] == h]
        return g.rerooted(candidates[int(rng.integers(len(candidates)))])
    if f == "augmented_gw":
        g = RootedGraph([{}], labels=[()], growth=_GaltonWatsonGrowth(spec.offspring, spec.seed),
                        frontier={0})
    else:
        h = _canopy_root_height(spec, rng)
        growth = _CanopyGrowth(spec.branching, mult)
        growth.index[(h, 0)] = 0
        g = RootedGraph([{}], labels=[(h, 0)], growth=growth, frontier={0})
    g.extend(0)
    return g


def degree(g: RootedGraph, v: int) -> int:
    return g.degree(v)


def directed_edges(g: RootedGraph, v: int) -> list[tuple[int, int]]:
    return g.directed_edges(v)


def extend(g: RootedGraph, v: int) -> None:
    g.extend(v)


@dataclass
class GraphFamily:
    """Per-replica graph sampler.

    ``annealed`` families resample the graph (and root) per replica from
    ``spec``; a quenched family wraps one fixed graph. Deterministic
    finite families are built once and only re-rooted per replica.
    """

    spec: GraphSpec | None = None
    graph: RootedGraph | None = None
    reroot: bool = True
    _base: RootedGraph | None = field(default=None, repr=False)

    @classmethod
    def fixed(cls, g: RootedGraph) -> "GraphFamily":
        return cls(graph=g, reroot=False)

    @property
    def annealed(self) -> bool:
        return self.graph is None

    @property
    def is_finite(self) -> bool:
        return self.spec.is_finite if self.graph is None else not self.graph.is_lazy

    def sample(self, rng: np.random.Generator) -> RootedGraph:
        if self.graph is not None:
            return self.graph
        if self.spec.family in ("complete", "cycle", "path", "torus") or (
            self.spec.family == "parallel_canopy" and self.spec.levels is not None
            and self.spec.root_height is None
        ):
            if self._base is None:
                self._base = build(self.spec)
            if not self.reroot:
                return self._base
            r = int(rng.integers(self._base.num_vertices))
            return self._base.rerooted(r) if r else self._base
        seed = int(rng.integers(2**63))
        return build(replace(self.spec, seed=seed))

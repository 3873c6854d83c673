"""Graphical representation: Poisson arrows on directed edges over [0, T].

An edge of multiplicity ``m`` carries one Poisson process of rate ``m``
in each direction. Events are pre-sampled so that coalescing walks and
both voter constructions can read the same randomness.
"""
from __future__ import annotations

from bisect import bisect_right

import numpy as np

from .graph import GraphUsageError, RootedGraph

__all__ = ["ArrowField", "sample", "trace_theta"]


class ArrowField:
    """Sorted arrow events on the directed edges of a finite graph.

    ``times``, ``src`` and ``dst`` hold the global event order: sorted by
    time, ties broken by the directed edge ``(src, dst)``.
    """

    def __init__(self, num_vertices: int, T: float, times: np.ndarray, src: np.ndarray,
                 dst: np.ndarray, seed=None):
        self.num_vertices = num_vertices
        self.T = float(T)
        self.times = times
        self.src = src
        self.dst = dst
        self.seed = seed
        self._out = None

    def __len__(self):
        return len(self.times)

    def __repr__(self):
        return f"<ArrowField |V|={self.num_vertices} T={self.T} events={len(self.times)}>"

    @classmethod
    def from_events(cls, g: RootedGraph, T: float, events) -> "ArrowField":
        """Hand-made field from ``((v, w), s)`` pairs; edges must exist in ``g``."""
        rows = []
        for (v, w), s in events:
            if w not in g.adj[v]:
                raise ValueError(f"({v}, {w}) is not an edge of the graph")
            if not 0.0 <= s <= T:
                raise ValueError(f"event time {s} outside [0, {T}]")
            rows.append((float(s), v, w))
        rows.sort()
        times = np.array([r[0] for r in rows], dtype=float)
        src = np.array([r[1] for r in rows], dtype=np.int64)
        dst = np.array([r[2] for r in rows], dtype=np.int64)
        return cls(g.num_vertices, T, times, src, dst)

    @property
    def events(self) -> dict[tuple[int, int], np.ndarray]:
        """Per directed edge, the strictly increasing event times."""
        out: dict[tuple[int, int], list[float]] = {}
        for s, v, w in zip(self.times.tolist(), self.src.tolist(), self.dst.tolist()):
            out.setdefault((v, w), []).append(s)
        return {e: np.array(ts) for e, ts in sorted(out.items())}

    def event_list(self) -> list[tuple[float, int, int]]:
        return list(zip(self.times.tolist(), self.src.tolist(), self.dst.tolist()))

    def out_events(self, v: int) -> tuple[list[float], list[int]]:
        """Times and targets of arrows leaving ``v``, in time order."""
        if self._out is None:
            out_t = [[] for _ in range(self.num_vertices)]
            out_w = [[] for _ in range(self.num_vertices)]
            for s, a, b in zip(self.times.tolist(), self.src.tolist(), self.dst.tolist()):
                out_t[a].append(s)
                out_w[a].append(b)
            self._out = (out_t, out_w)
        return self._out[0][v], self._out[1][v]

    def check_graph(self, g: RootedGraph) -> None:
        if g.is_lazy or g.num_vertices != self.num_vertices:
            raise GraphUsageError("arrow field was not sampled on this graph")


def _directed_edge_arrays(g: RootedGraph):
    cache = getattr(g, "_directed_cache", None)
    if cache is None:
        pairs = sorted((v, w, m) for v, nb in enumerate(g.adj) for w, m in nb.items())
        src = np.array([p[0] for p in pairs], dtype=np.int64)
        dst = np.array([p[1] for p in pairs], dtype=np.int64)
        rate = np.array([p[2] for p in pairs], dtype=float)
        cache = (src, dst, rate)
        g._directed_cache = cache
    return cache


def sample(g: RootedGraph, T: float, seed=None) -> ArrowField:
    """Sample independent Poisson arrows of rate ``m(v, w)`` on each directed edge.

    ``seed`` is anything accepted by :func:`numpy.random.default_rng`.
    """
    if g.is_lazy:
        raise GraphUsageError(
            "arrow fields need a finite graph; use voter.run_cluster on lazy graphs")
    if T < 0:
        raise ValueError("horizon must be nonnegative")
    rng = np.random.default_rng(seed)
    src, dst, rate = _directed_edge_arrays(g)
    if T == 0 or len(src) == 0:
        empty = np.empty(0)
        return ArrowField(g.num_vertices, T, empty, empty.astype(np.int64),
                          empty.astype(np.int64), seed)
    counts = rng.poisson(rate * T)
    edge = np.repeat(np.arange(len(src)), counts)
    times = rng.random(edge.size) * T
    # directed edges are enumerated lexicographically, so the secondary key
    # implements the (v, w) tie-break
    order = np.lexsort((edge, times))
    edge = edge[order]
    return ArrowField(g.num_vertices, T, times[order], src[edge], dst[edge],
                      seed if isinstance(seed, (int, np.integer)) else None)


def trace_theta(a: ArrowField, v: int, s: float, t: float) -> int:
    """Position at time ``t`` of a particle dropped at ``(v, s)``.

    The particle follows every arrow leaving its current site at times in
    ``(s, t]``.
    """
    if not 0.0 <= s <= t <= a.T:
        raise ValueError(f"need 0 <= s <= t <= T, got s={s}, t={t}, T={a.T}")
    cur = v
    now = s
    while True:
        times, targets = a.out_events(cur)
        i = bisect_right(times, now)
        if i == len(times) or times[i] > t:
            return cur
        now = times[i]
        cur = targets[i]

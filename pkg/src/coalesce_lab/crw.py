"""Coalescing random walk driven by an arrow field, plus the sticky coupling.

:func:`run_crw` sweeps the global event order once. Walkers sharing a
site form one class of a union-find structure over starting vertices, so
an arrow ``(v, w)`` moves the whole class at ``v`` and merges it with the
class already at ``w``.

:func:`run_coupled` builds the two particle systems used to bound the
number of walkers coalesced with a distinguished walk ``X``: a sticky
system where walkers freeze onto ``X`` once they meet it, and a modified
system that additionally ignores every arrow pointing at the current
position of ``X``.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from . import arrows as _arrows
from .graph import GraphUsageError, RootedGraph

__all__ = [
    "UnionFind",
    "Snapshot",
    "CoalescenceTrace",
    "Censored",
    "CoupledTrace",
    "run_crw",
    "sigma",
    "run_coupled",
    "walk_positions",
]


class UnionFind:
    """Disjoint sets over ``0..n-1`` with union by size and path halving."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> int:
        """Merge the classes of ``a`` and ``b``; returns the new representative."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra

    def classes(self) -> list[frozenset[int]]:
        groups: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            groups.setdefault(self.find(x), []).append(x)
        return sorted((frozenset(g) for g in groups.values()), key=min)


@dataclass
class Snapshot:
    time: float
    counts: dict[int, int]  # occupied site -> number of walkers there

    @property
    def occupied(self) -> frozenset[int]:
        return frozenset(self.counts)


@dataclass(frozen=True)
class Censored:
    """No visit observed up to the horizon: the hitting time exceeds ``horizon``."""

    horizon: float


@dataclass
class CoalescenceTrace:
    T: float
    root: int
    num_vertices: int
    partition: UnionFind
    position: dict[int, int]  # class representative -> site at time T
    snapshots: list[Snapshot] = field(default_factory=list)
    root_visits: list[tuple[float, float]] = field(default_factory=list)

    def final_position(self, v: int) -> int:
        """Site at time ``T`` of the walker that started at ``v``."""
        return self.position[self.partition.find(v)]

    def class_size(self, v: int) -> int:
        return self.partition.size[self.partition.find(v)]

    def classes(self) -> list[frozenset[int]]:
        return self.partition.classes()

    def occupied_final(self) -> frozenset[int]:
        return frozenset(self.position.values())


def run_crw(g: RootedGraph, a: _arrows.ArrowField, snapshots=()) -> CoalescenceTrace:
    """Run coalescing random walk with one walker per vertex at time 0.

    ``snapshots`` are times in ``[0, a.T]`` at which the occupied sites
    and their walker counts are recorded. Root occupancy is tracked
    exactly as a list of ``[enter, leave)`` intervals.
    """
    a.check_graph(g)
    T = a.T
    snaps = sorted(float(s) for s in snapshots)
    if snaps and (snaps[0] < 0 or snaps[-1] > T):
        raise ValueError("snapshot times must lie in [0, T]")
    n = g.num_vertices
    uf = UnionFind(n)
    parent = uf.parent
    size = uf.size
    occ = list(range(n))  # site -> class representative or -1
    root = g.root
    visits = []
    entered = 0.0
    recorded: list[Snapshot] = []
    si = 0
    nsnap = len(snaps)

    def snapshot(t):
        counts = {}
        for site, c in enumerate(occ):
            if c >= 0:
                counts[site] = size[c]
        recorded.append(Snapshot(t, counts))

    for s, v, w in a.event_list():
        while si < nsnap and snaps[si] < s:
            snapshot(snaps[si])
            si += 1
        c = occ[v]
        if c < 0:
            continue
        occ[v] = -1
        d = occ[w]
        if d < 0:
            occ[w] = c
        else:
            # inline union by size; c and d are representatives
            if size[c] < size[d]:
                c, d = d, c
            parent[d] = c
            size[c] += size[d]
            occ[w] = c
        if v == root:
            visits.append((entered, s))
        elif w == root and d < 0:
            entered = s
    while si < nsnap:
        snapshot(snaps[si])
        si += 1
    if occ[root] >= 0:
        visits.append((entered, T))
    position = {c: site for site, c in enumerate(occ) if c >= 0}
    return CoalescenceTrace(T, root, n, uf, position, recorded, visits)


def sigma(trace: CoalescenceTrace, t: float) -> float | Censored:
    """First time ``s >= t`` at which the root is occupied.

    Returns :class:`Censored` when no visit happens in ``[t, T]``.
    """
    if not 0.0 <= t <= trace.T:
        raise ValueError(f"t={t} outside [0, {trace.T}]")
    for start, end in trace.root_visits:
        if start <= t < end or (start <= t and end == trace.T and t == trace.T):
            return t
        if start > t:
            return start
    return Censored(trace.T)


@dataclass
class CoupledTrace:
    """Distinguished walk ``X`` with the sticky and modified particle systems.

    ``N[i, v]`` and ``N_gamma[i, v]`` are particle counts at
    ``snapshot_times[i]``; walkers glued to ``X`` are counted at ``X``.
    """

    T: float
    jump_times: list[float]
    path: list[int]  # path[k] is the position after k jumps
    U_gamma: list[tuple[tuple[int, int], float]]
    snapshot_times: np.ndarray
    N: np.ndarray
    N_gamma: np.ndarray

    @property
    def jump_count(self) -> int:
        return len(self.jump_times)

    def X_at(self, t: float) -> int:
        return self.path[bisect_right(self.jump_times, t)]

    def occupation_integral(self, degrees) -> float:
        """Integral of ``degrees[X_s]`` over ``[0, T]``."""
        edges = [0.0, *self.jump_times, self.T]
        return float(sum(degrees[x] * (edges[k + 1] - edges[k]) for k, x in enumerate(self.path)))


def _walk_path(g: RootedGraph, T: float, rng: np.random.Generator):
    """Jump times and visited sites of the edge-driven walk from the root on [0, T]."""
    times = []
    path = [g.root]
    t = 0.0
    x = g.root
    lazy = g.is_lazy
    while True:
        if lazy and x in g.frontier:
            g.extend(x)
        nb = g.adj[x]
        deg = sum(nb.values())
        if deg == 0:
            break
        t += rng.exponential(1.0 / deg)
        if t > T:
            break
        u = rng.random() * deg
        for w, m in nb.items():
            u -= m
            if u < 0:
                break
        x = w
        times.append(t)
        path.append(x)
    if lazy and x in g.frontier:
        g.extend(x)
    return times, path


def walk_positions(g: RootedGraph, times, rng=None) -> list[int]:
    """Positions of one edge-driven walk from the root at the sorted ``times``.

    Lazy graphs are extended along the way, so every returned vertex
    has a known degree.
    """
    times = list(times)
    if not times:
        return []
    jump_times, path = _walk_path(g, max(times), np.random.default_rng(rng))
    return [path[bisect_right(jump_times, t)] for t in times]


def run_coupled(g: RootedGraph, T: float, snapshots=(), seed=None) -> CoupledTrace:
    """Sample ``X`` from the root, an independent arrow field, and both systems.

    Sticky system: every walker follows arrows until it sits where ``X``
    is, then moves with ``X`` forever. Modified system: same rules, but
    arrows ``((v, w), s)`` with ``X_s = w`` are skipped, so walkers only
    join ``X`` when ``X`` jumps onto them.
    """
    if g.is_lazy:
        raise GraphUsageError("run_coupled needs a finite graph")
    snaps = sorted(float(s) for s in snapshots)
    if snaps and (snaps[0] < 0 or snaps[-1] > T):
        raise ValueError("snapshot times must lie in [0, T]")
    rng = np.random.default_rng(seed)
    jump_times, path = _walk_path(g, T, rng)
    field_ = _arrows.sample(g, T, rng)
    n = g.num_vertices

    free = [1] * n  # sticky system, walkers not attached to X
    free_g = [1] * n  # modified system
    free[g.root] = free_g[g.root] = 0
    stuck = stuck_g = 1
    x = g.root
    k = 0  # jumps of X applied so far
    nj = len(jump_times)
    U_gamma = []
    N = np.zeros((len(snaps), n), dtype=np.int64)
    N_g = np.zeros((len(snaps), n), dtype=np.int64)
    si = 0

    def snapshot(i):
        N[i] = free
        N_g[i] = free_g
        N[i, x] = stuck
        N_g[i, x] = stuck_g

    for s, v, w in field_.event_list():
        while k < nj and jump_times[k] <= s:
            while si < len(snaps) and snaps[si] < jump_times[k]:
                snapshot(si)
                si += 1
            x = path[k + 1]
            stuck += free[x]
            free[x] = 0
            stuck_g += free_g[x]
            free_g[x] = 0
            k += 1
        while si < len(snaps) and snaps[si] < s:
            snapshot(si)
            si += 1
        if w == x:
            U_gamma.append(((v, w), s))
            if free[v]:
                stuck += free[v]
                free[v] = 0
            continue
        if v == x:
            continue
        if free[v]:
            free[w] += free[v]
            free[v] = 0
        if free_g[v]:
            free_g[w] += free_g[v]
            free_g[v] = 0
    while k < nj:
        while si < len(snaps) and snaps[si] < jump_times[k]:
            snapshot(si)
            si += 1
        x = path[k + 1]
        stuck += free[x]
        free[x] = 0
        stuck_g += free_g[x]
        free_g[x] = 0
        k += 1
    while si < len(snaps):
        snapshot(si)
        si += 1
    return CoupledTrace(float(T), jump_times, path, U_gamma, np.array(snaps), N, N_g)

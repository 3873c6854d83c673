"""Voter model: dual (backward) construction, forward sweep, and cluster engine.

The cluster engine follows only the set of vertices holding the root's
opinion. Along every boundary edge of multiplicity ``m`` the outside
endpoint joins at rate ``m`` and the inside endpoint leaves at rate
``m``, so the size performs a +-1 walk with total rate ``2 B`` where
``B`` is the boundary weight. This needs no arrow field and therefore
runs on lazily grown infinite graphs.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from . import arrows as _arrows
from .crw import CoalescenceTrace
from .graph import GraphUsageError, RootedGraph

__all__ = [
    "OpinionState",
    "ClusterTrajectory",
    "dual_voter",
    "forward_voter",
    "cluster_at_root",
    "run_cluster",
]

DEFAULT_SIZE_CAP = 10**6
# boundary weights past this no longer give usable float waiting times;
# only reachable with multiplicities growing along the graph
_MAX_BOUNDARY = 1e300


@dataclass
class OpinionState:
    """``opinion[v]`` is the label (starting vertex) of the opinion held by ``v``."""

    opinion: list[int]
    time: float

    def clusters(self) -> dict[int, frozenset[int]]:
        """Nonempty opinion clusters keyed by label."""
        out: dict[int, set[int]] = {}
        for v, lab in enumerate(self.opinion):
            out.setdefault(lab, set()).add(v)
        return {lab: frozenset(vs) for lab, vs in sorted(out.items())}

    def cluster(self, label: int) -> frozenset[int]:
        return frozenset(v for v, lab in enumerate(self.opinion) if lab == label)

    def size(self, label: int) -> int:
        return sum(1 for lab in self.opinion if lab == label)


def dual_voter(g: RootedGraph, a: _arrows.ArrowField, t: float) -> OpinionState:
    """Voter configuration at time ``t`` for the model started at time ``a.T``.

    Vertex ``w`` holds the opinion of ``Theta_T(w, T - t)``, the endpoint of
    the arrow path from ``(w, T - t)``.
    """
    a.check_graph(g)
    if not 0.0 <= t <= a.T:
        raise ValueError(f"t={t} outside [0, {a.T}]")
    s = a.T - t
    return OpinionState([_arrows.trace_theta(a, w, s, a.T) for w in range(g.num_vertices)], t)


def forward_voter(g: RootedGraph, a: _arrows.ArrowField, t: float) -> OpinionState:
    """Forward voter dynamics: at arrow ``((v, w), s)`` with ``s <= t``, v copies w."""
    a.check_graph(g)
    if not 0.0 <= t <= a.T:
        raise ValueError(f"t={t} outside [0, {a.T}]")
    op = list(range(g.num_vertices))
    stop = int(np.searchsorted(a.times, t, side="right"))
    for v, w in zip(a.src[:stop].tolist(), a.dst[:stop].tolist()):
        op[v] = op[w]
    return OpinionState(op, t)


def cluster_at_root(trace: CoalescenceTrace) -> int:
    """Number of walkers coalesced with the root's walker at the horizon."""
    return trace.class_size(trace.root)


@dataclass
class ClusterTrajectory:
    """Jump-by-jump record of the size of the root's opinion cluster.

    ``sizes`` starts at ``(0.0, 1)``. ``absorbed`` is set when the size
    hits 0 or the cluster covers a finite graph; ``capped`` when the run
    stopped early at ``size_cap`` or at an unrepresentable jump rate.
    """

    T: float
    sizes: list[tuple[float, int]]
    absorbed: bool = False
    capped: bool = False
    members_at_end: frozenset[int] | None = None

    def __post_init__(self):
        self._times = [s[0] for s in self.sizes]

    @property
    def final_size(self) -> int:
        return self.sizes[-1][1]

    @property
    def extinct(self) -> bool:
        return self.sizes[-1][1] == 0

    @property
    def extinction_time(self) -> float | None:
        return self.sizes[-1][0] if self.extinct else None

    @property
    def stop_time(self) -> float:
        """Time up to which the trajectory is known."""
        if self.capped:
            return self.sizes[-1][0]
        return self.T

    def size_at(self, t: float) -> int:
        if t > self.stop_time:
            raise ValueError(f"trajectory stopped at {self.stop_time} (capped)")
        return self.sizes[bisect_right(self._times, t) - 1][1]


class _WeightTree:
    """Fenwick tree over slots with dynamic capacity, for weighted picks."""

    def __init__(self, capacity: int = 16):
        self.cap = 1
        while self.cap < capacity:
            self.cap *= 2
        self.tree = [0] * (self.cap + 1)
        self.w = [0] * self.cap

    def grow(self):
        old = self.w
        self.cap *= 2
        self.w = old + [0] * (self.cap - len(old))
        tree = [0] * (self.cap + 1)
        for i, x in enumerate(self.w, 1):
            tree[i] += x
            j = i + (i & -i)
            if j <= self.cap:
                tree[j] += tree[i]
        self.tree = tree

    def add(self, i: int, delta: int):
        self.w[i] += delta
        tree = self.tree
        i += 1
        cap = self.cap
        while i <= cap:
            tree[i] += delta
            i += i & -i

    def find(self, target: float) -> int:
        """Smallest slot whose prefix sum exceeds ``target``."""
        pos = 0
        tree = self.tree
        step = self.cap
        while step:
            nxt = pos + step
            if nxt <= self.cap and tree[nxt] <= target:
                pos = nxt
                target -= tree[nxt]
            step >>= 1
        return pos


_BATCH = 256


def run_cluster(g: RootedGraph, T: float, size_cap: int = DEFAULT_SIZE_CAP, seed=None,
                record_members: bool = False) -> ClusterTrajectory:
    """Simulate the root's opinion cluster from ``{root}`` up to time ``T``.

    Lazy graphs are extended whenever a frontier vertex joins the
    cluster. The run stops at ``T``, at extinction, when the cluster
    swallows a finite graph, or when the size reaches ``size_cap``. A run
    whose boundary weight exceeds 1e300 is also stopped and marked capped.
    """
    if size_cap < 1:
        raise ValueError("size_cap must be >= 1")
    if T < 0:
        raise ValueError("horizon must be nonnegative")
    rng = np.random.default_rng(seed)
    adj = g.adj
    lazy = g.is_lazy
    frontier = g.frontier
    root = g.root
    if lazy and root in frontier:
        g.extend(root)

    slot: dict[int, int] = {root: 0}
    slot_vertex = [root]
    free_slots: list[int] = []
    tree = _WeightTree()
    B = sum(adj[root].values())
    tree.add(0, B)
    size = 1
    t = 0.0
    sizes = [(0.0, 1)]
    absorbed = capped = False

    expo: list[float] = []
    unif: list[float] = []
    k = _BATCH

    while True:
        if B == 0:
            absorbed = True
            break
        if size >= size_cap or B > _MAX_BOUNDARY:
            capped = True
            break
        if k == _BATCH:
            expo = rng.standard_exponential(_BATCH).tolist()
            unif = rng.random(2 * _BATCH).tolist()
            k = 0
        t += expo[k] / (2 * B)
        if t > T:
            break
        u_coin = unif[2 * k]
        target = unif[2 * k + 1] * B
        k += 1
        i = tree.find(target if target < B else B - 1)
        v = slot_vertex[i]
        if u_coin < 0.5:
            # choose an outside neighbour of v with weight m(v, w)
            r = (target - _prefix(tree, i)) if i else target
            w = None
            for cand, m in adj[v].items():
                if cand in slot:
                    continue
                r -= m
                w = cand
                if r < 0:
                    break
            if lazy and w in frontier:
                g.extend(w)
            bw = 0
            for u, m in adj[w].items():
                j = slot.get(u)
                if j is None:
                    bw += m
                else:
                    tree.add(j, -m)
                    B -= m
            if free_slots:
                j = free_slots.pop()
                slot_vertex[j] = w
            else:
                j = len(slot_vertex)
                if j >= tree.cap:
                    tree.grow()
                slot_vertex.append(w)
            slot[w] = j
            tree.add(j, bw)
            B += bw
            size += 1
        else:
            j = slot.pop(v)
            tree.add(j, -tree.w[j])
            free_slots.append(j)
            for u, m in adj[v].items():
                jj = slot.get(u)
                if jj is None:
                    B -= m
                else:
                    tree.add(jj, m)
                    B += m
            size -= 1
        sizes.append((t, size))
        if size == 0:
            absorbed = True
            break
    members = frozenset(slot) if record_members else None
    return ClusterTrajectory(float(T), sizes, absorbed, capped, members)


def _prefix(tree: _WeightTree, i: int) -> int:
    """Sum of weights in slots ``0 .. i - 1``."""
    s = 0
    t = tree.tree
    while i > 0:
        s += t[i]
        i -= i & -i
    return s

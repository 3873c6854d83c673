"""Exact identity checks and Monte Carlo estimators with confidence intervals.

Every estimator takes a ``family`` (a :class:`GraphSpec`, a
:class:`GraphFamily` or a fixed :class:`RootedGraph`), a replica count
and a seed. Replica ``i`` draws everything it needs from
``default_rng([seed, i])`` so results do not depend on evaluation order.
Specs are annealed (a fresh graph and root per replica); a fixed graph
is quenched.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import stats

from . import arrows as _arrows
from . import crw as _crw
from . import voter as _voter
from .graph import GraphFamily, GraphSpec, RootedGraph

__all__ = [
    "Z99",
    "EstimateReport",
    "MassTransportFn",
    "MTP_CATALOG",
    "InsufficientSamplesError",
    "as_family",
    "replica_rng",
    "check_mtp_exact",
    "check_stationarity_exact",
    "check_duality_pathwise",
    "ClusterSample",
    "sample_cluster_sizes",
    "sample_root_cluster_sizes",
    "sample_voter_sizes",
    "check_martingale",
    "test_size_bias",
    "check_second_moment",
    "check_quenched_survival",
    "check_coupled",
    "estimate_sigma_tail",
    "estimate_opinion_lifetime",
    "check_degree_stationarity",
]

Z99 = 2.5758293035489004  # two-sided 99% normal quantile
MIN_SIZE_BIAS_SAMPLES = 10_000


class InsufficientSamplesError(ValueError):
    """Too few samples for the test to have useful power."""


def replica_rng(seed: int, i: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) % 2**64, i])


def as_family(family) -> GraphFamily:
    if isinstance(family, GraphFamily):
        return family
    if isinstance(family, GraphSpec):
        return GraphFamily(family)
    if isinstance(family, RootedGraph):
        return GraphFamily.fixed(family)
    raise TypeError(f"cannot use {type(family).__name__} as a graph family")


@dataclass
class EstimateReport:
    """Sample mean with a normal-approximation 99% interval."""

    n: int
    mean: float
    variance: float
    ci_low: float
    ci_high: float
    cap_fraction: float = 0.0

    @classmethod
    def from_samples(cls, x, cap_fraction: float = 0.0, z: float = Z99) -> "EstimateReport":
        x = np.asarray(x, dtype=float)
        n = x.size
        if n == 0:
            return cls(0, math.nan, math.nan, math.nan, math.nan, cap_fraction)
        mean = float(math.fsum(x) / n)
        var = float(np.var(x, ddof=1)) if n > 1 else 0.0
        half = z * math.sqrt(var / n)
        return cls(n, mean, var, mean - half, mean + half, cap_fraction)

    @property
    def stderr(self) -> float:
        return math.sqrt(self.variance / self.n) if self.n else math.nan

    def within(self, target: float, k: float = 3.0) -> bool:
        """``|mean - target| <= k`` standard errors (exact match if the variance is 0)."""
        return abs(self.mean - target) <= k * self.stderr + 1e-12


# ---------------------------------------------------------------------------
# exact checks


@dataclass(frozen=True)
class MassTransportFn:
    """Catalog mass-transport function ``f(G, u, x) >= 0``.

    adjacency: 1(x ~ u); degree_weighted_adjacency: deg(x) 1(x ~ u);
    distance_k: 1(dist(u, x) = k); degree_at_target: deg(x).
    """

    name: str
    k: int = 1

    def matrix(self, g: RootedGraph) -> np.ndarray:
        n = g.num_vertices
        if self.name == "adjacency":
            a = np.zeros((n, n))
            for v, nb in enumerate(g.adj):
                a[v, list(nb)] = 1.0
            return a
        if self.name == "degree_weighted_adjacency":
            a = MassTransportFn("adjacency").matrix(g)
            return a * g.degrees()[None, :]
        if self.name == "distance_k":
            return (g.distances() == self.k).astype(float)
        if self.name == "degree_at_target":
            return np.tile(g.degrees().astype(float), (n, 1))
        raise ValueError(f"unknown mass-transport function {self.name!r}")

    def __call__(self, g: RootedGraph, u: int, x: int) -> float:
        return float(self.matrix(g)[u, x])


MTP_CATALOG = (
    MassTransportFn("adjacency"),
    MassTransportFn("degree_weighted_adjacency"),
    MassTransportFn("distance_k", k=2),
    MassTransportFn("degree_at_target"),
)


def check_mtp_exact(g: RootedGraph, f: MassTransportFn | Callable) -> tuple[float, float, bool]:
    """Expected mass sent and received by a uniformly chosen vertex.

    Returns ``(lhs, rhs, pass)`` with lhs the average of
    ``sum_x f(G, u, x)`` over ``u`` and rhs the average of
    ``sum_x f(G, x, u)``.
    """
    n = g.num_vertices
    if isinstance(f, MassTransportFn):
        F = f.matrix(g)
    else:
        F = np.array([[f(g, u, x) for x in range(n)] for u in range(n)], dtype=float)
    if (F < 0).any():
        raise ValueError("mass-transport functions must be nonnegative")
    lhs = math.fsum(math.fsum(row) for row in F.tolist()) / n
    rhs = math.fsum(math.fsum(col) for col in F.T.tolist()) / n
    return lhs, rhs, abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


def check_stationarity_exact(g: RootedGraph) -> bool:
    """Uniform measure is stationary and reversible for the edge-driven walk."""
    q = g.rate_matrix()
    n = q.shape[0]
    flow = np.full(n, 1.0 / n) @ q
    return bool(np.all(np.abs(flow) <= 1e-9) and np.array_equal(q, q.T))


def check_duality_pathwise(g: RootedGraph, a: _arrows.ArrowField) -> bool:
    """Dual voter clusters at ``t = T`` equal the CRW classes grouped by final site."""
    dual = _voter.dual_voter(g, a, a.T)
    trace = _crw.run_crw(g, a)
    return all(dual.opinion[w] == trace.final_position(w) for w in range(g.num_vertices))


# ---------------------------------------------------------------------------
# replica samplers


@dataclass
class ClusterSample:
    """Cluster sizes of the root's opinion at ``times`` for each replica.

    Capped replicas have size ``-1`` at times after they stopped.
    ``lifetime[i]`` is ``min(extinction time, times[-1])`` and NaN for
    capped replicas.
    """

    times: np.ndarray
    sizes: np.ndarray
    capped: np.ndarray
    root_degree: np.ndarray
    lifetime: np.ndarray

    @property
    def cap_fraction(self) -> float:
        return float(self.capped.mean()) if self.capped.size else 0.0

    def column(self, j: int) -> np.ndarray:
        """Sizes at ``times[j]`` from replicas that were not capped."""
        return self.sizes[~self.capped, j]


def sample_cluster_sizes(family, times, replicas: int, seed: int = 0,
                         size_cap: int = _voter.DEFAULT_SIZE_CAP) -> ClusterSample:
    fam = as_family(family)
    times = np.asarray(sorted(float(t) for t in times))
    T = float(times[-1])
    sizes = np.full((replicas, len(times)), -1, dtype=np.int64)
    capped = np.zeros(replicas, dtype=bool)
    root_degree = np.zeros(replicas)
    lifetime = np.full(replicas, np.nan)
    tl = times.tolist()
    for i in range(replicas):
        rng = replica_rng(seed, i)
        g = fam.sample(rng)
        root_degree[i] = g.degree(g.root)
        traj = _voter.run_cluster(g, T, size_cap=size_cap, seed=rng)
        if traj.capped:
            capped[i] = True
            stop = traj.stop_time
            sizes[i] = [traj.size_at(t) if t <= stop else -1 for t in tl]
            continue
        sizes[i] = [traj.size_at(t) for t in tl]
        ext = traj.extinction_time
        lifetime[i] = T if ext is None else min(ext, T)
    return ClusterSample(times, sizes, capped, root_degree, lifetime)


def sample_root_cluster_sizes(family, t: float, replicas: int, seed: int = 0) -> np.ndarray:
    """Size of the cluster currently containing the root, via CRW duality."""
    fam = as_family(family)
    out = np.empty(replicas, dtype=np.int64)
    for i in range(replicas):
        rng = replica_rng(seed, i)
        g = fam.sample(rng)
        trace = _crw.run_crw(g, _arrows.sample(g, t, rng))
        out[i] = _voter.cluster_at_root(trace)
    return out


def sample_voter_sizes(family, t: float, replicas: int, seed: int = 0,
                       method: str = "dual") -> np.ndarray:
    """``|zeta_t^rho|`` from arrow fields, by the dual or the forward construction."""
    fam = as_family(family)
    run = {"dual": _voter.dual_voter, "forward": _voter.forward_voter}[method]
    out = np.empty(replicas, dtype=np.int64)
    for i in range(replicas):
        rng = replica_rng(seed, i)
        g = fam.sample(rng)
        out[i] = run(g, _arrows.sample(g, t, rng), t).size(g.root)
    return out


# ---------------------------------------------------------------------------
# statistical checks


@dataclass
class MomentRow:
    t: float
    estimate: EstimateReport
    passed: bool
    bound: float = math.nan
    mean_degree: float = math.nan
    inconclusive: bool = False


def check_martingale(family, t_grid, replicas: int, seed: int = 0,
                     size_cap: int = _voter.DEFAULT_SIZE_CAP,
                     sample: ClusterSample | None = None) -> list[MomentRow]:
    """Mean cluster size equals 1 within 3 standard errors at each ``t``."""
    cs = sample or sample_cluster_sizes(family, t_grid, replicas, seed, size_cap)
    rows = []
    for j, t in enumerate(cs.times.tolist()):
        est = EstimateReport.from_samples(cs.column(j), cs.cap_fraction)
        rows.append(MomentRow(t, est, est.within(1.0), inconclusive=cs.cap_fraction >= 1e-3))
    return rows


def check_second_moment(family, t_grid, replicas: int, seed: int = 0,
                        bound_coefficient: float = 2.0,
                        size_cap: int = _voter.DEFAULT_SIZE_CAP,
                        sample: ClusterSample | None = None) -> list[MomentRow]:
    """One-sided test of ``E|zeta_t|^2 <= 1 + c t E[deg(rho)]`` (default ``c = 2``).

    Passes at ``t`` iff the lower 99% bound of the second-moment estimate
    is at most the bound; ``E[deg(rho)]`` is estimated from the same
    replicas' root degrees.
    """
    cs = sample or sample_cluster_sizes(family, t_grid, replicas, seed, size_cap)
    mean_deg = float(math.fsum(cs.root_degree) / len(cs.root_degree))
    rows = []
    for j, t in enumerate(cs.times.tolist()):
        x = cs.column(j).astype(float)
        est = EstimateReport.from_samples(x * x, cs.cap_fraction)
        bound = 1.0 + bound_coefficient * t * mean_deg
        passed = est.ci_low <= bound + 1e-12
        rows.append(MomentRow(t, est, passed, bound, mean_deg, cs.cap_fraction > 0.01))
    return rows


@dataclass
class SurvivalRow:
    t: float
    survival: EstimateReport
    second_moment: EstimateReport
    reciprocal: float
    reciprocal_upper: float
    passed: bool


def check_quenched_survival(g: RootedGraph, t_grid, replicas: int, seed: int = 0,
                            slack: float = 0.0) -> list[SurvivalRow]:
    """On a fixed finite graph, ``P(|zeta_t| > 0) >= 1 / E|zeta_t|^2``.

    Passes at ``t`` iff the lower 99% bound of the survival probability is
    at least the upper 99% bound of the reciprocal second moment minus
    ``slack``.
    """
    cs = sample_cluster_sizes(GraphFamily.fixed(g), t_grid, replicas, seed)
    rows = []
    for j, t in enumerate(cs.times.tolist()):
        x = cs.column(j).astype(float)
        surv = EstimateReport.from_samples(x > 0)
        sm = EstimateReport.from_samples(x * x)
        recip = 1.0 / sm.mean
        recip_up = 1.0 / sm.ci_low if sm.ci_low > 0 else math.inf
        rows.append(SurvivalRow(t, surv, sm, recip, recip_up,
                                surv.ci_low >= recip_up - slack - 1e-12))
    return rows


@dataclass
class SizeBiasReport:
    tv: float
    threshold: float
    passed: bool
    n: np.ndarray  # bin labels; the last bin (n_max + 1) holds everything above n_max
    p_hat_at_root: np.ndarray
    n_times_q_hat: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray


def test_size_bias(sizes_root_opinion, sizes_at_root, n_max: int = 50, alpha: float = 0.01,
                   n_boot: int = 2000, seed: int = 0) -> SizeBiasReport:
    """Compare the law of the root's cluster with the size-biased opinion-cluster law.

    The statistic is the total-variation distance between the empirical
    pmf of ``sizes_at_root`` and ``n * q_hat(n)`` (``q_hat`` the pmf of
    ``sizes_root_opinion``, not renormalized), on bins ``1..n_max`` plus an
    overflow bin. The rejection threshold is the ``1 - alpha`` quantile of
    the same statistic under a bootstrap from the size-biased null.
    """
    x = np.asarray(sizes_root_opinion, dtype=np.int64)
    y = np.asarray(sizes_at_root, dtype=np.int64)
    if min(x.size, y.size) < MIN_SIZE_BIAS_SAMPLES:
        raise InsufficientSamplesError(
            f"size-bias test needs >= {MIN_SIZE_BIAS_SAMPLES} samples per side for useful "
            f"power (got {x.size} and {y.size})")
    vals = np.unique(np.concatenate([x, y]))
    bins = np.minimum(vals, n_max + 1)  # 0 stays in bin 0, compared on both sides
    nb = n_max + 2
    onehot = np.zeros((vals.size, nb))
    onehot[np.arange(vals.size), bins] = 1.0
    weighted = onehot * vals[:, None]

    cx = np.searchsorted(vals, x)
    cy = np.searchsorted(vals, y)
    qx = np.bincount(cx, minlength=vals.size) / x.size
    py = np.bincount(cy, minlength=vals.size) / y.size
    p_hat = py @ onehot
    nq_hat = qx @ weighted
    tv = 0.5 * float(np.abs(p_hat - nq_hat).sum())

    null = vals * qx
    total = null.sum()
    rng = np.random.default_rng([int(seed) % 2**64, 0x5B])
    if total > 0:
        null = null / total
        bx = rng.multinomial(x.size, qx, size=n_boot) / x.size
        by = rng.multinomial(y.size, null, size=n_boot) / y.size
        tv_boot = 0.5 * np.abs(by @ onehot - bx @ weighted).sum(axis=1)
        threshold = float(np.quantile(tv_boot, 1.0 - alpha))
    else:
        threshold = 0.0
    half = Z99 * np.sqrt(p_hat * (1 - p_hat) / y.size)
    return SizeBiasReport(tv, threshold, tv <= threshold + 1e-12, np.arange(nb), p_hat,
                          nq_hat, p_hat - half, p_hat + half)


test_size_bias.__test__ = False  # not a pytest test


@dataclass
class CoupledReport:
    replicas: int
    violations_domination: int
    violations_conservation: int
    n_at_x: EstimateReport
    bound: float
    u_gamma: EstimateReport
    occupation: EstimateReport
    modified_at_root: EstimateReport
    jump_counts: np.ndarray = field(repr=False)

    @property
    def passed(self) -> bool:
        return (self.violations_domination == 0 and self.violations_conservation == 0
                and self.n_at_x.mean <= self.bound + 3 * self.n_at_x.stderr
                and self.modified_at_root.mean <= 1.0 + 3 * self.modified_at_root.stderr)


def check_coupled(g: RootedGraph, T: float, replicas: int, seed: int = 0,
                  snapshots=None) -> CoupledReport:
    """Run the sticky coupling and collect its pathwise and mean checks.

    The bound on ``E[N_T(X_T)]`` is ``1 + 2 E int_0^T deg(X_s) ds`` with the
    integral estimated from the replicas (exactly ``1 + 2 d T`` on a
    ``d``-regular graph).
    """
    snaps = list(snapshots) if snapshots is not None else list(np.linspace(0, T, 5))
    if snaps[-1] != T:
        snaps.append(T)
    n = g.num_vertices
    degs = g.degrees()
    dom = cons = 0
    n_at_x = np.empty(replicas)
    ug = np.empty(replicas)
    occ = np.empty(replicas)
    mod_root = np.empty(replicas)
    jumps = np.empty(replicas, dtype=np.int64)
    for i in range(replicas):
        tr = _crw.run_coupled(g, T, snaps, seed=replica_rng(seed, i))
        for k, s in enumerate(tr.snapshot_times.tolist()):
            x = tr.X_at(s)
            if tr.N[k].sum() != n or tr.N_gamma[k].sum() != n:
                cons += 1
            mask = np.ones(n, dtype=bool)
            mask[x] = False
            if np.any(tr.N[k][mask] > tr.N_gamma[k][mask]):
                dom += 1
        xT = tr.X_at(T)
        n_at_x[i] = tr.N[-1, xT]
        ug[i] = len(tr.U_gamma)
        occ[i] = tr.occupation_integral(degs)
        mod_root[i] = tr.N_gamma[-1, g.root] if xT != g.root else 0
        jumps[i] = tr.jump_count
    occ_rep = EstimateReport.from_samples(occ)
    return CoupledReport(replicas, dom, cons, EstimateReport.from_samples(n_at_x),
                         1.0 + 2.0 * occ_rep.mean, EstimateReport.from_samples(ug), occ_rep,
                         EstimateReport.from_samples(mod_root), jumps)


def poisson_gof(counts, mean: float) -> float:
    """Chi-square goodness-of-fit p-value of integer ``counts`` against Poisson(mean)."""
    counts = np.asarray(counts)
    n = counts.size
    # pool tails so every expected cell count is at least 5
    kmax = int(counts.max()) + 1
    pmf = stats.poisson.pmf(np.arange(kmax + 1), mean)
    lo, hi = 0, kmax
    while lo < hi and n * stats.poisson.cdf(lo, mean) < 5:
        lo += 1
    while hi > lo and n * stats.poisson.sf(hi - 1, mean) < 5:
        hi -= 1
    if hi <= lo:
        return 1.0
    edges = list(range(lo, hi))
    expected = [n * stats.poisson.cdf(lo, mean)]
    observed = [np.sum(counts <= lo)]
    for k in edges[1:]:
        expected.append(n * pmf[k])
        observed.append(np.sum(counts == k))
    expected.append(n * stats.poisson.sf(hi - 1, mean))
    observed.append(np.sum(counts >= hi))
    expected = np.array(expected)
    observed = np.array(observed, dtype=float)
    if len(expected) < 2:
        return 1.0
    chi2 = float(((observed - expected) ** 2 / expected).sum())
    return float(stats.chi2.sf(chi2, len(expected) - 1))


@dataclass
class SigmaTailReport:
    t: float
    u: np.ndarray
    tail: np.ndarray
    stderr: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    censored_fraction: float
    replicas: int

    @property
    def nonincreasing(self) -> bool:
        return bool(np.all(np.diff(self.tail) <= 0))


def sigma_samples(family, t: float, T: float, replicas: int, seed: int = 0) -> list:
    fam = as_family(family)
    out = []
    for i in range(replicas):
        rng = replica_rng(seed, i)
        g = fam.sample(rng)
        out.append(_crw.sigma(_crw.run_crw(g, _arrows.sample(g, T, rng)), t))
    return out


def estimate_sigma_tail(family, t: float, u_grid, T: float, replicas: int,
                        seed: int = 0) -> SigmaTailReport:
    """Empirical tail ``P(sigma_t(rho) > t + u)`` of the next root visit after ``t``.

    At ``u = 0`` this is the probability that the root is empty at time
    ``t``; for ``u > 0`` strict and non-strict inequalities agree almost
    surely. Censored replicas (no visit up to ``T``) count in every tail.
    """
    u = np.asarray(sorted(float(x) for x in u_grid))
    if t + u[-1] > T:
        raise ValueError("t + max(u_grid) must not exceed the horizon")
    sig = sigma_samples(family, t, T, replicas, seed)
    cens = np.array([isinstance(s, _crw.Censored) for s in sig])
    vals = np.array([math.inf if c else s for s, c in zip(sig, cens)])
    tail = np.array([(vals > t + x).mean() for x in u])
    se = np.sqrt(tail * (1 - tail) / replicas)
    return SigmaTailReport(t, u, tail, se, tail - Z99 * se, tail + Z99 * se,
                           float(cens.mean()), replicas)


@dataclass
class LifetimeReport:
    T_grid: np.ndarray
    survival: list[EstimateReport]
    integral: list[EstimateReport]
    lifetimes: np.ndarray = field(repr=False)
    cap_fraction: float = 0.0

    def increment(self, T1: float, T2: float) -> EstimateReport:
        """Estimate of the integral of the survival curve over ``[T1, T2]``."""
        life = self.lifetimes[~np.isnan(self.lifetimes)]
        return EstimateReport.from_samples(np.minimum(life, T2) - np.minimum(life, T1))

    def slope(self, T1: float, T2: float) -> EstimateReport:
        inc = self.increment(T1, T2)
        w = T2 - T1
        return EstimateReport(inc.n, inc.mean / w, inc.variance / w**2, inc.ci_low / w,
                              inc.ci_high / w)

    def grows(self, T1: float, T2: float, k: float = 3.0) -> bool:
        inc = self.increment(T1, T2)
        return inc.mean > k * inc.stderr


def estimate_opinion_lifetime(family, T_grid, replicas: int, seed: int = 0,
                              size_cap: int = _voter.DEFAULT_SIZE_CAP) -> LifetimeReport:
    """Survival curve ``P(|zeta_t| > 0)`` and its partial integrals on ``T_grid``.

    The partial integral up to ``T`` is estimated without grid error as
    ``E[min(extinction time, T)]``. Capped replicas are excluded and
    reported through ``cap_fraction``.
    """
    cs = sample_cluster_sizes(family, T_grid, replicas, seed, size_cap)
    life = cs.lifetime[~cs.capped]
    surv = [EstimateReport.from_samples(cs.column(j) > 0, cs.cap_fraction)
            for j in range(len(cs.times))]
    integ = [EstimateReport.from_samples(np.minimum(life, T), cs.cap_fraction)
             for T in cs.times.tolist()]
    return LifetimeReport(cs.times, surv, integ, cs.lifetime, cs.cap_fraction)


def check_degree_stationarity(family, t_grid, replicas: int, seed: int = 0) -> list[MomentRow]:
    """``E[deg(X_t)]`` equals ``E[deg(rho)]`` along the edge-driven walk from the root.

    Each row compares ``deg(X_t) - deg(rho)`` with 0 within 3 standard
    errors. Works on lazy families (the walk extends the graph). Augmented
    Galton-Watson trees are stationary for the discrete-time walk, not for
    this one, and show a downward drift when the root degree is random.
    """
    fam = as_family(family)
    times = sorted(float(t) for t in t_grid)
    diffs = np.empty((replicas, len(times)))
    for i in range(replicas):
        rng = replica_rng(seed, i)
        g = fam.sample(rng)
        d0 = g.degree(g.root)
        pos = _crw.walk_positions(g, times, rng)
        diffs[i] = [g.degree(x) - d0 for x in pos]
    rows = []
    for j, t in enumerate(times):
        est = EstimateReport.from_samples(diffs[:, j])
        rows.append(MomentRow(t, est, est.within(0.0)))
    return rows

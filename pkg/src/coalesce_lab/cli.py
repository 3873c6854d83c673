"""``coalesce-lab``: run one experiment from a flat key-value config file.

Config format (UTF-8)::

    # comments start with '#' or ';'
    experiment = size_bias
    T = 1.0
    replicas = 100000
    seed = 7

    [graph]            # optional; prefixes following keys with "graph."
    family = complete
    n = 2

Lists are comma-separated (``t_grid = 1, 2, 4``). An offspring pmf is
written ``graph.pmf = 0:0.5, 2:0.5``. Each run writes one CSV per table
to the output directory, a ``verdict.json`` and a ``run.log`` sidecar
(the only file with a timestamp). Exit code: 0 all checks pass, 2 any
check failed, 3 only inconclusive checks besides passes, 1 config error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import math
import sys
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import arrows, crw, verify, voter
from .graph import GraphFamily, GraphParameterError, GraphSpec, OffspringDistribution, build

__all__ = [
    "EXPERIMENTS",
    "SCHEMA",
    "ConfigError",
    "ExperimentConfig",
    "VerdictSummary",
    "parse_config",
    "run",
    "main",
]

log = logging.getLogger(__name__)

EXPERIMENTS = (
    "crw",
    "voter_forward",
    "voter_dual",
    "cluster",
    "coupled",
    "mtp",
    "stationarity",
    "size_bias",
    "second_moment",
    "quenched_survival",
    "sigma_tail",
    "lifetime",
    "duality_pathwise",
)

_MOMENT_COLUMNS = ["t", "mean", "stderr", "ci_low", "ci_high", "second_moment", "p_survive",
                   "cap_fraction"]

SCHEMA = {
    "crw": {"occupancy.csv": ["t", "mean_occupied", "stderr_occupied", "p_root_occupied",
                              "mean_sigma_observed", "censored_fraction"]},
    "voter_forward": {"sizes.csv": ["t", "size", "frequency"], "moments.csv": _MOMENT_COLUMNS},
    "voter_dual": {"sizes.csv": ["t", "size", "frequency"], "moments.csv": _MOMENT_COLUMNS},
    "cluster": {"moments.csv": _MOMENT_COLUMNS},
    "coupled": {"coupled.csv": ["T", "replicas", "mean_N_at_X", "stderr_N_at_X", "bound",
                                "mean_U_gamma", "stderr_U_gamma", "mean_occupation_integral",
                                "mean_modified_at_root", "domination_violations",
                                "conservation_violations"]},
    "mtp": {"mtp.csv": ["function", "lhs", "rhs", "pass"]},
    "stationarity": {"stationarity.csv": ["n_vertices", "n_edges", "pass"]},
    "size_bias": {"size_bias.csv": ["n", "p_hat_at_root", "n_times_q_hat", "ci_low", "ci_high"],
                  "size_bias_test.csv": ["t", "tv", "threshold", "pass"]},
    "second_moment": {"second_moment.csv": ["t", "second_moment", "ci_low", "ci_high",
                                            "mean_degree", "bound", "status"]},
    "quenched_survival": {"quenched_survival.csv": ["t", "p_survive", "ci_low", "ci_high",
                                                    "second_moment", "reciprocal",
                                                    "reciprocal_upper", "status"]},
    "sigma_tail": {"sigma_tail.csv": ["u", "tail", "stderr", "ci_low", "ci_high"]},
    "lifetime": {"lifetime.csv": ["T", "survival", "survival_stderr", "integral",
                                  "integral_stderr", "cap_fraction"]},
    "duality_pathwise": {"duality.csv": ["replica", "n_vertices", "n_events", "equal"]},
}

_TOP_KEYS = {"experiment", "T", "t_grid", "u_grid", "t", "replicas", "seed", "size_cap", "out",
             "n_max", "bound_coefficient", "slack", "function", "k"}
_GRAPH_KEYS = {"family", "n", "d", "p", "pmf", "offspring", "offspring_param", "branching",
               "multiplicity_base", "levels", "root_height", "seed"}


class ConfigError(ValueError):
    """All validation errors found in a config."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass
class ExperimentConfig:
    experiment: str
    graph: GraphSpec
    T: float = 1.0
    t_grid: tuple[float, ...] = ()
    u_grid: tuple[float, ...] = (0.0,)
    t: float = 0.0
    replicas: int = 100_000
    seed: int = 0
    size_cap: int = voter.DEFAULT_SIZE_CAP
    out: str = "out"
    function: str | None = None
    k: int = 2
    n_max: int = 50
    bound_coefficient: float = 2.0
    slack: float = 0.0
    raw: dict[str, str] = field(default_factory=dict, repr=False)

    @property
    def grid(self) -> tuple[float, ...]:
        return self.t_grid or (self.T,)

    def fingerprint(self) -> str:
        canon = "\n".join(f"{k}={v}" for k, v in sorted(self.raw.items()))
        canon += f"\nseed={self.seed}\nreplicas={self.replicas}"
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _split_lines(text: str) -> dict[str, str]:
    values = {}
    section = ""
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].split(";", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            continue
        if "=" not in line:
            raise ConfigError([f"line {lineno}: expected 'key = value'"])
        key, value = (s.strip() for s in line.split("=", 1))
        if section:
            key = f"{section}.{key}"
        values[key] = value
    return values


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a config; raises :class:`ConfigError` listing every problem."""
    raw = _split_lines(text)
    errors: list[str] = []

    def number(key, kind, default=None):
        if key not in raw:
            return default
        try:
            return kind(raw[key])
        except ValueError:
            errors.append(f"{key}: malformed number {raw[key]!r}")
            return default

    def grid(key):
        if key not in raw:
            return ()
        try:
            return tuple(float(x) for x in raw[key].split(",") if x.strip())
        except ValueError:
            errors.append(f"{key}: malformed list {raw[key]!r}")
            return ()

    for key in raw:
        if key.startswith("graph."):
            if key[6:] not in _GRAPH_KEYS:
                errors.append(f"unknown key {key!r}")
        elif key not in _TOP_KEYS:
            errors.append(f"unknown key {key!r}")

    experiment = raw.get("experiment")
    if experiment is None:
        errors.append("missing experiment")
    elif experiment not in EXPERIMENTS:
        errors.append(f"unknown experiment {experiment!r}")

    T = number("T", float, 1.0)
    if T is not None and not T >= 0:
        errors.append("horizon must be nonnegative")
    if "seed" not in raw:
        log.info("no seed given; using seed = 0")
    seed = number("seed", int, 0)
    replicas = number("replicas", int, 100_000)
    if replicas is not None and replicas < 1:
        errors.append("replicas must be >= 1")
    size_cap = number("size_cap", int, voter.DEFAULT_SIZE_CAP)
    if size_cap is not None and size_cap < 1:
        errors.append("size_cap must be >= 1")
    t_grid = grid("t_grid")
    u_grid = grid("u_grid") or (0.0,)
    t = number("t", float, 0.0)
    if T is not None and T >= 0:
        if any(not 0 <= x <= T for x in t_grid):
            errors.append("t_grid must lie within [0, T]")
        if t is not None and not 0 <= t <= T:
            errors.append("t must lie within [0, T]")
        elif t is not None and any(x < 0 or t + x > T for x in u_grid):
            errors.append("t + u_grid must lie within [0, T]")

    graph_spec = None
    try:
        graph_spec = _graph_spec(raw, seed or 0)
    except (GraphParameterError, ValueError) as exc:
        errors.append(f"graph: {exc}")

    function = raw.get("function")
    if function is not None and function not in {f.name for f in verify.MTP_CATALOG}:
        errors.append(f"unknown mass-transport function {function!r}")

    cfg = None
    if not errors:
        cfg = ExperimentConfig(
            experiment=experiment, graph=graph_spec, T=T, t_grid=t_grid, u_grid=u_grid, t=t,
            replicas=replicas, seed=seed, size_cap=size_cap, out=raw.get("out", "out"),
            function=function, k=number("k", int, 2), n_max=number("n_max", int, 50),
            bound_coefficient=number("bound_coefficient", float, 2.0),
            slack=number("slack", float, 0.0), raw=raw)
    if errors:
        raise ConfigError(errors)
    return cfg


def _graph_spec(raw: dict[str, str], seed: int) -> GraphSpec:
    g = {k[6:]: v for k, v in raw.items() if k.startswith("graph.")}
    if "family" not in g:
        raise GraphParameterError("missing graph.family")
    offspring = None
    if "pmf" in g:
        pmf = {}
        for item in g["pmf"].split(","):
            k, p = item.split(":")
            pmf[int(k)] = float(p)
        offspring = OffspringDistribution.from_pmf(pmf)
    elif "offspring" in g:
        offspring = OffspringDistribution(family=g["offspring"],
                                          param=float(g.get("offspring_param", "nan")))
    mult = None
    if "multiplicity_base" in g:
        base = int(g["multiplicity_base"])
        mult = _PowerMultiplicity(base)
    root_height = g.get("root_height")
    if root_height is not None and root_height != "random":
        root_height = int(root_height)
    spec = GraphSpec(
        family=g["family"],
        n=int(g["n"]) if "n" in g else None,
        d=int(g["d"]) if "d" in g else None,
        p=float(g["p"]) if "p" in g else None,
        offspring=offspring,
        branching=int(g.get("branching", 2)),
        multiplicity=mult,
        levels=int(g["levels"]) if "levels" in g else None,
        root_height=root_height,
        seed=int(g.get("seed", seed)),
    )
    spec.validate()
    return spec


@dataclass(frozen=True)
class _PowerMultiplicity:
    base: int

    def __call__(self, n: int) -> int:
        return self.base**n


@dataclass
class VerdictSummary:
    experiment: str
    fingerprint: str
    checks: dict[str, dict] = field(default_factory=dict)

    def add(self, name: str, status: str | bool, **numbers):
        if isinstance(status, (bool, np.bool_)):
            status = "pass" if status else "fail"
        self.checks[name] = {"status": status, **{k: _jsonable(v) for k, v in numbers.items()}}

    @property
    def status(self) -> str:
        states = {c["status"] for c in self.checks.values()}
        if "fail" in states:
            return "fail"
        if "inconclusive" in states:
            return "inconclusive"
        return "pass"

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "fail": 2, "inconclusive": 3}[self.status]

    def to_json(self) -> str:
        return json.dumps({"experiment": self.experiment, "fingerprint": self.fingerprint,
                           "status": self.status, "checks": self.checks}, indent=2,
                          sort_keys=True)


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    return v


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _write_csv(path: Path, columns: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(x) for x in row])


def _subseed(seed: int, k: int) -> int:
    return int(np.random.SeedSequence([int(seed) % 2**64, k]).generate_state(1, np.uint64)[0])


# ---------------------------------------------------------------------------
# experiments; each returns {filename: rows} and fills the summary


def _moment_rows(times, cs: verify.ClusterSample):
    rows = []
    for j, t in enumerate(times):
        x = cs.column(j).astype(float)
        est = verify.EstimateReport.from_samples(x)
        rows.append([t, est.mean, est.stderr, est.ci_low, est.ci_high,
                     float(np.mean(x * x)), float(np.mean(x > 0)), cs.cap_fraction])
    return rows


def _exp_crw(cfg, summary, reps):
    fam = GraphFamily(cfg.graph)
    grid = sorted(cfg.grid)
    occ = np.zeros((reps, len(grid)))
    root_occ = np.zeros((reps, len(grid)))
    sig = np.full((reps, len(grid)), np.nan)
    monotone = conserved = True
    for i in range(reps):
        rng = verify.replica_rng(cfg.seed, i)
        g = fam.sample(rng)
        trace = crw.run_crw(g, arrows.sample(g, cfg.T, rng), grid)
        counts = [len(s.counts) for s in trace.snapshots]
        monotone &= all(a >= b for a, b in zip(counts, counts[1:]))
        conserved &= all(sum(s.counts.values()) == g.num_vertices for s in trace.snapshots)
        occ[i] = counts
        root_occ[i] = [g.root in s.counts for s in trace.snapshots]
        for j, t in enumerate(grid):
            s = crw.sigma(trace, t)
            if not isinstance(s, crw.Censored):
                sig[i, j] = s
    rows = []
    for j, t in enumerate(grid):
        est = verify.EstimateReport.from_samples(occ[:, j])
        seen = sig[:, j][~np.isnan(sig[:, j])]
        rows.append([t, est.mean, est.stderr, root_occ[:, j].mean(),
                     float(seen.mean()) if seen.size else math.nan,
                     float(np.isnan(sig[:, j]).mean())])
    summary.add("occupied_monotone", bool(monotone))
    summary.add("particles_conserved", bool(conserved))
    return {"occupancy.csv": rows}


def _exp_voter(cfg, summary, reps, method):
    fam = GraphFamily(cfg.graph)
    grid = sorted(cfg.grid)
    run = voter.forward_voter if method == "forward" else voter.dual_voter
    sizes = np.zeros((reps, len(grid)), dtype=np.int64)
    partition = True
    for i in range(reps):
        rng = verify.replica_rng(cfg.seed, i)
        g = fam.sample(rng)
        a = arrows.sample(g, cfg.T, rng)
        for j, t in enumerate(grid):
            state = run(g, a, t)
            partition &= len(state.opinion) == g.num_vertices and all(
                0 <= lab < g.num_vertices for lab in state.opinion)
            sizes[i, j] = state.size(g.root)
    cs = verify.ClusterSample(np.array(grid), sizes, np.zeros(reps, bool), np.zeros(reps),
                              np.zeros(reps))
    dist_rows = []
    for j, t in enumerate(grid):
        vals, counts = np.unique(sizes[:, j], return_counts=True)
        dist_rows += [[t, int(v), c / reps] for v, c in zip(vals, counts)]
    summary.add("partition", bool(partition))
    for row in verify.check_martingale(None, grid, reps, sample=cs):
        summary.add(f"mean_one_t={row.t:g}", row.passed, mean=row.estimate.mean,
                    stderr=row.estimate.stderr)
    return {"sizes.csv": dist_rows, "moments.csv": _moment_rows(grid, cs)}


def _exp_cluster(cfg, summary, reps):
    grid = sorted(cfg.grid)
    cs = verify.sample_cluster_sizes(cfg.graph, grid, reps, cfg.seed, cfg.size_cap)
    for row in verify.check_martingale(None, grid, reps, sample=cs):
        status = "inconclusive" if row.inconclusive else row.passed
        summary.add(f"mean_one_t={row.t:g}", status, mean=row.estimate.mean,
                    stderr=row.estimate.stderr, cap_fraction=cs.cap_fraction)
    return {"moments.csv": _moment_rows(grid, cs)}


def _exp_coupled(cfg, summary, reps):
    g = build(cfg.graph)
    rep = verify.check_coupled(g, cfg.T, reps, cfg.seed, snapshots=sorted(set(cfg.grid)))
    summary.add("domination", rep.violations_domination == 0,
                violations=rep.violations_domination)
    summary.add("conservation", rep.violations_conservation == 0,
                violations=rep.violations_conservation)
    summary.add("mean_bound", rep.n_at_x.mean <= rep.bound + 3 * rep.n_at_x.stderr,
                mean=rep.n_at_x.mean, bound=rep.bound)
    summary.add("modified_mean_bound",
                rep.modified_at_root.mean <= 1 + 3 * rep.modified_at_root.stderr,
                mean=rep.modified_at_root.mean)
    summary.add("u_gamma_mean", rep.u_gamma.within(rep.occupation.mean),
                mean=rep.u_gamma.mean, expected=rep.occupation.mean)
    row = [cfg.T, reps, rep.n_at_x.mean, rep.n_at_x.stderr, rep.bound, rep.u_gamma.mean,
           rep.u_gamma.stderr, rep.occupation.mean, rep.modified_at_root.mean,
           rep.violations_domination, rep.violations_conservation]
    return {"coupled.csv": [row]}


def _exp_mtp(cfg, summary, reps):
    g = build(cfg.graph)
    fns = [f for f in verify.MTP_CATALOG if cfg.function in (None, f.name)]
    if cfg.function == "distance_k":
        fns = [verify.MassTransportFn("distance_k", k=cfg.k)]
    rows = []
    for f in fns:
        lhs, rhs, ok = verify.check_mtp_exact(g, f)
        rows.append([f.name, lhs, rhs, ok])
        summary.add(f"mtp_{f.name}", ok, lhs=lhs, rhs=rhs)
    return {"mtp.csv": rows}


def _exp_stationarity(cfg, summary, reps):
    g = build(cfg.graph)
    ok = verify.check_stationarity_exact(g)
    summary.add("stationarity", ok)
    return {"stationarity.csv": [[g.num_vertices, len(g.edges()), ok]]}


def _exp_size_bias(cfg, summary, reps):
    t = cfg.T
    cs = verify.sample_cluster_sizes(cfg.graph, [t], reps, _subseed(cfg.seed, 1), cfg.size_cap)
    at_root = verify.sample_root_cluster_sizes(cfg.graph, t, reps, _subseed(cfg.seed, 2))
    try:
        rep = verify.test_size_bias(cs.column(0), at_root, cfg.n_max, seed=cfg.seed)
    except verify.InsufficientSamplesError as exc:
        summary.add("size_bias", "inconclusive", reason=str(exc))
        return {"size_bias.csv": [], "size_bias_test.csv": []}
    rows = [[int(n), p, q, lo, hi] for n, p, q, lo, hi in
            zip(rep.n, rep.p_hat_at_root, rep.n_times_q_hat, rep.ci_low, rep.ci_high)
            if p > 0 or q > 0]
    summary.add("size_bias", rep.passed, tv=rep.tv, threshold=rep.threshold)
    return {"size_bias.csv": rows, "size_bias_test.csv": [[t, rep.tv, rep.threshold, rep.passed]]}


def _exp_second_moment(cfg, summary, reps):
    rows = []
    for r in verify.check_second_moment(cfg.graph, cfg.grid, reps, cfg.seed,
                                        cfg.bound_coefficient, cfg.size_cap):
        status = "inconclusive" if r.inconclusive else ("pass" if r.passed else "fail")
        summary.add(f"second_moment_t={r.t:g}", status, estimate=r.estimate.mean, bound=r.bound)
        rows.append([r.t, r.estimate.mean, r.estimate.ci_low, r.estimate.ci_high,
                     r.mean_degree, r.bound, status])
    return {"second_moment.csv": rows}


def _exp_quenched(cfg, summary, reps):
    g = build(cfg.graph)
    rows = []
    for r in verify.check_quenched_survival(g, cfg.grid, reps, cfg.seed, cfg.slack):
        status = "pass" if r.passed else "fail"
        summary.add(f"quenched_survival_t={r.t:g}", status, p_survive=r.survival.mean,
                    reciprocal=r.reciprocal)
        rows.append([r.t, r.survival.mean, r.survival.ci_low, r.survival.ci_high,
                     r.second_moment.mean, r.reciprocal, r.reciprocal_upper, status])
    return {"quenched_survival.csv": rows}


def _exp_sigma(cfg, summary, reps):
    rep = verify.estimate_sigma_tail(cfg.graph, cfg.t, cfg.u_grid, cfg.T, reps, cfg.seed)
    summary.add("tail_nonincreasing", rep.nonincreasing, censored_fraction=rep.censored_fraction)
    rows = [list(r) for r in zip(rep.u.tolist(), rep.tail.tolist(), rep.stderr.tolist(),
                                 rep.ci_low.tolist(), rep.ci_high.tolist())]
    return {"sigma_tail.csv": rows}


def _exp_lifetime(cfg, summary, reps):
    grid = cfg.t_grid
    if not grid:
        grid, x = [], 1.0
        while x < cfg.T:
            grid.append(x)
            x *= 2
        grid.append(cfg.T)
    rep = verify.estimate_opinion_lifetime(cfg.graph, grid, reps, cfg.seed, cfg.size_cap)
    T = rep.T_grid.tolist()
    if cfg.graph.family == "parallel_canopy" or len(T) < 2:
        summary.add("integral_grows", "inconclusive", note="reported without a gate")
    else:
        inc = rep.increment(T[-2], T[-1])
        summary.add("integral_grows", rep.grows(T[-2], T[-1]), increment=inc.mean,
                    stderr=inc.stderr)
    rows = [[t, s.mean, s.stderr, i.mean, i.stderr, rep.cap_fraction]
            for t, s, i in zip(T, rep.survival, rep.integral)]
    return {"lifetime.csv": rows}


def _exp_duality(cfg, summary, reps):
    fam = GraphFamily(cfg.graph)
    rows = []
    ok = True
    for i in range(reps):
        rng = verify.replica_rng(cfg.seed, i)
        g = fam.sample(rng)
        a = arrows.sample(g, cfg.T, rng)
        eq = verify.check_duality_pathwise(g, a)
        ok &= eq
        rows.append([i, g.num_vertices, len(a), eq])
    summary.add("duality_pathwise", bool(ok))
    return {"duality.csv": rows}


_RUNNERS = {
    "crw": _exp_crw,
    "voter_forward": lambda c, s, r: _exp_voter(c, s, r, "forward"),
    "voter_dual": lambda c, s, r: _exp_voter(c, s, r, "dual"),
    "cluster": _exp_cluster,
    "coupled": _exp_coupled,
    "mtp": _exp_mtp,
    "stationarity": _exp_stationarity,
    "size_bias": _exp_size_bias,
    "second_moment": _exp_second_moment,
    "quenched_survival": _exp_quenched,
    "sigma_tail": _exp_sigma,
    "lifetime": _exp_lifetime,
    "duality_pathwise": _exp_duality,
}


def run(config: ExperimentConfig, out_dir=None, replicas_scale: float = 1.0) -> VerdictSummary:
    """Run ``config`` and write its CSVs, ``verdict.json`` and ``run.log``."""
    reps = max(1, int(round(config.replicas * replicas_scale)))
    if reps != config.replicas:
        config = replace(config, replicas=reps)
    out = Path(out_dir if out_dir is not None else config.out)
    out.mkdir(parents=True, exist_ok=True)
    summary = VerdictSummary(config.experiment, config.fingerprint())
    started = time.time()
    tables = _RUNNERS[config.experiment](config, summary, reps)
    for name, rows in tables.items():
        _write_csv(out / name, SCHEMA[config.experiment][name], rows)
    (out / "verdict.json").write_text(summary.to_json() + "\n", encoding="utf-8")
    with open(out / "run.log", "w", encoding="utf-8") as fh:
        fh.write(f"started {time.strftime('%Y-%m-%dT%H:%M:%S', time.localtime(started))}\n")
        fh.write(f"elapsed_seconds {time.time() - started:.3f}\n")
        fh.write(f"experiment {config.experiment} replicas {reps} seed {config.seed}\n")
        fh.write(f"status {summary.status}\n")
    return summary


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coalesce-lab", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="run one experiment config")
    p.add_argument("config", nargs="?", help="path to the key-value config file")
    p.add_argument("--out", help="output directory (overrides the config's out)")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--replicas-scale", type=float, default=1.0,
                   help="multiply the configured replica count")
    p.add_argument("--schema", action="store_true",
                   help="print the CSV columns written by each experiment and exit")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    if args.schema:
        which = SCHEMA
        if args.config:
            try:
                cfg = parse_config(Path(args.config).read_text(encoding="utf-8"))
                which = {cfg.experiment: SCHEMA[cfg.experiment]}
            except (OSError, ConfigError):
                pass
        print(json.dumps(which, indent=2))
        return 0
    if not args.config:
        print("coalesce-lab run: a config path is required", file=sys.stderr)
        return 1
    path = Path(args.config)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"cannot read config {path}: {exc}", file=sys.stderr)
        return 1
    if args.seed is not None:
        text += f"\nseed = {args.seed}\n"
    try:
        cfg = parse_config(text)
    except ConfigError as exc:
        for e in exc.errors:
            print(f"config error: {e}", file=sys.stderr)
        return 1
    summary = run(cfg, args.out, args.replicas_scale)
    print(summary.to_json())
    return summary.exit_code


if __name__ == "__main__":
    sys.exit(main())

import csv
import json
import logging
import subprocess
import sys

import pytest

from coalesce_lab import cli
from coalesce_lab.graph import OffspringDistribution

SIZE_BIAS_K2 = """experiment = size_bias
graph.family = complete
graph.n = 2
T = 1.0
replicas = 100000
seed = 7
"""


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def write_config(tmp_path, text, name="exp.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_parse_valid_config():
    cfg = cli.parse_config(SIZE_BIAS_K2)
    assert cfg.experiment == "size_bias"
    assert cfg.graph.family == "complete" and cfg.graph.n == 2
    assert cfg.T == 1.0 and cfg.replicas == 100_000 and cfg.seed == 7


def test_parse_sections_and_pmf():
    cfg = cli.parse_config("""
        ; annealed trees
        experiment = cluster
        T = 4
        t_grid = 1, 2, 4
        [graph]
        family = augmented_gw
        pmf = 0:0.5, 2:0.5   # critical
    """)
    assert cfg.t_grid == (1.0, 2.0, 4.0)
    assert cfg.graph.offspring == OffspringDistribution.from_pmf({0: 0.5, 2: 0.5})


def test_negative_horizon():
    with pytest.raises(cli.ConfigError) as exc:
        cli.parse_config("experiment = crw\ngraph.family = cycle\ngraph.n = 4\nT = -1\n")
    assert "horizon must be nonnegative" in exc.value.errors


def test_all_errors_reported():
    with pytest.raises(cli.ConfigError) as exc:
        cli.parse_config("experiment = nope\nreplicas = many\nT = 1\nt_grid = 0.5, 3\n"
                         "graph.family = cycle\ngraph.n = 4\nbogus = 1\n")
    errs = exc.value.errors
    assert len(errs) == 4
    assert any("unknown experiment" in e for e in errs)
    assert any("malformed number" in e for e in errs)
    assert any("t_grid" in e for e in errs)
    assert any("bogus" in e for e in errs)


def test_missing_seed_logged(caplog):
    with caplog.at_level(logging.INFO, logger="coalesce_lab.cli"):
        cfg = cli.parse_config("experiment = mtp\ngraph.family = cycle\ngraph.n = 5\n")
    assert cfg.seed == 0
    assert "no seed given" in caplog.text


def test_size_bias_k2_run(tmp_path):
    summary = cli.run(cli.parse_config(SIZE_BIAS_K2), tmp_path)
    assert summary.status == "pass" and summary.exit_code == 0
    rows = read_csv(tmp_path / "size_bias.csv")
    assert rows[0] == ["n", "p_hat_at_root", "n_times_q_hat", "ci_low", "ci_high"]
    by_n = {int(r[0]): float(r[1]) for r in rows[1:]}
    assert abs(by_n[1] - 0.1353) < 0.01
    verdict = json.loads((tmp_path / "verdict.json").read_text())
    assert verdict["checks"]["size_bias"]["status"] == "pass"


def test_mtp_c5(tmp_path):
    cfg = cli.parse_config("experiment = mtp\nfunction = adjacency\ngraph.family = cycle\n"
                           "graph.n = 5\nseed = 1\n")
    summary = cli.run(cfg, tmp_path)
    rows = read_csv(tmp_path / "mtp.csv")
    assert rows == [["function", "lhs", "rhs", "pass"], ["adjacency", "2", "2", "true"]]
    assert summary.exit_code == 0


def test_crw_single_vertex(tmp_path):
    cfg = cli.parse_config("experiment = crw\ngraph.family = complete\ngraph.n = 1\nT = 1\n"
                           "t_grid = 0, 1\nreplicas = 10\nseed = 3\n")
    cli.run(cfg, tmp_path)
    rows = read_csv(tmp_path / "occupancy.csv")
    assert rows[1][:5] == ["0", "1", "0", "1", "0"]
    assert rows[2][:5] == ["1", "1", "0", "1", "1"]


def test_exit_codes(tmp_path):
    fail = cli.parse_config("experiment = second_moment\nbound_coefficient = 0.1\n"
                            "graph.family = complete\ngraph.n = 2\nt_grid = 1\nreplicas = 20000\n"
                            "seed = 2\n")
    assert cli.run(fail, tmp_path / "a").exit_code == 2
    canopy = cli.parse_config("experiment = lifetime\ngraph.family = parallel_canopy\nT = 4\n"
                              "replicas = 200\nsize_cap = 1000\nseed = 2\n")
    assert cli.run(canopy, tmp_path / "b").exit_code == 3
    summary = cli.VerdictSummary("x", "0")
    summary.add("a", True)
    assert summary.exit_code == 0
    summary.add("b", "inconclusive")
    assert summary.exit_code == 3
    summary.add("c", False)
    assert summary.exit_code == 2


@pytest.mark.parametrize("experiment,extra", [
    ("cluster", "t_grid = 0.5, 1\n"),
    ("voter_forward", "t_grid = 0.5, 1\n"),
    ("voter_dual", "t_grid = 0.5, 1\n"),
    ("sigma_tail", "t = 0.25\nu_grid = 0, 0.25, 0.5\n"),
    ("duality_pathwise", ""),
    ("coupled", ""),
    ("quenched_survival", "t_grid = 0.5, 1\n"),
    ("stationarity", ""),
])
def test_byte_identical_reruns(tmp_path, experiment, extra):
    text = (f"experiment = {experiment}\ngraph.family = torus\ngraph.d = 2\ngraph.n = 3\n"
            f"T = 1\nreplicas = 300\nseed = 11\n{extra}")
    cfg = cli.parse_config(text)
    s1 = cli.run(cfg, tmp_path / "one")
    s2 = cli.run(cfg, tmp_path / "two")
    assert s1.to_json() == s2.to_json()
    for name in cli.SCHEMA[experiment]:
        one = (tmp_path / "one" / name).read_bytes()
        assert one == (tmp_path / "two" / name).read_bytes()
        assert b"\r" not in one
        header = one.split(b"\n", 1)[0].decode().split(",")
        assert header == cli.SCHEMA[experiment][name]


def test_main_end_to_end(tmp_path, capsys):
    cfg = write_config(tmp_path, "experiment = mtp\ngraph.family = complete\ngraph.n = 4\n")
    code = cli.main(["run", str(cfg), "--out", str(tmp_path / "o"), "--seed", "5"])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["status"] == "pass" and len(out["checks"]) == 4
    assert (tmp_path / "o" / "run.log").exists()


def test_main_config_error(tmp_path, capsys):
    cfg = write_config(tmp_path, "experiment = crw\nT = -1\ngraph.family = cycle\ngraph.n = 4\n")
    assert cli.main(["run", str(cfg)]) == 1
    assert "horizon must be nonnegative" in capsys.readouterr().err


def test_replicas_scale(tmp_path):
    cfg = cli.parse_config("experiment = duality_pathwise\ngraph.family = cycle\ngraph.n = 5\n"
                           "replicas = 1000\nseed = 1\n")
    cli.run(cfg, tmp_path, replicas_scale=0.01)
    assert len(read_csv(tmp_path / "duality.csv")) == 11


def test_schema_flag():
    res = subprocess.run([sys.executable, "-m", "coalesce_lab.cli", "run", "--schema"],
                         capture_output=True, text=True, check=True)
    schema = json.loads(res.stdout)
    assert set(schema) == set(cli.EXPERIMENTS)
    assert schema["size_bias"]["size_bias.csv"][0] == "n"

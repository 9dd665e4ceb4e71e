import json
import os
import subprocess
import sys

import pytest

from graphsums.cli import main
from graphsums.experiments import (
    HEURISTIC_DISCLAIMER,
    KINDS,
    ExperimentConfig,
    ResultRecord,
    derive_seed,
    loglog_slope,
    run_experiment,
    run_regular_scaling,
    run_triangle_scaling,
    run_universal_demo,
    write_outputs,
)
from graphsums.graphs import cycle, disjoint_triangles, random_max_degree, random_regular
from graphsums.sumset import triangle_alphabet_size


def test_derive_seed():
    assert derive_seed(0, 1) == derive_seed(0, 1)
    assert len({derive_seed(0, i) for i in range(100)}) == 100
    assert derive_seed(0, 1, 2) != derive_seed(0, 12)
    assert 0 <= derive_seed(5) < 2**63


def test_triangle_scaling_examples():
    recs = run_triangle_scaling([1, 4], seed=0)
    by = {(r.params["m"], r.kind): r.size for r in recs}
    assert by[(1, "construction")] == 3 and by[(1, "exact")] == 3
    assert by[(4, "construction")] == 4 and by[(4, "exact")] == 3
    assert all(r.wall_time is None for r in recs)
    assert all(r.wall_time is not None for r in run_triangle_scaling([1], timing=True))


def test_regular_scaling_examples():
    recs = run_regular_scaling([8], 3, trials=3, budget=2000, seed=1)
    heur = [r for r in recs if r.kind == "heuristic_upper_bound"]
    assert {r.params["trial"] for r in heur} == {0, 1, 2}
    for r in heur:
        assert r.size <= 12 and r.witness["disclaimer"] == HEURISTIC_DISCLAIMER
    assert [r.params["group_moduli"] for r in heur[:3]] == [[8], [16], [2, 2, 2]]
    with pytest.raises(ValueError):
        run_regular_scaling([7], 3)
    with pytest.raises(ValueError):
        run_regular_scaling([], 3)


def test_heuristic_records_never_below_exact():
    recs = run_regular_scaling([4, 6], 3, trials=2, budget=1000, seed=2)
    exact = {(r.params["n"], r.params["trial"]): r.size for r in recs if r.kind == "exact"}
    assert len(exact) == 4
    for r in recs:
        if r.kind == "heuristic_upper_bound":
            assert r.size >= exact[(r.params["n"], r.params["trial"])]


def test_universal_demo_record():
    r = run_universal_demo(64, 3, seed=0, trials=3)
    w = r.witness
    assert r.kind == "verified_bound" and w["all_verified"]
    assert w["generating_exact"] <= w["generating_bound"]
    assert all(run["sumset_size"] <= w["generating_exact"] for run in w["runs"])
    assert r.to_dict() == run_universal_demo(64, 3, seed=0, trials=3).to_dict()


def test_record_kinds_and_keys():
    with pytest.raises(ValueError):
        ResultRecord("x", "S(G)", {}, 1, {})
    r = ResultRecord("x", "exact", {"n": 3}, 1, {"master": 0})
    assert set(r.to_dict()) == {"schema", "experiment", "kind", "params", "size", "seeds", "witness"}
    assert set(KINDS) >= {"exact", "heuristic_upper_bound"}


def test_loglog_slope():
    xs = [8, 64, 512, 4096]
    assert abs(loglog_slope(xs, [x ** (1 / 3) for x in xs]) - 1 / 3) < 1e-12


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig("nope", {"m": [1]}, 0)
    with pytest.raises(ValueError):
        ExperimentConfig("triangle_scaling", {}, 0)
    with pytest.raises(ValueError):
        ExperimentConfig("triangle_scaling", {"m": [1]}, 0, trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"experiment": "triangle_scaling", "grid": {"m": [1]}})
    cfg = ExperimentConfig.from_dict({"experiment": "triangle_scaling", "grid": {"m": [1]}, "seed": 3})
    assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg


def test_records_sorted_and_outputs(tmp_path):
    cfg = ExperimentConfig("triangle_scaling", {"m": [64, 8, 1]}, 0)
    recs = run_experiment(cfg)
    assert [r.params["m"] for r in recs if r.kind == "construction"] == [1, 8, 64]
    out = write_outputs(recs, cfg, tmp_path / "o")
    data = json.loads((out / "results.json").read_text())
    assert data["schema"] == 1 and len(data["records"]) == len(recs)
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"] == cfg.to_dict() and manifest["version"]
    lines = (out / "results.csv").read_text().splitlines()
    assert lines[0].split(",")[:3] == ["schema", "experiment", "kind"] and len(lines) == len(recs) + 1


# -- CLI determinism ------------------------------------------------------------------


def run_cli(argv, capsys):
    assert main(argv) == 0
    return capsys.readouterr().out


def make_cli_files(tmp_path):
    c4 = tmp_path / "c4.txt"
    cycle(4).save(c4)
    g64 = tmp_path / "g64.txt"
    random_regular(64, 3, 11).save(g64)
    g12 = tmp_path / "g12.txt"
    random_max_degree(12, 3, 7).save(g12)
    tri = tmp_path / "tri.txt"
    disjoint_triangles(2).save(tri)
    avoid = tmp_path / "avoid.json"
    avoid.write_text("[[5]]")
    return {"c4": c4, "g64": g64, "g12": g12, "tri": tri, "avoid": avoid, "dir": tmp_path}


@pytest.fixture
def files(tmp_path):
    return make_cli_files(tmp_path)


def cli_commands(files):
    f = files
    desc = f["dir"] / "desc.json"
    lab = f["dir"] / "lab.json"
    return [
        (["sumset", "exact", "--graph", str(f["c4"])], lab),
        (["sumset", "exact", "--graph", str(f["tri"])], None),
        (["sumset", "heur", "--graph", str(f["c4"]), "--group", "[2,2]", "--budget", "500", "--seed", "4"], None),
        (["sumset", "heur", "--graph", str(f["g12"]), "--group", "[0]", "--budget", "500", "--seed", "4"], None),
        (["sumset", "reduce", "--graph", str(f["c4"]), "--labeling", str(lab)], None),
        (["universal", "build", "--n", "64", "--d", "3", "--seed", "2"], desc),
        (["universal", "embed", "--desc", str(desc), "--graph", str(f["g64"]), "--seed", "3"], None),
        (["universal", "place", "--group", "[12]", "--graph", str(f["g12"]), "--avoid", str(f["avoid"]), "--seed", "1"], None),
    ]


def test_cli_outputs_and_reruns(files, capsys):
    for argv, save in cli_commands(files):
        a = run_cli(argv, capsys)
        assert a == run_cli(argv, capsys), argv
        data = json.loads(a)
        if save is not None:
            save.write_text(a)
        if argv[0] == "sumset":
            assert {"kind", "size", "group_moduli", "labeling", "witnesses", "metadata"} <= set(data)
            assert {"d_prime", "virtual_edges"} <= set(data["metadata"])
    exact = json.loads(run_cli(cli_commands(files)[1][0], capsys))
    assert exact["size"] == 3 and exact["metadata"]["virtual_edges"] == [[0, 3]]


def test_cli_errors(files, capsys):
    assert main(["sumset", "heur", "--graph", str(files["c4"]), "--group", "[3]", "--seed", "0"]) == 1
    assert main(["universal", "place", "--group", "[4]", "--graph", str(files["c4"]), "--avoid", str(files["avoid"])]) == 1
    assert main([]) == 2
    capsys.readouterr()


def test_experiment_run_byte_identical(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(
        {"experiment": "regular_scaling", "grid": {"n": [6, 8], "d": 3}, "seed": 5, "trials": 2, "budget": 500}
    ))
    outs = []
    for i, hashseed in enumerate(["0", "1"]):
        env = {**os.environ, "PYTHONHASHSEED": hashseed}
        out = tmp_path / f"out{i}"
        subprocess.run(
            [sys.executable, "-m", "graphsums", "experiment", "run", "--config", str(cfg), "--out", str(out)],
            check=True, env=env,
        )
        outs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    assert outs[0] == outs[1]
    assert set(outs[0]) == {"manifest.json", "results.csv", "results.json"}


def test_triangle_slope_over_full_range():
    # every m in 8..4096; sizes equal the minimal alphabet (checked in test_sumset)
    ms = list(range(8, 4097))
    slope = loglog_slope(ms, [triangle_alphabet_size(m) for m in ms])
    assert 0.30 <= slope <= 0.37
    grid = [8, 64, 512, 4096]
    assert [r.size for r in run_triangle_scaling(grid) if r.kind == "construction"] == [
        triangle_alphabet_size(m) for m in grid
    ]

import csv
import json
import os

import pytest

from somalab.cli import main


def run_cli(capsys, tmp_path, *argv):
    code = main(["--out-dir", str(tmp_path), *argv])
    out = capsys.readouterr().out
    return code, out


def test_effective_bf_prints_two(capsys, tmp_path):
    code, out = run_cli(capsys, tmp_path, "effective-bf", "--nodes", "127")
    assert code == 0
    assert out.strip() == "2"


def test_solve_deterministic(capsys, tmp_path):
    code, first = run_cli(capsys, tmp_path, "solve", "--ordering", "random",
                          "--seed", "42")
    assert code == 0
    code, second = run_cli(capsys, tmp_path, "solve", "--ordering", "random",
                           "--seed", "42")
    assert first == second
    assert len(first.strip()) == 27


def test_solve_writes_stats_and_manifest(capsys, tmp_path):
    code, _ = run_cli(capsys, tmp_path, "solve", "--ordering", "mcv")
    assert code == 0
    stats = json.loads((tmp_path / "solve_stats.json").read_text())
    assert stats["solutions_found"] == 1
    manifest = json.loads((tmp_path / "solve_manifest.json").read_text())
    assert manifest["subcommand"] == "solve"
    assert manifest["config"]["ordering"] == "mcv"
    assert manifest["outputs"] == [str(tmp_path / "solve_stats.json")]


def test_prune_never_costs_nodes(capsys, tmp_path):
    run_cli(capsys, tmp_path, "solve", "--ordering", "mcv")
    plain = json.loads((tmp_path / "solve_stats.json").read_text())
    run_cli(capsys, tmp_path, "solve", "--ordering", "mcv", "--prune")
    pruned = json.loads((tmp_path / "solve_stats.json").read_text())
    assert sum(pruned["nodes_created_per_depth"]) <= \
        sum(plain["nodes_created_per_depth"])


def test_sample_bf_single_depth(capsys, tmp_path):
    code, out = run_cli(capsys, tmp_path, "sample-bf", "--depth", "3",
                        "--samples", "100", "--seed", "1")
    assert code == 0
    with open(tmp_path / "branching_depth3.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["depth", "out_degree", "count"]
    assert sum(int(r[2]) for r in rows[1:]) == 100


def test_encode_cnf(capsys, tmp_path):
    code, out = run_cli(capsys, tmp_path, "encode-cnf")
    assert code == 0
    header = next(
        line for line in (tmp_path / "soma.cnf").read_text().splitlines()
        if line.startswith("p cnf")
    )
    _, _, nvars, nclauses = header.split()
    assert int(nvars) == 688
    assert int(nclauses) > 150_000


def test_landmarks_build_and_query(capsys, tmp_path):
    table_path = tmp_path / "d2.bin"
    code, _ = run_cli(capsys, tmp_path, "landmarks", "build", "--depth", "2",
                      "--limit", "10", "--out", str(table_path))
    assert code == 0
    assert table_path.exists()
    code, out = run_cli(capsys, tmp_path, "landmarks", "query", "--table",
                        str(table_path))
    assert code == 0
    assert "query nodes:" in out


def test_landmarks_query_missing_file(capsys, tmp_path):
    code = main(["--out-dir", str(tmp_path), "landmarks", "query",
                 "--table", str(tmp_path / "nope.bin")])
    assert code == 2


def test_landmarks_sweep_csv(capsys, tmp_path):
    code, _ = run_cli(capsys, tmp_path, "landmarks", "sweep",
                      "--depths", "2", "--counts", "0,5")
    assert code == 0
    with open(tmp_path / "landmark_sweep.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][:2] == ["depth", "num_landmarks"]
    assert len(rows) == 3


def test_zoo_command(capsys, tmp_path):
    code, out = run_cli(capsys, tmp_path, "zoo", "--puzzle", "magic-square",
                        "--walks", "200")
    assert code == 0
    assert "magic-square" in out
    assert (tmp_path / "zoo_magic-square.csv").exists()


def test_out_dir_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("SOMALAB_OUT_DIR", str(tmp_path / "envdir"))
    code = main(["effective-bf", "--nodes", "7"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "1"


def test_unknown_ordering_is_a_usage_error(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["--out-dir", str(tmp_path), "solve", "--ordering", "bogus"])
    assert exc.value.code == 2


def test_strategy_matrix_csv(capsys, tmp_path):
    code, out = run_cli(capsys, tmp_path, "strategy-matrix", "--seeds", "2",
                        "--landmark-count", "20")
    assert code == 0
    with open(tmp_path / "strategy_matrix.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["ordering", "pruning", "landmarks", "b_star"]
    cells = {(r[0], r[1], r[2]): float(r[3]) for r in rows[1:]}
    assert len(cells) == 16  # 4 orderings x {plain,pruning} x {none,landmarks}
    assert cells[("cell", "pruning", "landmarks")] <= \
        cells[("cell", "plain", "none")]

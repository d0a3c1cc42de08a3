import csv
import io
import json

import pytest

from dsteiner import parse_stp_file, solve, write_stp
from dsteiner.cli import main

from gen import random_instance


def write_instance(tmp_path, seed, name):
    inst = random_instance(seed, name=name)
    path = tmp_path / f"{name}.stp"
    path.write_text(write_stp(inst))
    return inst, path


def test_solve_json_roundtrips_through_validate(tmp_path, capsys):
    inst, path = write_instance(tmp_path, 1, "a")
    out = tmp_path / "sol.json"
    assert main(["solve", str(path), "-o", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["opt"] == solve(inst).opt
    assert main(["validate", str(path), str(out)]) == 0
    printed = capsys.readouterr().out.strip()
    assert printed == str(payload["opt"])


def test_solve_csv_to_stdout(tmp_path, capsys):
    inst, path = write_instance(tmp_path, 2, "b")
    assert main(["solve", str(path), "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "instance,n,m,k,opt,time_ms,labels,config"
    row = lines[1].split(",")
    assert row[0] == "b"
    assert int(row[4]) == solve(inst).opt


def test_solve_single_terminal(tmp_path, capsys):
    text = (
        "33D32945 STP File, STP Format Version 1.0\n"
        "SECTION Graph\nNodes 1\nEdges 0\nEND\n"
        "SECTION Terminals\nTerminals 1\nT 1\nEND\nEOF\n"
    )
    path = tmp_path / "one.stp"
    path.write_text(text)
    assert main(["solve", str(path)]) == 0
    assert json.loads(capsys.readouterr().out)["opt"] == 0


def test_bound_choices_agree(tmp_path, capsys):
    _, path = write_instance(tmp_path, 3, "c")
    opts = []
    for bound in ["zero", "max(jterm:2,onetree)"]:
        assert main(["solve", str(path), "--bound", bound]) == 0
        opts.append(json.loads(capsys.readouterr().out)["opt"])
    assert opts[0] == opts[1]


def test_bad_root_and_bound_report_cleanly(tmp_path, capsys):
    _, path = write_instance(tmp_path, 19, "cfg")
    assert main(["solve", str(path), "--root", "index:99"]) == 1
    assert json.loads(capsys.readouterr().out)["error"] == "ValueError"
    assert main(["solve", str(path), "--bound", "nope"]) == 1
    assert json.loads(capsys.readouterr().out)["error"] == "ValueError"


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.stp"
    bad.write_text("33D32945 STP\nSECTION Graph\nNodes 2\nEdges 1\nE 1 x 1\nEND\n")
    assert main(["solve", str(bad)]) == 2
    assert json.loads(capsys.readouterr().out)["error"] == "parse"


def test_infeasible_exit_code(tmp_path, capsys):
    text = (
        "33D32945 STP File, STP Format Version 1.0\n"
        "SECTION Graph\nNodes 4\nEdges 2\nE 1 2 1\nE 3 4 1\nEND\n"
        "SECTION Terminals\nTerminals 2\nT 1\nT 4\nEND\nEOF\n"
    )
    path = tmp_path / "inf.stp"
    path.write_text(text)
    assert main(["solve", str(path)]) == 3
    assert json.loads(capsys.readouterr().out)["error"] == "infeasible"


def _write_big_instance(tmp_path, name):
    inst = random_instance(71, n_range=(25, 25), k_range=(7, 7), name=name)
    path = tmp_path / f"{name}.stp"
    path.write_text(write_stp(inst))
    return path


def test_timeout_exit_code(tmp_path, capsys):
    path = _write_big_instance(tmp_path, "slow")
    code = main(["solve", str(path), "--bound", "zero", "--prune", "off",
                 "--time-limit", "1e-9"])
    assert code == 4
    assert json.loads(capsys.readouterr().out)["error"] == "timeout"


def test_memory_exit_code(tmp_path, capsys):
    path = _write_big_instance(tmp_path, "fat")
    code = main(["solve", str(path), "--bound", "zero", "--prune", "off",
                 "--mem-limit", "1"])
    assert code == 5
    assert json.loads(capsys.readouterr().out)["error"] == "memory"


def test_validate_detects_tampered_cost(tmp_path, capsys):
    _, path = write_instance(tmp_path, 5, "t")
    out = tmp_path / "sol.json"
    main(["solve", str(path), "-o", str(out)])
    payload = json.loads(out.read_text())
    payload["opt"] += 1
    out.write_text(json.dumps(payload))
    assert main(["validate", str(path), str(out)]) != 0
    assert "mismatch" in capsys.readouterr().out


def test_validate_detects_removed_edge(tmp_path, capsys):
    inst, path = write_instance(tmp_path, 6, "r")
    rec = solve(inst)
    if len(rec.edges) < 2:
        pytest.skip("tree too small to break")
    out = tmp_path / "sol.json"
    main(["solve", str(path), "-o", str(out)])
    payload = json.loads(out.read_text())
    payload["edges"] = payload["edges"][1:]
    out.write_text(json.dumps(payload))
    assert main(["validate", str(path), str(out)]) == 1
    err = json.loads(capsys.readouterr().out.splitlines()[-1])
    assert err["error"] in ("NotConnected", "MissingTerminal")


def test_hanan_single_point(tmp_path, capsys):
    pts = tmp_path / "p.txt"
    pts.write_text("2 1\n4 7\n")
    out = tmp_path / "g.stp"
    assert main(["hanan", str(out), "--points", str(pts)]) == 0
    assert capsys.readouterr().out.strip() == "1 0 1"


def test_hanan_counts_and_solvable_output(tmp_path, capsys):
    pts = tmp_path / "p.txt"
    pts.write_text("2 3\n0 0\n5 2\n3 9\n")
    out = tmp_path / "g.stp"
    assert main(["hanan", str(out), "--points", str(pts)]) == 0
    v, e, k = map(int, capsys.readouterr().out.split())
    assert (v, e, k) == (9, 12, 3)
    inst = parse_stp_file(out)
    assert (inst.n, inst.m, inst.k) == (9, 12, 3)
    assert main(["solve", str(out)]) == 0


def test_hanan_random_seeded_counts(tmp_path, capsys):
    out = tmp_path / "g.stp"
    assert main(["hanan", str(out), "--random", "3", "21", "999",
                 "--seed", "9"]) == 0
    v, e, k = map(int, capsys.readouterr().out.split())
    from dsteiner import generate_random_points
    from dsteiner.hanan import hanan_grid_size
    ev, ee = hanan_grid_size(generate_random_points(3, 21, 999, 9))
    assert (v, e) == (ev, ee)
    assert k <= 21


def _write_manifest(tmp_path, seeds):
    paths = []
    for i, seed in enumerate(seeds):
        _, p = write_instance(tmp_path, seed, f"m{i}")
        paths.append(str(p))
    manifest = tmp_path / "manifest.txt"
    manifest.write_text("\n".join(paths) + "\n")
    return manifest, paths


def test_bench_rows_in_manifest_order(tmp_path, capsys):
    manifest, paths = _write_manifest(tmp_path, [7, 8, 9])
    assert main(["bench", str(manifest)]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [r["instance"] for r in rows] == ["m0", "m1", "m2"]
    assert all(r["error"] == "" for r in rows)


def test_bench_empty_manifest_is_header_only(tmp_path, capsys):
    manifest = tmp_path / "empty.txt"
    manifest.write_text("")
    assert main(["bench", str(manifest)]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out == ["instance,n,m,k,opt,time_ms,labels,config,error"]


def test_bench_deterministic_and_parallel_invariant(tmp_path):
    manifest, _ = _write_manifest(tmp_path, [10, 11, 12, 13])
    outs = []
    for par in ("1", "2", "1"):
        out = tmp_path / f"bench{par}_{len(outs)}.csv"
        assert main(["bench", str(manifest), "--parallel", par,
                     "-o", str(out)]) == 0
        rows = list(csv.DictReader(out.open()))
        outs.append([(r["instance"], r["opt"]) for r in rows])
    assert outs[0] == outs[1] == outs[2]


def test_bench_bad_row_does_not_abort(tmp_path, capsys):
    manifest, paths = _write_manifest(tmp_path, [14])
    manifest.write_text(str(tmp_path / "missing.stp") + "\n" + paths[0] + "\n")
    assert main(["bench", str(manifest)]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert rows[0]["error"] != ""
    assert rows[1]["error"] == ""
    assert rows[1]["instance"] == "m0"

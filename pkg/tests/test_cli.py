import json

import pytest

from scrollsys import scan
from scrollsys.cli import main
from scrollsys.lattice import parse_spec


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_dim_examples(capsys):
    code, out, _ = run(capsys, "dim", "L1(0,6,3^5)", "--oracle", "--json")
    d = json.loads(out)
    assert code == 0
    assert (d["v"], d["e"], d["table1_row"], d["l_est"]) == (-3, -1, 2, 0)
    code, out, _ = run(capsys, "dim", "L0(2,2)", "--json")
    d = json.loads(out)
    assert d["v"] == d["e"] == 8 and not d["minus_one_special"]
    code, out, _ = run(capsys, "dim", "L6(0,4,3^11)")
    assert "note" in out and "v=-2" in out


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "dim", "L1(0,x,3)")
    assert code == 1 and "position" in err


def test_usage_error(capsys):
    code, _, _ = run(capsys, "frobnicate")
    assert code == 1
    code, _, _ = run(capsys)
    assert code == 1


def test_printed_specs_reparse(capsys):
    for argv in (["classify", "L6(0,4,3^11)", "--json"], ["transform", "L5(1,4,3^10)", "--k", "4", "--json"],
                 ["split", "L4(3,6,2^9)", "--k", "1", "--s", "3", "--json"]):
        code, out, _ = run(capsys, *argv)
        assert code == 0
        d = json.loads(out)
        for v in d.values():
            if isinstance(v, str) and v.startswith("L") and "(" in v:
                assert str(parse_spec(v)) == v
    code, out, _ = run(capsys, "transform", "L5(1,4,3^10)", "--k", "4")
    assert "L1(5,4,3^6,1^4)" in out


def test_curves(capsys):
    code, out, _ = run(capsys, "curves", "--n", "1", "--m", "2", "--b-max", "6", "--json")
    assert "L1(3,3,2^7)" in [c["curve"] for c in json.loads(out)["curves"]]
    code, out, _ = run(capsys, "curves", "L6(0,4,3^11)", "--negative")
    assert "L6(2,1,1^11)" in out
    code, out, _ = run(capsys, "curves", "--n", "6", "--m", "1", "--b-max", "2")
    assert "L6(2,1,1^11)" in out


def test_prove_and_oracle(capsys):
    code, out, _ = run(capsys, "prove", "L4(3,6,2^9)")
    assert code == 0 and "k=1" in out and "rule=" in out
    code, out, _ = run(capsys, "prove", "L4(3,6,2^9)", "--json")
    assert json.loads(out)["verified"]
    code, out, _ = run(capsys, "oracle", "L6(0,4,3^11)", "--trials", "3", "--seed", "42", "--json")
    d = json.loads(out)
    assert code == 0 and d["l_est"] == 0 and d["verdict"] == "special"
    code, _, _ = run(capsys, "prove", "L6(0,4,3^11)")
    assert code == 1


def test_notes(capsys):
    code, out, _ = run(capsys, "--notes")
    assert code == 0 and "L6(0,4,3^11)" in out


def test_verify_table1(capsys):
    code, out, _ = run(capsys, "verify-table1", "--e-max", "1", "--n-max", "2", "--trials", "1")
    assert code == 0 and "instances pass" in out
    code, out, _ = run(capsys, "verify-table1", "--e-max", "1", "--n-max", "2", "--max-columns", "0", "--json")
    assert code == 0 and json.loads(out)["results"] == []


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# settings\nseed = 42\ntrials=2\n")
    code, out, _ = run(capsys, "oracle", "L1(0,4,2^5)", "--config", str(cfg), "--json")
    assert json.loads(out)["seeds"] == [42, 43]
    code, out, _ = run(capsys, "oracle", "L1(0,4,2^5)", "--config", str(cfg), "--seed", "7", "--json")
    assert json.loads(out)["seeds"] == [7, 8]
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour=blue\n")
    code, _, _ = run(capsys, "oracle", "L1(0,4,2^5)", "--config", str(bad))
    assert code == 1


SMALL = ["--n", "0..2", "--a", "0..3", "--b", "0..2", "--m", "1..2", "--r", "1..4"]


def test_scan_deterministic_and_resumable(tmp_path, capsys):
    full = tmp_path / "full.csv"
    code, _, _ = run(capsys, "scan", *SMALL, "--out", str(full), "--json-out", str(tmp_path / "full.jsonl"))
    assert code == 0
    again = tmp_path / "again.csv"
    run(capsys, "scan", *SMALL, "--out", str(again))
    assert full.read_bytes() == again.read_bytes()

    part = tmp_path / "part.csv"
    code, out, _ = run(capsys, "scan", *SMALL, "--out", str(part), "--limit", "40")
    token = out.strip().splitlines()[-1].split()[-1]
    assert token.endswith(":40")
    run(capsys, "scan", *SMALL, "--out", str(part), "--resume", token)
    assert part.read_bytes() == full.read_bytes()

    lines = full.read_text().splitlines()
    assert lines[0].startswith("# scrollsys-scan v1")
    assert lines[1] == ",".join(scan.COLUMNS)
    rows = [json.loads(x) for x in (tmp_path / "full.jsonl").read_text().splitlines()]
    assert len(rows) == len(lines) - 2
    assert list(rows[0]) == list(scan.COLUMNS)


def test_scan_parallel_matches_serial(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "scan", *SMALL, "--out", str(a))
    run(capsys, "scan", *SMALL, "--out", str(b), "--workers", "2")
    assert a.read_bytes() == b.read_bytes()


def test_scan_resume_token_checks_config(capsys):
    code, _, err = run(capsys, "scan", *SMALL, "--resume", "deadbeef0000:3", "--json")
    assert code == 1 and "different configuration" in err


def test_scan_order_by_matrix_size():
    cfg = scan.ScanConfig(n=(0, 2), a=(0, 3), b=(0, 2), m=(1, 2), r=(1, 4))
    sizes = [s.r * (s.mults[0] * (s.mults[0] + 1) // 2) * scan.h0_nef_ab(s.n, s.a, s.b) for s in scan.systems(cfg)]
    assert sizes == sorted(sizes)


def test_scan_m1_slice_no_specials():
    cfg = scan.ScanConfig(n=(0, 3), a=(0, 5), b=(0, 3), m=(1, 1), r=(1, 8))
    summary = scan.write_scan(cfg, scan.run(cfg), None, None)
    assert summary.m1_special == 0 and summary.exit_code() == 0


def test_parse_range():
    assert scan.parse_range("3") == (3, 3)
    assert scan.parse_range("0..5") == (0, 5)
    with pytest.raises(ValueError):
        scan.parse_range("x")

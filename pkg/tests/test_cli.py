import json
from pathlib import Path

import pytest

from symspread.cli import CommandConfig, build_parser, main
from symspread.field_tower import create_tower
from symspread.linear_sets import base_field, find_quadratic_param, zero_spec
from symspread.spread_kit import SpreadSet, desarguesian_spread_set

GOLDEN = Path(__file__).parent / "golden"


def test_config_round_trip():
    ns = build_parser().parse_args(["search-linsets", "--budget", "5", "--threads", "2"])
    cfg = CommandConfig.from_namespace(ns)
    assert cfg.budget == 5 and cfg.threads == 2
    assert CommandConfig.from_json(cfg.to_json()) == cfg
    with pytest.raises(ValueError):
        CommandConfig.from_json('{"subcommand": "selftest", "bogus": 1}')


def test_golden_classify_q2(tmp_path):
    out = tmp_path / "r.json"
    assert main(["classify-planes", "--order", "2", "--out", str(out)]) == 0
    assert out.read_bytes() == (GOLDEN / "classify_planes_q2.json").read_bytes()


def test_threads_do_not_change_bytes(tmp_path, monkeypatch):
    a, b, c = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "c.json"
    assert main(["classify-planes", "--order", "2", "--threads", "1", "--out", str(a)]) == 0
    assert main(["classify-planes", "--order", "2", "--threads", "3", "--out", str(b)]) == 0
    monkeypatch.setenv("SYMSPREAD_THREADS", "2")
    assert main(["classify-planes", "--order", "2", "--out", str(c)]) == 0
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_csv_and_timing(tmp_path):
    out, csv = tmp_path / "r.json", tmp_path / "r.csv"
    assert main(["orbit-check", "--count", "5", "--timing", "--out", str(out), "--csv", str(csv)]) == 0
    d = json.loads(out.read_text())
    assert isinstance(d["elapsed_ms"], int) and d["counts"]["successes"] == 5
    assert "successes,5" in csv.read_text().splitlines()


def test_verify_spread_exit_codes(tmp_path):
    assert main(["verify-spread", "--out", str(tmp_path / "ok.json")]) == 0
    T = create_tower(2, [1, 2, 3])
    good = desarguesian_spread_set(T[2], T[1])
    bad = SpreadSet(good.n, good.field, good.matrices[:-1] + (good.matrices[0],))
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad.to_json()))
    assert main(["verify-spread", "--input", str(p), "--out", str(tmp_path / "bad_r.json")]) == 1
    p.write_text("{}")
    assert main(["verify-spread", "--input", str(p)]) == 2
    assert main(["verify-spread", "--input", str(tmp_path / "missing.json")]) == 2


def test_derive_fg(tmp_path):
    spec = zero_spec(find_quadratic_param(base_field(2)))
    p = tmp_path / "spec.json"
    p.write_text(json.dumps(spec.to_json()))
    out = tmp_path / "fg.json"
    assert main(["derive-fg", "--spec", str(p), "--out", str(out)]) == 0
    c = json.loads(out.read_text())["counts"]
    assert c["matches-display"] == 1 and c["disjoint"] == 0


def test_usage_errors(tmp_path):
    with pytest.raises(SystemExit) as e:
        main(["no-such-command"])
    assert e.value.code == 2
    assert main(["classify-planes", "--order", "5"]) == 2
    assert main(["disjoint-planes", "--q", "4"]) == 2
    assert main(["search-linsets", "--strategy", "full"]) == 2


def test_selftest(capsys):
    assert main(["selftest"]) == 0
    assert json.loads(capsys.readouterr().out)["counts"]["failed"] == 0

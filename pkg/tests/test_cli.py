from __future__ import annotations

import json

import pytest

from gbt.cli import SCHEMA_VERSION, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_homology_json(capsys):
    code, out, _ = run(capsys, "homology", "S13", "--no-timing")
    assert code == 0
    d = json.loads(out)
    assert d["schema_version"] == SCHEMA_VERSION
    assert d["timing"] is None
    assert d["results"]["h1"] == "Z^4"
    assert d["results"]["q"] == 2


def test_timing_is_reported_by_default(capsys):
    _, out, _ = run(capsys, "homology", "S1")
    assert json.loads(out)["timing"]["seconds"] >= 0


def test_unknown_label_is_usage_error(capsys):
    code, out, err = run(capsys, "homology", "S99")
    assert code == 2 and out == ""
    assert "valid labels" in err


def test_bad_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify", "--format", "xml"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["classify", "--threads", "0"])
    assert exc.value.code == 2


def test_global_flags_before_or_after_command(capsys):
    _, a, _ = run(capsys, "--no-timing", "--format", "tsv", "fixed-points")
    _, b, _ = run(capsys, "fixed-points", "--format", "tsv", "--no-timing")
    assert a == b
    assert a.splitlines()[0].startswith("row\t1\t2")


def test_classify_tsv(capsys):
    code, out, _ = run(capsys, "classify", "--format", "tsv")
    lines = out.splitlines()
    assert code == 0
    assert lines[0].split("\t") == ["label", "q", "family_dim", "orbit", "orbit_size", "generators", "h1"]
    assert len(lines) == 17
    assert sum(int(l.split("\t")[4]) for l in lines[1:]) == 161


def test_classify_is_deterministic_with_cache(capsys, tmp_path):
    cache = str(tmp_path / "orbits.json")
    _, first, _ = run(capsys, "classify", "--no-timing", "--cache", cache)
    _, second, _ = run(capsys, "classify", "--no-timing", "--cache", cache)
    _, plain, _ = run(capsys, "classify", "--no-timing")
    assert first == second
    assert json.loads(first)["results"] == json.loads(plain)["results"]
    assert json.loads(open(cache).read())["schema_version"] == SCHEMA_VERSION


def test_corrupt_cache_is_recomputed(capsys, tmp_path):
    cache = tmp_path / "orbits.json"
    cache.write_text("{not json")
    code, out, err = run(capsys, "classify", "--no-timing", "--cache", str(cache))
    assert code == 0
    assert "cache" in err.lower()
    assert json.loads(out)["results"]["free_count"] == 161
    json.loads(cache.read_text())  # rewritten


def test_invariants(capsys):
    code, out, _ = run(capsys, "invariants", "S7", "--max-index", "4", "--no-timing")
    assert code == 0
    assert json.loads(out)["results"]["counts"] == {"2": 7, "3": 4, "4": 35}


def test_invariants_index_bound(capsys):
    code, _, err = run(capsys, "invariants", "S7", "--max-index", "9")
    assert code == 2 and err


def test_find_iso(capsys):
    code, out, _ = run(capsys, "find-iso", "S14", "S15", "--no-timing")
    r = json.loads(out)["results"]
    assert code == 0 and r["found"] and r["verified"]
    code, out, _ = run(capsys, "find-iso", "S1", "S4", "--no-timing")
    assert code == 0 and not json.loads(out)["results"]["found"]


def test_delpezzo_commands(capsys):
    code, out, _ = run(capsys, "delpezzo", "characters", "--case", "ii", "--format", "tsv")
    assert code == 0
    assert "++\ts1s2s3; t1t2t3" in out
    code, out, _ = run(capsys, "delpezzo", "pencils", "--no-timing")
    assert code == 0
    code, out, _ = run(capsys, "delpezzo", "classify", "--rank", "3", "--no-timing")
    assert code == 0 and len(json.loads(out)["results"]["classes"]) == 1


def test_heisenberg_verify(capsys):
    code, out, _ = run(capsys, "heisenberg", "verify", "--group", "2,2", "--no-timing")
    assert code == 0
    assert json.loads(out)["results"]["eigenvectors"] == 16


def test_heisenberg_bad_group(capsys):
    code, _, err = run(capsys, "heisenberg", "verify", "--group", "4,2")
    assert code == 2 and err

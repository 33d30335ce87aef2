import json
import subprocess
import sys

import pytest

from weylspec.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_spectrum_tsv(capsys, cache_dir):
    code, out, _ = run(capsys, "spectrum", "G2", "--format", "tsv")
    assert code == 0
    assert out.splitlines() == ["1:1,2:1", "1:2", "2:2", "3:1", "6:1"]


def test_tori(capsys, cache_dir):
    code, out, _ = run(capsys, "tori", "A1", "--q", "5")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 2
    assert sorted(int(line.split()[-1]) for line in lines) == [4, 6]


def test_tori_tsv_and_json(capsys, cache_dir):
    _, out, _ = run(capsys, "tori", "B2", "--q", "3", "--format", "tsv")
    rows = [line.split("\t") for line in out.splitlines()]
    assert sorted(int(r[2]) for r in rows) == [4, 8, 8, 10, 16]
    _, out, _ = run(capsys, "tori", "B2", "--q", "3", "--format", "json")
    doc = json.loads(out)
    assert sorted(t["order"] for t in doc["tori"]) == [4, 8, 8, 10, 16]
    assert set(doc["tori"][0]) == {"label", "factors", "order"}


def test_verify(capsys, cache_dir):
    code, out, _ = run(capsys, "verify", "--max-rank", "5")
    assert code == 0
    collide = [line for line in out.splitlines() if line.startswith("COLLIDE")]
    assert collide == sorted(collide) and collide
    for line in collide:
        a, b = line[len("COLLIDE "):].split(" == ")
        assert a.replace("B", "C") == b.replace("B", "C")


def test_identify(capsys, cache_dir):
    code, out, _ = run(capsys, "identify", "B3 x G2", "--format", "json")
    assert code == 0 and json.loads(out)["factors"] == ["BC3", "G2"]


def test_identify_from_file(capsys, cache_dir, tmp_path):
    f = tmp_path / "s.spec"
    f.write_text("weylspec v1 unknown n=2\n1:2\n2:2\n4:1\n")
    code, _, err = run(capsys, "identify", "--spectrum-file", str(f))
    assert code == 1 and err.startswith("ERROR INCONSISTENT_SPECTRUM:")
    f.write_text("weylspec v1 unknown n=2\n1:1,2:1\n1:2\n2:2\n4:1\n")
    code, out, _ = run(capsys, "identify", "--spectrum-file", str(f))
    assert code == 0 and out.strip() == "BC2"


def test_invariants(capsys, cache_dir):
    _, out, _ = run(capsys, "invariants", "B2", "--format", "tsv")
    assert "m[4]\t1" in out.splitlines()
    assert "m'[4]\t0" in out.splitlines()


def test_springer_check(capsys, cache_dir):
    code, out, _ = run(capsys, "springer-check", "--max-rank", "4", "--e8-mode", "forbid")
    assert code == 0 and all(line.startswith("PASS") for line in out.splitlines())


def test_classes(capsys, cache_dir):
    _, out, _ = run(capsys, "classes", "D4", "--format", "tsv")
    rows = [line.split("\t") for line in out.splitlines()]
    assert len(rows) == 13 and sum(int(r[2]) for r in rows) == 192


def test_share(capsys, cache_dir):
    _, out, _ = run(capsys, "share", "B2", "A1 x A1", "--format", "tsv")
    shared, witness, _ = out.rstrip("\n").split("\t")
    assert shared == "false" and witness == "4:1"
    _, out, _ = run(capsys, "share", "B5", "C5", "--format", "json")
    assert json.loads(out)["shared"] is True


@pytest.mark.parametrize("argv", [
    ["spectrum"], ["spectrum", "Q7"], ["tori", "A1"], ["spectrum", "A1", "--q", "3"],
    ["share", "A1"], ["bogus"], ["spectrum", "A1", "--format", "xml"],
])
def test_usage_errors(capsys, cache_dir, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_computation_errors(capsys, cache_dir):
    code, _, err = run(capsys, "classes", "E8")
    assert code == 1 and err.startswith("ERROR DATA_UNAVAILABLE:")
    code, _, err = run(capsys, "tori", "A1", "--q", "12")
    assert code == 1 and err.startswith("ERROR NOT_PRIME_POWER:")
    code, _, err = run(capsys, "spectrum", "E8", "--e8-mode", "forbid")
    assert code == 1 and err.startswith("ERROR DATA_UNAVAILABLE:")


def test_cache_admin(capsys, cache_dir):
    assert run(capsys, "cache", "status")[1] == "0 entries\n"
    run(capsys, "spectrum", "E6", "--format", "tsv")
    code, out, _ = run(capsys, "cache", "status")
    assert out.splitlines()[0] == "1 entry" and out.splitlines()[1].split()[0] == "E6"
    code, out, _ = run(capsys, "cache", "rebuild")
    assert code == 0 and out == "1 entry verified\n"
    run(capsys, "cache", "clear")
    assert run(capsys, "cache", "status")[1] == "0 entries\n"


def test_cache_rebuild_reports_drift(capsys, cache_dir):
    run(capsys, "spectrum", "A2")
    path = next(cache_dir.glob("*.spec"))
    path.write_text("weylspec v1 A2 n=2\n1:2\n3:1\n")
    code, out, _ = run(capsys, "cache", "rebuild")
    assert code == 1 and "DRIFT A2" in out and "0 entries verified" in out


def test_cache_dir_flag(capsys, tmp_path, monkeypatch):
    monkeypatch.delenv("WEYLSPEC_CACHE_DIR", raising=False)
    target = tmp_path / "elsewhere"
    run(capsys, "spectrum", "A3", "--cache-dir", str(target))
    assert len(list(target.glob("*.spec"))) == 1


def test_json_is_canonical(capsys, cache_dir):
    for argv in (["spectrum", "F4"], ["invariants", "G2"], ["tori", "G2", "--q", "4"],
                 ["verify", "--max-rank", "4"]):
        _, out, _ = run(capsys, *argv, "--format", "json")
        doc = json.loads(out)
        assert json.dumps(doc, indent=2, sort_keys=True) + "\n" == out


def test_console_entry_point(cache_dir):
    proc = subprocess.run([sys.executable, "-m", "weylspec.cli", "spectrum", "A1", "--format", "tsv"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == "1:1\n2:1\n"

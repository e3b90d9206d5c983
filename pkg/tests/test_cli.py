import json
import subprocess
import sys

import pytest

from kmodular import __version__
from kmodular.cli import main


def _report(path):
    data = json.loads(path.read_text())
    data.pop("stats")
    return data


def test_reidemeister_passes(capsys):
    assert main(["verify-reidemeister", "--n", "3"]) == 0
    out = capsys.readouterr().out
    assert "verify-reidemeister:" in out and "fail" not in out.split("verify-reidemeister:")[1]


def test_corrupted_convention_exits_two():
    assert main(["verify-reidemeister", "--n", "2", "--convention", "corrupted", "--quiet"]) == 2


def test_reports_are_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["verify-reidemeister", "--n", "3", "--quiet", "--out", str(path)]) == 0
    assert _report(a) == _report(b)
    assert a.read_text().count("wallSeconds") == 1


def test_report_subcommand(tmp_path, capsys):
    path = tmp_path / "r.json"
    main(["verify-reidemeister", "--n", "2", "--quiet", "--out", str(path)])
    assert main(["report", str(path)]) == 0
    assert "exit 0" in capsys.readouterr().out


def test_tampered_manifest_is_flagged(tmp_path, capsys):
    path = tmp_path / "r.json"
    main(["verify-reidemeister", "--n", "2", "--quiet", "--out", str(path)])
    data = json.loads(path.read_text())
    data["manifest"]["seed"] = 99
    path.write_text(json.dumps(data))
    assert main(["report", str(path)]) == 2
    assert "mismatch" in capsys.readouterr().out


def test_build_projector_writes_a_cache_that_round_trips(tmp_path, capsys):
    cache = tmp_path / "cache"
    assert main(["build-projector", "--n", "2", "--trunc", "4", "--cache-dir", str(cache), "--quiet"]) == 0
    files = sorted(cache.glob("P2-2-t4-Z-*.json"))
    assert files
    assert main(["report", *map(str, files)]) == 0
    assert "round-trip identical" in capsys.readouterr().out


@pytest.mark.parametrize("k", ["1", "3"])
def test_modular_pipeline(tmp_path, k):
    out = tmp_path / "m.json"
    assert main(["verify-modular", "--n", "1", "--k", k, "--trunc", "6", "--quiet", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["tables"]["shift"]["j"] == 1


def test_unsupported_configuration_exits_one(capsys):
    assert main(["build-projector", "--n", "4", "--k", "2", "--quiet"]) == 1
    assert main(["verify-modular", "--n", "2", "--k", "0", "--quiet"]) == 1
    assert "kmodular:" in capsys.readouterr().err


def test_budget_exhaustion_exits_one():
    assert main(["build-projector", "--n", "3", "--trunc", "5", "--budget-states", "2", "--ring", "F2",
                 "--quiet"]) == 1


@pytest.mark.parametrize("ring", ["Q", "F2"])
def test_oracle_with_random_bridges(ring):
    assert main(["oracle", "bracket", "--word", "s1 s2^-1 s1", "--random", "10", "--ring", ring, "--quiet"]) == 0


def test_matrices_oracle(capsys):
    assert main(["oracle", "matrices"]) == 0
    assert "modular group relations" in capsys.readouterr().out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "kmodular", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == __version__


def test_missing_subcommand():
    with pytest.raises(SystemExit):
        main([])

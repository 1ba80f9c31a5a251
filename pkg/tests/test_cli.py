import json

import pytest

from parasuper import cli
from parasuper.verify import VerificationReport


def run(tmp_path, *args):
    return cli.main(list(args) + ["--out", str(tmp_path), "--no-timestamp"])


def test_theory_ua_outputs(tmp_path):
    assert run(tmp_path, "--series", "A", "--rank", "2", "--partition", "1,1", "--task", "theory-ua") == 0
    for name in ("superclasses.json", "supercharacters.json", "table.csv", "report.json"):
        assert (tmp_path / name).exists()
    classes = json.loads((tmp_path / "superclasses.json").read_text())
    assert sorted(c["size"] for c in classes) == [1, 2, 2, 4]
    chars = json.loads((tmp_path / "supercharacters.json").read_text())
    assert len(chars["characters"]) == 4
    assert json.loads((tmp_path / "report.json").read_text())["status"] == "pass"


def test_byte_identical_reruns(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert run(out, "--series", "A", "--rank", "2", "--task", "export-all") == 0
    for f in sorted(a.rglob("*")):
        if f.is_file():
            assert f.read_bytes() == (b / f.relative_to(a)).read_bytes()


def test_classify(tmp_path):
    assert run(tmp_path, "--series", "D", "--rank", "2", "--task", "classify-ua") == 0
    assert len(json.loads((tmp_path / "superclasses.json").read_text())) == 7


@pytest.mark.parametrize("args", [
    ["--series", "A", "--rank", "2", "--prime", "4"],
    ["--series", "A", "--rank", "2", "--prime", "2"],
    ["--series", "C", "--rank", "2", "--partition", "1,3"],
    ["--series", "B", "--rank", "2", "--partition", "2,2,1"],
    ["--series", "A", "--rank", "2", "--partition", "x"],
    ["--series", "A", "--rank", "2", "--workers", "0"],
])
def test_invalid_config_exit(tmp_path, args):
    assert run(tmp_path, *args) == cli.EXIT_CONFIG


def test_argparse_rejects_unknown_task(tmp_path):
    with pytest.raises(SystemExit) as e:
        run(tmp_path, "--series", "A", "--rank", "2", "--task", "nope")
    assert e.value.code == 2


def test_orbit_cap_exit(tmp_path):
    assert run(tmp_path, "--series", "C", "--rank", "2", "--task", "classify-ua", "--orbit-cap", "100") == cli.EXIT_CAP


def test_theorem_failure_exit(tmp_path, monkeypatch):
    def failing(theory, title=None, workers=1):
        rep = VerificationReport("forced")
        rep.add("disjointness", lambda: (False, {"pair": [0, 1]}, {}))
        return rep

    monkeypatch.setattr(cli, "check_axioms", failing)
    assert run(tmp_path, "--series", "A", "--rank", "2", "--task", "theory-ua") == cli.EXIT_THEOREM
    assert json.loads((tmp_path / "report.json").read_text())["status"] == "fail"


def test_verify_c2(tmp_path):
    assert run(tmp_path, "--series", "C", "--rank", "2", "--task", "verify", "--workers", "2") == 0
    rep = json.loads((tmp_path / "report.json").read_text())
    assert set(rep["checks"]) == {"Ua", "Ga", "claims"}

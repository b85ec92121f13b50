import json
import subprocess
import sys

import pytest

from fractal_complexity import cli
from fractal_complexity.graph import FractalPreset
from fractal_complexity.presets import SG3
from fractal_complexity.treecount import FactoredCount


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build(capsys):
    code, out, _ = run(capsys, "build", "sg3", "--level", "1")
    assert code == 0
    assert "vertices: 10, edges: 18" in out
    code, out, _ = run(capsys, "build", "--preset", "tree3", "--level", "2", "--json")
    assert json.loads(out)["vertex_count"] == 19


def test_count_all_methods(capsys):
    code, out, _ = run(capsys, "count", "sg3", "--level", "1")
    assert code == 0
    assert "matrix-tree: 5292" in out
    assert "decimation: 5292" in out
    assert "agreement: ok" in out


def test_count_json(capsys, tmp_path):
    dest = tmp_path / "c.json"
    code, out, _ = run(capsys, "count", "sg3", "--level", "2", "--method", "decimation",
                       "--json", "--out", str(dest))
    assert code == 0
    doc = json.loads(out)
    assert doc == json.loads(dest.read_text())
    assert doc[0]["factorization"] == [["2", "14"], ["3", "18"], ["5", "3"], ["7", "11"]]


def test_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "sg3", "--level", "2")
    assert code == 0
    assert "52 eigenvalues" in out
    assert "A 3/2: multiplicity 16" in out


def test_entropy(capsys):
    code, out, _ = run(capsys, "entropy", "tree3", "--levels", "5", "--precision", "20")
    assert code == 0
    assert "limit (fit): 0.5493061443340548457" in out


def test_presets(capsys):
    code, out, _ = run(capsys, "presets", "--json")
    assert code == 0
    assert {r["name"] for r in json.loads(out)} == {"sg3", "sg", "tree3"}


def test_verify_ok(capsys):
    code, out, _ = run(capsys, "verify", "tree3")
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_verify_bad_preset(capsys, tmp_path):
    bad = FractalPreset("bad", 3, ("0", "1", "2"), (), {"0": (0, "0"), "1": (1, "1"), "2": (2, "2")})
    path = tmp_path / "bad.json"
    path.write_text(bad.to_json())
    code, out, err = run(capsys, "verify", str(path))
    assert code == 1
    assert json.loads(out)["passed"] is False
    assert "G1 disconnected" in err


def test_unknown_preset(capsys):
    code, _, err = run(capsys, "build", "nope", "--level", "1")
    assert code == 1
    assert "error" in err


@pytest.mark.parametrize("argv", [
    ["build", "sg3"],
    ["count", "sg3", "--level", "-1"],
    ["entropy", "sg3", "--levels", "0"],
    ["count", "sg3", "--level", "1", "--precision", "5"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 64


def test_missing_or_conflicting_preset(capsys):
    code, _, _ = run(capsys, "build", "--level", "1")
    assert code == 64
    code, _, _ = run(capsys, "build", "sg3", "--preset", "sg", "--level", "1")
    assert code == 64


def test_mismatch_exit_code(capsys, monkeypatch):
    real = cli.count_decimation

    def off_by_one(*args, **kwargs):
        fc = real(*args, **kwargs)
        return FactoredCount.from_int(fc.value + 1)

    monkeypatch.setattr(cli, "count_decimation", off_by_one)
    code, _, err = run(capsys, "count", "sg3", "--level", "1")
    assert code == 2
    assert "mismatch" in err


def test_output_is_byte_stable(capsys):
    outs = {run(capsys, "count", "sg3", "--level", "2", "--json")[1] for _ in range(2)}
    assert len(outs) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fractal_complexity", "build", "sg", "--level", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "vertices: 15" in proc.stdout


def test_large_count_prints_in_full(capsys):
    # far beyond the interpreter's default integer-to-string digit limit
    code, out, _ = run(capsys, "count", "sg3", "--level", "6", "--method", "decimation", "--json")
    assert code == 0
    doc = json.loads(out)[0]
    assert len(doc["value"]) > 20000
    assert doc["factorization"][0] == ["2", "18662"]

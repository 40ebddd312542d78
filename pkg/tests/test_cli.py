import json

import pytest

from scattering.cli import main, resolve_cache_dir
from scattering.standard import CACHE_ENV


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_coeff_examples(capsys):
    assert run(capsys, "--no-cache", "coeff", "--mu", "4", "--nu", "4", "--a", "4", "--b", "3", "--order", "8") == (0, "2812\n", "")
    assert run(capsys, "--no-cache", "coeff", "--mu", "0", "--nu", "5", "--a", "1", "--b", "1", "--order", "4")[1] == "0\n"
    code, out, _ = run(capsys, "--no-cache", "coeff", "--mu", "2", "--nu", "3", "--a", "4", "--b", "3", "--json")
    doc = json.loads(out)
    assert doc["schema"] == "scattering.coeff/1" and doc["c"] == "14" and doc["order"] == 7


def test_classify(capsys):
    code, out, _ = run(capsys, "--no-cache", "classify", "--mu", "2", "--nu", "2", "--a", "2", "--b", "1")
    assert code == 0 and out.startswith("MutationOrbit [T1]")
    code, out, _ = run(capsys, "--no-cache", "classify", "--mu", "3", "--nu", "3", "--a", "1", "--b", "1", "--json")
    doc = json.loads(out)
    assert doc["schema"] == "scattering.verdict/1"


def test_wall_and_lattice(capsys):
    code, out, _ = run(capsys, "--no-cache", "wall", "--mu", "2", "--nu", "2", "--dir", "1,1", "--order", "4", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == "scattering.wall/1" and doc["direction"] == [1, 1]
    code, out, _ = run(capsys, "--no-cache", "lattice", "--m1", "1,0", "--m2=-1,4", "--m", "1,4", "--order", "5")
    assert code == 0 and "6" in out
    code, _, err = run(capsys, "--no-cache", "wall", "--mu", "2", "--nu", "2", "--dir", "2,2", "--order", "4")
    assert code == 1 and "not primitive" in err


def test_interpolate(capsys):
    code, out, _ = run(capsys, "--no-cache", "interpolate", "--a", "2", "--b", "2", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["ok"]
    assert doc["polynomial"] == "mu^2 nu^2 - mu^2 nu - mu nu^2 + mu nu"
    assert doc["lambda"] == [[2, 2, "4"]]


def test_gw_and_quiver(capsys):
    code, out, _ = run(capsys, "--no-cache", "gw", "--p1", "2", "--p2", "2")
    doc = json.loads(out)
    assert doc["schema"] == "scattering.gw/1" and doc["N"] == "-1/4"
    code, out, _ = run(capsys, "--no-cache", "quiver", "--mu", "2", "--nu", "3", "--a", "2", "--b", "3")
    doc = json.loads(out)
    assert doc["schema"] == "scattering.quiver/1" and doc["chi"] == "14"
    code, _, err = run(capsys, "--no-cache", "quiver", "--mu", "2", "--nu", "2", "--a", "2", "--b", "2")
    assert code == 1 and err


def test_verify_suite(capsys):
    code, out, _ = run(capsys, "--no-cache", "verify", "--suite", "gw")
    assert code == 0 and out.count("PASS") == 4 and "FAIL" not in out
    code, out, _ = run(capsys, "--no-cache", "verify", "--suite", "figures", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["ok"] and doc["suite"] == "figures"


def test_render_to_file(tmp_path, capsys):
    target = tmp_path / "d.svg"
    code, out, _ = run(capsys, "--no-cache", "render", "--mu", "3", "--nu", "3", "--order", "4", "--output", str(target))
    assert code == 0 and out == ""
    assert "stroke-dasharray" in target.read_text()
    code, out, _ = run(capsys, "--no-cache", "render", "--m1", "3,0", "--m2", "0,2", "--order", "6", "--format", "tikz")
    assert code == 0 and "tikzpicture" in out
    code, _, err = run(capsys, "--no-cache", "render", "--m1", "3,0")
    assert code == 1 and "--m2" in err


def test_bad_arguments(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["coeff", "--bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["render", "--mu", "2", "--nu", "2", "--window", "1/x"])
    assert exc.value.code == 2
    assert "cannot parse rational" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        main(["wall", "--mu", "2", "--nu", "2", "--dir", "1", "--order", "3"])
    assert exc.value.code == 2


def test_cache_written_and_corruption(tmp_path, capsys):
    code, out, _ = run(capsys, "--cache-dir", str(tmp_path), "compute", "--mu", "2", "--nu", "2", "--order", "5")
    assert code == 0 and "c[1,1] = 4" in out
    files = list(tmp_path.glob("standard_2_2_N5.json"))
    assert len(files) == 1
    doc = json.loads(files[0].read_text())
    doc["checksum"] = "0" * 64
    files[0].write_text(json.dumps(doc))
    code, _, err = run(capsys, "--cache-dir", str(tmp_path), "coeff", "--mu", "2", "--nu", "2", "--a", "1", "--b", "1")
    assert code == 3 and "checksum" in err


def test_cache_precedence(tmp_path, monkeypatch):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path / "env"))
    assert resolve_cache_dir(str(tmp_path / "flag")) == tmp_path / "flag"
    assert resolve_cache_dir(None) == tmp_path / "env"
    monkeypatch.delenv(CACHE_ENV)
    assert resolve_cache_dir(None).name == "scattering"


def test_multiparam_compute(tmp_path, capsys):
    target = tmp_path / "mp.json"
    code, out, _ = run(capsys, "--no-cache", "compute", "--mu", "1", "--nu", "2", "--order", "4", "--multiparam", "--output", str(target))
    assert code == 0 and "multi-parameter" in out and target.exists()

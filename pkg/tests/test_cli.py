import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from qshape import census
from qshape.cli import main
from qshape.io import load_config, read_fields_csv, resolve_threads
from qshape.errors import ConfigError
from qshape.reduction import in_F3


def run(argv, **kw):
    buf = io.StringIO()
    code = main(argv, out=buf)
    return code, buf.getvalue()


def test_classify_text():
    code, out = run(["classify", "12"])
    assert code == 0
    assert "class: IV+" in out and "disc: -1728" in out
    assert "lambda1_sq: 1/3" in out and "lambda2: 1/2" in out


def test_classify_json():
    code, out = run(["classify", "-5", "--format", "json"])
    rec = json.loads(out)
    assert code == 0 and rec["class"] == "II-" and rec["m"] == -5


@pytest.mark.parametrize("m,needle", [("-4", "excluded case X^4 + 4"), ("16", "fourth"), ("9", "reducible"),
                                      ("0", "")])
def test_classify_errors(capsys, m, needle):
    code, out = run(["classify", m])
    err = capsys.readouterr().err
    assert code == 2 and out == ""
    assert err.startswith("error: ") and err.count("\n") == 1
    assert needle in err.lower() or needle in err


def test_shape_exact_and_float():
    code, out = run(["shape", "2", "--exact", "--format", "json"])
    rec = json.loads(out)
    assert code == 0
    assert [rec["gram3"][i][i] for i in range(3)] == ["8", "4*sqrt(2)", "8*sqrt(2)"]
    code, out = run(["shape", "2", "--float", "--format", "json"])
    diag = [float(json.loads(out)["gram3"][i][i]) for i in range(3)]
    assert diag == pytest.approx([8, 4 * 2**0.5, 8 * 2**0.5])


def test_shape_reduce():
    code, out = run(["shape", "17", "--reduce", "--format", "json"])
    rec = json.loads(out)
    assert code == 0 and rec["reduced_in_F3"]
    assert in_F3(np.array(rec["reduced"], dtype=float))
    assert abs(round(np.linalg.det(np.array(rec["unimodular"])))) == 1


def test_enumerate_examples():
    code, out = run(["enumerate", "--max-N", "2", "--sign", "+"])
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "m,a,b,c,sign,type,disc,lambda1_sq_num,lambda1_sq_den,b_param"
    assert lines[1:] == ["2,2,1,1,+,II,-2048,1,2,1", "# summary total=1 excluded_8divm=0"]
    code, out = run(["enumerate", "--max-disc", "2048", "--types", "II", "--sign", "+"])
    assert "2,2,1,1,+,II,-2048,1,2,1" in out.splitlines()


def test_enumerate_empty():
    code, out = run(["enumerate", "--max-disc", "10"])
    assert out.splitlines()[1:] == ["# summary total=0 excluded_8divm=0"]


def test_enumerate_sorted_and_round_trip(tmp_path):
    path = tmp_path / "f.csv"
    code, out = run(["enumerate", "--max-disc", "200000", "--out", str(path)])
    assert code == 0 and out == ""
    recs, summary = read_fields_csv(io.StringIO(path.read_text()))
    keys = [(abs(r.disc), r.m) for r in recs]
    assert keys == sorted(keys)
    assert summary["total"] == len(recs)
    expected = census.enumerate_fields(max_disc=200000).sorted_by_disc()
    assert recs == expected


def test_enumerate_bad_path(capsys):
    code, _ = run(["enumerate", "--max-N", "3", "--out", "/nonexistent/dir/x.csv"])
    err = capsys.readouterr().err
    assert code == 2 and "/nonexistent/dir/x.csv" in err


def test_output_independent_of_threads(monkeypatch):
    import functools
    monkeypatch.setattr(census, "_plan", functools.partial(census._plan, chunk=300))
    outs = {run(["enumerate", "--max-N", "40", "--threads", str(t)])[1] for t in (1, 2, 5)}
    assert len(outs) == 1
    hist = {run(["histogram", "--type", "II", "--max-disc", "1e9", "--threads", str(t)])[1] for t in (1, 3)}
    assert len(hist) == 1


def test_verify_suites():
    code, out = run(["verify", "densities", "--l", "3"])
    rec = json.loads(out)
    assert code == 0 and rec["status"] == "pass"
    first = rec["checks"][0]
    assert set(first) == {"check", "status", "observed", "expected", "tolerance"}
    assert first["observed"]["count"] == 432 and first["observed"]["density"] == "16/27"
    code, out = run(["verify", "lipschitz", "--M", "100", "--R", "2"])
    assert code == 0
    code, out = run(["verify", "gram", "--max-m", "150"])
    assert code == 0 and json.loads(out)["status"] == "pass"


def test_verify_counting_small():
    code, out = run(["verify", "counting", "--N", "1e5", "--tau", "3"])
    rec = json.loads(out)
    assert rec["checks"][0]["expected"] == pytest.approx(rec["checks"][0]["expected"])
    assert code in (0, 1)
    assert code == (0 if rec["status"] == "pass" else 1)


def test_verify_failure_exit(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("rel_tol = 1e-12\n")
    code, out = run(["--config", str(cfg), "verify", "counting", "--N", "1e4"])
    assert code == 1 and json.loads(out)["status"] == "fail"


def test_densities_csv():
    code, out = run(["densities", "--max-b", "3", "--types", "I,II"])
    lines = out.splitlines()
    assert lines[0] == "b,alpha,psi,M_I,M_II,psi_I,psi_II"
    assert lines[1].startswith("1,1,1,1/16,1/4,")
    code, out = run(["densities", "--max-b", "2", "--tau", "1"])
    assert out.splitlines()[1].startswith("1,16,1,16")
    code, _ = run(["densities", "--tau", "8"])
    assert code == 2


def test_histogram_csv():
    code, out = run(["histogram", "--type", "II", "--max-disc", "1e10",
                     "--r1-edges", "1,2,4", "--r2-edges", "1,2,3"])
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["bin", "empirical", "predicted", "ratio"]
    for _, emp, pred, ratio in rows[1:]:
        if float(pred) == 0:  # b = 2 carries no type II fields
            assert int(emp) == 0 and ratio == "nan"
            continue
        assert float(ratio) == pytest.approx(int(emp) / float(pred), rel=1e-9)
    assert [r[0] for r in rows[1:]] == ["(1,2]x(1,2]", "(1,2]x(2,3]", "(2,4]x(1,2]", "(2,4]x(2,3]"]


def test_usage_errors_single_line(capsys):
    for argv in (["nosuch"], ["enumerate"], ["enumerate", "--max-N", "3", "--max-disc", "9"],
                 ["histogram", "--type", "II", "--max-disc", "1e6", "--r1-edges", "3,2"],
                 ["enumerate", "--max-N", "3", "--types", "VI"]):
        code, _ = run(argv)
        err = capsys.readouterr().err
        assert code == 2, argv
        assert err.startswith("error: ") and err.count("\n") == 1


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "q.cfg"
    cfg.write_text("# comment\nformat = json\nthreads = 3\n")
    assert load_config(str(cfg)) == {"format": "json", "threads": 3}
    code, out = run(["--config", str(cfg), "classify", "12"])
    assert json.loads(out)["class"] == "IV+"
    # the flag wins over the file
    code, out = run(["--config", str(cfg), "classify", "12", "--format", "text"])
    assert out.startswith("m: 12")
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = red\n")
    with pytest.raises(ConfigError):
        load_config(str(bad))
    code, _ = run(["--config", str(bad), "classify", "12"])
    assert code == 2 and "unknown key" in capsys.readouterr().err


def test_thread_precedence():
    assert resolve_threads(4, {"threads": 2}, {"QSHAPE_THREADS": "3"}) == 4
    assert resolve_threads(None, {"threads": 2}, {"QSHAPE_THREADS": "3"}) == 2
    assert resolve_threads(None, {}, {"QSHAPE_THREADS": "3"}) == 3
    assert resolve_threads(None, {}, {}) == 1
    for env in ({"QSHAPE_THREADS": "0"}, {"QSHAPE_THREADS": "x"}):
        with pytest.raises(ConfigError):
            resolve_threads(None, {}, env)


def test_bad_env_threads(monkeypatch, capsys):
    monkeypatch.setenv("QSHAPE_THREADS", "-2")
    code, _ = run(["enumerate", "--max-N", "3"])
    assert code == 2 and "ConfigError" in capsys.readouterr().err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qshape", "classify", "2"], capture_output=True, text=True)
    assert res.returncode == 0 and "class: II+" in res.stdout

import json
import subprocess
import sys

import pytest

from krforest.cli import main


def run(capsys, *args):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def data(tmp_path, capsys):
    path = tmp_path / "d.csv"
    assert run(capsys, "gen", "--generator", "piecewise", "--n", 150, "--p", 4,
               "--out", path)[0] == 0
    return path


def last_json(text):
    return json.loads(text.strip().splitlines()[-1])


def test_train_predict_eval(tmp_path, capsys, data):
    model = tmp_path / "m.krf"
    code, out, _ = run(capsys, "train", "--data", data, "--model", model, "--splitter", "krf",
                       "--k", 3, "--trees", 4, "--beta", 0.8, "--min-leaf", 5,
                       "--penalty-c", 1.0, "--seed", 1)
    assert code == 0 and model.exists()
    assert run(capsys, "predict", "--model", model, "--data", data,
               "--out", tmp_path / "p.csv")[0] == 0
    lines = (tmp_path / "p.csv").read_text().splitlines()
    assert lines[0] == "t0,t1" and len(lines) == 151
    code, out, _ = run(capsys, "eval", "--model", model, "--data", data,
                       "--out", tmp_path / "e.json")
    assert code == 0
    report = last_json(out)
    assert report["n"] == 150 and report["mae_p90"] <= report["mae_p95"] <= report["mae"]
    assert "mae_p90" in out.splitlines()[0]
    assert json.loads((tmp_path / "e.json").read_text()) == report


def test_same_arguments_same_metrics(tmp_path, capsys, data):
    outs = []
    for name in ("a", "b"):
        model = tmp_path / f"{name}.krf"
        run(capsys, "train", "--data", data, "--model", model, "--splitter", "akrf",
            "--k-range", "2:6", "--trees", 3, "--seed", 7)
        outs.append(run(capsys, "eval", "--model", model, "--data", data)[1])
    assert outs[0] == outs[1]
    assert (tmp_path / "a.krf").read_bytes() == (tmp_path / "b.krf").read_bytes()


def test_cv_and_bench(tmp_path, capsys, data):
    code, out, _ = run(capsys, "cv", "--data", data, "--splitter", "brf", "--gamma-grid",
                       "0.5,1", "--trees", 2, "--folds", 3)
    assert code == 0
    res = last_json(out)
    assert res["best_index"] in (0, 1) and len(res["scores"]) == 2
    code, out, _ = run(capsys, "bench", "--data", data, "--trees", 2, "--k-range", "2:5",
                       "--out", tmp_path / "b.json")
    assert code == 0
    assert set(last_json(out)) == {"krf k=2 beta=1", "akrf k=2:5 beta=1", "brf gamma=1 beta=1"}


def test_circular_flow(tmp_path, capsys):
    path = tmp_path / "r.csv"
    run(capsys, "gen", "--generator", "rotation", "--n", 80, "--p", 3, "--out", path)
    model = tmp_path / "r.krf"
    assert run(capsys, "train", "--data", path, "--model", model, "--trees", 2)[0] == 0
    code, out, _ = run(capsys, "eval", "--model", model, "--data", path)
    assert code == 0 and 0 <= last_json(out)["mae"] <= 180
    run(capsys, "predict", "--model", model, "--data", path, "--out", tmp_path / "p.csv")
    assert (tmp_path / "p.csv").read_text().startswith("angle_deg\n")


def test_errors_exit_nonzero(tmp_path, capsys, data):
    code, _, err = run(capsys, "eval", "--model", tmp_path / "missing.krf", "--data", data)
    assert code != 0 and "error" in err
    bad = tmp_path / "bad.csv"
    bad.write_text("f0,t0\n1,oops\n")
    code, _, err = run(capsys, "train", "--data", bad, "--model", tmp_path / "m.krf")
    assert code != 0 and "row 2, column 2" in err
    code, _, err = run(capsys, "train", "--data", data, "--model", tmp_path / "m.krf",
                       "--beta", 0)
    assert code != 0 and "bagging_ratio_beta" in err
    with pytest.raises(SystemExit) as exc:
        main(["train", "--splitter", "nope"])
    assert exc.value.code != 0


def test_module_entry_point(tmp_path):
    target = tmp_path / "x.csv"
    out = subprocess.run([sys.executable, "-m", "krforest", "gen", "--n", "10",
                          "--out", str(target)], capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert target.exists()

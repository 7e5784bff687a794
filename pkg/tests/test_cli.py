import json
import subprocess
import sys

import numpy as np
import pytest

from addnmf.cli import main
from addnmf.fileio import read_matrix, write_matrix
from addnmf.matrix import objective


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def parse_summary(out):
    return dict(line.split(": ", 1) for line in out.strip().splitlines())


def test_factorize_scalar(tmp_path, capsys):
    write_matrix(tmp_path / "v.csv", np.array([[4.0]]))
    code, out, _ = run(capsys, "factorize", tmp_path / "v.csv", "--rank", 1,
                       "--output-w", tmp_path / "w.csv", "--output-h", tmp_path / "h.csv")
    assert code == 0
    assert float(parse_summary(out)["objective"]) < 1e-12
    w, h = read_matrix(tmp_path / "w.csv"), read_matrix(tmp_path / "h.csv")
    assert abs(w[0, 0] * h[0, 0] - 4.0) < 1e-6


def test_factorize_rejects_negative_input(tmp_path, capsys):
    (tmp_path / "v.csv").write_text("1,2\n-1,3\n")
    code, _, err = run(capsys, "factorize", tmp_path / "v.csv", "--rank", 1,
                       "--output-w", tmp_path / "w.csv", "--output-h", tmp_path / "h.csv")
    assert code == 2
    assert "nonnegative" in err
    assert sorted(p.name for p in tmp_path.iterdir()) == ["v.csv"]


def test_factorize_parse_error_exit_code(tmp_path, capsys):
    (tmp_path / "v.csv").write_text("1,2\n3\n")
    code, _, err = run(capsys, "factorize", tmp_path / "v.csv", "--rank", 1,
                       "--output-w", tmp_path / "w.csv", "--output-h", tmp_path / "h.csv")
    assert code == 2 and "line 2" in err


def test_factorize_missing_file(tmp_path, capsys):
    code, _, _ = run(capsys, "factorize", tmp_path / "nope.csv", "--rank", 1,
                     "--output-w", tmp_path / "w.csv", "--output-h", tmp_path / "h.csv")
    assert code == 2


def test_factorize_overcomplete_rank(tmp_path, capsys):
    write_matrix(tmp_path / "v.csv", np.array([[1.0, 2.0], [3.0, 4.0]]))
    code, out, _ = run(capsys, "factorize", tmp_path / "v.csv", "--rank", 5,
                       "--output-w", tmp_path / "w.csv", "--output-h", tmp_path / "h.csv")
    assert code == 0
    assert read_matrix(tmp_path / "w.csv").shape == (2, 5)
    assert read_matrix(tmp_path / "h.csv").shape == (5, 2)
    assert float(parse_summary(out)["objective"]) < 1e-6


def test_factorize_rank_must_be_positive(tmp_path, capsys):
    write_matrix(tmp_path / "v.csv", np.ones((2, 2)))
    with pytest.raises(SystemExit) as exc:
        main(["factorize", str(tmp_path / "v.csv"), "--rank", "0",
              "--output-w", str(tmp_path / "w.csv"), "--output-h", str(tmp_path / "h.csv")])
    assert exc.value.code == 2


@pytest.mark.parametrize("algorithm", ["additive", "ls", "gz"])
@pytest.mark.parametrize("ext", [".csv", ".mtx"])
def test_factorize_round_trip_objective(tmp_path, capsys, algorithm, ext):
    rng = np.random.default_rng(0)
    v = rng.uniform(0, 10, (9, 7))
    write_matrix(tmp_path / f"v{ext}", v)
    code, out, _ = run(capsys, "factorize", tmp_path / f"v{ext}", "--rank", 2,
                       "--algorithm", algorithm, "--max-sweeps", 50,
                       "--output-w", tmp_path / f"w{ext}", "--output-h", tmp_path / f"h{ext}")
    assert code == 0
    printed = float(parse_summary(out)["objective"])
    f = objective(v, read_matrix(tmp_path / f"w{ext}"), read_matrix(tmp_path / f"h{ext}"))
    assert f == pytest.approx(printed, rel=1e-9)


def test_factorize_trace_schema(tmp_path, capsys):
    rng = np.random.default_rng(1)
    write_matrix(tmp_path / "v.csv", rng.uniform(0, 10, (6, 5)))
    code, _, _ = run(capsys, "factorize", tmp_path / "v.csv", "--rank", 2,
                     "--max-sweeps", 20, "--tol-delta", 0, "--trace-every", 5,
                     "--output-w", tmp_path / "w.csv", "--output-h", tmp_path / "h.csv",
                     "--trace", tmp_path / "t.json")
    assert code == 0
    trace = json.loads((tmp_path / "t.json").read_text())
    assert [t["sweep"] for t in trace] == [0, 5, 10, 15, 20]
    for t in trace:
        assert set(t) == {"sweep", "elapsed_seconds", "objective", "delta_normalized"}
    f = [t["objective"] for t in trace]
    assert all(b <= a for a, b in zip(f, f[1:]))


def test_factorize_seed_is_deterministic(tmp_path, capsys):
    rng = np.random.default_rng(2)
    write_matrix(tmp_path / "v.csv", rng.uniform(0, 10, (6, 5)))
    outs = []
    for k in range(2):
        run(capsys, "factorize", tmp_path / "v.csv", "--rank", 2, "--seed", 9,
            "--output-w", tmp_path / f"w{k}.csv", "--output-h", tmp_path / f"h{k}.csv")
        outs.append((tmp_path / f"w{k}.csv").read_bytes())
    assert outs[0] == outs[1]


def test_diagnose_exact(tmp_path, capsys):
    w = np.array([[1.0, 0.0], [2.0, 1.0], [0.0, 3.0]])
    h = np.array([[1.0, 2.0], [4.0, 0.0]])
    for name, m in (("v", w @ h), ("w", w), ("h", h)):
        write_matrix(tmp_path / f"{name}.csv", m)
    code, out, _ = run(capsys, "diagnose", *(tmp_path / f"{x}.csv" for x in "vwh"))
    assert code == 0
    rep = json.loads(out)
    assert rep["delta_normalized"] == 0 and rep["objective"] == 0


def test_diagnose_scalar_example(tmp_path, capsys):
    for name, val in (("v", 3.0), ("w", 1.0), ("h", 1.0)):
        write_matrix(tmp_path / f"{name}.csv", np.array([[val]]))
    code, out, _ = run(capsys, "diagnose", *(tmp_path / f"{x}.csv" for x in "vwh"))
    assert code == 0
    rep = json.loads(out)
    assert rep == {"delta_raw": 4.0, "count_w": 1, "count_h": 1,
                   "delta_normalized": 2.0, "objective": 2.0}


def test_diagnose_shape_mismatch(tmp_path, capsys):
    write_matrix(tmp_path / "v.csv", np.ones((3, 3)))
    write_matrix(tmp_path / "w.csv", np.ones((3, 2)))
    write_matrix(tmp_path / "h.csv", np.ones((2, 4)))
    code, _, err = run(capsys, "diagnose", *(tmp_path / f"{x}.csv" for x in "vwh"))
    assert code == 2 and err


@pytest.mark.parametrize("experiment", ["one", "two"])
def test_benchmark_rows(tmp_path, capsys, experiment):
    out = tmp_path / "b.csv"
    code, _, _ = run(capsys, "benchmark", experiment, "--n", 12, "--m", 8, "--rank", 2,
                     "--checkpoints", "2,4,6", "--out", out)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "checkpoint,algorithm,objective,delta_normalized"
    assert len(lines) - 1 == 3 * 3


def test_benchmark_trials_with_one_is_usage_error(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["benchmark", "one", "--trials", "3", "--out", str(tmp_path / "b.csv")])
    assert exc.value.code == 2
    assert not (tmp_path / "b.csv").exists()


def test_benchmark_bad_checkpoints(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["benchmark", "one", "--checkpoints", "5,3", "--out", str(tmp_path / "b.csv")])
    assert exc.value.code == 2


def test_benchmark_is_byte_identical(tmp_path, capsys):
    args = ["benchmark", "two", "--n", 10, "--m", 6, "--rank", 2, "--trials", 2,
            "--checkpoints", "3,6", "--seed", 4]
    run(capsys, *args, "--out", tmp_path / "a.csv")
    run(capsys, *args, "--out", tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_unknown_command_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "addnmf", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip()

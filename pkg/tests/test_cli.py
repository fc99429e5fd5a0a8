import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from splinescaling.cli import EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, main

PRINTED_P3 = [0.0498, -0.121, -0.191, 0.650, 1.141, 0.4705]
PRINTED_P4 = [0.3258, 1.011, 0.8922, -0.0396, -0.2646, 0.0436, 0.0466, -0.015]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_qpoly_text(capsys):
    code, out, _ = run(capsys, "qpoly", "--n", "3")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "4 - 9/2 x + 3/2 x^2"
    assert run(capsys, "qpoly", "--n", "1")[1].splitlines()[0] == "1"


def test_qpoly_oracle(capsys):
    code, out, _ = run(capsys, "qpoly", "--n", "4", "--oracle")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "8 - 29/2 x + 10 x^2 - 5/2 x^3"
    assert "EEA oracle: MATCH" in out


def test_qpoly_json(capsys):
    code, data = run_json(capsys, "qpoly", "--n", "3", "--json", "--oracle")
    assert data["coeffs_exact"] == ["4", "-9/2", "3/2"]
    assert data["coeffs"] == [4.0, -4.5, 1.5]
    assert data["eea_oracle"] == "MATCH"


@pytest.mark.parametrize("n", ["0", "65", "-3"])
def test_invalid_order_is_usage_error(capsys, n):
    assert run(capsys, "qpoly", "--n", n)[0] == EXIT_USAGE


def test_argparse_errors_are_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["qpoly"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate", "--n", "3"])
    assert exc.value.code == EXIT_USAGE


def test_factor_examples(capsys):
    code, d2 = run_json(capsys, "factor", "--n", "2")
    assert code == EXIT_OK
    assert d2["a"] == pytest.approx([1.36602540, -0.36602540], abs=1e-8)
    assert {"n", "branch", "a", "sum_a", "sum_a_sq"} <= set(d2)
    _, d1 = run_json(capsys, "factor", "--n", "1")
    assert d1["a"] == [1.0]
    assert "warning" not in d1


def test_factor_all_n4(capsys):
    code, data = run_json(capsys, "factor", "--n", "4", "--all")
    assert code == EXIT_OK
    assert data["count"] == 8 and len(data["solutions"]) == 8
    assert any(np.round(s["a"], 4).tolist() == [2.6064, -2.3381, 0.8516, -0.1199] for s in data["solutions"])
    assert sorted(s["sign"] for s in data["solutions"]) == [-1] * 4 + [1] * 4


def test_factor_branch_selection(capsys):
    _, outer = run_json(capsys, "factor", "--n", "3", "--branch", "outer")
    _, inner = run_json(capsys, "factor", "--n", "3", "--branch", "inner")
    assert outer["a"] == pytest.approx(inner["a"][::-1], abs=1e-12)
    assert run(capsys, "factor", "--n", "3", "--branch", "index:9")[0] == EXIT_USAGE
    assert run(capsys, "factor", "--n", "3", "--branch", "bogus")[0] == EXIT_USAGE


def test_factor_warns_beyond_validated_range(capsys):
    _, data = run_json(capsys, "factor", "--n", "18")
    assert "warning" in data


def test_numeric_failure_exit_code(capsys, monkeypatch):
    from splinescaling import cli
    from splinescaling.factor import ConvergenceFailure

    def boom(*_a, **_k):
        raise ConvergenceFailure("no convergence")

    monkeypatch.setattr(cli, "construct", boom)
    code, _, err = run(capsys, "factor", "--n", "3")
    assert code == EXIT_NUMERIC
    assert "no convergence" in err


@pytest.mark.parametrize("n,printed", [(3, PRINTED_P3), (4, PRINTED_P4)])
def test_coeffs_json(capsys, n, printed):
    code, data = run_json(capsys, "coeffs", "--n", str(n))
    assert code == EXIT_OK
    assert data["k"] == list(range(1, 2 * n + 1))
    assert np.max(np.abs(np.array(data["p"]) - printed)) < 1.5e-3


def test_coeffs_csv(capsys):
    code, out, _ = run(capsys, "coeffs", "--n", "1", "--format", "csv")
    assert code == EXIT_OK
    assert out == "k,p\n1,1\n2,1\n"
    _, out, _ = run(capsys, "coeffs", "--n", "3", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    _, data = run_json(capsys, "coeffs", "--n", "3")
    # %.17g text and JSON repr both round-trip the same doubles
    assert [float(r["p"]) for r in rows] == data["p"]


def test_cascade_box(capsys):
    code, out, err = run(capsys, "cascade", "--n", "1", "--levels", "4", "--iters", "5")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 17
    for r in rows:
        x, phi = float(r["x"]), float(r["phi"])
        assert phi == (1.0 if 1 <= x < 2 else 0.0)
    assert "last sup-norm change" in err


def test_cascade_defaults_and_integral(capsys, tmp_path):
    _, default_out, _ = run(capsys, "cascade", "--n", "3")
    _, explicit_out, _ = run(capsys, "cascade", "--n", "3", "--levels", "10", "--iters", "25")
    assert default_out == explicit_out
    phi = np.array([float(r["phi"]) for r in csv.DictReader(io.StringIO(default_out))])
    assert abs(phi.sum() * 2.0**-10 - 1.0) <= 1e-6
    target = tmp_path / "phi.csv"
    assert run(capsys, "cascade", "--n", "3", "--out", str(target))[0] == EXIT_OK
    assert target.read_text() == default_out


def test_cascade_bad_arguments(capsys, tmp_path):
    assert run(capsys, "cascade", "--n", "3", "--levels", "17")[0] == EXIT_USAGE
    assert run(capsys, "cascade", "--n", "3", "--iters", "0")[0] == EXIT_USAGE
    code, _, err = run(capsys, "cascade", "--n", "1", "--levels", "2", "--out", str(tmp_path / "no" / "x.csv"))
    assert code == EXIT_NUMERIC
    assert str(tmp_path / "no" / "x.csv") in err


@pytest.mark.parametrize("n,sum_sq", [(3, 4.75), (4, 13.0)])
def test_verify_reference_sums(capsys, n, sum_sq):
    code, rep = run_json(capsys, "verify", "--n", str(n))
    assert code == EXIT_OK and rep["pass"] is True
    assert rep["checks"]["sum_a_sq"] == pytest.approx(sum_sq, abs=1e-9)
    assert rep["checks"]["l2_bound_lhs"] == pytest.approx(n * sum_sq, abs=1e-8)
    assert rep["checks"]["l2_bound_rhs"] == 2.0 ** (2 * n - 1)
    assert rep["passes"]["l2_bound"] is True


def test_verify_report_schema(capsys):
    code, rep = run_json(capsys, "verify", "--n", "8")
    assert code == EXIT_OK
    for key in ("bezout_residual", "qmf_residual", "sum_a", "sum_a_sq", "l2_bound_lhs",
                "l2_bound_rhs", "min_abs_P_on_pipi", "orthonormality_max_offdiag"):
        assert key in rep["checks"]
    assert set(rep["tolerances"]) <= set(rep["passes"])
    assert rep["pass"] == all(rep["passes"].values())


def test_verify_negative_control(capsys):
    code, rep = run_json(capsys, "verify", "--n", "3", "--perturb", "2:1e-3")
    assert code == EXIT_VERIFY
    assert rep["pass"] is False and rep["passes"]["filter_pair"] is False
    assert run(capsys, "verify", "--n", "3", "--perturb", "99:1e-3")[0] == EXIT_USAGE
    assert run(capsys, "verify", "--n", "3", "--perturb", "oops")[0] == EXIT_USAGE


def test_roundtrip_examples(capsys):
    code, data = run_json(capsys, "roundtrip", "--n", "3", "--length", "1024", "--levels", "3", "--seed", "7")
    assert code == EXIT_OK
    assert data["max_err"] <= 1e-8 and data["parseval_dev"] <= 1e-9
    assert data["seed"] == 7
    _, haar = run_json(capsys, "roundtrip", "--n", "1", "--length", "4", "--levels", "1", "--seed", "0")
    assert haar["max_err"] <= 1e-12


def test_roundtrip_usage_error(capsys):
    # 1020 is not divisible by 2^3
    assert run(capsys, "roundtrip", "--n", "3", "--length", "1020", "--levels", "3")[0] == EXIT_USAGE


def test_deterministic(capsys):
    a = run(capsys, "roundtrip", "--n", "2", "--seed", "3")[1]
    b = run(capsys, "roundtrip", "--n", "2", "--seed", "3")[1]
    assert a == b


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "splinescaling", "qpoly", "--n", "3"],
        capture_output=True, text=True, env={"NO_COLOR": "1", "PATH": ""}, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "4 - 9/2 x + 3/2 x^2"
    proc = subprocess.run([sys.executable, "-m", "splinescaling", "qpoly", "--n", "0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 64

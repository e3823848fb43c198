import csv
import io
import os

import numpy as np
import pytest

from fracemden.cli import main, poly_str
from fracemden.polybasis import boubaker_polynomial

PROBLEMS_DIR = os.path.join(os.path.dirname(__file__), "..", "problems")


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestPolyStr:
    @pytest.mark.parametrize(
        "n,text",
        [(0, "1"), (1, "x"), (2, "x^2 + 2"), (3, "x^3 + x"), (4, "x^4 - 2")],
    )
    def test_rendering(self, n, text):
        assert poly_str(boubaker_polynomial(n)) == text


class TestBasisCommand:
    def test_prints_family(self):
        code, out = run("basis", "--n", "2")
        assert code == 0
        assert "B_2 = x^2 + 2" in out
        assert "M =" in out

    def test_degree_zero(self):
        code, out = run("basis", "--n", "0")
        assert code == 0
        assert "B_0 = 1" in out

    def test_cap_guard(self, capsys):
        code, _ = run("basis", "--n", "16")
        assert code == 2
        assert "condition" in capsys.readouterr().err

    def test_force_overrides_cap(self):
        code, out = run("basis", "--n", "16", "--force")
        assert code == 0
        assert "B_16" in out


class TestOpmatrixCommand:
    def test_first_order(self):
        code, out = run("opmatrix", "--alpha", "1", "--n", "2")
        assert code == 0
        rows = [line.split() for line in out.strip().splitlines()]
        got = np.array([[float(v) for v in row] for row in rows])
        np.testing.assert_array_equal(got, [[0, 0, 0], [1, 0, 0], [0, 2, 0]])

    def test_second_order_row4(self):
        code, out = run("opmatrix", "--alpha", "2", "--n", "4")
        assert code == 0
        last = [float(v) for v in out.strip().splitlines()[-1].split()]
        assert last == [-24.0, 0.0, 12.0, 0.0, 0.0]

    def test_fractional_entry(self):
        code, out = run("opmatrix", "--alpha", "0.7", "--n", "4")
        assert code == 0
        entry = float(out.strip().splitlines()[1].split()[0])
        assert entry == pytest.approx(7.374542128794902, rel=0, abs=1e-9)

    def test_csv_format(self):
        code, out = run("opmatrix", "--alpha", "1", "--n", "2", "--format", "csv")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["col_0", "col_1", "col_2"]
        assert [float(v) for v in rows[2]] == [1.0, 0.0, 0.0]

    @pytest.mark.parametrize("alpha", ["2.5", "0", "-1"])
    def test_order_domain(self, alpha, capsys):
        code, _ = run("opmatrix", "--alpha", alpha, "--n", "4")
        assert code == 2

    def test_order_exceeds_degree(self, capsys):
        code, _ = run("opmatrix", "--alpha", "1.5", "--n", "1")
        assert code == 2

    def test_degree_cap(self, capsys):
        code, _ = run("opmatrix", "--alpha", "1", "--n", "16")
        assert code == 2


class TestSolveCommand:
    def test_constant_nonlinearity(self, tmp_path):
        prob = os.path.join(PROBLEMS_DIR, "lane_emden_n0.prob")
        out_dir = tmp_path / "run"
        code, out = run("solve", prob, "--out", str(out_dir))
        assert code == 0
        rows = read_csv(out_dir / "coefficients.csv")
        assert rows[0] == ["index", "coefficient"]
        coeffs = [float(r[1]) for r in rows[1:]]
        np.testing.assert_allclose(
            coeffs, [4.0 / 3.0, 0.0, -1.0 / 6.0], rtol=0, atol=1e-12
        )
        sol = read_csv(out_dir / "solution.csv")
        assert sol[0] == ["x", "u_N", "exact", "abs_error"]
        assert len(sol) == 102  # header + 101 points
        report = (out_dir / "report.txt").read_text()
        assert "newton iterations" in report
        assert "cond_Q" in report
        assert "max abs error" in report

    def test_exact_representation_error(self, tmp_path):
        prob = os.path.join(PROBLEMS_DIR, "shifted_power_alpha1.prob")
        code, out = run("solve", prob, "--out", str(tmp_path / "o"))
        assert code == 0
        sol = read_csv(tmp_path / "o" / "solution.csv")
        errs = [float(r[3]) for r in sol[1:]]
        assert max(errs) <= 1e-12

    def test_missing_key_exit2(self, tmp_path, capsys):
        bad = tmp_path / "bad.prob"
        bad.write_text('alpha = 1\nlambda = 2\ns = "1"\ng = "u"\na = 1\nb = 0\nN = 3\n')
        code, _ = run("solve", str(bad), "--out", str(tmp_path / "o"))
        assert code == 2
        assert "h" in capsys.readouterr().err

    def test_missing_file_exit2(self, tmp_path, capsys):
        code, _ = run("solve", str(tmp_path / "nope.prob"), "--out", str(tmp_path / "o"))
        assert code == 2

    def test_degree_cap_exit2(self, tmp_path, capsys):
        big = tmp_path / "big.prob"
        big.write_text(
            'alpha = 1\nlambda = 2\ns = "1"\ng = "u"\nh = "0"\n'
            "a = 1\nb = 0\nN = 16\n"
        )
        code, _ = run("solve", str(big), "--out", str(tmp_path / "o"))
        assert code == 2
        assert "cap" in capsys.readouterr().err

    def test_solver_failure_exit1(self, tmp_path, capsys):
        bad = tmp_path / "hard.prob"
        bad.write_text(
            'alpha = 1\nlambda = 2\ns = "1"\ng = "u"\nh = "0"\n'
            "a = 1\nb = 0\nN = 3\nmax_iters = 0\n"
        )
        code, _ = run("solve", str(bad), "--out", str(tmp_path / "o"))
        assert code == 1
        assert "residual" in capsys.readouterr().err

    def test_nonlinear_problem_file(self, tmp_path):
        prob = os.path.join(PROBLEMS_DIR, "lane_emden_n5.prob")
        code, out = run("solve", prob, "--out", str(tmp_path / "o"))
        assert code == 0
        report = (tmp_path / "o" / "report.txt").read_text()
        max_err = float(report.rsplit("max abs error = ", 1)[1].split()[0])
        assert max_err <= 1e-5

    def test_deterministic_artifacts(self, tmp_path):
        prob = os.path.join(PROBLEMS_DIR, "lane_emden_n1.prob")
        for d in ("a", "b"):
            code, _ = run("solve", prob, "--out", str(tmp_path / d))
            assert code == 0
        for name in ("coefficients.csv", "solution.csv", "report.txt"):
            assert (tmp_path / "a" / name).read_bytes() == (
                tmp_path / "b" / name
            ).read_bytes()


class TestReproduceCommand:
    def test_table1(self, tmp_path):
        code, out = run("reproduce", "--target", "table1", "--out", str(tmp_path))
        assert code == 0
        comp = read_csv(tmp_path / "table1_comparison.csv")
        assert comp[0] == ["case", "x", "computed", "reference", "ratio", "status"]
        m3 = [r for r in comp[1:] if r[0] == "3"]
        assert len(m3) == 5
        # degree-3 errors reproduce the published digits closely
        assert all(r[5] == "agree" for r in m3)
        # every degree-3/6 error is inside its published envelope
        assert all(float(r[2]) <= 5e-4 for r in m3)
        m6 = [r for r in comp[1:] if r[0] == "6"]
        assert all(float(r[2]) <= 5e-7 for r in m6)

    def test_unknowns(self, tmp_path):
        code, out = run("reproduce", "--target", "unknowns", "--out", str(tmp_path))
        assert code == 0
        assert "u(0) = 2" in out  # the initial-value discrepancy note
        comp = read_csv(tmp_path / "unknowns_comparison.csv")
        alpha1 = [r for r in comp[1:] if float(r[0]) == 1.0]
        assert len(alpha1) == 5
        assert all(r[6] == "agree" for r in alpha1)

    def test_fig3_data(self, tmp_path):
        code, out = run("reproduce", "--target", "fig3-data", "--out", str(tmp_path))
        assert code == 0
        assert "smaller at N=6" in out
        rows = read_csv(tmp_path / "fig3_data.csv")
        assert rows[0] == ["x", "u_N4", "u_N6", "exact", "abs_err_N4", "abs_err_N6"]
        assert len(rows) == 102

    def test_table2_and_table3_written(self, tmp_path):
        for target, files in (
            ("table2", ["table2.csv", "table2_comparison.csv"]),
            ("table3", ["table3_m5.csv", "table3_m5_comparison.csv", "table3_m4.csv"]),
        ):
            code, _ = run("reproduce", "--target", target, "--out", str(tmp_path))
            assert code == 0
            for name in files:
                assert (tmp_path / name).exists()

    def test_all_targets(self, tmp_path):
        code, out = run("reproduce", "--target", "all", "--out", str(tmp_path))
        assert code == 0
        for name in ("table1_comparison.csv", "table2_comparison.csv",
                     "unknowns_comparison.csv", "table3_m5_comparison.csv",
                     "fig3_data.csv"):
            assert (tmp_path / name).exists()

    def test_deterministic(self, tmp_path):
        for d in ("a", "b"):
            run("reproduce", "--target", "table1", "--out", str(tmp_path / d))
        assert (tmp_path / "a" / "table1_comparison.csv").read_bytes() == (
            tmp_path / "b" / "table1_comparison.csv"
        ).read_bytes()


class TestOracleCheckCommand:
    def test_integer_order_passes(self):
        code, out = run("oracle-check", "--alpha", "1", "--n", "6")
        assert code == 0
        assert "integer-order exactness" in out
        assert out.strip().endswith("PASS")

    def test_fractional_passes_with_residuals(self):
        code, out = run("oracle-check", "--alpha", "0.7", "--n", "4")
        assert code == 0
        assert "projection residual" in out
        assert out.strip().endswith("PASS")

    def test_domain_guard(self, capsys):
        code, _ = run("oracle-check", "--alpha", "2.5", "--n", "4")
        assert code == 2


class TestExitCodes:
    def test_unknown_subcommand(self):
        code, _ = run("frobnicate")
        assert code == 2

    def test_missing_required_flag(self):
        code, _ = run("basis")
        assert code == 2

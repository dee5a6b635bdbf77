"""Command-line interface: flags, CSV formats, exit codes."""

import numpy as np
import pytest

from bootcorr import cli


def run_cli(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_summary(out):
    pairs = [line.split("=", 1) for line in out.strip().splitlines() if "=" in line]
    return dict(pairs)


def read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    return [line.split(",") for line in lines]


class TestOccupancyCommand:
    def test_exact_table_without_samples(self, capsys, tmp_path):
        out_path = tmp_path / "occ.csv"
        code, out, _ = run_cli(capsys, "occupancy", 2, "--samples", 0, "--out", out_path)
        assert code == 0
        rows = read_csv(out_path)
        assert rows[0] == ["u", "exact_pmf", "normal_cdf"]
        assert rows[1][:2] == ["1", "0.5"]
        assert rows[2][:2] == ["2", "0.5"]
        summary = parse_summary(out)
        assert float(summary["mean_exact"]) == 1.5
        assert "ks_distance" not in summary

    def test_t1_is_domain_error(self, capsys):
        code, _, err = run_cli(capsys, "occupancy", 1)
        assert code == 2
        assert "error:" in err

    def test_ks_summary_with_samples(self, capsys, tmp_path):
        out_path = tmp_path / "occ100.csv"
        code, out, _ = run_cli(
            capsys, "occupancy", 100, "--samples", 10000, "--seed", 7, "--out", out_path)
        assert code == 0
        summary = parse_summary(out)
        assert float(summary["ks_distance"]) < 0.05
        rows = read_csv(out_path)
        assert rows[0] == ["u", "exact_pmf", "normal_cdf", "empirical_cdf"]
        assert len(rows) == 101
        # empirical CDF column ends at 1
        assert float(rows[-1][3]) == 1.0

    def test_csv_to_stdout_when_no_out(self, capsys):
        code, out, err = run_cli(capsys, "occupancy", 2, "--samples", 0)
        assert code == 0
        assert out.splitlines()[0] == "u,exact_pmf,normal_cdf"
        assert "mean_exact=" in err

    def test_plot_rendered(self, capsys, tmp_path):
        png = tmp_path / "occ.png"
        code, *_ = run_cli(capsys, "occupancy", 30, "--samples", 200, "--seed", 1,
                           "--out", tmp_path / "occ.csv", "--plot", png)
        assert code == 0
        assert png.stat().st_size > 0
        assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


class TestPredictCommand:
    def test_probability_at_midpoint(self, capsys):
        code, out, _ = run_cli(capsys, "predict", "--n", 5, "--t", 2, "--k", 10)
        assert code == 0
        assert parse_summary(out)["prob_pd"] == "0.5"

    def test_alpha_reports_budgets(self, capsys):
        code, out, _ = run_cli(capsys, "predict", "--n", 1000, "--t", 100, "--alpha", 0.01)
        assert code == 0
        summary = parse_summary(out)
        assert float(summary["a"]) == pytest.approx(1.82, abs=0.005)
        assert int(summary["k_plus_ceil"]) <= 1000
        assert summary["k_upper"] == "1000"
        assert float(summary["k_star"]) < float(summary["k_plus"])
        assert float(summary["k_limit"]) == pytest.approx(15.8198, abs=1e-3)

    def test_k_and_alpha_mutually_exclusive(self, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main(["predict", "--n", "10", "--t", "5", "--k", "3", "--alpha", "0.1"])
        assert info.value.code == 2

    def test_t1_domain_error(self, capsys):
        code, _, err = run_cli(capsys, "predict", "--n", 10, "--t", 1, "--k", 3)
        assert code == 2


class TestRegularizeCommand:
    def _write(self, tmp_path, values, name="data.csv", header=None):
        path = tmp_path / name
        lines = [] if header is None else [header]
        lines += [",".join(repr(float(v)) for v in row) for row in values]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    def test_feature_rich_single_replicate_is_pd(self, capsys, tmp_path):
        rng = np.random.default_rng(0)
        data = self._write(tmp_path, rng.standard_normal((4, 60)))
        out = tmp_path / "avg.csv"
        code, stdout, _ = run_cli(capsys, "regularize", data, "--k", 1, "--seed", 3, "--out", out)
        assert code == 0
        summary = parse_summary(stdout)
        assert summary["positive_definite"] == "true"
        assert float(summary["smallest_eigenvalue"]) > 0

    def test_written_matrix_round_trips_exactly(self, capsys, tmp_path):
        rng = np.random.default_rng(1)
        data = self._write(tmp_path, rng.standard_normal((5, 30)))
        out = tmp_path / "avg.csv"
        code, *_ = run_cli(capsys, "regularize", data, "--k", 4, "--seed", 9, "--out", out)
        assert code == 0
        from bootcorr import corr

        reparsed = np.array([[float(f) for f in row] for row in read_csv(out)])
        direct = corr.average_correlation(
            corr.DataMatrix(np.array([[float(f) for f in row] for row in read_csv(data)])),
            4, 9).matrix.values
        assert np.array_equal(reparsed, direct)

    def test_constant_row_exits_2(self, capsys, tmp_path):
        data = self._write(tmp_path, [[1.0, 1.0, 1.0], [0.0, 1.0, 2.0]])
        code, _, err = run_cli(capsys, "regularize", data, "--k", 2, "--out", tmp_path / "o.csv")
        assert code == 2
        assert "zero variance" in err

    def test_singular_result_exits_3_and_writes_matrix(self, capsys, tmp_path):
        # n > t with k = 1 cannot be full rank
        rng = np.random.default_rng(2)
        data = self._write(tmp_path, rng.standard_normal((8, 3)))
        out = tmp_path / "avg.csv"
        code, stdout, _ = run_cli(capsys, "regularize", data, "--k", 1, "--seed", 0, "--out", out)
        assert code == 3
        assert parse_summary(stdout)["positive_definite"] == "false"
        assert out.exists()

    def test_k_equal_n_is_pd(self, capsys, tmp_path):
        rng = np.random.default_rng(3)
        data = self._write(tmp_path, rng.standard_normal((12, 5)))
        code, stdout, _ = run_cli(
            capsys, "regularize", data, "--k", 12, "--seed", 1, "--out", tmp_path / "o.csv")
        assert code == 0
        assert parse_summary(stdout)["positive_definite"] == "true"

    def test_auto_k_uses_capped_budget(self, capsys, tmp_path):
        rng = np.random.default_rng(4)
        data = self._write(tmp_path, rng.standard_normal((30, 10)))
        code, stdout, _ = run_cli(
            capsys, "regularize", data, "--auto-k", "--alpha", 0.01,
            "--seed", 2, "--out", tmp_path / "o.csv")
        assert code == 0
        summary = parse_summary(stdout)
        from bootcorr import predictor

        assert int(summary["k"]) == predictor.recommended_k(30, 10, alpha=0.01)
        assert summary["positive_definite"] == "true"

    def test_header_row_skipped_and_transpose(self, capsys, tmp_path):
        rng = np.random.default_rng(5)
        values = rng.standard_normal((20, 4))  # 20 features x 4 objects once transposed
        data = self._write(tmp_path, values, header="f1,f2,f3,f4")
        code, stdout, _ = run_cli(
            capsys, "regularize", data, "--transpose", "--k", 3,
            "--seed", 0, "--out", tmp_path / "o.csv")
        assert code == 0
        summary = parse_summary(stdout)
        assert summary["n"] == "4"
        assert summary["t"] == "20"

    def test_ragged_input_exits_2(self, capsys, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1.0,2.0\n3.0\n", encoding="utf-8")
        code, _, err = run_cli(capsys, "regularize", path, "--k", 1, "--out", tmp_path / "o.csv")
        assert code == 2

    def test_missing_input_exits_1(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "regularize", tmp_path / "absent.csv", "--k", 1, "--out", tmp_path / "o.csv")
        assert code == 1

    def test_unwritable_output_exits_1(self, capsys, tmp_path):
        rng = np.random.default_rng(6)
        data = self._write(tmp_path, rng.standard_normal((3, 10)))
        code, _, err = run_cli(
            capsys, "regularize", data, "--k", 1, "--out", tmp_path / "no_dir" / "o.csv")
        assert code == 1


class TestSimulateCommand:
    def test_feature_rich_curve_is_flat_one(self, capsys, tmp_path):
        out = tmp_path / "sim.csv"
        code, stdout, _ = run_cli(
            capsys, "simulate", "--n", 10, "--t", 200, "--k-min", 1, "--k-max", 3,
            "--trials", 5, "--seed", 1, "--out", out)
        assert code == 0
        rows = read_csv(out)
        assert rows[0] == ["k", "empirical_pd_frequency", "predicted_prob", "mean_lambda0", "redraws"]
        assert [row[1] for row in rows[1:]] == ["1", "1", "1"]
        summary = parse_summary(stdout)
        assert {"k_plus", "k_star", "k_limit"} <= summary.keys()

    def test_byte_identical_reruns(self, capsys, tmp_path):
        args = ["simulate", "--n", 20, "--t", 5, "--k-min", 1, "--k-max", 8,
                "--trials", 10, "--seed", 42]
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run_cli(capsys, *args, "--out", first)[0] == 0
        assert run_cli(capsys, *args, "--out", second)[0] == 0
        assert first.read_bytes() == second.read_bytes()

    def test_invalid_configuration_exits_2(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "simulate", "--n", 10, "--t", 5, "--k-min", 5, "--k-max", 1,
            "--trials", 3, "--out", tmp_path / "x.csv")
        assert code == 2
        code, _, err = run_cli(
            capsys, "simulate", "--n", 10, "--t", 5, "--k-min", 1, "--k-max", 80,
            "--trials", 3, "--out", tmp_path / "x.csv")
        assert code == 2  # k above 4n

    def test_plot_rendered(self, capsys, tmp_path):
        png = tmp_path / "sweep.png"
        code, *_ = run_cli(
            capsys, "simulate", "--n", 12, "--t", 4, "--k-min", 1, "--k-max", 8,
            "--trials", 10, "--seed", 2, "--out", tmp_path / "s.csv", "--plot", png)
        assert code == 0
        assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as info:
        cli.main(["occupancy"])  # missing positional t
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        cli.main(["unknown-command"])
    assert info.value.code == 2

import math
import os
import subprocess
import sys

import numpy as np
import pytest

from garchtrend import (
    DJC_PARAMS,
    DataFormatError,
    DomainError,
    GarchParams,
    beta_sweep_experiment,
    compose_series,
    ensemble_stats,
    log_returns,
)
from garchtrend.cli import (
    EXIT_DEGENERATE,
    EXIT_DOMAIN,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    UsageError,
    build_config,
    main,
)
from garchtrend.csvio import read_price_csv, write_stats_csv


def write_prices(path, prices, column="close"):
    lines = [f"date,{column}"] + [f"2000-01-{i:02d},{float(p)!r}" for i, p in enumerate(prices, 1)]
    path.write_text("\n".join(lines) + "\n")
    return path


def parse_kv(text):
    return dict(line.split("=", 1) for line in text.strip().splitlines())


class TestReadPriceCsv:
    def test_reads_column(self, tmp_path):
        f = write_prices(tmp_path / "p.csv", [1.0, math.e, math.e**2])
        prices = read_price_csv(f, "close")
        np.testing.assert_array_equal(prices, [1.0, math.e, math.e**2])
        np.testing.assert_allclose(log_returns(prices), [1.0, 1.0], rtol=1e-15)

    def test_zero_price_names_line(self, tmp_path):
        f = write_prices(tmp_path / "p.csv", [1.0, 2.0, 0.0, 3.0])
        with pytest.raises(DomainError, match=r"p\.csv:4"):
            read_price_csv(f, "close")

    def test_missing_value(self, tmp_path):
        f = tmp_path / "p.csv"
        f.write_text("date,close\na,1.0\nb,\nc,2.0\n")
        with pytest.raises(DataFormatError, match=":3"):
            read_price_csv(f, "close")

    def test_unparseable(self, tmp_path):
        f = tmp_path / "p.csv"
        f.write_text("close\n1.0\nabc\n")
        with pytest.raises(DataFormatError, match=":3"):
            read_price_csv(f, "close")

    def test_missing_column(self, tmp_path):
        f = write_prices(tmp_path / "p.csv", [1.0, 2.0], column="price")
        with pytest.raises(DataFormatError, match="close"):
            read_price_csv(f, "close")

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            read_price_csv(tmp_path / "nope.csv", "close")

    def test_long_series(self, tmp_path):
        p = np.exp(np.cumsum(np.random.default_rng(0).standard_normal(5089) * 0.01))
        prices = read_price_csv(write_prices(tmp_path / "p.csv", p), "close")
        assert len(prices) == 5089
        assert len(log_returns(prices)) == 5088


class TestWriteStatsCsv:
    def test_single_cell(self, tmp_path):
        st = ensemble_stats([GarchParams(1e-6, 0.1, 0.8), GarchParams(2e-6, 0.2, 0.7)], {"N": 500})
        out = tmp_path / "s.csv"
        write_stats_csv([st], out)
        lines = out.read_text().splitlines()
        assert len(lines) == 2
        header = lines[0].split(",")
        assert header[:3] == ["N", "replicates_requested", "replicates_converged"]
        assert header[3:] == [f"{p}_{k}" for p in ("K", "alpha", "beta")
                              for k in ("mean", "std", "relstd")]
        row = lines[1].split(",")
        assert row[:3] == ["500", "2", "2"]
        assert float(row[3]) == st.mean["K"]
        assert row[3] == "1.5000000000000000e-06"

    def test_sorted_rows(self, tmp_path):
        est = [DJC_PARAMS, GarchParams(3e-6, 0.09, 0.88)]
        stats = [ensemble_stats(est, {"s": s, "r": r}) for s, r in [(2, 0.5), (1, 4.0), (1, 0.25)]]
        out = tmp_path / "g.csv"
        write_stats_csv(stats, out)
        rows = [l.split(",")[:2] for l in out.read_text().splitlines()[1:]]
        assert [(int(s), float(r)) for s, r in rows] == [(1, 0.25), (1, 4.0), (2, 0.5)]

    def test_sweep_rows(self, tmp_path):
        betas = [0.9, 0.1, 0.5, 0.3, 0.7, 0.2, 0.8, 0.4, 0.6]
        stats = beta_sweep_experiment(betas, 0.972, 2.5e-6, 1, 1.0, 300, 2, seed=0)
        out = tmp_path / "sw.csv"
        write_stats_csv(stats, out)
        lines = out.read_text().splitlines()
        assert len(lines) == 10
        col = lines[0].split(",").index("beta0")
        got = [float(l.split(",")[col]) for l in lines[1:]]
        assert got == sorted(betas)

    def test_empty(self, tmp_path):
        with pytest.raises(DomainError):
            write_stats_csv([], tmp_path / "x.csv")


class TestConfig:
    def test_defaults(self, tmp_path):
        cfg = build_config(["--command", "experiment-sweep", "--output", str(tmp_path / "o.csv")])
        assert cfg.beta_values == [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
        assert cfg.sum_const == 0.972 and cfg.params.K == 2.5e-6
        assert cfg.s == [4] and cfg.r == [2.0] and cfg.n == [6000] and cfg.replicates == 100

    def test_file_then_flags(self, tmp_path):
        conf = tmp_path / "run.conf"
        conf.write_text("# manifest\ncommand = experiment-detrend\ns = 1,2\nr=0.5\n"
                        "replicates=7\nseed=11\nburn_in=20\noutput=a.csv\n")
        cfg = build_config(["--config", str(conf), "--seed", "12"])
        assert cfg.command == "experiment-detrend"
        assert cfg.s == [1, 2] and cfg.r == [0.5]
        assert cfg.replicates == 7 and cfg.seed == 12 and cfg.burn_in == 20
        assert cfg.params == DJC_PARAMS

    def test_unknown_file_key(self, tmp_path):
        conf = tmp_path / "bad.conf"
        conf.write_text("command=simulate\ncolour=blue\n")
        with pytest.raises(UsageError):
            build_config(["--config", str(conf)])

    @pytest.mark.parametrize("argv", [
        [],
        ["--command", "simulate"],
        ["--command", "simulate", "--output", "x.csv", "--n", "abc"],
        ["--command", "simulate", "--output", "x.csv", "--bogus", "1"],
        ["--command", "simulate", "--output", "x.csv", "--n", "10,20"],
        ["--command", "fit"],
    ])
    def test_usage_errors(self, argv):
        with pytest.raises(UsageError):
            build_config(argv)

    def test_domain_errors(self, tmp_path):
        out = str(tmp_path / "x.csv")
        with pytest.raises(DomainError):
            build_config(["--command", "simulate", "--output", out, "--K", "-1"])
        with pytest.raises(DomainError):
            build_config(["--command", "trend", "--output", out, "--n", "99", "--s", "2"])
        with pytest.raises(DomainError):
            build_config(["--command", "experiment-sweep", "--output", out, "--beta", "0.99"])


class TestMain:
    def test_fit_iid(self, tmp_path, capsys):
        x = np.random.default_rng(4).standard_normal(6000) * 0.01
        f = write_prices(tmp_path / "iid.csv", 100 * np.exp(np.concatenate(([0.0], np.cumsum(x)))))
        assert main(["--command", "fit", "--input", str(f)]) == EXIT_OK
        out = parse_kv(capsys.readouterr().out)
        assert set(out) == {"K", "alpha", "beta", "log_likelihood", "converged", "iterations"}
        K, a, b = float(out["K"]), float(out["alpha"]), float(out["beta"])
        assert a < 0.05
        assert K / (1 - a - b) == pytest.approx(np.var(x), rel=0.1)
        assert out["converged"] == "true"

    def test_fit_with_detrending(self, tmp_path, capsys):
        comp = compose_series(DJC_PARAMS, 3000, 2, 2.0, seed=1)
        f = write_prices(tmp_path / "tr.csv", np.exp(comp.xi))
        assert main(["--command", "fit", "--input", str(f), "--degree", "7"]) == EXIT_OK
        out = parse_kv(capsys.readouterr().out)
        assert 0.7 < float(out["beta"]) < 0.95

    def test_exit_codes(self, tmp_path, capsys):
        bad = write_prices(tmp_path / "zero.csv", [1.0, 0.0, 2.0])
        const = write_prices(tmp_path / "const.csv", [5.0] * 200)
        garbled = tmp_path / "garbled.csv"
        garbled.write_text("close\n1\nx\n")
        assert main(["--command", "fit", "--input", str(bad)]) == EXIT_DOMAIN
        assert main(["--command", "fit", "--input", str(const)]) == EXIT_DEGENERATE
        assert main(["--command", "fit", "--input", str(garbled)]) == EXIT_IO
        assert main(["--command", "fit", "--input", str(tmp_path / "missing.csv")]) == EXIT_IO
        assert main(["--command", "nope"]) == EXIT_USAGE
        err = capsys.readouterr().err.strip().splitlines()
        assert len(err) == 5 and all(l.startswith("garchtrend: error:") for l in err)

    def test_failure_leaves_no_output(self, tmp_path):
        out = tmp_path / "o.csv"
        rc = main(["--command", "experiment-detrend", "--n", "100", "--s", "4",
                   "--output", str(out)])
        assert rc == EXIT_DOMAIN
        assert os.listdir(tmp_path) == []

    @pytest.mark.parametrize("command, extra, columns", [
        ("simulate", ["--n", "120"], ["t", "return", "cond_var"]),
        ("trend", ["--n", "300", "--s", "3"], ["t", "trend"]),
        ("compose", ["--n", "300", "--s", "2", "--r", "1.5"], ["t", "xi", "trend", "noise", "return"]),
    ])
    def test_series_commands(self, tmp_path, command, extra, columns):
        out = tmp_path / "o.csv"
        assert main(["--command", command, "--output", str(out), "--seed", "3"] + extra) == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0].split(",") == columns
        assert len(lines) == 1 + int(extra[1])

    def test_detrend_writes_baseline(self, tmp_path):
        out = tmp_path / "grid.csv"
        rc = main(["--command", "experiment-detrend", "--n", "400", "--s", "1,2", "--r", "1,2",
                   "--replicates", "2", "--output", str(out)])
        assert rc == EXIT_OK
        assert len(out.read_text().splitlines()) == 5
        assert len((tmp_path / "grid_baseline.csv").read_text().splitlines()) == 5

    def test_module_entry_point_help(self):
        res = subprocess.run([sys.executable, "-m", "garchtrend", "--help"],
                             capture_output=True, text=True)
        assert res.returncode == 0
        assert "exit codes" in res.stdout and "experiment-sweep" in res.stdout

"""Command-line entry point.

Settings come from an optional ``--config`` file of ``key=value`` lines
(keys are the long flag names without dashes, ``#`` starts a comment) and
from flags, which override the file.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import csvio
from .detrend import detrend, diff_returns
from .ensemble import (
    beta_sweep_experiment,
    compose_series,
    detrend_experiment,
    intrinsic_variability_experiment,
)
from .errors import DataFormatError, DegenerateDataError, DomainError, GarchTrendError
from .garch import DEFAULT_BURN_IN, DJC_PARAMS, GarchParams, log_returns, simulate
from .mle import fit
from .trend import eval_trend, sample_spec

__all__ = ["ExperimentConfig", "UsageError", "build_config", "dispatch", "main",
           "EXIT_OK", "EXIT_USAGE", "EXIT_IO", "EXIT_DOMAIN", "EXIT_DEGENERATE"]

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_DOMAIN, EXIT_DEGENERATE = 0, 1, 2, 3, 4

COMMANDS = (
    "simulate",
    "fit",
    "trend",
    "compose",
    "experiment-intrinsic",
    "experiment-detrend",
    "experiment-sweep",
)


def _int_list(text):
    return [int(v) for v in str(text).split(",") if v.strip()]


def _float_list(text):
    return [float(v) for v in str(text).split(",") if v.strip()]


# flag name -> value parser; each flag feeds exactly one config field
_FIELDS = {
    "command": str,
    "K": float,
    "alpha": float,
    "beta": _float_list,
    "sum": float,
    "n": _int_list,
    "s": _int_list,
    "r": _float_list,
    "replicates": int,
    "seed": int,
    "degree": int,
    "burn-in": int,
    "workers": int,
    "input": str,
    "column": str,
    "output": str,
}

_DEFAULTS = {
    "simulate": dict(n=[6000]),
    "fit": dict(column="close"),
    "trend": dict(n=[6000], s=[4]),
    "compose": dict(n=[6000], s=[4], r=[2.0]),
    "experiment-intrinsic": dict(n=[1000, 2000, 4000, 6000], replicates=100),
    "experiment-detrend": dict(n=[6000], s=[1, 2, 3, 4], r=[0.25, 0.5, 1.0, 2.0, 4.0],
                               replicates=100),
    "experiment-sweep": dict(n=[6000], s=[4], r=[2.0], K=DJC_PARAMS.K, sum=0.972,
                             beta=[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9],
                             replicates=100),
}

EPILOG = """\
commands:
  simulate              simulate a GARCH(1,1) path -> CSV (t, return, cond_var)
  fit                   fit GARCH(1,1) to log returns of --column in --input;
                        with --degree the log prices are detrended first
  trend                 sample a half-sine trend -> CSV (t, trend)
  compose               GARCH noise path plus trend at ratio --r -> CSV
  experiment-intrinsic  estimate spread on trend-free series for each --n
  experiment-detrend    detrend/refit grid over --s x --r; also writes
                        <output stem>_baseline.csv with fits to the true noise
  experiment-sweep      detrend/refit for each --beta with alpha = --sum - beta

list-valued flags (--n, --s, --r, --beta) take comma-separated values.
GARCH parameters default to the Dow Jones Composite estimates
(K=2.5e-6, alpha=0.0837, beta=0.8898).

exit codes:
  0  success
  1  usage error (bad flag, missing or malformed setting)
  2  parse or I/O error
  3  domain or precondition error
  4  degenerate data (e.g. zero-variance series)
"""


class UsageError(GarchTrendError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="garchtrend",
        description="GARCH(1,1) simulation, fitting and detrending experiments.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        allow_abbrev=False,
    )
    p.add_argument("--command", choices=COMMANDS)
    p.add_argument("--K", help="variance offset K > 0")
    p.add_argument("--alpha", help="ARCH coefficient")
    p.add_argument("--beta", help="GARCH coefficient; list of beta0 for experiment-sweep")
    p.add_argument("--sum", help="alpha0 + beta0 held fixed by experiment-sweep (default 0.972)")
    p.add_argument("--n", help="series length; list of lengths for experiment-intrinsic")
    p.add_argument("--s", help="number of monotonic trend parts (list for experiment-detrend)")
    p.add_argument("--r", help="trend-to-noise range ratio (list for experiment-detrend)")
    p.add_argument("--replicates", help="replicates per ensemble cell (default 100)")
    p.add_argument("--seed", help="integer base seed (default 0)")
    p.add_argument("--degree", help="polynomial detrending degree (fit only)")
    p.add_argument("--burn-in", dest="burn-in", help=f"simulation burn-in (default {DEFAULT_BURN_IN})")
    p.add_argument("--workers", help="worker processes for experiments (default 1)")
    p.add_argument("--input", help="input price CSV (fit)")
    p.add_argument("--column", help="price column name (default close)")
    p.add_argument("--output", help="output CSV path")
    p.add_argument("--config", help="key=value settings file; flags override it")
    return p


def _read_config_file(path) -> dict:
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataFormatError(f"cannot read config file {path}: {exc}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = (t.strip() for t in line.split("=", 1))
        key = key.replace("_", "-") if key.replace("_", "-") in _FIELDS else key
        if key not in _FIELDS or key == "config":
            raise UsageError(f"{path}:{lineno}: unknown setting {key!r}")
        out[key] = value
    return out


@dataclass
class ExperimentConfig:
    command: str
    params: GarchParams
    n: list
    s: list = field(default_factory=list)
    r: list = field(default_factory=list)
    beta_values: list = field(default_factory=list)
    sum_const: float = math.nan
    replicates: int = 100
    seed: int = 0
    degree: Optional[int] = None
    burn_in: int = DEFAULT_BURN_IN
    workers: int = 1
    input_path: Optional[str] = None
    column: str = "close"
    output_path: Optional[str] = None

    def validate(self):
        c = self.command
        if c != "fit" and not self.output_path:
            raise UsageError(f"--output is required for {c}")
        if c == "fit":
            if not self.input_path:
                raise UsageError("--input is required for fit")
            if self.degree is not None and self.degree < 0:
                raise DomainError(f"degree must be >= 0, got {self.degree}")
            return
        if self.burn_in < 0:
            raise DomainError(f"burn-in must be >= 0, got {self.burn_in}")
        if self.workers < 1:
            raise DomainError(f"workers must be >= 1, got {self.workers}")
        if not self.n or min(self.n) < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        single = ("simulate", "trend", "compose", "experiment-detrend", "experiment-sweep")
        if c in single and len(self.n) != 1:
            raise UsageError(f"{c} takes a single --n")
        if c in ("trend", "compose", "experiment-sweep") and len(self.s) != 1:
            raise UsageError(f"{c} takes a single --s")
        if c in ("compose", "experiment-sweep") and len(self.r) != 1:
            raise UsageError(f"{c} takes a single --r")
        if self.s and min(self.s) < 1:
            raise DomainError(f"s must be >= 1, got {self.s}")
        if self.s and self.n[0] < 50 * max(self.s):
            raise DomainError(f"n={self.n[0]} too short for s={max(self.s)} trend parts")
        if self.r and min(self.r) <= 0:
            raise DomainError(f"r must be > 0, got {self.r}")
        if c.startswith("experiment-") and self.replicates < 2:
            raise DomainError(f"replicates must be >= 2, got {self.replicates}")
        if c == "experiment-intrinsic" and min(self.n) < 100:
            raise DomainError("experiment-intrinsic lengths must be >= 100")
        if c == "experiment-sweep":
            bad = [b for b in self.beta_values if not 0 < b < self.sum_const]
            if bad or not self.beta_values:
                raise DomainError(f"beta0 values must lie in (0, {self.sum_const}), got {bad}")


def build_config(argv) -> ExperimentConfig:
    """Parse flags (and an optional config file) into a validated config."""
    ns = vars(_parser().parse_args(argv))
    raw = _read_config_file(ns.pop("config")) if ns.get("config") else {}
    raw.update({k: v for k, v in ns.items() if v is not None})
    command = raw.get("command")
    if command is None:
        raise UsageError("--command is required")
    if command not in COMMANDS:
        raise UsageError(f"unknown command {command!r}")

    vals = dict(_DEFAULTS[command])
    for key, text in raw.items():
        try:
            vals[key] = _FIELDS[key](text)
        except ValueError:
            raise UsageError(f"malformed value for {key}: {text!r}") from None

    sweep = command == "experiment-sweep"
    beta = vals.get("beta")
    if not sweep and beta is not None and len(beta) != 1:
        raise UsageError("--beta takes a single value outside experiment-sweep")
    K = vals.get("K", DJC_PARAMS.K)
    alpha = vals.get("alpha", DJC_PARAMS.alpha)
    if sweep:
        # placeholder triple; each cell builds its own
        params = GarchParams(K, 0.0, 0.0)
    else:
        params = GarchParams(K, alpha, beta[0] if beta else DJC_PARAMS.beta)

    cfg = ExperimentConfig(
        command=command,
        params=params,
        n=vals.get("n", []),
        s=vals.get("s", []),
        r=vals.get("r", []),
        beta_values=beta if sweep else [],
        sum_const=vals.get("sum", math.nan),
        replicates=vals.get("replicates", 100),
        seed=vals.get("seed", 0),
        degree=vals.get("degree"),
        burn_in=vals.get("burn-in", DEFAULT_BURN_IN),
        workers=vals.get("workers", 1),
        input_path=vals.get("input"),
        column=vals.get("column", "close"),
        output_path=vals.get("output"),
    )
    cfg.validate()
    return cfg


def _baseline_path(output) -> Path:
    p = Path(output)
    return p.with_name(f"{p.stem}_baseline{p.suffix or '.csv'}")


def dispatch(cfg: ExperimentConfig, stdout=None) -> int:
    """Run the pipeline named by ``cfg.command``; exceptions propagate."""
    stdout = stdout or sys.stdout
    c = cfg.command
    if c == "simulate":
        path = simulate(cfg.params, cfg.n[0], cfg.seed, cfg.burn_in)
        csvio.write_series_csv(cfg.output_path,
                               {"return": path.returns, "cond_var": path.cond_vars})
    elif c == "fit":
        prices = csvio.read_price_csv(cfg.input_path, cfg.column)
        if cfg.degree is None:
            x = log_returns(prices)
        else:
            log_returns(prices)  # positivity / length checks
            x = diff_returns(detrend(np.log(prices), cfg.degree))
        res = fit(x)
        for key, val in (("K", res.params.K), ("alpha", res.params.alpha),
                         ("beta", res.params.beta), ("log_likelihood", res.log_likelihood)):
            print(f"{key}={csvio.format_float(val)}", file=stdout)
        print(f"converged={str(res.converged).lower()}", file=stdout)
        print(f"iterations={res.iterations}", file=stdout)
    elif c == "trend":
        tr = eval_trend(sample_spec(cfg.n[0], cfg.s[0], cfg.seed))
        csvio.write_series_csv(cfg.output_path, {"trend": tr.values})
    elif c == "compose":
        comp = compose_series(cfg.params, cfg.n[0], cfg.s[0], cfg.r[0], cfg.seed, cfg.burn_in)
        csvio.write_series_csv(cfg.output_path, {"xi": comp.xi, "trend": comp.trend,
                                                 "noise": comp.noise_path,
                                                 "return": comp.returns})
    elif c == "experiment-intrinsic":
        stats = intrinsic_variability_experiment(cfg.params, cfg.n, cfg.replicates, cfg.seed,
                                                 burn_in=cfg.burn_in, workers=cfg.workers)
        csvio.write_stats_csv(stats, cfg.output_path)
    elif c == "experiment-detrend":
        grid = detrend_experiment(cfg.params, cfg.s, cfg.r, cfg.n[0], cfg.replicates, cfg.seed,
                                  burn_in=cfg.burn_in, workers=cfg.workers)
        csvio.write_stats_csv(grid, cfg.output_path)
        csvio.write_stats_csv([st.baseline for st in grid.values()],
                              _baseline_path(cfg.output_path))
    elif c == "experiment-sweep":
        stats = beta_sweep_experiment(cfg.beta_values, cfg.sum_const, cfg.params.K, cfg.s[0],
                                      cfg.r[0], cfg.n[0], cfg.replicates, cfg.seed,
                                      burn_in=cfg.burn_in, workers=cfg.workers)
        csvio.write_stats_csv(stats, cfg.output_path)
    return EXIT_OK


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, UsageError):
        return EXIT_USAGE
    if isinstance(exc, (DataFormatError, OSError)):
        return EXIT_IO
    if isinstance(exc, DegenerateDataError):
        return EXIT_DEGENERATE
    if isinstance(exc, DomainError):
        return EXIT_DOMAIN
    raise exc


def main(argv=None) -> int:
    try:
        return dispatch(build_config(sys.argv[1:] if argv is None else argv))
    except (GarchTrendError, OSError) as exc:
        code = _exit_code(exc)
        msg = " ".join(str(exc).split())
        print(f"garchtrend: error: {msg}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())

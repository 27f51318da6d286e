"""Experiment orchestration: runs, CSV/manifest emission, comparisons.

A run writes one CSV per method into the output directory with columns
``t, re_c, im_c, abs_c, norm, mc_error`` (17-significant-digit
scientific notation, so repeated runs are byte-identical) plus a
``manifest.json`` recording the exact config text, its hash, the seed
and library versions.  Re-running from a manifest reproduces the run.
"""

import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np
import scipy

from . import __version__
from .config import ExperimentConfig
from .errors import ConfigError, MissingBaselineError
from .propagators import run_methods, width_diagnostic
from .quantum import autocorrelation_series

CSV_HEADER = "t,re_c,im_c,abs_c,norm,mc_error"

QUANTUM_KEY = "quantum"

OUTPUT_DIR_ENV = "SCIVR_OUTPUT_DIR"


def _format_row(values):
    return ",".join(f"{v:.16e}" for v in values)


def write_series_csv(path, times, values, norm, mc_error):
    lines = [CSV_HEADER]
    for k in range(len(times)):
        lines.append(_format_row((times[k], values[k].real, values[k].imag,
                                  abs(values[k]), norm[k], mc_error[k])))
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def read_series_csv(path):
    data = np.genfromtxt(path, delimiter=",", skip_header=1)
    data = np.atleast_2d(data)
    return {
        "t": data[:, 0],
        "values": data[:, 1] + 1j * data[:, 2],
        "abs": data[:, 3],
        "norm": data[:, 4],
        "mc_error": data[:, 5],
    }


def resolve_output_dir(config, output_dir=None):
    out = output_dir or os.environ.get(OUTPUT_DIR_ENV) or config.output_dir()
    try:
        os.makedirs(out, exist_ok=True)
        probe = os.path.join(out, ".write-probe")
        with open(probe, "w", encoding="utf-8") as handle:
            handle.write("")
        os.remove(probe)
    except OSError as exc:
        raise ConfigError(f"output directory {out!r} is not writable: {exc}")
    return out


@dataclass
class RunResult:
    output_dir: str
    csv_paths: dict
    manifest_path: str


def run(config, output_dir=None, workers=None, gnuplot=False):
    """Execute every configured method and write CSVs plus a manifest."""
    out = resolve_output_dir(config, output_dir)
    model = config.potential()
    initial = config.initial_state()
    times = config.times()
    n_workers = workers if workers is not None else config.workers()

    csv_paths = {}
    wall = {}
    diagnostics = {}
    specs = config.method_specs()
    if specs:
        t0 = time.perf_counter()
        results = run_methods(
            model, specs, initial, times,
            config.n_trajectories(), config.seed(), config.integrator(),
            norm_every=config.norm_every(), workers=n_workers,
            density=config.sampling())
        wall["semiclassical"] = time.perf_counter() - t0
        for key, series in results.items():
            path = os.path.join(out, f"{key}.csv")
            write_series_csv(path, series.times, series.values, series.norm,
                             series.mc_error)
            csv_paths[key] = path
            if series.diagnostics:
                diagnostics[key] = series.diagnostics
    if config.wants_quantum():
        t0 = time.perf_counter()
        series = autocorrelation_series(model, initial, config.grid_spec(), times)
        wall[QUANTUM_KEY] = time.perf_counter() - t0
        path = os.path.join(out, f"{QUANTUM_KEY}.csv")
        write_series_csv(path, series.times, series.values, series.norm,
                         np.zeros(series.times.size))
        csv_paths[QUANTUM_KEY] = path

    manifest = {
        "config_ini": config.to_ini_text(),
        "config_sha256": config.sha256(),
        "seed": config.seed(),
        "n_trajectories": config.n_trajectories(),
        "methods": sorted(csv_paths),
        "diagnostics": diagnostics,
        "wall_seconds": wall,
        "versions": {
            "python": sys.version.split()[0],
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "scivr": __version__,
        },
    }
    manifest_path = os.path.join(out, "manifest.json")
    with open(manifest_path, "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")
    if gnuplot:
        _write_gnuplot_scripts(out, sorted(csv_paths))
    return RunResult(output_dir=out, csv_paths=csv_paths,
                     manifest_path=manifest_path)


def run_from_manifest(path, output_dir=None, workers=None, gnuplot=False):
    """Reproduce a run from its manifest.json."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            manifest = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read manifest {path}: {exc}") from exc
    if "config_ini" not in manifest:
        raise ConfigError(f"{path} carries no config_ini block")
    config = ExperimentConfig.from_ini_text(manifest["config_ini"])
    return run(config, output_dir=output_dir, workers=workers, gnuplot=gnuplot)


def _write_gnuplot_scripts(out, keys):
    method_keys = [k for k in keys if k != QUANTUM_KEY]
    lines = [
        "set datafile separator ','",
        "set xlabel 't'",
        "set ylabel '|c(t)|'",
        "set key outside",
    ]
    plots = [f"'{k}.csv' skip 1 using 1:4 with lines title '{k}'"
             for k in keys]
    lines.append("plot " + ", \\\n     ".join(plots))
    with open(os.path.join(out, "plot_correlation.gp"), "w",
              encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")
    lines = [
        "set datafile separator ','",
        "set xlabel 't'",
        "set ylabel 'norm'",
        "set key outside",
    ]
    plots = [f"'{k}.csv' skip 1 using 1:5 with lines title '{k}'"
             for k in keys]
    lines.append("plot " + ", \\\n     ".join(plots))
    with open(os.path.join(out, "plot_norm.gp"), "w",
              encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


# --- comparison --------------------------------------------------------------

@dataclass
class MethodComparison:
    method: str
    rms_abs_dev: float
    max_abs_dev: float
    norm_max_dev: float | None
    n_trajectories: int | None


@dataclass
class ComparisonReport:
    """Deviation of each method's |c(t)| from the quantum reference."""

    rows: list = field(default_factory=list)
    wall_seconds: dict = field(default_factory=dict)

    def ranked(self):
        return sorted(self.rows, key=lambda r: r.rms_abs_dev)

    def by_method(self):
        return {row.method: row for row in self.rows}

    def to_text(self):
        lines = [f"{'method':<22}{'RMS |c| dev':>14}{'max |c| dev':>14}"
                 f"{'max |norm-1|':>14}{'N':>8}"]
        for row in self.ranked():
            norm_dev = ("-" if row.norm_max_dev is None
                        else f"{row.norm_max_dev:.4f}")
            n = "-" if row.n_trajectories is None else str(row.n_trajectories)
            lines.append(f"{row.method:<22}{row.rms_abs_dev:>14.6f}"
                         f"{row.max_abs_dev:>14.6f}{norm_dev:>14}{n:>8}")
        return "\n".join(lines)

    def to_mapping(self):
        return {
            "ranking": [row.method for row in self.ranked()],
            "wall_seconds": self.wall_seconds,
            "methods": {
                row.method: {
                    "rms_abs_dev": row.rms_abs_dev,
                    "max_abs_dev": row.max_abs_dev,
                    "norm_max_dev": row.norm_max_dev,
                    "n_trajectories": row.n_trajectories,
                } for row in self.rows
            },
        }


def compare(run_dir, write_report=True):
    """Compare every method CSV in run_dir against the quantum series."""
    quantum_path = os.path.join(run_dir, f"{QUANTUM_KEY}.csv")
    if not os.path.exists(quantum_path):
        raise MissingBaselineError(
            f"{run_dir} holds no {QUANTUM_KEY}.csv to compare against")
    reference = read_series_csv(quantum_path)
    manifest = {}
    manifest_path = os.path.join(run_dir, "manifest.json")
    if os.path.exists(manifest_path):
        with open(manifest_path, "r", encoding="utf-8") as handle:
            manifest = json.load(handle)
    report = ComparisonReport(wall_seconds=manifest.get("wall_seconds", {}))
    for name in sorted(os.listdir(run_dir)):
        if not name.endswith(".csv") or name == f"{QUANTUM_KEY}.csv":
            continue
        series = read_series_csv(os.path.join(run_dir, name))
        if series["t"].shape != reference["t"].shape or \
                not np.allclose(series["t"], reference["t"]):
            raise ConfigError(
                f"{name} was computed on a different time grid than the "
                "quantum reference")
        dev = np.abs(series["abs"] - reference["abs"])
        has_norm = np.isfinite(series["norm"])
        norm_dev = (float(np.max(np.abs(series["norm"][has_norm] - 1.0)))
                    if np.any(has_norm) else None)
        report.rows.append(MethodComparison(
            method=name[:-4],
            rms_abs_dev=float(np.sqrt(np.mean(dev**2))),
            max_abs_dev=float(np.max(dev)),
            norm_max_dev=norm_dev,
            n_trajectories=manifest.get("n_trajectories"),
        ))
    if write_report:
        with open(os.path.join(run_dir, "report.json"), "w",
                  encoding="utf-8") as handle:
            json.dump(report.to_mapping(), handle, indent=2, sort_keys=True)
            handle.write("\n")
    return report


# --- Monte Carlo convergence -------------------------------------------------

@dataclass
class ConvergenceRow:
    method: str
    n_trajectories: int
    rms_vs_largest: float
    mean_mc_error: float
    max_mc_error: float


def converge(config, n_list, output_dir=None, workers=None):
    """Deviation of |c(t)| from the largest-N run, per method and N.

    Seeds are shared, and sampling is per-trajectory-indexed, so each
    run's trajectories are a prefix of the larger runs'.
    """
    n_list = sorted(set(int(n) for n in n_list))
    if len(n_list) < 2:
        raise ConfigError("converge needs at least two distinct N values")
    out = resolve_output_dir(config, output_dir)
    model = config.potential()
    initial = config.initial_state()
    times = config.times()
    specs = config.method_specs()
    if not specs:
        raise ConfigError("converge needs at least one semiclassical method")
    n_workers = workers if workers is not None else config.workers()

    by_n = {}
    for n in n_list:
        by_n[n] = run_methods(
            model, specs, initial, times, n, config.seed(),
            config.integrator(), workers=n_workers, density=config.sampling())
    largest = n_list[-1]
    rows = []
    for spec in specs:
        reference = np.abs(by_n[largest][spec.key].values)
        for n in n_list:
            series = by_n[n][spec.key]
            dev = np.abs(np.abs(series.values) - reference)
            rows.append(ConvergenceRow(
                method=spec.key,
                n_trajectories=n,
                rms_vs_largest=float(np.sqrt(np.mean(dev**2))),
                mean_mc_error=float(np.mean(series.mc_error)),
                max_mc_error=float(np.max(series.mc_error)),
            ))
    path = os.path.join(out, "converge.csv")
    lines = ["method,n_trajectories,rms_vs_largest,mean_mc_error,max_mc_error"]
    for row in rows:
        lines.append(f"{row.method},{row.n_trajectories},"
                     + _format_row((row.rms_vs_largest, row.mean_mc_error,
                                    row.max_mc_error)))
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")
    return rows


def diagnose_width(config, q_i, p_i, output_dir=None):
    """Width-decay diagnostic along one trajectory, written as CSV."""
    out = resolve_output_dir(config, output_dir)
    diag = width_diagnostic(config.potential(), q_i, p_i, config.gamma(),
                            config.hbar(), config.times(),
                            orders=(2, 4), integrator=config.integrator())
    path = os.path.join(out, "width_diagnostic.csv")
    lines = ["t,re_width,re_width_root2,re_width_root4"]
    for k in range(diag.times.size):
        lines.append(_format_row((diag.times[k], diag.re_width[1][k],
                                  diag.re_width[2][k], diag.re_width[4][k])))
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")
    return path

import json
import os
import shutil

import numpy as np
import pytest

from scivr.cli import main
from scivr.config import ExperimentConfig, preset, preset_names
from scivr.errors import ConfigError, MissingBaselineError
from scivr import harness


TINY_HARMONIC = """
[potential]
kind = harmonic
mass = 1.0
omega = 1.0

[state]
hbar = 1.0
q0 = 1.0
p0 = 0.0
gamma = 1.0

[time]
t_max = 6.283185307179586
n_output = 20

[montecarlo]
n_trajectories = 400
seed = 7

[integrator]
dt = 0.01

[quantum]
x_min = -12.0
x_max = 12.0
n_points = 256
dt = 0.001

[run]
methods = HK, TGA, Quantum
norm_every = 5
"""


def tiny_config(**overrides):
    config = ExperimentConfig.from_ini_text(TINY_HARMONIC)
    if overrides:
        config = config.with_overrides(
            {tuple(k.split(".")): v for k, v in overrides.items()})
    return config


class TestConfig:
    def test_presets_parse_and_roundtrip(self):
        assert preset_names() == ["baranger-paper", "morse-paper"]
        bara = preset("baranger-paper")
        assert bara.gamma() == pytest.approx(100.0 / 9.0)
        assert bara.hbar() == 0.05
        assert bara.times().size == 1101
        morse = preset("morse-paper")
        assert morse.hbar() == 1.0
        assert {m.key for m in morse.method_specs()} == {
            "hk", "tga", "global_harmonic_tga"}
        clone = ExperimentConfig.from_ini_text(morse.to_ini_text())
        assert clone.sha256() == morse.sha256()

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            preset("lennard-jones")

    def test_rejects_unknown_fields(self):
        with pytest.raises(ConfigError, match="unknown field"):
            tiny_config(**{"montecarlo.walkers": "3"})
        with pytest.raises(ConfigError, match="unknown config section"):
            ExperimentConfig.from_ini_text(TINY_HARMONIC + "\n[plotting]\nx = 1\n")

    def test_rejects_bad_values(self):
        with pytest.raises(ConfigError):
            tiny_config(**{"state.gamma": "-2"})
        with pytest.raises(ConfigError):
            tiny_config(**{"time.n_output": "0.5"})
        with pytest.raises(ConfigError):
            tiny_config(**{"montecarlo.sampling": "uniform"})
        with pytest.raises(ConfigError):
            tiny_config(**{"run.methods": ""})
        with pytest.raises(ConfigError):
            tiny_config(**{"run.methods": "HK, Heller"})
        with pytest.raises(ConfigError, match="power of two"):
            tiny_config(**{"quantum.n_points": "300"})

    def test_missing_field(self):
        text = TINY_HARMONIC.replace("seed = 7", "")
        with pytest.raises(ConfigError, match="seed"):
            ExperimentConfig.from_ini_text(text)


class TestRun:
    def test_outputs_and_determinism(self, tmp_path):
        config = tiny_config()
        out_a = harness.run(config, output_dir=tmp_path / "a")
        out_b = harness.run(config, output_dir=tmp_path / "b")
        assert sorted(out_a.csv_paths) == ["hk", "quantum", "tga"]
        for key in out_a.csv_paths:
            bytes_a = open(out_a.csv_paths[key], "rb").read()
            bytes_b = open(out_b.csv_paths[key], "rb").read()
            assert bytes_a == bytes_b, key
        # row count: n_output + 1 data rows plus the header
        lines = open(out_a.csv_paths["hk"]).read().strip().split("\n")
        assert len(lines) == 21 + 1
        manifest = json.load(open(out_a.manifest_path))
        assert manifest["config_sha256"] == config.sha256()
        assert manifest["seed"] == 7

    def test_norm_stride_and_quantum_columns(self, tmp_path):
        out = harness.run(tiny_config(), output_dir=tmp_path)
        hk = harness.read_series_csv(out.csv_paths["hk"])
        assert np.all(np.isfinite(hk["norm"][::5]))
        assert np.all(np.isnan(hk["norm"][1::5]))
        quantum = harness.read_series_csv(out.csv_paths["quantum"])
        assert np.all(quantum["mc_error"] == 0.0)
        assert np.all(np.abs(quantum["norm"] - 1.0) < 1e-10)

    def test_manifest_roundtrip(self, tmp_path):
        out = harness.run(tiny_config(), output_dir=tmp_path / "orig")
        redo = harness.run_from_manifest(out.manifest_path,
                                         output_dir=tmp_path / "redo")
        for key, path in out.csv_paths.items():
            assert open(path, "rb").read() == open(redo.csv_paths[key], "rb").read()

    def test_worker_count_is_invisible_in_output(self, tmp_path):
        config = tiny_config()
        out_serial = harness.run(config, output_dir=tmp_path / "w1", workers=1)
        out_threads = harness.run(config, output_dir=tmp_path / "w3", workers=3)
        for key in out_serial.csv_paths:
            assert (open(out_serial.csv_paths[key], "rb").read()
                    == open(out_threads.csv_paths[key], "rb").read())

    def test_unwritable_output_dir(self, tmp_path):
        blocker = tmp_path / "blocked"
        blocker.write_text("a file, not a directory")
        with pytest.raises(ConfigError):
            harness.run(tiny_config(), output_dir=blocker / "sub")

    def test_env_var_output_dir(self, tmp_path, monkeypatch):
        monkeypatch.setenv(harness.OUTPUT_DIR_ENV, str(tmp_path / "env"))
        out = harness.run(tiny_config(**{"run.norm_every": "0",
                                         "run.methods": "HK"}))
        assert out.output_dir == str(tmp_path / "env")


class TestCompare:
    def test_self_comparison_is_zero_and_ranked(self, tmp_path):
        out = harness.run(tiny_config(), output_dir=tmp_path)
        shutil.copy(out.csv_paths["quantum"],
                    os.path.join(out.output_dir, "clone.csv"))
        report = harness.compare(out.output_dir)
        by_method = report.by_method()
        assert by_method["clone"].rms_abs_dev == 0.0
        assert report.ranked()[0].method == "clone"
        # HK is exact on the harmonic oscillator up to Monte Carlo noise
        assert by_method["hk"].rms_abs_dev < 0.05
        assert os.path.exists(os.path.join(out.output_dir, "report.json"))

    def test_missing_baseline(self, tmp_path):
        config = tiny_config(**{"run.methods": "HK", "run.norm_every": "0"})
        out = harness.run(config, output_dir=tmp_path)
        with pytest.raises(MissingBaselineError):
            harness.compare(out.output_dir)


class TestConverge:
    def test_mc_error_scaling_and_output(self, tmp_path):
        config = tiny_config(**{"run.methods": "HK", "time.n_output": "10"})
        rows = harness.converge(config, [400, 800, 1600],
                                output_dir=tmp_path)
        by_n = {row.n_trajectories: row for row in rows if row.method == "hk"}
        assert by_n[1600].rms_vs_largest == 0.0
        ratio = by_n[800].mean_mc_error / by_n[400].mean_mc_error
        assert 1 / np.sqrt(2) - 0.15 <= ratio <= 1 / np.sqrt(2) + 0.15
        assert (tmp_path / "converge.csv").exists()

    def test_needs_two_values(self, tmp_path):
        with pytest.raises(ConfigError):
            harness.converge(tiny_config(), [100], output_dir=tmp_path)


class TestDiagnoseWidth:
    def test_initial_row_and_periodic_columns(self, tmp_path):
        config = tiny_config(**{"state.gamma": "6.0", "time.n_output": "40",
                                "time.t_max": "12.566370614359172"})
        path = harness.diagnose_width(config, 0.5, 0.0, output_dir=tmp_path)
        data = np.genfromtxt(path, delimiter=",", skip_header=1)
        assert data[0, 1] == pytest.approx(6.0)
        assert data[0, 2] == pytest.approx(np.sqrt(6.0))
        assert data[0, 3] == pytest.approx(6.0 ** 0.25)
        # two harmonic periods on the grid: columns repeat
        assert np.allclose(data[:20, 1], data[20:40, 1], atol=1e-6)


class TestCli:
    def test_run_compare_and_exit_codes(self, tmp_path, capsys):
        code = main(["run", "--preset", "baranger-paper",
                     "--set", "montecarlo.n_trajectories=60",
                     "--set", "time.t_max=2.0",
                     "--set", "time.n_output=10",
                     "--set", "run.norm_every=0",
                     "--set", "run.methods=HK, TGA, Quantum",
                     "--outdir", str(tmp_path / "run")])
        assert code == 0
        printed = capsys.readouterr().out.strip().split("\n")
        assert printed[-1].endswith("manifest.json")
        assert main(["compare", str(tmp_path / "run")]) == 0
        table = capsys.readouterr().out
        assert "hk" in table and "tga" in table

    def test_config_errors_exit_one(self, tmp_path, capsys):
        assert main(["run", "--preset", "nope"]) == 1
        assert main(["run"]) == 1
        assert main(["compare", str(tmp_path)]) == 1
        assert main(["run", "--preset", "morse-paper",
                     "--set", "run.methods=Heller"]) == 1
        capsys.readouterr()

    def test_gnuplot_scripts(self, tmp_path, capsys):
        code = main(["run", "--preset", "baranger-paper",
                     "--set", "montecarlo.n_trajectories=30",
                     "--set", "time.t_max=1.0",
                     "--set", "time.n_output=4",
                     "--set", "run.norm_every=0",
                     "--set", "run.methods=HK",
                     "--gnuplot", "--outdir", str(tmp_path)])
        assert code == 0
        assert (tmp_path / "plot_correlation.gp").exists()
        assert (tmp_path / "plot_norm.gp").exists()
        capsys.readouterr()

    def test_diagnose_width_cli(self, tmp_path, capsys):
        code = main(["diagnose-width", "--preset", "baranger-paper",
                     "--set", "time.t_max=5.0", "--set", "time.n_output=50",
                     "--qi", "0.0", "--pi", "1.0",
                     "--outdir", str(tmp_path)])
        assert code == 0
        assert (tmp_path / "width_diagnostic.csv").exists()
        capsys.readouterr()

    def test_converge_cli_bad_n_list(self, capsys):
        assert main(["converge", "--preset", "baranger-paper",
                     "--n-list", "abc"]) == 1
        capsys.readouterr()

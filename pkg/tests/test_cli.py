"""Command-line interface: subcommand output, exit codes, output file
layout, and byte-level reproducibility of runs."""

from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest
import yaml

from noisykitaev import __version__
from noisykitaev.analysis import dispersion
from noisykitaev.config import config_from_mapping
from noisykitaev.experiments import PRESETS, preset_config


def run_cli(*args, cwd, workers: int = 1):
    env = dict(os.environ, NOISYKITAEV_WORKERS=str(workers))
    return subprocess.run(
        [sys.executable, "-m", "noisykitaev.cli", *map(str, args)],
        capture_output=True, text=True, cwd=cwd, env=env,
    )


def decay_doc(**run_updates) -> dict:
    # 14 sites: long enough that the edge-mode splitting clears the default
    # zero-mode tolerance, small enough to keep subprocess runs instant.
    run = {"backend": "marginal", "t_max": 2.0, "grid_points": 9, "seed": 3}
    run.update(run_updates)
    return {
        "kind": "decay",
        "system": {"geometry": "chain", "n_sites": 14, "hopping": 1.0,
                   "pairing": 0.8, "mu": 0.0},
        "noise": {"type": "telegraph", "a": 0.2, "b": 1.0, "rate": 0.7},
        "run": run,
        "output": {"directory": "out"},
    }


def write_doc(path, doc) -> None:
    path.write_text(yaml.safe_dump(doc), encoding="utf-8")


def read_csv(path):
    text = path.read_text(encoding="utf-8")
    assert "\r" not in text
    lines = text.splitlines()
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


class TestCatalog:
    def test_list_shows_every_preset(self, tmp_path):
        proc = run_cli("list", cwd=tmp_path)
        assert proc.returncode == 0
        lines = proc.stdout.splitlines()
        assert len(lines) == len(PRESETS)
        assert {line.split()[0] for line in lines} == set(PRESETS)
        for line in lines:
            name, rest = line.split("  ", 1)
            assert rest.strip() == PRESETS[name.strip()].description

    def test_dump_matches_registry(self, tmp_path):
        proc = run_cli("preset", "fig2b", "--dump", cwd=tmp_path)
        assert proc.returncode == 0
        cfg = config_from_mapping(yaml.safe_load(proc.stdout))
        assert cfg == preset_config("fig2b")

    def test_dump_applies_smoke_and_overrides(self, tmp_path):
        proc = run_cli(
            "preset", "fig2b", "--dump", "--smoke",
            "--override", "run.t_max=1.5", cwd=tmp_path,
        )
        cfg = config_from_mapping(yaml.safe_load(proc.stdout))
        assert cfg.run.t_max == 1.5
        assert cfg.system.n_sites == preset_config("fig2b", smoke=True).system.n_sites

    def test_unknown_preset_exits_2(self, tmp_path):
        proc = run_cli("preset", "nope", cwd=tmp_path)
        assert proc.returncode == 2
        assert "unknown preset 'nope'" in proc.stderr


class TestValidateCommand:
    def test_clean_config_prints_ok(self, tmp_path):
        write_doc(tmp_path / "cfg.yaml", decay_doc())
        proc = run_cli("validate", "cfg.yaml", cwd=tmp_path)
        assert proc.returncode == 0
        assert proc.stdout.strip() == "ok"

    def test_errors_are_listed_with_exit_2(self, tmp_path):
        doc = decay_doc()
        doc["kind"] = "heating"
        doc["run"]["backend"] = "trajectory"
        write_doc(tmp_path / "cfg.yaml", doc)
        proc = run_cli("validate", "cfg.yaml", cwd=tmp_path)
        assert proc.returncode == 2
        assert "error: run.backend: heating runs use the marginal backend" \
            in proc.stdout

    def test_warnings_alone_keep_exit_0(self, tmp_path):
        doc = decay_doc(backend="trajectory")
        del doc["run"]["seed"]
        write_doc(tmp_path / "cfg.yaml", doc)
        proc = run_cli("validate", "cfg.yaml", cwd=tmp_path)
        assert proc.returncode == 0
        assert proc.stdout.startswith("warning: run.seed:")

    def test_schema_violation_exits_2(self, tmp_path):
        doc = decay_doc()
        doc["noise"]["rte"] = 1.0
        write_doc(tmp_path / "cfg.yaml", doc)
        proc = run_cli("validate", "cfg.yaml", cwd=tmp_path)
        assert proc.returncode == 2
        assert "error: config key 'noise.rte' is not recognized" in proc.stdout


class TestRunCommand:
    def test_single_run_files_and_report(self, tmp_path):
        write_doc(tmp_path / "cfg.yaml", decay_doc())
        proc = run_cli("run", "cfg.yaml", cwd=tmp_path)
        assert proc.returncode == 0, proc.stderr
        assert "wrote result.csv" in proc.stdout
        assert "final_edge_correlation = " in proc.stdout
        assert proc.stdout.splitlines()[-1].startswith("done in ")

        header, rows = read_csv(tmp_path / "out" / "result.csv")
        assert header == ["t", "edge_correlation"]
        assert len(rows) == 9
        times = [float(r[0]) for r in rows]
        corr = [float(r[1]) for r in rows]
        assert times[0] == 0.0 and times[-1] == 2.0
        assert corr[0] == pytest.approx(1.0, abs=1e-9)
        assert all(abs(c) <= 1.0 + 1e-9 for c in corr)

        meta = json.loads((tmp_path / "out" / "metadata.json").read_text())
        assert meta["kind"] == "decay"
        assert meta["version"] == __version__
        assert meta["seed"] == 3
        assert meta["outputs"] == ["result.csv"]
        assert meta["config"]["run"]["seed"] == 3
        assert meta["extras"]["final_edge_correlation"] == corr[-1]

    def test_reruns_are_byte_identical(self, tmp_path):
        write_doc(tmp_path / "cfg.yaml", decay_doc())
        assert run_cli("run", "cfg.yaml", "--out", "a", cwd=tmp_path).returncode == 0
        assert run_cli("run", "cfg.yaml", "--out", "b", cwd=tmp_path).returncode == 0
        a = (tmp_path / "a" / "result.csv").read_bytes()
        b = (tmp_path / "b" / "result.csv").read_bytes()
        assert a == b

    def test_overrides_reach_the_run(self, tmp_path):
        write_doc(tmp_path / "cfg.yaml", decay_doc())
        proc = run_cli(
            "run", "cfg.yaml", "--out", "small",
            "--override", "run.grid_points=5",
            "--override", "noise.rate=2.0", cwd=tmp_path,
        )
        assert proc.returncode == 0, proc.stderr
        _, rows = read_csv(tmp_path / "small" / "result.csv")
        assert len(rows) == 5
        meta = json.loads((tmp_path / "small" / "metadata.json").read_text())
        assert meta["config"]["noise"]["rate"] == 2.0

    def test_sweep_writes_points_and_index(self, tmp_path):
        doc = decay_doc(sweep=[{"noise.rate": 0.1}, {"noise.rate": 10.0}])
        write_doc(tmp_path / "cfg.yaml", doc)
        proc = run_cli("run", "cfg.yaml", cwd=tmp_path)
        assert proc.returncode == 0, proc.stderr
        out = tmp_path / "out"
        assert (out / "point_000.csv").exists()
        assert (out / "point_001.csv").exists()
        header, rows = read_csv(out / "index.csv")
        assert header == ["point", "file", "noise.rate", "final_edge_correlation"]
        assert [r[0] for r in rows] == ["0", "1"]
        assert [r[1] for r in rows] == ["point_000.csv", "point_001.csv"]
        assert [float(r[2]) for r in rows] == [0.1, 10.0]
        meta = json.loads((out / "metadata.json").read_text())
        assert meta["outputs"] == ["point_000.csv", "point_001.csv", "index.csv"]

    def test_parallel_sweep_matches_sequential(self, tmp_path):
        doc = decay_doc(sweep=[{"noise.rate": 0.1}, {"noise.rate": 10.0}])
        write_doc(tmp_path / "cfg.yaml", doc)
        assert run_cli("run", "cfg.yaml", "--out", "seq", cwd=tmp_path,
                       workers=1).returncode == 0
        assert run_cli("run", "cfg.yaml", "--out", "par", cwd=tmp_path,
                       workers=2).returncode == 0
        for name in ("point_000.csv", "point_001.csv", "index.csv"):
            assert (tmp_path / "seq" / name).read_bytes() == \
                (tmp_path / "par" / name).read_bytes(), name

    def test_config_error_exits_2(self, tmp_path):
        doc = decay_doc()
        doc["nois"] = {"rate": 1.0}
        write_doc(tmp_path / "cfg.yaml", doc)
        proc = run_cli("run", "cfg.yaml", cwd=tmp_path)
        assert proc.returncode == 2
        assert "error: config key 'nois' is not recognized" in proc.stderr

    def test_integration_failure_exits_1(self, tmp_path):
        write_doc(tmp_path / "cfg.yaml",
                  decay_doc(dt=0.4, convergence_check=True))
        proc = run_cli("run", "cfg.yaml", cwd=tmp_path)
        assert proc.returncode == 1
        assert proc.stderr.startswith("error: ")
        assert "changed by" in proc.stderr

    def test_sweep_failure_names_the_point(self, tmp_path):
        # noise.a = 3.0 puts every noise value outside the topological
        # window, so the second point has no initial edge mode.
        doc = decay_doc(sweep=[{"noise.rate": 0.1}, {"noise.a": 3.0}])
        write_doc(tmp_path / "cfg.yaml", doc)
        proc = run_cli("run", "cfg.yaml", cwd=tmp_path)
        assert proc.returncode != 0
        assert "sweep point 1 (point_001.csv) failed:" in proc.stderr

    def test_preset_smoke_run(self, tmp_path):
        proc = run_cli("preset", "fig8", "--smoke", "--out", "quench",
                       cwd=tmp_path)
        assert proc.returncode == 0, proc.stderr
        header, rows = read_csv(tmp_path / "quench" / "result.csv")
        assert header == ["mu_final", "g_infinity", "longtime_correlation"]
        assert len(rows) == 7
        assert "max_abs_deviation = " in proc.stdout


class TestOracleCommands:
    def test_heating_rate_flat_band_value(self, tmp_path):
        # J = pairing makes the band flat, so the rate is sigma^2 kappa /
        # (kappa^2 + 4) with no quadrature error.
        proc = run_cli("heating-rate", "--pairing", 1.0, "--sigma", 0.1,
                       "--kappa", 2.0, cwd=tmp_path)
        assert proc.returncode == 0
        assert proc.stdout.strip() == "0.0025"

    def test_g_infinity_reports_both_estimates(self, tmp_path):
        proc = run_cli(
            "g-infinity", "--n-sites", 60, "--pairing", 0.72,
            "--mu-initial", 0.3, "--mu-final", 1.0, cwd=tmp_path,
        )
        assert proc.returncode == 0
        lines = proc.stdout.splitlines()
        assert lines[0].startswith("g_infinity ")
        assert lines[1].startswith("dephased   ")
        g = float(lines[0].split()[1])
        dephased = float(lines[1].split()[1])
        assert g == pytest.approx(0.6504, abs=2e-3)
        assert abs(g - dephased) < 0.02

    def test_dispersion_matches_library(self, tmp_path):
        proc = run_cli("dispersion", "--pairing", 0.6, "--mu", 1.5,
                       cwd=tmp_path)
        assert proc.returncode == 0
        lines = proc.stdout.splitlines()
        d = dispersion(1.0, 0.6, 1.5)
        assert float(lines[0].split()[-1]) == pytest.approx(d.gap, rel=1e-12)
        assert float(lines[1].split()[-1]) == pytest.approx(d.bandwidth, rel=1e-12)

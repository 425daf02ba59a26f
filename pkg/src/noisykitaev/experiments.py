"""Experiment registry and deterministic runners.

Each run kind wires a configuration document into the simulation stack and
produces CSV tables plus a JSON metadata record:

* ``decay``: edge-correlation trace of a noisy static wire, on any backend;
* ``heating``: extensive energy gain under weak global noise, with the
  fitted growth rate and its closed-form counterpart in the metadata;
* ``transport``: scheduled single-site pushes moving an edge mode, with
  fixed Majorana probe correlators;
* ``braid``: T-junction exchange, reporting the moving-pair correlation
  and (noise-free) the mode-overlap signs;
* ``quench_scan``: overlap formula vs exact dephasing across a grid of
  post-quench chemical potentials (no time integration);
* ``noise_stats``: sampled noise autocorrelation against the analytic one,
  plus generator health checks (no wire at all).

Sweeps run one file per point plus an index table written last; setting
the environment variable ``NOISYKITAEV_WORKERS`` parallelizes points with
byte-identical output.  All CSV is UTF-8, LF, comma-separated, floats at
17 significant digits, written atomically.
"""

from __future__ import annotations

import json
import os
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    heating_rate_analytic,
    heating_rate_fit,
    quench_g_infinity,
    quench_longtime_correlation,
)
from .config import (
    ExperimentConfig,
    apply_overrides,
    config_from_mapping,
    config_to_mapping,
    resolve_config,
    validate_config,
)
from .dynamics import (
    FastLimitSpec,
    InvariantMonitor,
    MarginalEnsemble,
    bind_bond_scale,
    bind_global_mu,
    bind_site_mu,
    edge_correlation_observable,
    energy_observable,
    evolve_lindblad_fast,
    evolve_marginal,
    evolve_quasi_static,
    evolve_trajectory_average,
)
from .errors import ConfigError, FitError
from .noise import (
    JumpNoise,
    autocorrelation,
    constant,
    discretized_gaussian,
    noise_statistics,
    sample_autocorrelation,
    stationary_distribution,
    telegraph,
)
from .schedules import (
    build_braiding_schedule,
    build_tjunction,
    build_transport_schedule,
    count_correlation_drops,
    run_braid,
    run_transport,
)
from .wires import (
    build_hamiltonian,
    chain,
    ground_state_covariance,
    ring,
    zero_modes,
)

__all__ = [
    "Preset",
    "PRESETS",
    "preset_config",
    "RunRecord",
    "run_experiment",
    "write_csv",
    "WORKERS_ENV",
]

WORKERS_ENV = "NOISYKITAEV_WORKERS"


# ---------------------------------------------------------------------------
# building blocks


def _build_noise(cfg: ExperimentConfig) -> JumpNoise | None:
    n = cfg.noise
    if n.type == "telegraph":
        return telegraph(n.a, n.b, n.rate)
    if n.type == "gaussian":
        return discretized_gaussian(n.mean, n.sigma, n.corr_time, n.n_fluctuators)
    if n.type == "constant":
        return constant(n.value)
    return None


def _build_wire(cfg: ExperimentConfig):
    s = cfg.system
    factory = {"chain": chain, "ring": ring}[s.geometry]
    return factory(s.n_sites, s.hopping, s.pairing, s.mu)


def _build_binding(cfg: ExperimentConfig, network):
    n = cfg.noise
    if n.binding == "global_mu":
        return bind_global_mu(network)
    if n.binding == "site_mu":
        return bind_site_mu(network, n.site - 1)
    return bind_bond_scale(network, n.bond[0] - 1, n.bond[1] - 1)


def _initial_value(noise: JumpNoise) -> float:
    if noise.initial_state is not None:
        return float(noise.values[noise.initial_state])
    return noise_statistics(noise).mean


def _grid(cfg: ExperimentConfig) -> np.ndarray:
    return np.linspace(0.0, cfg.run.t_max, cfg.run.grid_points)


def _monitor(cfg: ExperimentConfig) -> InvariantMonitor | None:
    if cfg.run.monitor_invariants:
        return InvariantMonitor(raise_on_violation=True)
    return None


# ---------------------------------------------------------------------------
# run kinds


def _run_decay(cfg: ExperimentConfig):
    network = _build_wire(cfg)
    noise = _build_noise(cfg)
    binding = _build_binding(cfg, network)
    x0 = _initial_value(noise)
    h0 = binding.hamiltonian(x0)
    gamma0 = ground_state_covariance(h0)
    modes0 = zero_modes(h0)
    if modes0 is None:
        raise ConfigError(
            "initial Hamiltonian has no edge modes; the edge correlation "
            "is undefined (check noise.a / system.mu)"
        )
    observables = {"edge_correlation": edge_correlation_observable(modes0)}
    t_grid = _grid(cfg)
    monitor = _monitor(cfg)
    backend = cfg.run.backend
    errors = {}
    if backend == "marginal":
        ensemble = MarginalEnsemble.initial(binding, noise, gamma0)
        series = evolve_marginal(
            ensemble, t_grid, observables=observables, dt=cfg.run.dt,
            monitor=monitor, convergence_check=cfg.run.convergence_check,
        )
    elif backend == "trajectory":
        series = evolve_trajectory_average(
            binding, noise, gamma0, t_grid,
            n_trajectories=cfg.run.n_trajectories, seed=cfg.run.seed,
            observables=observables,
            check_parity=cfg.run.monitor_invariants and binding.dim <= 40,
        )
        errors = series.errors
    elif backend == "lindblad":
        spec = FastLimitSpec.from_binding(binding, noise)
        series = evolve_lindblad_fast(
            spec, gamma0, t_grid, observables=observables, dt=cfg.run.dt,
            monitor=monitor,
        )
    else:  # quasi_static
        series = evolve_quasi_static(
            binding, noise, gamma0, t_grid, observables=observables,
            monitor=monitor,
        )
    corr = series.data["edge_correlation"]
    columns = {"t": t_grid, "edge_correlation": corr}
    if "edge_correlation" in errors:
        columns["edge_correlation_se"] = errors["edge_correlation"]
    extras = {"final_edge_correlation": float(corr[-1])}
    return columns, extras


def _run_heating(cfg: ExperimentConfig):
    network = _build_wire(cfg)
    noise = _build_noise(cfg)
    binding = _build_binding(cfg, network)
    stats = noise_statistics(noise)
    h_ave = binding.hamiltonian(stats.mean)
    gamma0 = ground_state_covariance(h_ave, degenerate_ok=True)
    t_grid = _grid(cfg)
    ensemble = MarginalEnsemble.initial(binding, noise, gamma0)
    series = evolve_marginal(
        ensemble, t_grid, observables={"energy": energy_observable(h_ave)},
        dt=cfg.run.dt, monitor=_monitor(cfg),
        convergence_check=cfg.run.convergence_check,
    )
    energy = series.data["energy"]
    delta_e = energy - energy[0]
    n = network.n_sites
    columns = {"t": t_grid, "delta_e": delta_e, "delta_e_per_site": delta_e / n}
    extras: dict = {
        "ds_analytic": heating_rate_analytic(
            cfg.system.hopping, cfg.system.pairing, stats.mean,
            np.sqrt(stats.variance), 0.5 / stats.corr_time,
        ),
    }
    try:
        fit = heating_rate_fit(t_grid, delta_e / n)
        extras.update(
            ds_fit=fit.rate, fit_t_lo=fit.window[0], fit_t_hi=fit.window[1],
            fit_residual=fit.residual,
        )
    except FitError as exc:
        extras.update(ds_fit=float("nan"), fit_error=str(exc))
    return columns, extras


def _run_transport(cfg: ExperimentConfig):
    network = _build_wire(cfg)
    p = cfg.protocol
    schedule = build_transport_schedule(
        network, [s - 1 for s in p.move_sites], p.duration, p.strength
    )
    noise = _build_noise(cfg)
    noise_site = None if cfg.noise.site is None else cfg.noise.site - 1
    if noise is not None and noise.n_states == 1 and not np.ptp(noise.values):
        noise = None
    total = schedule.total_duration
    result = run_transport(
        network, schedule,
        noise=noise, noise_site=noise_site,
        grid_step=total / (cfg.run.grid_points - 1), dt=cfg.run.dt,
        majorana_probes=p.probe_sites, monitor=_monitor(cfg),
        zero_tol=p.zero_tol,
    )
    series = result.series
    columns = {"t": series.times, "moving_correlation": series.data["moving_correlation"]}
    for j in p.probe_sites:
        name = f"corr_c{2 * j - 1}"
        columns[name] = series.data[name]
    extras = {"final_correlation": result.final_correlation}
    return columns, extras


def _run_braid(cfg: ExperimentConfig):
    s = cfg.system
    p = cfg.protocol
    tj = build_tjunction(
        s.left_length, s.right_length, s.vertical_length,
        hopping=s.hopping, pairing_x=s.pairing,
        mu_topological=s.mu_topological, mu_nontopological=s.mu_nontopological,
    )
    schedule = build_braiding_schedule(
        tj, duration=p.duration, push=p.push, transfer_mu=p.transfer_mu
    )
    noise = _build_noise(cfg)
    if noise is not None and noise.n_states == 1 and not np.ptp(noise.values):
        noise = None
    noise_site = None if cfg.noise.site is None else cfg.noise.site - 1
    total = schedule.total_duration
    result = run_braid(
        tj, schedule,
        noise=noise, noise_site=noise_site,
        grid_step=total / (cfg.run.grid_points - 1), dt=cfg.run.dt,
        compute_overlaps=noise is None, monitor=_monitor(cfg),
        zero_tol=p.zero_tol,
    )
    trace = result.series.data["braid_correlation"]
    drops = count_correlation_drops(result.series.times, trace, result.boundaries)
    extras = {
        "final_correlation": result.final_correlation,
        "trace_min": float(trace.min()),
        "n_drop_events": len(drops),
    }
    if result.mode_overlaps is not None:
        o = result.mode_overlaps
        extras.update(
            s1=float(o[0, 1]), s2=float(o[1, 0]),
            overlap_11=float(o[0, 0]), overlap_22=float(o[1, 1]),
        )
    columns = {"t": result.series.times, "braid_correlation": trace}
    return columns, extras


def _run_quench_scan(cfg: ExperimentConfig):
    s, scan = cfg.system, cfg.scan
    h0 = build_hamiltonian(chain(s.n_sites, s.hopping, s.pairing, s.mu))
    mu_f = np.linspace(scan.mu_final_start, scan.mu_final_stop, scan.mu_final_count)
    g = np.empty(mu_f.size)
    lt = np.empty(mu_f.size)
    for i, m in enumerate(mu_f):
        h_f = build_hamiltonian(chain(s.n_sites, s.hopping, s.pairing, float(m)))
        g[i] = quench_g_infinity(h0, h_f)
        lt[i] = quench_longtime_correlation(h0, h_f)
    columns = {"mu_final": mu_f, "g_infinity": g, "longtime_correlation": lt}
    extras = {"max_abs_deviation": float(np.max(np.abs(g - lt)))}
    return columns, extras


def _run_noise_stats(cfg: ExperimentConfig):
    noise = _build_noise(cfg)
    stats = noise_statistics(noise)
    taus = np.asarray(cfg.stats.tau_multiples, dtype=float) * stats.corr_time
    est, se = sample_autocorrelation(noise, taus, cfg.stats.n_paths, cfg.run.seed)
    exact = autocorrelation(noise, taus)
    p_s = stationary_distribution(noise)
    extras = {
        "mean": stats.mean,
        "variance": stats.variance,
        "corr_time": stats.corr_time,
        "stationary_residual": float(np.linalg.norm(noise.generator @ p_s)),
    }
    if cfg.noise.type == "gaussian":
        single = discretized_gaussian(
            cfg.noise.mean, cfg.noise.sigma, cfg.noise.corr_time, 1
        )
        two_state = telegraph(
            cfg.noise.mean - cfg.noise.sigma, cfg.noise.mean + cfg.noise.sigma,
            0.5 / cfg.noise.corr_time,
        )
        extras["telegraph_equivalence_max_diff"] = float(
            max(
                np.max(np.abs(single.values - two_state.values)),
                np.max(np.abs(single.generator - two_state.generator)),
            )
        )
    columns = {
        "tau": taus,
        "autocorr_sampled": est,
        "autocorr_se": se,
        "autocorr_analytic": np.atleast_1d(exact),
    }
    return columns, extras


_RUNNERS = {
    "decay": _run_decay,
    "heating": _run_heating,
    "transport": _run_transport,
    "braid": _run_braid,
    "quench_scan": _run_quench_scan,
    "noise_stats": _run_noise_stats,
}


# ---------------------------------------------------------------------------
# output plumbing


def _format(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % float(x)
    return str(x)


def write_csv(path: Path, columns: dict) -> None:
    """Atomic CSV write: header row, 17-significant-digit floats, LF."""
    names = list(columns)
    arrays = [np.atleast_1d(np.asarray(columns[k])) for k in names]
    length = arrays[0].shape[0]
    if any(a.shape != (length,) for a in arrays):
        raise ValueError("CSV columns must share one length")
    lines = [",".join(names)]
    for i in range(length):
        lines.append(",".join(_format(a[i]) for a in arrays))
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    os.replace(tmp, path)


def _resolved(doc: dict, dotted: str):
    node = doc
    for part in dotted.split("."):
        if not isinstance(node, dict) or part not in node:
            return ""
        node = node[part]
    return node


@dataclass
class RunRecord:
    """Reproducibility record written as the JSON sidecar."""

    kind: str
    config: dict
    version: str
    seed: int
    wall_time_s: float
    outputs: list[str] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def to_json(self) -> str:
        doc = {
            "kind": self.kind,
            "version": self.version,
            "seed": self.seed,
            "wall_time_s": self.wall_time_s,
            "outputs": self.outputs,
            "extras": self.extras,
            "config": self.config,
        }
        return json.dumps(doc, indent=2, sort_keys=True)


def _execute_doc(doc: dict, path: Path) -> dict:
    """Worker: run one resolved document and write its CSV."""
    cfg = resolve_config(config_from_mapping(doc))
    columns, extras = _RUNNERS[cfg.kind](cfg)
    write_csv(path, columns)
    return extras


def _sweep_worker(args):
    i, doc, path = args
    try:
        return i, _execute_doc(doc, Path(path))
    except Exception as exc:
        raise RuntimeError(f"sweep point {i} ({Path(path).name}) failed: {exc}") from exc


def run_experiment(cfg: ExperimentConfig, base_dir=None) -> RunRecord:
    """Validate, execute, and persist one experiment (or one sweep of them).

    Validation errors raise ConfigError naming the offending keys; warnings
    are emitted as Python warnings.  For sweeps, each point gets
    ``point_NNN.csv`` and the index table referencing them is written last;
    ``NOISYKITAEV_WORKERS`` > 1 runs points in parallel processes with
    output identical to the sequential run.
    """
    diags = validate_config(cfg)
    problems = [d for d in diags if d.severity == "error"]
    if problems:
        raise ConfigError("; ".join(f"{d.key}: {d.message}" for d in problems))
    for d in diags:
        warnings.warn(f"{d.key}: {d.message}", stacklevel=2)
    cfg = resolve_config(cfg)
    if cfg.kind not in _RUNNERS:
        raise ConfigError(f"kind: '{cfg.kind}' is not runnable")
    doc = config_to_mapping(cfg)
    out_dir = Path(base_dir if base_dir is not None else cfg.output.directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    outputs: list[str] = []
    extras: dict = {}

    sweep = cfg.run.sweep
    if not sweep:
        path = out_dir / "result.csv"
        extras = _execute_doc(doc, path)
        outputs.append(path.name)
    else:
        base_doc = dict(doc)
        base_doc["run"] = dict(doc["run"], sweep=[])
        jobs = []
        swept_keys: list[str] = []
        for i, point in enumerate(sweep):
            for key in point:
                if key not in swept_keys:
                    swept_keys.append(key)
            point_doc = apply_overrides(base_doc, dict(point))
            jobs.append((i, point_doc, str(out_dir / f"point_{i:03d}.csv")))
        workers = max(1, int(os.environ.get(WORKERS_ENV, "1")))
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = dict(
                    (i, ex) for i, ex in pool.map(_sweep_worker, jobs)
                )
        else:
            results = dict(_sweep_worker(job) for job in jobs)
        extra_keys = sorted({k for ex in results.values() for k in ex})
        index: dict[str, list] = {"point": [], "file": []}
        for key in swept_keys + extra_keys:
            index[key] = []
        for i, point_doc, path in jobs:
            index["point"].append(i)
            index["file"].append(Path(path).name)
            for key in swept_keys:
                index[key].append(_resolved(point_doc, key))
            for key in extra_keys:
                index[key].append(results[i].get(key, float("nan")))
            outputs.append(Path(path).name)
        index_arrays = {k: np.asarray(v, dtype=object) for k, v in index.items()}
        index_path = out_dir / "index.csv"
        write_csv(index_path, index_arrays)
        outputs.append(index_path.name)

    record = RunRecord(
        kind=cfg.kind,
        config=doc,
        version=__version__,
        seed=int(cfg.run.seed),
        wall_time_s=time.perf_counter() - started,
        outputs=outputs,
        extras=extras,
    )
    meta = out_dir / "metadata.json"
    tmp = meta.with_name(meta.name + ".tmp")
    tmp.write_text(record.to_json() + "\n", encoding="utf-8")
    os.replace(tmp, meta)
    return record


# ---------------------------------------------------------------------------
# preset registry


@dataclass(frozen=True)
class Preset:
    """A named, fully specified experiment document.

    ``smoke_overrides`` shrink the run (fewer sites, shorter spans, fewer
    samples) while keeping every code path alive; the smoke profile is what
    CI and the invariant sweep execute.
    """

    name: str
    description: str
    doc: dict
    smoke_overrides: dict


def preset_config(
    name: str, smoke: bool = False, overrides: dict | None = None
) -> ExperimentConfig:
    """Config for a registered preset, with smoke and user overrides applied
    (user overrides win)."""
    if name not in PRESETS:
        known = ", ".join(sorted(PRESETS))
        raise ConfigError(f"unknown preset '{name}' (known: {known})")
    preset = PRESETS[name]
    doc = dict(preset.doc)
    if smoke:
        doc = apply_overrides(doc, preset.smoke_overrides)
    if overrides:
        doc = apply_overrides(doc, overrides)
    return config_from_mapping(doc)


def _global_decay_doc(mu_b: float, out: str) -> dict:
    return {
        "kind": "decay",
        "system": {"geometry": "chain", "n_sites": 60, "hopping": 1.0,
                   "pairing": 0.8, "mu": 0.0},
        "noise": {"type": "telegraph", "a": 0.2, "b": mu_b, "rate": 0.7,
                  "binding": "global_mu"},
        "run": {"backend": "marginal", "t_max": 20.0, "grid_points": 201,
                "seed": 7,
                "sweep": [{"noise.rate": 0.1}, {"noise.rate": 0.7},
                          {"noise.rate": 10.0}]},
        "output": {"directory": out},
    }


# Smoke chains stay long enough that the edge-mode splitting clears the
# default zero-mode tolerance (the decay length grows as pairing shrinks,
# hence the pairing bump where the production preset uses 0.4J).
_DECAY_SMOKE = {
    "system.n_sites": 14,
    "run.t_max": 3.0,
    "run.grid_points": 16,
    "run.monitor_invariants": True,
}

_HEATING_BASE = {
    "kind": "heating",
    "system": {"geometry": "chain", "n_sites": 60, "hopping": 1.0,
               "pairing": 1.0, "mu": 0.0},
    "noise": {"type": "telegraph", "a": -0.1, "b": 0.1, "rate": 2.0,
              "binding": "global_mu"},
    "run": {"backend": "marginal", "t_max": 20.0, "grid_points": 201,
            "seed": 7, "sweep": []},
    "output": {"directory": "out/fig3a"},
}


def _heating_grid_sweep() -> list[dict]:
    points = []
    for mu in (0.0, 2.0, 4.0):
        for rate in (0.5, 1.0, 2.0, 4.0, 8.0):
            points.append({
                "noise.a": mu - 0.1, "noise.b": mu + 0.1, "noise.rate": rate,
            })
    return points


def _split_sweep() -> list[dict]:
    points = []
    for rate in (0.7, 10.0):
        for site in (3, 6):
            points.append({
                "noise.binding": "site_mu", "noise.site": site,
                "noise.a": 0.0, "noise.b": 4.4, "noise.rate": rate,
            })
        for bond in ([3, 4], [6, 7]):
            points.append({
                "noise.binding": "bond_split", "noise.bond": bond,
                "noise.a": 1.0, "noise.b": 0.0, "noise.rate": rate,
            })
    return points


PRESETS: dict[str, Preset] = {}


def _register(name: str, description: str, doc: dict, smoke: dict) -> None:
    PRESETS[name] = Preset(name, description, doc, smoke)


_register(
    "fig2b",
    "global telegraph noise between two topological potentials: decay for "
    "slow, intermediate, fast switching",
    _global_decay_doc(1.0, "out/fig2b"),
    _DECAY_SMOKE,
)
_register(
    "fig2c",
    "global telegraph noise crossing the phase boundary, topological on "
    "average: decay for three switching rates",
    _global_decay_doc(2.1, "out/fig2c"),
    _DECAY_SMOKE,
)
_register(
    "fig2d",
    "global telegraph noise, non-topological on average: decay for three "
    "switching rates",
    _global_decay_doc(4.0, "out/fig2d"),
    _DECAY_SMOKE,
)
_register(
    "fig3a",
    "bulk energy absorption under weak global noise: linear growth for "
    "three switching rates",
    dict(_HEATING_BASE, run=dict(_HEATING_BASE["run"], sweep=[
        {"noise.rate": 0.5}, {"noise.rate": 2.0}, {"noise.rate": 8.0},
    ])),
    {"system.n_sites": 10, "run.t_max": 6.0, "run.grid_points": 61,
     "run.monitor_invariants": True,
     "run.sweep": [{"noise.rate": 2.0}]},
)
_register(
    "fig3b",
    "heating rate vs switching rate at chemical potential 0, 2J, 4J, with "
    "the closed-form rate as an overlay column",
    dict(_HEATING_BASE,
         run=dict(_HEATING_BASE["run"], sweep=_heating_grid_sweep()),
         output={"directory": "out/fig3b"}),
    {"system.n_sites": 10, "run.t_max": 6.0, "run.grid_points": 61,
     "run.monitor_invariants": True,
     "run.sweep": [{"noise.rate": 2.0}, {"noise.a": 1.9, "noise.b": 2.1}]},
)
_register(
    "fig4a",
    "single-site potential noise at distances 1, 3, 6 from the edge, "
    "intermediate switching rate",
    {
        "kind": "decay",
        "system": {"geometry": "chain", "n_sites": 60, "hopping": 1.0,
                   "pairing": 0.4, "mu": 0.4},
        "noise": {"type": "telegraph", "a": 0.0, "b": 0.8, "rate": 0.7,
                  "binding": "site_mu", "site": 1},
        "run": {"backend": "marginal", "t_max": 20.0, "grid_points": 201,
                "seed": 7,
                "sweep": [{"noise.site": 1}, {"noise.site": 3},
                          {"noise.site": 6}]},
        "output": {"directory": "out/fig4a"},
    },
    dict(_DECAY_SMOKE, **{"system.pairing": 0.8,
                          "run.sweep": [{"noise.site": 1}, {"noise.site": 3}]}),
)
_register(
    "fig4b",
    "single-site potential noise at distances 1, 3, 6, fast switching "
    "(motional narrowing)",
    apply_overrides(PRESETS["fig4a"].doc, {
        "noise.rate": 10.0, "output.directory": "out/fig4b",
    }),
    dict(_DECAY_SMOKE, **{"system.pairing": 0.8,
                          "run.sweep": [{"noise.site": 1}, {"noise.site": 3}]}),
)
_register(
    "split",
    "strong impurity and bond-splitting noise: correlation oscillations at "
    "the in-gap mode energy",
    {
        "kind": "decay",
        "system": {"geometry": "chain", "n_sites": 60, "hopping": 1.0,
                   "pairing": 0.4, "mu": 0.4},
        "noise": {"type": "telegraph", "a": 0.0, "b": 4.4, "rate": 0.7,
                  "binding": "site_mu", "site": 3},
        "run": {"backend": "marginal", "t_max": 20.0, "grid_points": 401,
                "seed": 7, "sweep": _split_sweep()},
        "output": {"directory": "out/split"},
    },
    dict(_DECAY_SMOKE, **{"system.pairing": 0.8, "run.sweep": [
        {"noise.site": 3},
        {"noise.binding": "bond_split", "noise.bond": [3, 4],
         "noise.a": 1.0, "noise.b": 0.0},
    ]}),
)
_register(
    "fig7",
    "adiabatic mode transport across a noisy site: probe correlators per "
    "switching rate, and final fidelity vs ramp time",
    {
        "kind": "transport",
        "system": {"geometry": "chain", "n_sites": 40, "hopping": 1.0,
                   "pairing": 0.8, "mu": 0.2},
        "noise": {"type": "telegraph", "a": 0.0, "b": 0.8, "rate": 0.5,
                  "binding": "site_mu", "site": 2},
        "protocol": {"move_sites": [1, 2, 3], "duration": 25.0,
                     "strength": 20.0, "probe_sites": [1, 2, 3, 4]},
        "run": {"backend": "marginal", "t_max": 75.0, "grid_points": 301,
                "seed": 7,
                "sweep": [{"noise.type": "constant"}, {},
                          {"noise.rate": 10.0},
                          {"protocol.duration": 5.0},
                          {"protocol.duration": 10.0},
                          {"protocol.duration": 15.0},
                          {"protocol.duration": 20.0},
                          {"protocol.duration": 35.0},
                          {"protocol.duration": 50.0}]},
        "output": {"directory": "out/fig7"},
    },
    {"system.n_sites": 14, "protocol.duration": 2.0,
     "protocol.probe_sites": [1, 2], "protocol.zero_tol": 1e-3,
     "run.grid_points": 31, "run.monitor_invariants": True,
     "run.sweep": [{"noise.type": "constant"}, {}]},
)
_register(
    "tjunction",
    "T-junction exchange of two edge modes with junction noise: clean, "
    "slow-noise, and fast-noise runs",
    {
        "kind": "braid",
        "system": {"geometry": "tjunction", "hopping": 1.0, "pairing": 0.7,
                   "left_length": 8, "right_length": 8, "vertical_length": 8,
                   "mu_topological": 0.1, "mu_nontopological": -4.0},
        "noise": {"type": "telegraph", "a": 0.0, "b": 0.7, "rate": 0.6,
                  "binding": "site_mu"},
        "protocol": {"duration": 18.0, "transfer_mu": -1.3},
        "run": {"backend": "marginal", "t_max": 1728.0, "grid_points": 2305,
                "seed": 7,
                "sweep": [{"noise.type": "constant"}, {},
                          {"noise.rate": 10.0}]},
        "output": {"directory": "out/tjunction"},
    },
    {"system.left_length": 6, "system.right_length": 6,
     "system.vertical_length": 6, "protocol.duration": 1.0,
     "protocol.zero_tol": 1e-3, "run.grid_points": 73,
     "run.monitor_invariants": True,
     "run.sweep": [{"noise.type": "constant"}, {}]},
)
_register(
    "fig8",
    "post-quench long-time edge correlation vs final chemical potential: "
    "overlap formula against exact dephasing",
    {
        "kind": "quench_scan",
        "system": {"geometry": "chain", "n_sites": 134, "hopping": 1.0,
                   "pairing": 0.72, "mu": 0.3},
        "noise": {"type": "constant"},
        "run": {"backend": "marginal", "seed": 7},
        "scan": {"mu_final_start": 0.0, "mu_final_stop": 2.4,
                 "mu_final_count": 49},
        "output": {"directory": "out/fig8"},
    },
    {"system.n_sites": 30, "scan.mu_final_count": 7},
)
_register(
    "noise-check",
    "noise-model statistics: sampled vs analytic autocorrelation, "
    "stationary residual, two-state equivalence",
    {
        "kind": "noise_stats",
        "noise": {"type": "gaussian", "mean": 0.0, "sigma": 0.1,
                  "corr_time": 1.0, "n_fluctuators": 64},
        "stats": {"tau_multiples": [0.0, 1.0, 2.0, 4.0], "n_paths": 4000},
        "run": {"backend": "marginal", "seed": 11},
        "output": {"directory": "out/noise-check"},
    },
    {"stats.n_paths": 200},
)

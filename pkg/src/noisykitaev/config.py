"""Experiment configuration documents.

One YAML document describes one run: the wire, the noise and where it
couples, an optional ramp protocol, integration settings, and output
paths.  Documents are strict: unknown keys are rejected by name, so typos
fail loudly instead of silently falling back to defaults.

Sites in configuration files are numbered 1..N (matching the usual wire
diagrams); conversion to the package's 0-based indexing happens when the
experiment is built.  Energies are in units of the hopping J, times in
1/J.

``validate_config`` returns diagnostics instead of raising, so a config
can be checked without running it; ``resolve_config`` applies defaults
(warning where a default is physically meaningful, like the seed) and
returns the exact document that reproduces the run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .errors import ConfigError

__all__ = [
    "SystemConfig",
    "NoiseConfig",
    "ProtocolConfig",
    "RunConfig",
    "OutputConfig",
    "ScanConfig",
    "StatsConfig",
    "ExperimentConfig",
    "Diagnostic",
    "load_config",
    "config_from_mapping",
    "validate_config",
    "resolve_config",
    "apply_overrides",
    "parse_override",
    "config_to_mapping",
]

KINDS = ("decay", "heating", "transport", "braid", "quench_scan", "noise_stats")
GEOMETRIES = ("chain", "ring", "tjunction")
NOISE_TYPES = ("telegraph", "gaussian", "constant", "none")
BINDINGS = ("global_mu", "site_mu", "bond_split")
BACKENDS = ("marginal", "trajectory", "lindblad", "quasi_static")


def _take(section: dict, allowed: dict[str, Any], where: str) -> dict:
    """Fill defaults and reject unknown keys, reporting the dotted path."""
    if not isinstance(section, dict):
        raise ConfigError(f"section '{where}' must be a mapping")
    unknown = set(section) - set(allowed)
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"config key '{where}.{key}' is not recognized")
    out = dict(allowed)
    out.update(section)
    return out


@dataclass(frozen=True)
class SystemConfig:
    geometry: str = "chain"
    n_sites: int = 60
    hopping: float = 1.0
    pairing: float = 0.8
    mu: float = 0.0
    left_length: int = 8
    right_length: int = 8
    vertical_length: int = 8
    mu_topological: float = 0.1
    mu_nontopological: float = -4.0

    @classmethod
    def from_mapping(cls, doc: dict) -> "SystemConfig":
        defaults = {f: getattr(cls, f) for f in cls.__dataclass_fields__}
        return cls(**_take(doc, defaults, "system"))


@dataclass(frozen=True)
class NoiseConfig:
    type: str = "telegraph"
    a: float = 0.0
    b: float = 0.0
    rate: float = 1.0
    mean: float = 0.0
    sigma: float = 0.1
    corr_time: float = 1.0
    n_fluctuators: int = 64
    value: float = 0.0
    binding: str = "global_mu"
    site: int | None = None
    bond: tuple[int, int] | None = None

    @classmethod
    def from_mapping(cls, doc: dict) -> "NoiseConfig":
        defaults = {f: getattr(cls, f) for f in cls.__dataclass_fields__}
        got = _take(doc, defaults, "noise")
        if got["bond"] is not None:
            got["bond"] = tuple(int(x) for x in got["bond"])
        return cls(**got)


@dataclass(frozen=True)
class ProtocolConfig:
    move_sites: tuple[int, ...] = ()
    duration: float = 25.0
    strength: float = 20.0
    push: float | None = None
    transfer_mu: float | None = -1.3
    probe_sites: tuple[int, ...] = ()
    zero_tol: float = 1e-6

    @classmethod
    def from_mapping(cls, doc: dict) -> "ProtocolConfig":
        defaults = {f: getattr(cls, f) for f in cls.__dataclass_fields__}
        got = _take(doc, defaults, "protocol")
        got["move_sites"] = tuple(int(x) for x in got["move_sites"])
        got["probe_sites"] = tuple(int(x) for x in got["probe_sites"])
        return cls(**got)


@dataclass(frozen=True)
class RunConfig:
    backend: str = "marginal"
    t_max: float = 20.0
    grid_points: int = 201
    dt: float | None = None
    n_trajectories: int = 1000
    seed: int | None = None
    convergence_check: bool = False
    monitor_invariants: bool = False
    sweep: tuple[dict, ...] = ()

    @classmethod
    def from_mapping(cls, doc: dict) -> "RunConfig":
        defaults = {f: getattr(cls, f) for f in cls.__dataclass_fields__}
        got = _take(doc, defaults, "run")
        sweep = got["sweep"] or ()
        if not isinstance(sweep, (list, tuple)):
            raise ConfigError("config key 'run.sweep' must be a list of mappings")
        for point in sweep:
            if not isinstance(point, dict):
                raise ConfigError("config key 'run.sweep' entries must be mappings")
        got["sweep"] = tuple(dict(p) for p in sweep)
        return cls(**got)


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "out"
    snapshot_times: tuple[float, ...] = ()

    @classmethod
    def from_mapping(cls, doc: dict) -> "OutputConfig":
        defaults = {f: getattr(cls, f) for f in cls.__dataclass_fields__}
        got = _take(doc, defaults, "output")
        got["snapshot_times"] = tuple(float(t) for t in got["snapshot_times"])
        return cls(**got)


@dataclass(frozen=True)
class ScanConfig:
    """Post-quench chemical-potential grid for ``quench_scan`` runs; the
    initial chemical potential is ``system.mu``."""

    mu_final_start: float = 0.0
    mu_final_stop: float = 1.8
    mu_final_count: int = 31

    @classmethod
    def from_mapping(cls, doc: dict) -> "ScanConfig":
        defaults = {f: getattr(cls, f) for f in cls.__dataclass_fields__}
        return cls(**_take(doc, defaults, "scan"))


@dataclass(frozen=True)
class StatsConfig:
    """Sampling sizes for ``noise_stats`` runs; lags are in units of the
    noise correlation time."""

    tau_multiples: tuple[float, ...] = (0.0, 1.0, 2.0, 4.0)
    n_paths: int = 4000

    @classmethod
    def from_mapping(cls, doc: dict) -> "StatsConfig":
        defaults = {f: getattr(cls, f) for f in cls.__dataclass_fields__}
        got = _take(doc, defaults, "stats")
        got["tau_multiples"] = tuple(float(t) for t in got["tau_multiples"])
        return cls(**got)


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    system: SystemConfig = field(default_factory=SystemConfig)
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    protocol: ProtocolConfig = field(default_factory=ProtocolConfig)
    run: RunConfig = field(default_factory=RunConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    scan: ScanConfig = field(default_factory=ScanConfig)
    stats: StatsConfig = field(default_factory=StatsConfig)
    description: str = ""


_SECTIONS = ("system", "noise", "protocol", "run", "output", "scan", "stats")


def config_from_mapping(doc: dict) -> ExperimentConfig:
    """Build a typed config from a plain mapping, rejecting unknown keys."""
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a mapping")
    allowed = set(_SECTIONS) | {"kind", "description"}
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(f"config key '{sorted(unknown)[0]}' is not recognized")
    if "kind" not in doc:
        raise ConfigError("config key 'kind' is required")
    sections = {}
    for name, cls in (
        ("system", SystemConfig),
        ("noise", NoiseConfig),
        ("protocol", ProtocolConfig),
        ("run", RunConfig),
        ("output", OutputConfig),
        ("scan", ScanConfig),
        ("stats", StatsConfig),
    ):
        sections[name] = cls.from_mapping(doc.get(name) or {})
    return ExperimentConfig(
        kind=str(doc["kind"]),
        description=str(doc.get("description", "")),
        **sections,
    )


def load_config(path) -> ExperimentConfig:
    doc = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    return config_from_mapping(doc)


def config_to_mapping(cfg: ExperimentConfig) -> dict:
    """Plain mapping round-trip of a config (YAML/JSON friendly)."""
    from dataclasses import asdict

    doc: dict[str, Any] = {"kind": cfg.kind, "description": cfg.description}
    for name in _SECTIONS:
        section = asdict(getattr(cfg, name))
        doc[name] = {
            k: (list(v) if isinstance(v, tuple) else v) for k, v in section.items()
        }
    return doc


# ---------------------------------------------------------------------------
# overrides


def parse_override(text: str) -> tuple[str, Any]:
    """Parse ``section.key=value``; the value goes through YAML, so numbers,
    lists and nulls work."""
    key, sep, raw = text.partition("=")
    if not sep or not key:
        raise ConfigError(f"override '{text}' is not of the form key=value")
    return key.strip(), yaml.safe_load(raw)


def apply_overrides(doc: dict, overrides: dict[str, Any]) -> dict:
    """Return a copy of the mapping with dotted-path overrides applied.

    Paths address existing sections (``noise.rate=0.7``); the final key may
    be new only where the schema allows it, which ``config_from_mapping``
    re-checks afterwards.
    """
    import copy

    out = copy.deepcopy(doc)
    for path, value in overrides.items():
        parts = path.split(".")
        node = out
        for part in parts[:-1]:
            if part not in node or not isinstance(node[part], dict):
                if part in _SECTIONS and node is out:
                    node[part] = {}
                else:
                    raise ConfigError(f"override path '{path}' has no section '{part}'")
            node = node[part]
        node[parts[-1]] = value
    return out


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    key: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.key}: {self.message}"


def _topological_window(mu: float, hopping: float, pairing: float) -> bool:
    return abs(mu) < 2.0 * abs(hopping) and pairing != 0.0


def validate_config(cfg: ExperimentConfig) -> list[Diagnostic]:
    """Structural and physical checks; diagnostics, not exceptions.

    Errors mean the run cannot proceed (or would raise); warnings flag
    defaults being filled or parameter choices that defeat the usual
    expectations (e.g. a wire that is never topological).
    """
    out: list[Diagnostic] = []
    err = lambda key, msg: out.append(Diagnostic("error", key, msg))
    warn = lambda key, msg: out.append(Diagnostic("warning", key, msg))

    if cfg.kind not in KINDS:
        err("kind", f"'{cfg.kind}' is not one of {', '.join(KINDS)}")
        return out

    sys_, noise, run = cfg.system, cfg.noise, cfg.run
    if sys_.geometry not in GEOMETRIES:
        err("system.geometry", f"'{sys_.geometry}' is not one of {', '.join(GEOMETRIES)}")
    if sys_.geometry in ("chain", "ring") and sys_.n_sites < 2:
        err("system.n_sites", "need at least 2 sites")
    if sys_.geometry == "tjunction":
        for name in ("left_length", "right_length", "vertical_length"):
            if getattr(sys_, name) < 1:
                err(f"system.{name}", "leg needs at least 1 site")
    if sys_.hopping == 0.0:
        err("system.hopping", "hopping sets the unit of energy and cannot be 0")
    needs_edge_modes = cfg.kind in ("decay", "transport", "braid")
    if sys_.pairing == 0.0 and needs_edge_modes:
        warn("system.pairing", "pairing = 0 has no topological phase; no edge "
             "modes will exist at any chemical potential")

    if noise.type not in NOISE_TYPES:
        err("noise.type", f"'{noise.type}' is not one of {', '.join(NOISE_TYPES)}")
    if noise.type in ("telegraph", "gaussian"):
        if noise.rate is None or noise.rate <= 0.0:
            err("noise.rate", "switching rate must be positive")
    if noise.type == "gaussian":
        if noise.sigma < 0.0:
            err("noise.sigma", "standard deviation must be nonnegative")
        if noise.corr_time <= 0.0:
            err("noise.corr_time", "correlation time must be positive")
        if noise.n_fluctuators < 1:
            err("noise.n_fluctuators", "need at least one fluctuator")
    if noise.binding not in BINDINGS:
        err("noise.binding", f"'{noise.binding}' is not one of {', '.join(BINDINGS)}")
    n_total = sys_.n_sites
    if sys_.geometry == "tjunction":
        n_total = sys_.left_length + sys_.right_length + sys_.vertical_length + 1
    if noise.binding == "site_mu" and cfg.kind != "braid":
        if noise.site is None:
            err("noise.site", "site_mu binding needs a 1-based target site")
        elif not 1 <= noise.site <= n_total:
            err("noise.site", f"site {noise.site} outside 1..{n_total}")
    if noise.binding == "bond_split":
        if noise.bond is None:
            err("noise.bond", "bond_split binding needs a 1-based site pair")
        elif not all(1 <= s <= n_total for s in noise.bond):
            err("noise.bond", f"bond {noise.bond} outside 1..{n_total}")

    if run.backend not in BACKENDS:
        err("run.backend", f"'{run.backend}' is not one of {', '.join(BACKENDS)}")
    if cfg.kind in ("decay", "heating") and noise.type == "none":
        err("noise.type", f"{cfg.kind} runs need a noise model; "
            "use noise.type constant for a noise-free run")
    if cfg.kind == "heating" and run.backend != "marginal":
        err("run.backend", "heating runs use the marginal backend")
    if run.backend == "lindblad" and noise.type in ("none", "constant"):
        err("run.backend", "lindblad backend needs fluctuating noise "
            "(a switching rate and a variance)")
    if run.backend == "trajectory" and run.n_trajectories < 1:
        err("run.n_trajectories", "need at least one trajectory")
    if cfg.kind in ("decay", "heating") and run.t_max <= 0.0:
        err("run.t_max", "evolution span must be positive")
    if run.grid_points < 2:
        err("run.grid_points", "need at least two grid points")
    if run.dt is not None and run.dt <= 0.0:
        err("run.dt", "dt must be positive (or null for automatic)")
    if run.seed is None and run.backend == "trajectory":
        warn("run.seed", "missing seed defaulted to 0; set one for "
             "reproducible records")
    for i, point in enumerate(run.sweep):
        for key in point:
            head = key.split(".", 1)[0]
            if head not in _SECTIONS:
                err(f"run.sweep[{i}]", f"override path '{key}' has no section '{head}'")

    if cfg.kind == "decay" and noise.type == "telegraph" and noise.binding == "global_mu":
        if not _topological_window(noise.a, sys_.hopping, sys_.pairing):
            warn("noise.a", "initial chemical potential is outside the "
                 "topological window; there is no initial edge correlation")
    if cfg.kind == "transport" and not cfg.protocol.move_sites:
        err("protocol.move_sites", "transport needs the 1-based sites to push")
    if cfg.kind == "braid" and sys_.geometry != "tjunction":
        err("system.geometry", "braid runs need the tjunction geometry")
    if cfg.kind == "quench_scan" and cfg.scan.mu_final_count < 1:
        err("scan.mu_final_count", "need at least one grid point")
    if cfg.kind == "noise_stats":
        if noise.type not in ("telegraph", "gaussian"):
            err("noise.type", "noise statistics need a fluctuating model")
        if cfg.stats.n_paths < 2:
            err("stats.n_paths", "need at least two sample paths")
    return out


def resolve_config(cfg: ExperimentConfig) -> ExperimentConfig:
    """Fill runtime defaults (seed) so the echoed config reruns identically."""
    if cfg.run.seed is None:
        from dataclasses import replace

        return replace(cfg, run=replace(cfg.run, seed=0))
    return cfg

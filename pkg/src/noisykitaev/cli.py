"""Command-line entry point.

Subcommands:

* ``run <config.yaml>``: execute one configuration file;
* ``preset <name>``: execute (or ``--dump``) a registered preset;
* ``list``: show the preset catalog;
* ``validate <config.yaml>``: print diagnostics without running;
* ``heating-rate`` / ``g-infinity`` / ``dispersion``: closed-form oracles
  for cross-checking simulation output from the shell.

``--override section.key=value`` patches any config key (YAML syntax on
the value side); ``--smoke`` selects a preset's reduced profile.  Exit
status is 0 on success, 1 on runtime failure, 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import sys

import yaml

from .analysis import (
    dispersion,
    heating_rate_analytic,
    quench_g_infinity,
    quench_longtime_correlation,
)
from .config import (
    apply_overrides,
    config_from_mapping,
    load_config,
    parse_override,
    validate_config,
)
from .errors import ConfigError, NoisyKitaevError
from .experiments import PRESETS, preset_config, run_experiment
from .wires import build_hamiltonian, chain

__all__ = ["main"]


def _overrides(pairs) -> dict:
    out = {}
    for text in pairs or ():
        key, value = parse_override(text)
        out[key] = value
    return out


def _report(record) -> None:
    for name in record.outputs:
        print(f"wrote {name}")
    for key in sorted(record.extras):
        value = record.extras[key]
        if isinstance(value, float):
            print(f"{key} = {value:.6g}")
        else:
            print(f"{key} = {value}")
    print(f"done in {record.wall_time_s:.1f} s")


def _cmd_run(args) -> int:
    doc = yaml.safe_load(open(args.config, encoding="utf-8"))
    doc = apply_overrides(doc, _overrides(args.override))
    record = run_experiment(config_from_mapping(doc), base_dir=args.out)
    _report(record)
    return 0


def _cmd_preset(args) -> int:
    cfg = preset_config(args.name, smoke=args.smoke, overrides=_overrides(args.override))
    if args.dump:
        from .config import config_to_mapping

        print(yaml.safe_dump(config_to_mapping(cfg), sort_keys=False), end="")
        return 0
    record = run_experiment(cfg, base_dir=args.out)
    _report(record)
    return 0


def _cmd_list(_args) -> int:
    width = max(len(n) for n in PRESETS)
    for name in PRESETS:
        print(f"{name:<{width}}  {PRESETS[name].description}")
    return 0


def _cmd_validate(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}")
        return 2
    diags = validate_config(cfg)
    for d in diags:
        print(str(d))
    if not diags:
        print("ok")
    return 2 if any(d.severity == "error" for d in diags) else 0


def _cmd_heating_rate(args) -> int:
    value = heating_rate_analytic(
        args.hopping, args.pairing, args.mu, args.sigma, args.kappa, args.n_k
    )
    print("%.12g" % value)
    return 0


def _cmd_g_infinity(args) -> int:
    h0 = build_hamiltonian(chain(args.n_sites, args.hopping, args.pairing, args.mu_initial))
    h_f = build_hamiltonian(chain(args.n_sites, args.hopping, args.pairing, args.mu_final))
    print("g_infinity %.12g" % quench_g_infinity(h0, h_f))
    print("dephased   %.12g" % quench_longtime_correlation(h0, h_f))
    return 0


def _cmd_dispersion(args) -> int:
    d = dispersion(args.hopping, args.pairing, args.mu, args.n_k)
    print("gap       %.12g" % d.gap)
    print("bandwidth %.12g" % d.bandwidth)
    return 0


def _band_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--hopping", type=float, default=1.0)
    p.add_argument("--pairing", type=float, required=True)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--n-k", type=int, default=4096)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noisykitaev",
        description="Noisy Kitaev wire simulations: run experiments, "
        "inspect presets, evaluate closed-form oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a configuration file")
    p.add_argument("config")
    p.add_argument("--out", default=None, help="output directory override")
    p.add_argument("--override", action="append", metavar="KEY=VALUE")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("preset", help="execute or dump a registered preset")
    p.add_argument("name")
    p.add_argument("--out", default=None)
    p.add_argument("--override", action="append", metavar="KEY=VALUE")
    p.add_argument("--smoke", action="store_true", help="reduced-size profile")
    p.add_argument("--dump", action="store_true", help="print the config instead of running")
    p.set_defaults(func=_cmd_preset)

    p = sub.add_parser("list", help="list presets")
    p.set_defaults(func=_cmd_list)

    p = sub.add_parser("validate", help="check a configuration file")
    p.add_argument("config")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("heating-rate", help="closed-form heating rate per site")
    _band_args(p)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--kappa", type=float, required=True)
    p.set_defaults(func=_cmd_heating_rate)

    p = sub.add_parser("g-infinity", help="post-quench long-time correlation")
    p.add_argument("--n-sites", type=int, default=134)
    p.add_argument("--hopping", type=float, default=1.0)
    p.add_argument("--pairing", type=float, required=True)
    p.add_argument("--mu-initial", type=float, required=True)
    p.add_argument("--mu-final", type=float, required=True)
    p.set_defaults(func=_cmd_g_infinity)

    p = sub.add_parser("dispersion", help="band gap and bandwidth")
    _band_args(p)
    p.set_defaults(func=_cmd_dispersion)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NoisyKitaevError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

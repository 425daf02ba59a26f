#!/usr/bin/env python3
"""Run registered presets and collect their CSV outputs.

One command regenerates every dataset the figure scripts consume; pass
preset names to rerun a subset, or --smoke for the quick reduced profile.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from noisykitaev.errors import NoisyKitaevError
from noisykitaev.experiments import PRESETS, preset_config, run_experiment


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("names", nargs="*", metavar="PRESET",
                        help="presets to run (default: all)")
    parser.add_argument("--smoke", action="store_true",
                        help="reduced sizes and horizons, seconds per preset")
    parser.add_argument("--out", default=None, metavar="DIR",
                        help="root directory (default: each preset's own)")
    args = parser.parse_args(argv)
    names = args.names or sorted(PRESETS)
    unknown = [n for n in names if n not in PRESETS]
    if unknown:
        parser.error(f"unknown presets: {', '.join(sorted(unknown))}")
    for name in names:
        cfg = preset_config(name, smoke=args.smoke)
        base = str(Path(args.out) / name) if args.out else None
        started = time.perf_counter()
        try:
            record = run_experiment(cfg, base_dir=base)
        except NoisyKitaevError as exc:
            print(f"{name}: error: {exc}", file=sys.stderr)
            return 1
        print(f"{name}: {len(record.outputs)} files, "
              f"{time.perf_counter() - started:.1f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Render images from preset CSV outputs via the standalone figure scripts.

The figure scripts live in a separate package (figures/) and are invoked
as subprocesses with file paths only; run scripts/run_presets.py first to
produce the CSVs.  Missing presets are reported and skipped so partial
output directories still render what they can.
"""

from __future__ import annotations

import argparse
import subprocess
import sys
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[1]
FIG_SCRIPTS = REPO_ROOT / "figures" / "scripts"

# (script, preset dir, input CSVs, image stem)
JOBS = [
    ("fig2.py", "fig2b", ["point_000.csv", "point_001.csv", "point_002.csv"], "fig2b"),
    ("fig2.py", "fig2c", ["point_000.csv", "point_001.csv", "point_002.csv"], "fig2c"),
    ("fig2.py", "fig2d", ["point_000.csv", "point_001.csv", "point_002.csv"], "fig2d"),
    ("fig3.py", "fig3a", ["point_000.csv"], "fig3a_slow"),
    ("fig3.py", "fig3a", ["point_001.csv"], "fig3a_mid"),
    ("fig3.py", "fig3a", ["point_002.csv"], "fig3a_fast"),
    ("fig4.py", "fig4a", ["point_000.csv", "point_001.csv", "point_002.csv"], "fig4a"),
    ("fig4.py", "fig4b", ["point_000.csv", "point_001.csv", "point_002.csv"], "fig4b"),
    ("fig5.py", "tjunction", ["point_000.csv"], "fig5_clean"),
    ("fig5.py", "tjunction", ["point_001.csv"], "fig5_slow"),
    ("fig5.py", "tjunction", ["point_002.csv"], "fig5_fast"),
    ("fig7.py", "fig7", ["point_000.csv"], "fig7_clean"),
    ("fig7.py", "fig7", ["point_001.csv"], "fig7_slow"),
    ("fig7.py", "fig7", ["point_002.csv"], "fig7_fast"),
    ("fig8.py", "fig8", ["result.csv"], "fig8"),
    ("split.py", "split", ["point_000.csv"], "split_impurity"),
    ("split.py", "split", ["point_002.csv"], "split_bond"),
]


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data", default="out", metavar="DIR",
                        help="root directory holding the preset outputs")
    parser.add_argument("--out", default="out/figures", metavar="DIR",
                        help="directory for rendered images")
    args = parser.parse_args(argv)
    if not FIG_SCRIPTS.is_dir():
        print(f"figure scripts not found at {FIG_SCRIPTS}", file=sys.stderr)
        return 1
    data = Path(args.data)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    failures = 0
    for script, preset, names, stem in JOBS:
        paths = [data / preset / n for n in names]
        missing = [p for p in paths if not p.is_file()]
        if missing:
            print(f"{stem}: skipped, missing {missing[0]}")
            continue
        image = out_dir / f"{stem}.png"
        cmd = [sys.executable, str(FIG_SCRIPTS / script),
               *map(str, paths), "-o", str(image)]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        if proc.returncode != 0:
            failures += 1
            print(f"{stem}: FAILED\n{proc.stderr.strip()}", file=sys.stderr)
        else:
            print(f"{stem}: {image}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Edge-correlation decay under global noise, one curve per switching rate.

Takes three trace CSVs (columns t, edge_correlation) ordered slow,
intermediate, fast, and renders a single panel.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from nkfigures.io import MissingColumnError, read_columns
from nkfigures.render import new_axes, save

LABELS = ("slow", "intermediate", "fast")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csvs", nargs=3, metavar="CSV",
                        help="trace files ordered slow, intermediate, fast")
    parser.add_argument("-o", "--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    fig, ax = new_axes("t J", "edge correlation")
    try:
        for path, label in zip(args.csvs, LABELS):
            cols = read_columns(path, ("t", "edge_correlation"))
            ax.plot(cols["t"], cols["edge_correlation"], label=label)
    except MissingColumnError as exc:
        print(f"MissingColumnError: {exc}", file=sys.stderr)
        return 2
    ax.set_ylim(-0.05, 1.05)
    ax.legend(title="switching")
    save(fig, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Tracked edge-mode correlation through a T-junction exchange.

Takes one braid trace CSV (columns t, braid_correlation).  The correlation
returning to its initial magnitude marks a successful exchange; dips mark
the junction passages.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from nkfigures.io import MissingColumnError, read_columns
from nkfigures.render import new_axes, save


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv", metavar="CSV", help="braid trace file")
    parser.add_argument("-o", "--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        cols = read_columns(args.csv, ("t", "braid_correlation"))
    except MissingColumnError as exc:
        print(f"MissingColumnError: {exc}", file=sys.stderr)
        return 2
    fig, ax = new_axes("t J", "tracked edge correlation")
    ax.plot(cols["t"], cols["braid_correlation"])
    ax.axhline(1.0, color="gray", linewidth=0.5, linestyle=":")
    ax.set_ylim(-1.1, 1.1)
    save(fig, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())

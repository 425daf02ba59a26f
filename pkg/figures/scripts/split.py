#!/usr/bin/env python3
"""Edge-correlation oscillations from a strong impurity or a split bond.

Takes one trace CSV (columns t, edge_correlation).  Strong local noise
hybridizes the edge mode with an in-gap state, so the correlation
oscillates at the splitting energy instead of decaying smoothly.
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
    parser.add_argument("csv", metavar="CSV", help="trace file")
    parser.add_argument("-o", "--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        cols = read_columns(args.csv, ("t", "edge_correlation"))
    except MissingColumnError as exc:
        print(f"MissingColumnError: {exc}", file=sys.stderr)
        return 2
    fig, ax = new_axes("t J", "edge correlation")
    ax.plot(cols["t"], cols["edge_correlation"])
    ax.set_ylim(-1.05, 1.05)
    save(fig, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())

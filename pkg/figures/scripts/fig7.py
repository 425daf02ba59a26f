#!/usr/bin/env python3
"""Edge-mode correlation while the left mode is dragged across a noisy site.

Takes one transport trace CSV (columns t, moving_correlation).  Extra
columns named corr_c* are site-resolved probe correlators and are drawn as
thin background lines when present.
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
    parser.add_argument("csv", metavar="CSV", help="transport trace file")
    parser.add_argument("-o", "--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        cols = read_columns(args.csv, ("t", "moving_correlation"))
    except MissingColumnError as exc:
        print(f"MissingColumnError: {exc}", file=sys.stderr)
        return 2
    fig, ax = new_axes("t J", "correlation")
    for name in sorted(cols):
        if name.startswith("corr_c"):
            ax.plot(cols["t"], cols[name], linewidth=0.6, alpha=0.5,
                    label=name.removeprefix("corr_"))
    ax.plot(cols["t"], cols["moving_correlation"], color="black",
            label="tracked mode")
    ax.set_ylim(-1.1, 1.1)
    ax.legend(fontsize=7)
    save(fig, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())

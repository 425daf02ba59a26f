#!/usr/bin/env python3
"""Bulk energy absorbed under weak noise: total on the left axis, per-site
density on the right.

Takes one heating trace CSV (columns t, delta_e, delta_e_per_site).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from nkfigures.io import MissingColumnError, read_columns
from nkfigures.render import new_axes, save


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv", metavar="CSV", help="heating trace file")
    parser.add_argument("-o", "--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        cols = read_columns(args.csv, ("t", "delta_e", "delta_e_per_site"))
    except MissingColumnError as exc:
        print(f"MissingColumnError: {exc}", file=sys.stderr)
        return 2
    fig, ax = new_axes("t J", "energy gain (J)")
    ax.plot(cols["t"], cols["delta_e"], color="tab:blue")
    # right axis shows the same curve as a density; the site count is the
    # ratio of the two columns
    k = int(np.argmax(np.abs(cols["delta_e_per_site"])))
    per_site = cols["delta_e_per_site"][k]
    n_sites = cols["delta_e"][k] / per_site if per_site else 1.0
    twin = ax.twinx()
    twin.set_ylim(tuple(v / n_sites for v in ax.get_ylim()))
    twin.set_ylabel("per site (J)")
    save(fig, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())

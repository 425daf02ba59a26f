#!/usr/bin/env python3
"""Long-time edge correlation after a chemical-potential quench: mode
overlap formula (line) against the exact dephased value (markers).

Takes one scan CSV (columns mu_final, g_infinity, longtime_correlation).
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
    parser.add_argument("csv", metavar="CSV", help="quench scan file")
    parser.add_argument("-o", "--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        cols = read_columns(
            args.csv, ("mu_final", "g_infinity", "longtime_correlation"))
    except MissingColumnError as exc:
        print(f"MissingColumnError: {exc}", file=sys.stderr)
        return 2
    fig, ax = new_axes("final chemical potential (J)", "long-time correlation")
    ax.plot(cols["mu_final"], cols["g_infinity"], label="overlap formula")
    ax.plot(cols["mu_final"], cols["longtime_correlation"], linestyle="none",
            marker="o", markersize=3, fillstyle="none", label="exact dephasing")
    ax.set_ylim(-0.05, 1.05)
    ax.legend()
    save(fig, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())

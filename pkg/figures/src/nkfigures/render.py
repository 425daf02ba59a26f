"""Shared rendering defaults: deterministic single-panel PNGs."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be fixed first)

# Identical inputs must give byte-identical files, so strip the one PNG
# metadata entry that varies with the matplotlib install.
_METADATA = {"Software": None}


def new_axes(xlabel: str, ylabel: str):
    fig, ax = plt.subplots(figsize=(4.8, 3.2), dpi=150)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3, linewidth=0.5)
    return fig, ax


def save(fig, out_path: str) -> None:
    fig.tight_layout()
    fig.savefig(out_path, metadata=_METADATA)
    plt.close(fig)

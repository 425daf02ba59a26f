"""Rendering helpers for the standalone figure scripts.

The scripts consume simulation CSV files by path and never import the
simulation package; everything they share lives here.
"""

from nkfigures.io import MissingColumnError, read_columns

__version__ = "0.1.0"

__all__ = ["MissingColumnError", "read_columns", "__version__"]

"""Figure rendering for tetrafill campaign CSVs."""

from .render import FIGURE_KINDS, FigureSpec, SchemaMismatch, base_marker_coordinates, render

__version__ = "0.1.0"

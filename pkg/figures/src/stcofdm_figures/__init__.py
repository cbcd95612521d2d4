"""Figure rendering for stcofdm simulation CSV outputs."""

from .render import FIGURE_KINDS, FigureJob, RenderError, render

__all__ = ["FIGURE_KINDS", "FigureJob", "RenderError", "render"]

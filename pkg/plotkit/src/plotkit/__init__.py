"""Post-processing figures for active flux run directories."""

from .io import PlotError, read_interleaved, read_report, read_table
from .jobs import KINDS, PlotJob, plot

__all__ = ["KINDS", "PlotError", "PlotJob", "plot", "read_interleaved",
           "read_report", "read_table"]

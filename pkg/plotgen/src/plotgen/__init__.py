"""plotgen: figures from entcap sweep CSVs and report files.

These scripts only read and draw; no physics is recomputed here.
"""

from .report import load_report_rows, plot_report
from .sweep import SweepTable, load_sweep_table, plot_sweep

__version__ = "0.1.0"

__all__ = [
    "SweepTable",
    "load_report_rows",
    "load_sweep_table",
    "plot_report",
    "plot_sweep",
]

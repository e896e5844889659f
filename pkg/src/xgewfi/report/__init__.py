from .json_report import SCHEMA_VERSION, json_report, load_schema
from .latex import explain_table, latex_tables, results_table
from .svg import (
    HistogramSpec,
    boxplot_svg,
    combined_chart_svg,
    histogram_counts,
    histogram_svg,
)

__all__ = [
    "SCHEMA_VERSION",
    "HistogramSpec",
    "boxplot_svg",
    "combined_chart_svg",
    "explain_table",
    "histogram_counts",
    "histogram_svg",
    "json_report",
    "latex_tables",
    "load_schema",
    "results_table",
]

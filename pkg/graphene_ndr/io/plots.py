"""Static SVG line plots with a fixed 800x600 canvas."""

from typing import Mapping, Optional

import matplotlib
import numpy as np
from matplotlib.axes import Axes
from matplotlib.figure import Figure

from graphene_ndr.core.analysis import NdrReport

matplotlib.rcParams["svg.hashsalt"] = "graphene-ndr"

CANVAS_PX = (800, 600)
_DPI = 72


def _canvas() -> tuple[Figure, Axes]:
    figure = Figure(figsize=(CANVAS_PX[0] / _DPI, CANVAS_PX[1] / _DPI), dpi=_DPI)
    return figure, figure.add_subplot()


def iv_plot(V: np.ndarray, I: np.ndarray, report: Optional[NdrReport] = None) -> Figure:
    """I-V curve, with the NDR peak and valley marked when a report is given."""
    figure, axes = _canvas()
    axes.plot(V, I, color="black", linewidth=1.0)
    if report is not None:
        axes.plot([report.V_peak], [report.I_peak], "o", color="tab:red", label="peak")
        axes.plot([report.V_valley], [report.I_valley], "s", color="tab:blue", label="valley")
        axes.legend()
    axes.set_xlabel("V (mV)")
    axes.set_ylabel("I ((2e/h) meV per mode)")
    return figure


def family_plot(x: np.ndarray, curves: Mapping[str, np.ndarray], xlabel: str, ylabel: str) -> Figure:
    figure, axes = _canvas()
    for label, y in curves.items():
        axes.plot(x, y, linewidth=1.0, label=label)
    axes.set_xlabel(xlabel)
    axes.set_ylabel(ylabel)
    axes.legend()
    return figure

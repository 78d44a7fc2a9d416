"""Figures written next to the CLI tables.

Figures are drawn on an Agg canvas without touching pyplot state, so they can
be produced from any thread and never open a window.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0
FIG_WIDTH = 5.0
RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "lines.linewidth": 1.2,
    "lines.markersize": 3,
}
# PNG metadata without a timestamp keeps files byte-identical across runs
METADATA = {"Software": None}


def line_figure(path: str | Path, x: Sequence[float], series: Mapping[str, Sequence[float]],
                xlabel: str, ylabel: str, title: str | None = None, logx: bool = False,
                logy: bool = False, markers: Mapping[str, str] | None = None) -> Path:
    """Plot each named series against ``x`` and save to ``path`` (PNG)."""
    import matplotlib

    path = Path(path)
    with matplotlib.rc_context(RC):
        fig = Figure(figsize=(FIG_WIDTH, FIG_WIDTH * GOLDEN), dpi=150)
        FigureCanvasAgg(fig)
        ax = fig.add_subplot(1, 1, 1)
        for label, y in series.items():
            fmt = (markers or {}).get(label, "-")
            ax.plot(np.asarray(x, dtype=float), np.asarray(y, dtype=float), fmt, label=label)
        if logx:
            ax.set_xscale("log")
        if logy:
            ax.set_yscale("log")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        if len(series) > 1:
            ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path, format="png", metadata=METADATA)
    return path


def figure_path(table_path: str | Path) -> Path:
    """``out/table.csv`` -> ``out/table.png``."""
    return Path(table_path).with_suffix(".png")

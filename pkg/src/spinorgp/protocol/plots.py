"""
Deterministic SVG line plots.

Uses the Agg backend with a fixed hash salt and no date metadata so the same
data always produces the same bytes.
"""

from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from loguru import logger  # noqa: E402

plt.rcParams["svg.hashsalt"] = "spinorgp"
plt.rcParams["svg.fonttype"] = "none"


def line_plot(
    path: Union[str, Path],
    x: Sequence[float],
    series: Mapping[str, Sequence[float]],
    xlabel: str,
    ylabel: str,
    title: Optional[str] = None,
    logx: bool = False,
    logy: bool = False,
    markers: bool = False,
) -> Path:
    """
    Draw each named series against ``x`` and save as SVG.

    Non-positive values are dropped from log axes.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    x = np.asarray(x, dtype=float)

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for label, values in series.items():
        y = np.asarray(values, dtype=float)
        keep = np.isfinite(y)
        if logx:
            keep &= x > 0
        if logy:
            keep &= y > 0
        ax.plot(x[keep], y[keep], marker="o" if markers else None, linewidth=1.2, label=label)

    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(series) > 1:
        ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()

    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    logger.debug(f"Plot written to: {path}")
    return path

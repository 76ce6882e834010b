"""Static figures: neck positions in the periodic strip and glue scans."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .config import Configuration  # noqa: E402

MARKERS = ("o", "s", "D")
# 600 x 200*periods CSS pixels (96 per inch)
PX_PER_INCH = 96


@dataclass(frozen=True)
class PlotSpec:
    periods: int = 1
    markers: Sequence[str] = MARKERS

    def __post_init__(self):
        if self.periods < 1:
            raise ValueError("periods must be at least 1")

    def marker(self, l: int) -> str:
        """Marker for 1-based layer ``l``."""
        return self.markers[(l - 1) % len(self.markers)]


def strip_points(config: Configuration, periods: int = 1) -> list[np.ndarray]:
    """Per layer, the points ln q + 2 pi i m for m = 0..periods-1 (principal branch)."""
    out = []
    for q in config.nodes:
        w = np.log(q)
        # principal value with Im in (-pi, pi]
        w = np.where(np.isclose(w.imag, -np.pi, atol=0, rtol=1e-15), w + 2j * np.pi, w)
        out.append(np.concatenate([w + 2j * np.pi * m for m in range(periods)]))
    return out


def plot_strip(config: Configuration, path, style: PlotSpec | None = None):
    style = style or PlotSpec()
    fig, ax = plt.subplots(figsize=(600 / PX_PER_INCH, 200 * style.periods / PX_PER_INCH), dpi=PX_PER_INCH)
    pts = strip_points(config, style.periods)
    for l, w in enumerate(pts, start=1):
        ax.plot(w.real, w.imag, linestyle="none", marker=style.marker(l), markersize=6, label=f"layer {l}")
    for m in range(style.periods + 1):
        ax.axhline(-np.pi + 2 * np.pi * m, color="0.6", linewidth=0.8)
    ax.set_xlabel(r"$\ln|q|$")
    ax.set_ylabel(r"$\arg q$")
    ax.legend(loc="upper right", fontsize="small")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    return pts


def plot_glue_scan(scan, path) -> None:
    fig, ax = plt.subplots(figsize=(6, 3), dpi=100)
    ax.plot(scan.phi, scan.im_g2, color="k", linewidth=1)
    for k in range(2 * scan.mu + 1):
        ax.axvline(k * np.pi / scan.mu, color="0.8", linewidth=0.6)
    ax.plot(scan.zeros, np.zeros_like(scan.zeros), "o", color="C3", markersize=4)
    ax.set_xlabel(r"$\phi$")
    ax.set_ylabel(r"Im $G_2$")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_history(rows, path) -> None:
    rows = np.asarray(rows, dtype=float)
    fig, ax = plt.subplots(figsize=(5, 3), dpi=100)
    ax.semilogy(rows[:, 0], np.maximum(rows[:, 1], 1e-300), marker=".")
    ax.set_xlabel("iteration")
    ax.set_ylabel(r"max $|F|$")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)

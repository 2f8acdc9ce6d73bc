"""Figure rendering for the experiment reports (headless Agg backend)."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "algebra_figure",
    "born_sweep_figure",
    "entropy_drift_figure",
    "observable_figure",
    "wavefunction_figure",
]

_RC = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 140,
    "axes.grid": True,
    "grid.linestyle": "--",
    "grid.linewidth": 0.5,
    "font.size": 9,
    "legend.fontsize": 8,
    "savefig.bbox": "tight",
}

_RESIDUAL_FLOOR = 1e-18  # keeps exact zeros visible on log axes


def _new_axes():
    plt.rcParams.update(_RC)
    return plt.subplots()


def _save(fig, path: Path):
    fig.savefig(path)
    plt.close(fig)


def born_sweep_figure(rows: list[dict], path: Path):
    fig, ax = _new_axes()
    for f in sorted({row["f"] for row in rows}):
        sub = [r for r in rows if r["f"] == f]
        n = [r["n_replicas"] for r in sub]
        ax.loglog(n, [max(r["distance_sq"], _RESIDUAL_FLOOR) for r in sub],
                  "o-", label=f"window at f={f:g}")
        ax.loglog(n, [min(r["hoeffding_bound"], 2.0) for r in sub],
                  ":", color="gray")
    ax.set_xlabel("replicas N")
    ax.set_ylabel("relative filter effect (squared distance)")
    ax.set_title("Frequency-filter effect vs ensemble size (dotted: Hoeffding bound)")
    ax.legend()
    _save(fig, path)


def entropy_drift_figure(rows: list[dict], path: Path):
    fig, ax = _new_axes()
    steps = [r["step"] for r in rows]
    ax.semilogy(steps, [max(abs(r["entropy_drift"]), _RESIDUAL_FLOOR) for r in rows],
                label="|S(t) - S(0)|")
    ax.semilogy(steps, [max(r["max_segment_drift"], _RESIDUAL_FLOOR) for r in rows],
                label="max segment-length drift")
    ax.set_xlabel("step")
    ax.set_ylabel("drift")
    gamma = rows[-1]["gamma"] if rows else 0.0
    ax.set_title(f"Array-entropy drift under evolution (gamma={gamma:g})")
    ax.legend()
    _save(fig, path)


def observable_figure(rows: list[dict], path: Path):
    fig, ax = _new_axes()
    idx = np.arange(len(rows))
    width = 0.4
    ax.bar(idx - width / 2, [r["prob_apparatus"] for r in rows], width,
           label="apparatus route")
    ax.bar(idx + width / 2, [r["prob_projection"] for r in rows], width,
           label="projection route")
    ax.set_xlabel("detector outcome n")
    ax.set_ylabel("Pr(n)")
    ax.set_title("Complex-detector statistics, both evaluation routes")
    ax.legend()
    _save(fig, path)


def algebra_figure(rows: list[dict], path: Path):
    fig, ax = _new_axes()
    laws = [r["law"] for r in rows]
    residuals = [max(r["max_amplitude_residual"], _RESIDUAL_FLOOR) for r in rows]
    ax.barh(laws, residuals)
    ax.set_xscale("log")
    ax.set_xlabel("max amplitude residual")
    ax.set_title("Setup-algebra law residuals over random setups")
    _save(fig, path)


def wavefunction_figure(rows: list[dict], detector_site: int, path: Path):
    fig, ax = _new_axes()
    sites = [r["site"] for r in rows]
    ax.bar(sites, [r["weighted_mass"] for r in rows], color="steelblue")
    ax.axvline(detector_site, color="crimson", linestyle="--", linewidth=1.0,
               label=f"detector at site {detector_site}")
    ax.set_xlabel("site")
    ax.set_ylabel("weighted mass w|psi|^2")
    ax.set_title("Wave function at detector time")
    ax.legend()
    _save(fig, path)

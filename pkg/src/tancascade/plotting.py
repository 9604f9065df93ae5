"""Matplotlib figures written by the ``report`` subcommand."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .attractor import CantorSystem  # noqa: E402
from .cascade import CascadeTable  # noqa: E402
from .cycles import find_attracting_cycle  # noqa: E402
from .render import Raster  # noqa: E402


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_orbit_diagram(t: np.ndarray, orbit_plus: np.ndarray, orbit_minus: np.ndarray,
                       table: CascadeTable | None, path) -> None:
    fig, ax = plt.subplots(figsize=(9, 5))
    tt = np.broadcast_to(t, orbit_plus.shape)
    ax.plot(tt.ravel(), orbit_plus.ravel(), ",", color="tab:red", alpha=0.6)
    ax.plot(tt.ravel(), orbit_minus.ravel(), ",", color="tab:blue", alpha=0.6)
    if table is not None:
        for a in table.alphas:
            ax.axvline(a.t, color="0.6", lw=0.6, ls="--")
        for b in table.betas:
            ax.axvline(b.t, color="0.3", lw=0.6)
    ax.axhline(math.pi / 2, color="0.85", lw=0.5)
    ax.axhline(-math.pi / 2, color="0.85", lw=0.5)
    ax.set_xlim(t.min(), t.max())
    ax.set_ylim(-math.pi, math.pi)
    ax.set_xlabel("t")
    ax.set_ylabel("f_t iterates of +t (red) and -t (blue)")
    ax.set_title("Orbit diagram of the tangent family")
    _finish(fig, path)


def multiplier_curve(t_values: np.ndarray) -> np.ndarray:
    out = np.full(t_values.shape, np.nan)
    for i, t in enumerate(t_values):
        c = find_attracting_cycle(float(t), max_period_T=64, transient=3000)
        if c is not None:
            out[i] = c.multiplier
    return out


def plot_multipliers(table: CascadeTable, path, points: int = 240) -> None:
    lo = math.pi / 2 + 1e-3
    hi = table.beta(min(3, table.depth)) if table.depth else 3.09
    t = np.linspace(lo, hi, points)
    mu = multiplier_curve(t)
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(t, mu, ".", ms=2, color="k")
    ax.axhline(1, color="0.7", lw=0.6)
    ax.axhline(-1, color="0.7", lw=0.6)
    for b in table.betas:
        ax.axvline(b.t, color="tab:blue", lw=0.6)
    for a in table.alphas:
        ax.axvline(a.t, color="tab:red", lw=0.6, ls="--")
    ax.set_xlim(lo, hi)
    ax.set_xlabel("t")
    ax.set_ylabel("multiplier of the attracting cycle")
    _finish(fig, path)


def plot_parameter_plane(raster: Raster, region: tuple, path) -> None:
    fig, ax = plt.subplots(figsize=(6, 6))
    re0, re1, im0, im1 = region
    ax.imshow(raster.pixels, extent=(re0, re1, im0, im1), interpolation="nearest")
    ax.set_xlabel("Re t")
    ax.set_ylabel("Im t")
    ax.set_title("Period of the cycle attracting t")
    _finish(fig, path)


def plot_cantor(system: CantorSystem, path) -> None:
    fig, ax = plt.subplots(figsize=(9, 0.6 * (system.depth + 2) + 1))
    for lev in system.levels:
        y = -lev.n
        for b in lev.bridges_plus + lev.bridges_minus:
            ax.plot([b.left, b.right], [y, y], color="k", lw=3, solid_capstyle="butt")
    ax.axvline(math.pi / 2, color="tab:red", lw=0.5)
    ax.axvline(-math.pi / 2, color="tab:red", lw=0.5)
    ax.set_yticks([-lev.n for lev in system.levels])
    ax.set_yticklabels([f"level {lev.n}" for lev in system.levels])
    ax.set_xlabel("x")
    ax.set_title(f"Bridges at t* = {system.t_star:.12f}")
    _finish(fig, path)

"""Figures for the report commands.  Everything renders off-screen to PNG."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "figure.figsize": (5.0, 3.6),
    "figure.dpi": 120,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
    "legend.fontsize": 8,
}


def _save(fig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def census_figure(rows, path) -> Path:
    """Medium-cut count against n, one line per (family, k)."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        groups: dict = {}
        for r in rows:
            groups.setdefault((r.family, r.k), []).append((r.n, r.count))
        for (fam, k), pts in sorted(groups.items()):
            pts.sort()
            ax.plot([p[0] for p in pts], [p[1] for p in pts], "o-", label=f"{fam} k={k}")
        ax.set_xlabel("n")
        ax.set_ylabel("medium 2-cuts")
        ax.legend()
        return _save(fig, path)


def F_figure(delta: float, path, resolution: int = 101) -> Path:
    """Heat map of F(θ, t) on [0,1]×[1,2]."""
    from .analysis import F_value

    th = np.linspace(0, 1, resolution)
    t = np.linspace(1, 2, resolution)
    TH, T = np.meshgrid(th, t, indexing="xy")
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        im = ax.pcolormesh(TH, T, F_value(TH, T, delta), shading="auto", cmap="viridis")
        fig.colorbar(im, ax=ax, label="F")
        ax.set_xlabel(r"$\theta$")
        ax.set_ylabel("t")
        ax.set_title(f"delta = {delta:g}")
        return _save(fig, path)


def f_bound_figure(p: float, deltas: Sequence[float], path, js: Sequence[float] = (1, 5, 9)
                   ) -> Path:
    """f(j, s, p) as a function of s."""
    from .analysis import _closed_form

    s = np.linspace(0, 4 * p, 200)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for d in deltas:
            for j in js:
                ax.plot(s, _closed_form(float(j), s, float(p), d), label=f"j={j:g} delta={d:g}")
        ax.set_xlabel("s")
        ax.set_ylabel("f(j, s, p)")
        ax.legend(ncol=2)
        return _save(fig, path)


def survival_figure(taus: Sequence[int], freqs: Sequence[float], errs: Sequence[float],
                    exact: Sequence[float], path) -> Path:
    """Empirical survival frequency against the exact value per stopping size τ."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.errorbar(taus, freqs, yerr=3 * np.asarray(errs), fmt="o", label="empirical ±3σ")
        ax.plot(taus, exact, "x--", label="exact")
        ax.set_xlabel(r"$\tau$")
        ax.set_ylabel("survival probability")
        ax.legend()
        return _save(fig, path)


def r_bound_figure(results, path) -> Path:
    """Mean R_i with 3σ bars next to the bound f(i-β, s, n-β)."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        i = [r.i for r in results]
        ax.errorbar(i, [r.mean for r in results], yerr=[3 * r.stderr for r in results],
                    fmt="o", label="mean R_i")
        ax.plot(i, [r.bound for r in results], "s--", label="bound")
        ax.set_xlabel("i")
        ax.set_ylabel("R_i")
        ax.legend()
        return _save(fig, path)


def cut_weight_figure(weights: Sequence[int], path) -> Path:
    """Histogram of the weights of enumerated cuts."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        w = np.asarray(weights)
        if len(w):
            bins = np.arange(w.min(), w.max() + 2) - 0.5
            ax.hist(w, bins=bins)
        ax.set_xlabel("cut weight")
        ax.set_ylabel("cuts")
        return _save(fig, path)

"""Matplotlib renderings of sweep results (column chart of savings, LCOE lines)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# Fixed metadata keeps PNG bytes stable across runs.
_PNG_META = {"Software": None}


def savings_figure(result, title="Monthly savings vs grid electricity"):
    labels = result.labels
    years = sorted({r.install_year for r in result.rows})
    by_key = {(r.label, r.install_year): r.monthly_savings_usd for r in result.rows}
    x = np.arange(len(years))
    width = 0.8 / len(labels)
    fig, ax = plt.subplots(figsize=(min(11.0, max(6.0, 0.25 * len(years))), 4.0))
    for i, label in enumerate(labels):
        ax.bar(x + (i - (len(labels) - 1) / 2) * width, [by_key[(label, y)] for y in years], width, label=label)
    ax.axhline(0, color="k", lw=0.6)
    step = max(1, len(years) // 8)
    ax.set_xticks(x[::step])
    ax.set_xticklabels([str(y) for y in years[::step]])
    ax.set_xlabel("install year")
    ax.set_ylabel("savings (2020 $/month)")
    ax.set_title(title)
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    return fig


def lcoe_figure(result, title="Levelized cost of on-site electricity"):
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    for label in result.labels:
        rows = [r for r in result.rows if r.label == label and r.lcoe_usd_per_kwh is not None]
        if rows:
            ax.plot([r.install_year for r in rows], [100 * r.lcoe_usd_per_kwh for r in rows], marker=".", label=label)
    ax.set_xlabel("install year")
    ax.set_ylabel("LCOE (2020 cents/kWh)")
    ax.set_title(title)
    ax.legend(fontsize=7)
    fig.tight_layout()
    return fig


def render_all(result, out_dir) -> list[Path]:
    out_dir = Path(out_dir)
    paths = []
    for name, make in (("savings.png", savings_figure), ("lcoe.png", lcoe_figure)):
        fig = make(result)
        path = out_dir / name
        try:
            fig.savefig(path, dpi=120, metadata=_PNG_META)
        finally:
            plt.close(fig)
        paths.append(path)
    return paths

"""Hasse-diagram rendering with matplotlib.

Layout is layered by height with one barycenter pass to reduce edge
crossings; output is a PNG per lattice.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .core import FiniteLattice

__all__ = ["hasse_positions", "render_hasse"]


def hasse_positions(lat: FiniteLattice) -> dict[int, tuple[float, float]]:
    """Element -> (x, y) with y the height and x spread per layer."""
    height = [0] * lat.n
    for a, b in sorted(lat.covers):
        height[b] = max(height[b], height[a] + 1)
    layers: dict[int, list[int]] = {}
    for x in range(lat.n):
        layers.setdefault(height[x], []).append(x)
    pos = {}
    for h in sorted(layers):
        row = layers[h]
        if h:
            # barycenter of lower neighbours, tie-broken by index
            lower = {a: pos[a][0] for a in range(lat.n) if height[a] < h}

            def bary(x):
                preds = [a for a, b in lat.covers if b == x and a in lower]
                if not preds:
                    return 0.0
                return sum(lower[a] for a in preds) / len(preds)

            row = sorted(row, key=lambda x: (bary(x), x))
        width = len(row)
        for i, x in enumerate(row):
            pos[x] = (i - (width - 1) / 2.0, float(h))
    return pos


def render_hasse(lat: FiniteLattice, path: str, title: str = "") -> None:
    pos = hasse_positions(lat)
    fig, ax = plt.subplots(
        figsize=(max(3.0, lat.n ** 0.5), max(3.0, lat.n ** 0.5))
    )
    for a, b in sorted(lat.covers):
        xa, ya = pos[a]
        xb, yb = pos[b]
        ax.plot([xa, xb], [ya, yb], color="0.4", lw=1.0, zorder=1)
    xs = [pos[x][0] for x in range(lat.n)]
    ys = [pos[x][1] for x in range(lat.n)]
    ax.scatter(xs, ys, s=160, color="white", edgecolors="black", zorder=2)
    for x in range(lat.n):
        label = lat.labels[x] if lat.labels else str(x)
        ax.annotate(
            str(label), pos[x], ha="center", va="center", fontsize=7, zorder=3
        )
    if title:
        ax.set_title(title)
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

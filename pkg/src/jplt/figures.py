"""Rate-curve rendering.  matplotlib is imported lazily so the plain CSV
path never pays for it."""

from __future__ import annotations

from typing import Sequence


def render_rate_curves(rows: Sequence[dict], path: str, title: str | None = None) -> None:
    """Plot the download-rate columns of a rate table against d and save
    the figure to path (format follows the extension)."""
    if not rows:
        raise ValueError("nothing to plot: empty rate table")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    d = [row["d"] for row in rows]
    jplt = [row["jplt_rate_float"] for row in rows]
    pir = [row["pir_rate_float"] for row in rows]
    plc = [row["plc_rate_float"] for row in rows]
    k = rows[0]["k"]

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.plot(d, jplt, marker="o", markersize=3, label="joint protocol (benchmark)")
    ax.plot(d, pir, marker="s", markersize=3, label="download everything")
    ax.plot(d, plc, marker="^", markersize=3, label="one combination at a time")
    ax.set_xlabel("demand support size d")
    ax.set_ylabel("download rate")
    ax.set_title(title or f"download rates, k = {k}")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

"""PNG figures via matplotlib (Agg backend, no timestamps in the file)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_STYLE = {
    "figure.figsize": (6.0, 3.8),
    "font.size": 9,
    "axes.linewidth": 0.6,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "legend.frameon": False,
}


def line_figure(path, series, title="", xlabel="", ylabel="", markers=(), logx=False, logy=False):
    """Write a PNG with one line per (label, xs, ys) entry of ``series``."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for label, xs, ys in series:
            xs, ys = np.asarray(xs, float), np.asarray(ys, float)
            ok = np.isfinite(xs) & np.isfinite(ys)
            if logy:
                ok &= ys > 0
            ax.plot(xs[ok], ys[ok], lw=1.3, label=label)
        for m in markers:
            ax.axvline(m, color="0.6", ls="--", lw=0.8)
        if logx:
            ax.set_xscale("log")
        if logy:
            ax.set_yscale("log")
        ax.set_title(title)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if len(series) > 1:
            ax.legend()
        fig.tight_layout()
        fig.savefig(path, dpi=110, metadata={"Software": None})
        plt.close(fig)
    return path

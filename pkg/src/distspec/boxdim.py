"""Box-counting dimension of finite point sets."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .spectrum import DecayFit, WindowError, fit_decay


def _as_points(points) -> np.ndarray:
    pts = np.asarray(getattr(points, "positions", getattr(points, "values", points)), dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if pts.size == 0:
        raise ValueError("need at least one point")
    return pts


# points within this many cell widths below a cell boundary count as on it;
# self-similar sets put many points exactly on boundaries, where rounding
# of x / eps would otherwise pick a side at random
_SNAP = 1e-9


def box_count(points, epsilon: float) -> int:
    """Number of grid cells floor(x / epsilon) (per axis) hit by the points."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    cells = np.floor(_as_points(points) / epsilon + _SNAP)
    return int(np.unique(cells, axis=0).shape[0])


@dataclass(frozen=True)
class BoxCountCurve:
    epsilon: np.ndarray
    count: np.ndarray
    fit: DecayFit

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["epsilon", "count"])
        for e, c in zip(self.epsilon, self.count):
            w.writerow([f"{e:.17g}", int(c)])
        return buf.getvalue()


def box_dim_estimate(points, eps_grid) -> tuple[float, BoxCountCurve]:
    """Least-squares slope of log N(eps) against log(1/eps).

    The grid is sorted into decreasing eps and must hold at least 4 values.
    """
    eps = np.sort(np.asarray(eps_grid, dtype=np.float64))[::-1]
    if eps.size < 4 or np.any(eps <= 0) or np.unique(eps).size != eps.size:
        raise WindowError("need at least 4 distinct positive epsilons")
    pts = _as_points(points)
    counts = np.array([box_count(pts, e) for e in eps])
    # N(eps) ~ eps^(-dim): as a "decay" in r = 1/eps the exponent is -dim
    fit = fit_decay(np.column_stack([1.0 / eps, counts]))
    dim = max(0.0, -fit.exponent)
    return float(dim), BoxCountCurve(eps, counts, fit)


def min_positive_gap(values) -> float:
    """Smallest positive gap between sorted 1-D values (inf if none)."""
    v = np.unique(np.asarray(values, dtype=float).reshape(-1))
    if v.size < 2:
        return float("inf")
    return float(np.diff(v).min())


def resolution_grid(values, eps_max: float, n: int = 6) -> np.ndarray:
    """Geometric eps grid from eps_max down to 2 * the sample resolution.

    Below twice the smallest positive gap the counts saturate at the number
    of points, which would drag the fitted dimension towards 0.
    """
    floor = 2.0 * min_positive_gap(values)
    lo = max(floor, eps_max * 2.0 ** -(n - 1)) if np.isfinite(floor) else eps_max * 2.0 ** -(n - 1)
    if lo >= eps_max:
        raise WindowError("sample resolution leaves no room for an eps grid")
    return np.geomspace(eps_max, lo, n)

"""Closed-form dimension thresholds for distance sets.

Everything here is exact double-precision evaluation of explicit formulas:
the decay exponent beta(u) and its specialisations, the proved threshold
T_d(theta), the conjectured threshold, and the lower bound.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BetaInputs:
    u: float
    theta1: float
    theta2: float
    v: float
    d: int

    def __post_init__(self):
        if self.u < 0 or self.v < 0:
            raise ValueError("u and v must be nonnegative")
        for t in (self.theta1, self.theta2):
            if not 0.0 <= t <= 1.0:
                raise ValueError("theta1, theta2 must lie in [0, 1]")
        if self.d < 1:
            raise ValueError("d must be a positive integer")

    @property
    def a(self) -> float:
        # v / (2 theta2) is read as +infinity when theta2 = 0
        third = math.inf if self.theta2 == 0 else self.v / (2.0 * self.theta2)
        return min(self.d / 2.0, self.v, third)


def beta_thm(inp: BetaInputs) -> float:
    """Decay exponent beta(u); for u > d the convention beta = a applies."""
    u, t1, d, a = inp.u, inp.theta1, inp.d, inp.a
    if u > d:
        return a
    if u < d * t1:
        return (u + 2.0 * t1 * a - d * t1) / 2.0
    return u * a / d


def beta_cor_half(u: float, v: float, d: int) -> float:
    """beta at theta1 = theta2 = 1/2 when both spectra are at most d/2."""
    if u > d / 2.0 or v > d / 2.0:
        raise ValueError("needs u, v <= d/2")
    return (u + v) / 2.0 - d / 4.0


def beta_theta_zero(s: float, theta: float, d: int) -> float:
    if theta == 0:
        return s / 2.0
    return (s - d * theta) / 2.0


def beta_cormain(s: float, theta: float, d: int) -> float:
    """Best exponent from one measure with spectrum s at theta (max/min form)."""
    if theta == 0:
        return s / 2.0
    if theta < 0.5:
        inner = min((s * (1.0 + 2.0 * theta) - d * theta) / 2.0, s / 2.0, s * s / d)
        return max((s - d * theta) / 2.0, inner)
    return min(s - d * theta / 2.0, s / 2.0)


def beta_cormain_piecewise(s: float, theta: float, d: int) -> float:
    """Equivalent piecewise form, valid for 0 < theta < 1/2."""
    if not 0.0 < theta < 0.5:
        raise ValueError("piecewise form needs 0 < theta < 1/2")
    if s <= d * theta:
        return (s * (1.0 + 2.0 * theta) - d * theta) / 2.0
    if s <= d / 2.0:
        return max((s - d * theta) / 2.0, s * s / d)
    return s / 2.0


def beta_gamma(u: float, theta1: float, gamma: float, d: int) -> float:
    return (u + 2.0 * theta1 * gamma - d * theta1) / 2.0


def transition_points(d: int) -> tuple[float, float, float]:
    """Abscissae where T_d changes branch: (sqrt d - 2)/d, 1/sqrt d, 1/2."""
    r = math.sqrt(d)
    return (r - 2.0) / d, 1.0 / r, 0.5


def t_proved(theta: float, d: int) -> float:
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    t1, t2, _ = transition_points(d)
    if theta < t1:
        return 2.0 + d * theta
    if theta < t2:
        return math.sqrt(d)
    if theta < 0.5:
        return (2.0 + d * theta) / (1.0 + 2.0 * theta)
    return 1.0 + d * theta / 2.0


def t_conj(theta: float, d: int) -> float:
    return 1.0 + (d / 2.0 - 1.0) * theta


def t_lower(theta: float, d: int) -> float:
    return max(d * theta / 2.0, 0.5)


@dataclass(frozen=True)
class ThresholdCurvePoint:
    theta: float
    d: int
    t_proved: float
    t_conj: float
    lower: float

    @property
    def in_hypothesis(self) -> bool:
        """The proved threshold is only claimed for d >= 4."""
        return self.d >= 4

    @property
    def ordered(self) -> bool:
        return self.lower <= self.t_conj <= self.t_proved


def emit_threshold_table(d: int, theta_grid=512) -> list[ThresholdCurvePoint]:
    """Tabulate the three curves on [0, 1].

    ``theta_grid`` is either a point count (uniform grid) or explicit values;
    the branch transitions inside [0, 1] are always added as exact points.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    if np.isscalar(theta_grid):
        n = int(theta_grid)
        if n < 2:
            raise ValueError("grid needs at least 2 points")
        grid = np.linspace(0.0, 1.0, n)
    else:
        grid = np.asarray(theta_grid, dtype=float)
    extra = [t for t in transition_points(d) if 0.0 <= t <= 1.0]
    grid = np.unique(np.concatenate([grid, extra]))
    if grid[0] < 0 or grid[-1] > 1:
        raise ValueError("theta grid must lie in [0, 1]")
    return [
        ThresholdCurvePoint(float(t), d, t_proved(float(t), d), t_conj(float(t), d), t_lower(float(t), d))
        for t in grid
    ]


def table_to_csv(points) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", "t_proved", "t_conj", "t_lower"])
    for p in points:
        w.writerow([f"{p.theta:.17g}", f"{p.t_proved:.17g}", f"{p.t_conj:.17g}", f"{p.lower:.17g}"])
    return buf.getvalue()

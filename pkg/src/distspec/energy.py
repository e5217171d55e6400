"""Riesz s-energies in real space and (s, theta)-energies in frequency space.

Real side:  I_s(mu) = sum_{i != j} w_i w_j |x_i - x_j|^(-s)
Frequency side (theta in (0, 1]):

    J_{s,theta}(mu) = ( int |mu^(xi)|^(2/theta) |xi|^(s/theta - d) dxi )^theta

truncated to an annulus r_min <= |xi| <= r_max and evaluated with the
midpoint rule in r plus Monte Carlo directions.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from ._parallel import run_blocks
from .measure import DiscreteMeasure, _rng
from .spectrum import fit_decay
from .transform import dyadic_shell_sweep, ft_batch, uniform_directions

_PAIR_BLOCK = 1 << 20


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere S^{d-1} (2 for d = 1)."""
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


@dataclass(frozen=True)
class EnergyReport:
    s: float
    theta: float
    value: float
    infinite: bool
    method: str  # "real_space" or "frequency_shells"
    r_min: float | None = None
    r_max: float | None = None
    tail_slope: float | None = None

    def __post_init__(self):
        if not (0.0 <= self.theta <= 1.0):
            raise ValueError("theta must lie in [0, 1]")
        if not self.infinite and not self.value >= 0:
            raise ValueError("energy must be nonnegative")
        if self.r_min is not None and not self.r_min < self.r_max:
            raise ValueError("need r_min < r_max")

    def to_dict(self) -> dict:
        out = asdict(self)
        if self.infinite:
            out["value"] = None
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def riesz_energy(m: DiscreteMeasure, s: float) -> EnergyReport:
    """Off-diagonal Riesz s-energy; any coincident pair of atoms makes it infinite."""
    if not s > 0:
        raise ValueError("s must be positive")
    pos, w = m.positions, m.weights
    n = m.n_atoms
    rows = max(1, _PAIR_BLOCK // n)
    starts = list(range(0, n, rows))
    partial = np.zeros(len(starts))
    hit_zero = np.zeros(len(starts), dtype=bool)

    def work(k):
        a = starts[k]
        b = min(a + rows, n)
        diff = pos[a:b, None, :] - pos[None, :, :]
        d2 = (diff * diff).sum(axis=2)
        idx = np.arange(a, b)
        d2[idx - a, idx] = np.inf  # drop the diagonal
        if np.any(d2 == 0):
            hit_zero[k] = True
            return
        partial[k] = (w[a:b, None] * w[None, :] * d2 ** (-s / 2.0)).sum()

    run_blocks(work, range(len(starts)))
    if hit_zero.any():
        return EnergyReport(s, 1.0, math.inf, True, "real_space")
    return EnergyReport(float(s), 1.0, float(partial.sum()), False, "real_space")


def _radial_grid(r_min: float, r_max: float, per_octave: int):
    if not (0 < r_min < r_max):
        raise ValueError("need 0 < r_min < r_max")
    if per_octave < 1:
        raise ValueError("need at least one shell per octave")
    n = max(1, int(math.ceil(per_octave * math.log2(r_max / r_min) - 1e-9)))
    edges = np.geomspace(r_min, r_max, n + 1)
    return edges, 0.5 * (edges[:-1] + edges[1:]), np.diff(edges)


def _shell_means(m: DiscreteMeasure, mids, p, n_dirs, seed, debias):
    """Direction-averaged |mu^(r w)|^p per shell; shell k draws from seed ^ k."""
    d = m.ambient_dim
    means = np.empty(mids.size)
    c = m.collision_mass()
    for k, r in enumerate(mids):
        dirs = uniform_directions(d, n_dirs, _rng(int(seed) ^ k))
        sq = np.abs(ft_batch(m, r * dirs)) ** 2
        if debias:
            # drop the i == j terms, which are sum w_i^2 at every frequency
            sq = sq - c
            means[k] = sq.mean()
        else:
            means[k] = (sq ** (p / 2.0)).mean()
    return means


def _tail_slope(mids, integrand, octaves=2.0):
    tail = mids >= mids[-1] * 2.0**-octaves
    pts = np.column_stack([mids[tail], integrand[tail]])
    try:
        return -fit_decay(pts).exponent
    except Exception:
        return float("nan")


def st_energy(
    m: DiscreteMeasure,
    s: float,
    theta: float,
    r_min: float = 1.0,
    r_max: float = 64.0,
    shells_per_octave: int = 8,
    n_dirs: int = 64,
    seed: int = 42,
) -> EnergyReport:
    """Truncated (s, theta)-energy by the midpoint rule on a geometric grid.

    ``tail_slope`` is the log-log slope of the radial integrand
    r^(s/theta - 1) * mean |mu^|^(2/theta) over the last two octaves; the
    untruncated integral converges when it stays below -1.
    """
    if not (0.0 < theta <= 1.0):
        raise ValueError("theta must lie in (0, 1]")
    if s < 0:
        raise ValueError("s must be nonnegative")
    d = m.ambient_dim
    _, mids, dr = _radial_grid(r_min, r_max, shells_per_octave)
    means = _shell_means(m, mids, 2.0 / theta, n_dirs, seed, debias=False)
    integrand = mids ** (s / theta - 1.0) * means
    total = sphere_area(d) * float((integrand * dr).sum())
    return EnergyReport(
        float(s), float(theta), total**theta, False, "frequency_shells",
        float(r_min), float(r_max), _tail_slope(mids, integrand),
    )


def st_energy_sup(
    m: DiscreteMeasure,
    s: float,
    r_min: float = 1.0,
    r_max: float = 64.0,
    shells_per_octave: int = 4,
    n_dirs: int = 64,
    seed: int = 42,
) -> EnergyReport:
    """theta = 0 form: max over the sweep of sup_pow(r) * r^s."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    stats = dyadic_shell_sweep(m, r_min, r_max, shells_per_octave, 2.0, n_dirs, seed)
    r = np.array([st.r for st in stats])
    sup = np.array([st.sup_pow for st in stats])
    vals = sup * r**s
    return EnergyReport(
        float(s), 0.0, float(vals.max()), False, "frequency_shells",
        float(r_min), float(r_max), _tail_slope(r, vals),
    )


@dataclass(frozen=True)
class EnergyRatio:
    label: str
    s: float
    real: float
    frequency: float
    ratio: float | None
    status: str  # "ok" or "skipped: ..."


@dataclass(frozen=True)
class EquivalenceReport:
    s: float
    ratios: tuple
    spread: float | None
    tol: float
    status: str  # "PASS", "FAIL" or "SKIPPED"


def frequency_energy(
    m: DiscreteMeasure,
    s: float,
    r_min: float | None = None,
    r_max: float | None = None,
    shells_per_octave: int = 8,
    n_dirs: int = 128,
    seed: int = 42,
) -> float:
    """Frequency-side counterpart of the off-diagonal Riesz energy.

    Integrates (|mu^|^2 - sum w^2) |xi|^(s-d) over r_min <= |xi| <= r_max and
    adds the ball |xi| < r_min in closed form, where the off-diagonal part is
    still close to its value 1 - sum w^2 at the origin.  Defaults: r_min =
    1/(32 diam), r_max = 64/diam.
    """
    d = m.ambient_dim
    if not (0 < s < d):
        raise ValueError("need 0 < s < d")
    diam = max(m.diameter, 1e-300)
    r_min = r_min if r_min is not None else 1.0 / (32.0 * diam)
    r_max = r_max if r_max is not None else 64.0 / diam
    _, mids, dr = _radial_grid(r_min, r_max, shells_per_octave)
    means = _shell_means(m, mids, 2.0, n_dirs, seed, debias=True)
    omega = sphere_area(d)
    shells = omega * float((mids ** (s - 1.0) * means * dr).sum())
    inner = (1.0 - m.collision_mass()) * omega * r_min**s / s
    return shells + inner


def energy_ratio(m: DiscreteMeasure, s: float, **sweep) -> EnergyRatio:
    real = riesz_energy(m, s)
    if real.infinite:
        return EnergyRatio(m.label, float(s), math.inf, math.nan, None, "skipped: real-space energy is infinite")
    freq = frequency_energy(m, s, **sweep)
    if not freq > 0:
        return EnergyRatio(m.label, float(s), real.value, freq, None, "skipped: frequency side not positive")
    return EnergyRatio(m.label, float(s), real.value, freq, real.value / freq, "ok")


def energy_equivalence_check(measures, s: float, tol: float = 0.15, **sweep) -> EquivalenceReport:
    """Compare riesz / frequency ratios across measures in the same R^d.

    PASS when max ratio / min ratio - 1 <= tol.  Any measure with an infinite
    real-space energy makes the check SKIPPED rather than failed.
    """
    measures = list(measures)
    if len({m.ambient_dim for m in measures}) != 1:
        raise ValueError("all measures must live in the same R^d")
    ratios = tuple(energy_ratio(m, s, **sweep) for m in measures)
    if any(r.ratio is None for r in ratios):
        return EquivalenceReport(float(s), ratios, None, tol, "SKIPPED")
    vals = [r.ratio for r in ratios]
    spread = max(vals) / min(vals) - 1.0
    return EquivalenceReport(float(s), ratios, spread, tol, "PASS" if spread <= tol else "FAIL")

"""Fourier dimension and Fourier-spectrum estimation from decay exponents.

The (s, theta)-energy of mu is finite iff the radial average of
|mu^|^(2/theta) over the sphere of radius r decays faster than
r^(-s/theta).  So if the annulus average of |mu^|^p behaves like r^(-kappa_p),
the spectrum at theta is theta * kappa_{2/theta}; at theta = 0 the same
reading is applied to the annulus maximum of |mu^|^2.

All exponents come from one table of |mu^| samples on geometric annuli, so a
whole profile costs a single transform sweep.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy.special import betainc

from .measure import DiscreteMeasure, _rng
from .transform import annulus_points, ft_batch


class WindowError(RuntimeError):
    """No usable frequency window: the estimate is reported as unavailable."""


@dataclass(frozen=True)
class DecayFit:
    exponent: float
    intercept: float
    r_min: float
    r_max: float
    n_points: int
    rms_residual: float

    def predict(self, r):
        return np.exp(self.intercept) * np.asarray(r, dtype=float) ** (-self.exponent)


def fit_decay(points, window=None) -> DecayFit:
    """Least-squares fit of log v = c - kappa log r; returns kappa as ``exponent``.

    ``points`` is a sequence of (r, v) pairs; only pairs with v > 0 and r in the
    closed ``window`` (if given) take part.
    """
    arr = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    r, v = arr[:, 0], arr[:, 1]
    keep = (v > 0) & (r > 0) & np.isfinite(v)
    if window is not None:
        lo, hi = window
        keep &= (r >= lo * (1 - 1e-12)) & (r <= hi * (1 + 1e-12))
    r, v = r[keep], v[keep]
    if r.size < 3:
        raise WindowError(f"need at least 3 positive points to fit a decay, got {r.size}")
    x, y = np.log(r), np.log(v)
    if np.ptp(x) == 0:
        raise WindowError("all radii are equal")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return DecayFit(
        exponent=float(-slope),
        intercept=float(intercept),
        r_min=float(r.min()),
        r_max=float(r.max()),
        n_points=int(r.size),
        rms_residual=float(np.sqrt(np.mean(resid**2))),
    )


@dataclass(frozen=True)
class SweepConfig:
    """Frequency sampling plan for spectrum estimation.

    r_min defaults to 2 / diameter of the support.  Each annulus between
    consecutive edges r_min * 2^(k / bins_per_octave) is covered by n_dirs
    random directions, each carrying radii spaced at most ``radial_step``
    apart (default 1 / (4 * diameter), fine enough to resolve the peaks of
    mu^) but never more than ``max_radial`` per direction.  One-dimensional
    annuli have only two directions, so they get max_radial * n_dirs radii.

    noise_factor scales the 1/n floor below which annulus means are treated
    as sampling noise, and smooth_octaves is the half-width of the window
    over which annulus statistics are pooled.  sup_candidates is the number
    of top directions re-scored on the held-out half of an i.i.d. sample.
    projection_strata controls the stratified sampling used when the atoms
    span a proper coordinate subspace.  ceiling caps reported estimates
    (default: the ambient dimension).
    """

    r_min: float | None = None
    r_max: float = 4096.0
    bins_per_octave: int = 4
    n_dirs: int = 64
    radial_step: float | None = None
    max_radial: int = 32
    noise_factor: float = 10.0
    smooth_octaves: float = 1.0
    sup_candidates: int = 8
    projection_strata: int = 8
    ceiling: float | None = None
    seed: int = 42


@dataclass
class ShellTable:
    """|mu^| samples on geometric annuli.

    For i.i.d. sampled measures the atoms are split into two independent
    halves A and B; ``halves`` then holds (mu_A^, mu_B^) per annulus and the
    statistics below use noise-debiased forms (see ``annulus_mean`` and
    ``annulus_sup``).
    """

    edges: np.ndarray
    centers: np.ndarray
    magnitudes: list
    volumes: list
    n_atoms: int
    ambient_dim: int
    n_dirs: int
    config: SweepConfig
    halves: list | None = None
    collision: tuple = (0.0, 0.0)

    def _power_samples(self, k: int, p: float) -> np.ndarray:
        if self.halves is None:
            return self.magnitudes[k] ** p
        a, b = self.halves[k]
        # Re(a conj b) is an unbiased estimate of |mu^|^2 when A, B are independent
        cross = np.maximum((a * b.conj()).real, 0.0)
        return cross ** (p / 2.0)

    def annulus_mean(self, p: float) -> np.ndarray:
        return np.array([np.average(self._power_samples(k, p), weights=v) for k, v in enumerate(self.volumes)])

    def annulus_sup(self, p: float = 2.0) -> np.ndarray:
        return np.array([self._sup(np.array([k]), p) for k in range(len(self.centers))])

    def _sup(self, bins: np.ndarray, p: float) -> float:
        if self.halves is None:
            return float(max(self.magnitudes[k].max() for k in bins) ** p)
        # select candidate peaks with one half and score them with the other,
        # so the max over many noisy samples does not inflate the estimate
        a = np.concatenate([self.halves[k][0] for k in bins])
        b = np.concatenate([self.halves[k][1] for k in bins])
        top = self.config.sup_candidates
        vals = []
        for sel, other, c in ((a, b, self.collision[1]), (b, a, self.collision[0])):
            idx = np.argsort(np.abs(sel), kind="stable")[-top:]
            vals.append(np.mean((np.abs(other[idx]) ** 2 - c) / (1.0 - c)))
        return float(max(np.mean(vals), 0.0) ** (p / 2.0))

    def _neighbours(self):
        h = self.config.smooth_octaves
        for c in self.centers:
            yield (self.centers >= c * 2.0**-h * (1 - 1e-12)) & (self.centers <= c * 2.0**h * (1 + 1e-12))

    def smoothed_mean(self, p: float) -> np.ndarray:
        """Annulus means averaged (dr-weighted) over +-smooth_octaves."""
        raw = self.annulus_mean(p)
        dr = np.diff(self.edges)
        return np.array([np.average(raw[k], weights=dr[k]) for k in self._neighbours()])

    def smoothed_sup(self, p: float = 2.0) -> np.ndarray:
        """Largest |mu^|^p over +-smooth_octaves."""
        return np.array([self._sup(np.flatnonzero(k), p) for k in self._neighbours()])

    def interior(self) -> np.ndarray:
        """Centres whose whole smoothing neighbourhood was sampled."""
        h = 2.0**self.config.smooth_octaves
        return (self.centers / h >= self.edges[0] * (1 - 1e-12)) & (self.centers * h <= self.edges[-1] * (1 + 1e-12))

    @property
    def noise_floor(self) -> float:
        return self.config.noise_factor / self.n_atoms

    def reliable_window(self) -> tuple[float, float]:
        """(r_lo, r_hi) of the annuli above the sampling noise floor.

        r_hi is the largest annulus centre whose smoothed mean |mu^|^2 is at
        least noise_factor / n_atoms; beyond it the transform of an n-atom
        approximation flattens out and would fake a zero exponent.
        """
        inside = self.interior()
        if not inside.any():
            raise WindowError("sweep too short for the smoothing window")
        above = np.flatnonzero(inside & (self.smoothed_mean(2.0) >= self.noise_floor))
        if above.size == 0:
            raise WindowError("every annulus is below the noise floor")
        return float(self.centers[np.flatnonzero(inside)[0]]), float(self.centers[above[-1]])


def _ceiling(m: DiscreteMeasure, cfg: SweepConfig) -> float:
    return cfg.ceiling if cfg.ceiling is not None else 2.0 * m.ambient_dim


def _split(m: DiscreteMeasure):
    idx = np.arange(m.n_atoms)
    parts = []
    for sel in (idx % 2 == 0, idx % 2 == 1):
        w = m.weights[sel]
        parts.append(DiscreteMeasure(m.positions[sel], w / w.sum()))
    return parts


def _reduce(m: DiscreteMeasure):
    """Drop coordinates that are constant over the atoms.

    mu^ then depends only on the projection of xi onto the remaining k
    coordinates (up to a unimodular phase), so the reduced measure carries
    all the information.  Returns (reduced measure, k) or (m, d).
    """
    active = np.ptp(m.positions, axis=0) > 0
    k = int(active.sum())
    if k == 0 or k == m.ambient_dim:
        return m, m.ambient_dim
    return DiscreteMeasure(m.positions[:, active], m.weights, iid=m.iid), k


def _projection_strata(d: int, k: int, t0: float, n_strata: int):
    """Nodes and probabilities for t = |P omega|, omega uniform on S^(d-1).

    t^2 follows Beta(k/2, (d-k)/2).  The strata are geometric in t between
    t0 and 1 plus [0, t0], so the rare nearly-orthogonal directions that
    dominate slowly decaying averages get their own nodes.
    """
    edges = np.concatenate([[0.0], np.geomspace(t0, 1.0, n_strata + 1)])
    probs = np.diff(betainc(k / 2.0, (d - k) / 2.0, edges**2))
    nodes = np.concatenate([[t0 / 2.0], np.sqrt(edges[1:-1] * edges[2:])])
    return nodes, probs


def shell_table(m: DiscreteMeasure, cfg: SweepConfig | None = None) -> ShellTable:
    cfg = cfg or SweepConfig()
    d = m.ambient_dim
    diam = max(m.diameter, 1e-12)
    r_min = cfg.r_min if cfg.r_min is not None else 2.0 / diam
    if not r_min < cfg.r_max:
        raise WindowError(f"empty sweep: r_min={r_min:g} >= r_max={cfg.r_max:g}")
    n_bins = int(np.floor(cfg.bins_per_octave * np.log2(cfg.r_max / r_min) + 1e-9))
    if n_bins < 1:
        raise WindowError("sweep shorter than one annulus")
    edges = r_min * 2.0 ** (np.arange(n_bins + 1) / cfg.bins_per_octave)
    step = cfg.radial_step if cfg.radial_step is not None else 1.0 / (4.0 * diam)
    red, k = _reduce(m)
    split = m.iid and m.n_atoms >= 4
    if split:
        part_a, part_b = _split(red)
        wa = float(m.weights[::2].sum())
    rng = _rng(cfg.seed)
    mags, vols, halves = [], [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        # one direction in 1-D: spend the budget of n_dirs directions on radii
        cap = cfg.max_radial * (cfg.n_dirs if k == 1 else 1)
        n_rad = int(min(cap, max(1, np.ceil((hi - lo) / step))))
        if k == 1:
            # |mu^(-xi)| = |mu^(xi)| for real measures: one direction suffices
            pts, vol = annulus_points(1, lo, hi, 1, n_rad, rng)
            pts = np.abs(pts)
        else:
            pts, vol = annulus_points(k, lo, hi, cfg.n_dirs, n_rad, rng)
        if k < d:
            # ambient annulus: |xi| = r, and mu^ only sees r * t * u with
            # u uniform on S^(k-1); weight r^(d-1) times the stratum mass
            radii = np.linalg.norm(pts, axis=1)
            t0 = min(0.5, 1.0 / (8.0 * hi * diam))
            nodes, probs = _projection_strata(d, k, t0, cfg.projection_strata)
            pts = (nodes[:, None, None] * pts[None, :, :]).reshape(-1, k)
            vol = (probs[:, None] * radii[None, :] ** (d - 1)).reshape(-1)
        if split:
            a, b = ft_batch(part_a, pts), ft_batch(part_b, pts)
            halves.append((a, b))
            mags.append(np.abs(wa * a + (1.0 - wa) * b))
        else:
            mags.append(np.abs(ft_batch(red, pts)))
        vols.append(vol)
    return ShellTable(
        edges=edges,
        centers=np.sqrt(edges[:-1] * edges[1:]),
        magnitudes=mags,
        volumes=vols,
        n_atoms=m.n_atoms,
        ambient_dim=d,
        n_dirs=1 if k == 1 else cfg.n_dirs,
        config=cfg,
        halves=halves if split else None,
        collision=(part_a.collision_mass(), part_b.collision_mass()) if split else (0.0, 0.0),
    )


def _is_point_mass(m: DiscreteMeasure) -> bool:
    return m.n_atoms == 1 or float(np.ptp(m.positions, axis=0).max()) == 0.0


def _flat_fit(table: ShellTable) -> DecayFit:
    return DecayFit(0.0, 0.0, float(table.centers[0]), float(table.centers[-1]), len(table.centers), 0.0)


def _fit_series(table: ShellTable, values: np.ndarray) -> DecayFit:
    window = table.reliable_window()
    return fit_decay(np.column_stack([table.centers, values]), window)


def estimate_fourier_dim(m: DiscreteMeasure, cfg: SweepConfig | None = None, table: ShellTable | None = None):
    """Estimate dim_F mu as the decay exponent of the annulus maximum of |mu^|^2.

    Returns (estimate, DecayFit); raises WindowError when no annulus lies above
    the noise floor.
    """
    cfg = cfg or (table.config if table is not None else SweepConfig())
    if _is_point_mass(m):
        # |mu^| == 1 everywhere: no decay, and no diameter to set a window
        return 0.0, DecayFit(0.0, 0.0, 1.0, cfg.r_max, 0, 0.0)
    table = table or shell_table(m, cfg)
    fit = _fit_series(table, table.smoothed_sup(2.0))
    return float(np.clip(fit.exponent, 0.0, _ceiling(m, cfg))), fit


def estimate_spectrum_point(m: DiscreteMeasure, theta: float, cfg: SweepConfig | None = None, table=None):
    """Estimate dim_F^theta mu = theta * kappa_(2/theta) for theta in (0, 1]."""
    if not (0.0 < theta <= 1.0):
        raise ValueError("theta must lie in (0, 1]")
    cfg = cfg or (table.config if table is not None else SweepConfig())
    if _is_point_mass(m):
        return 0.0, DecayFit(0.0, 0.0, 1.0, cfg.r_max, 0, 0.0)
    table = table or shell_table(m, cfg)
    fit = _fit_series(table, table.smoothed_mean(2.0 / theta))
    return float(np.clip(theta * fit.exponent, 0.0, _ceiling(m, cfg))), fit


@dataclass
class SpectrumProfile:
    entries: list  # (theta, s_est, DecayFit)
    measure_id: str = ""
    params: dict = field(default_factory=dict)

    @property
    def thetas(self):
        return np.array([e[0] for e in self.entries])

    @property
    def values(self):
        return np.array([e[1] for e in self.entries])

    def at(self, theta: float) -> float:
        for t, s, _ in self.entries:
            if abs(t - theta) < 1e-12:
                return s
        raise KeyError(theta)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["theta", "s_est", "exponent", "r_min", "r_max", "n_shells", "n_dirs", "rms_residual"])
        n_dirs = self.params.get("n_dirs", 0)
        for t, s, f in self.entries:
            w.writerow(
                [f"{t:.17g}", f"{s:.17g}", f"{f.exponent:.17g}", f"{f.r_min:.17g}", f"{f.r_max:.17g}",
                 f.n_points, n_dirs, f"{f.rms_residual:.17g}"]
            )
        return buf.getvalue()


DEFAULT_THETAS = tuple(np.arange(9) / 8.0)


def estimate_spectrum_profile(m: DiscreteMeasure, thetas=DEFAULT_THETAS, cfg: SweepConfig | None = None, table=None):
    thetas = np.asarray(thetas, dtype=float)
    if thetas.size == 0 or np.any(np.diff(thetas) <= 0):
        raise ValueError("theta grid must be non-empty and strictly increasing")
    if thetas[0] < 0 or thetas[-1] > 1:
        raise ValueError("theta grid must lie in [0, 1]")
    cfg = cfg or (table.config if table is not None else SweepConfig())
    if not _is_point_mass(m):
        table = table or shell_table(m, cfg)
    entries = []
    for t in thetas:
        if t == 0:
            s, fit = estimate_fourier_dim(m, cfg, table)
        else:
            s, fit = estimate_spectrum_point(m, float(t), cfg, table)
        entries.append((float(t), s, fit))
    n_dirs = table.n_dirs if table is not None else 0
    params = {"r_max": cfg.r_max, "bins_per_octave": cfg.bins_per_octave, "n_dirs": n_dirs, "seed": cfg.seed}
    return SpectrumProfile(entries, measure_id=m.label, params=params)


@dataclass(frozen=True)
class ShapeReport:
    passed: bool
    violations: tuple


def check_profile_shape(profile, tol: float = 0.25) -> ShapeReport:
    """Monotone non-decreasing and midpoint-concave, each up to ``tol``.

    Concavity is checked on consecutive triples as
    s(mid) >= interpolation of the neighbours at mid - tol.
    """
    if isinstance(profile, SpectrumProfile):
        th, s = profile.thetas, profile.values
    else:
        th, s = (np.asarray(a, dtype=float) for a in zip(*profile))
    if th.size < 3:
        raise ValueError("shape check needs at least 3 profile entries")
    bad = []
    for i in range(th.size - 1):
        if s[i + 1] < s[i] - tol:
            bad.append(("monotone", float(th[i]), float(th[i + 1]), float(s[i]), float(s[i + 1])))
    for i in range(1, th.size - 1):
        lam = (th[i] - th[i - 1]) / (th[i + 1] - th[i - 1])
        chord = (1 - lam) * s[i - 1] + lam * s[i + 1]
        if s[i] < chord - tol:
            bad.append(("concave", float(th[i]), float(chord), float(s[i])))
    return ShapeReport(not bad, tuple(bad))

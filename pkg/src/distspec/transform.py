"""Direct evaluation of the Fourier transform of atomic measures.

    mu^(xi) = sum_j w_j exp(-2 pi i x_j . xi)

No fast transform is used: every value is an exact (double precision)
sum over atoms, blocked over frequencies and optionally threaded.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from ._parallel import run_blocks
from .measure import DiscreteMeasure, MeasureError, _rng

TWO_PI = 2.0 * np.pi
# elements per temporary (frequency x atom) block
_BLOCK_ELEMS = 1 << 19


def _phase_block(xis: np.ndarray, pos: np.ndarray) -> np.ndarray:
    # coordinate loop instead of a BLAS matmul keeps the reduction order fixed
    ph = xis[:, 0, None] * pos[None, :, 0]
    for k in range(1, pos.shape[1]):
        ph += xis[:, k, None] * pos[None, :, k]
    ph *= TWO_PI
    return ph


def ft_batch(m: DiscreteMeasure, xis) -> np.ndarray:
    """Fourier transform of ``m`` at every row of ``xis`` (shape (k, d))."""
    xis = np.asarray(xis, dtype=np.float64)
    if xis.ndim == 1:
        xis = xis.reshape(-1, m.ambient_dim) if m.ambient_dim == 1 else xis.reshape(1, -1)
    if xis.shape[1] != m.ambient_dim:
        raise MeasureError(f"frequency has {xis.shape[1]} coordinates, measure lives in R^{m.ambient_dim}")
    out = np.empty(xis.shape[0], dtype=np.complex128)
    pos, w = m.positions, m.weights
    rows = max(1, _BLOCK_ELEMS // m.n_atoms)

    def work(start):
        stop = min(start + rows, xis.shape[0])
        ph = _phase_block(xis[start:stop], pos)
        out.real[start:stop] = (np.cos(ph) * w).sum(axis=1)
        out.imag[start:stop] = -(np.sin(ph) * w).sum(axis=1)

    run_blocks(work, range(0, xis.shape[0], rows))
    return out


def ft_point(m: DiscreteMeasure, xi) -> complex:
    xi = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    if xi.shape != (m.ambient_dim,):
        raise MeasureError(f"frequency has {xi.size} coordinates, measure lives in R^{m.ambient_dim}")
    return complex(ft_batch(m, xi.reshape(1, -1))[0])


def uniform_directions(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. uniform unit vectors in R^d (normalised Gaussians)."""
    g = rng.standard_normal((n, d))
    return g / np.sqrt((g * g).sum(axis=1))[:, None]


@dataclass(frozen=True)
class ShellStat:
    r: float
    p: float
    mean_pow: float
    sup_pow: float
    n_dirs: int
    seed: int


def shell_stat(m: DiscreteMeasure, r: float, p: float = 2.0, n_dirs: int = 64, seed: int = 42) -> ShellStat:
    """Mean and max of |mu^(r w)|^p over n_dirs random directions w."""
    if not r > 0:
        raise ValueError("shell radius must be positive")
    if not p > 0:
        raise ValueError("exponent p must be positive")
    if n_dirs < 1:
        raise ValueError("n_dirs must be >= 1")
    dirs = uniform_directions(m.ambient_dim, n_dirs, _rng(seed))
    vals = np.abs(ft_batch(m, r * dirs)) ** p
    return ShellStat(float(r), float(p), float(vals.mean()), float(vals.max()), int(n_dirs), int(seed))


def geometric_grid(r_min: float, r_max: float, per_octave: int) -> np.ndarray:
    if not (0 < r_min < r_max):
        raise ValueError("need 0 < r_min < r_max")
    if per_octave < 1:
        raise ValueError("need at least one point per octave")
    k_max = int(np.floor(per_octave * np.log2(r_max / r_min) + 1e-9))
    return r_min * 2.0 ** (np.arange(k_max + 1) / per_octave)


def dyadic_shell_sweep(
    m: DiscreteMeasure,
    r_min: float,
    r_max: float,
    shells_per_octave: int = 4,
    p: float = 2.0,
    n_dirs: int = 64,
    seed: int = 42,
) -> list[ShellStat]:
    """ShellStats on the geometric grid r_min * 2^(k / shells_per_octave) <= r_max.

    Shell k draws its directions from seed XOR k.
    """
    radii = geometric_grid(r_min, r_max, shells_per_octave)
    return [shell_stat(m, float(r), p, n_dirs, int(seed) ^ k) for k, r in enumerate(radii)]


def sweep_to_csv(stats) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "p", "mean_pow", "sup_pow", "n_dirs"])
    for s in stats:
        w.writerow([f"{s.r:.17g}", f"{s.p:.17g}", f"{s.mean_pow:.17g}", f"{s.sup_pow:.17g}", s.n_dirs])
    return buf.getvalue()


def annulus_points(d: int, r_lo: float, r_hi: float, n_dirs: int, n_radial: int, rng) -> tuple[np.ndarray, np.ndarray]:
    """Frequencies covering the annulus r_lo <= |xi| < r_hi.

    Each of n_dirs random directions carries n_radial radii on a regular grid
    with a random common offset.  Returns (points, volume weights r^(d-1)).
    """
    dirs = uniform_directions(d, n_dirs, rng)
    step = (r_hi - r_lo) / n_radial
    radii = r_lo + step * (np.arange(n_radial) + rng.random())
    pts = (dirs[:, None, :] * radii[None, :, None]).reshape(-1, d)
    vol = np.tile(radii ** (d - 1), n_dirs)
    return pts, vol

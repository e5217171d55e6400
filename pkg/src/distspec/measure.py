"""Atomic probability measures on R^d and their constructors.

Every measure in the library is a finite weighted sum of Dirac masses.  The
constructors below build the sphere, Cantor, cube and Brownian-image
measures used throughout, together with the structural operations
(products, translates, the paraboloid lift and the difference measure).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

DEFAULT_ATOM_BUDGET = 2_000_000
MAX_CANTOR_DEPTH = 24
WEIGHT_TOL = 1e-12


class MeasureError(ValueError):
    """Invalid constructor parameters or a violated measure invariant."""


class BudgetError(MeasureError):
    """An operation would create more atoms or pairs than its budget allows."""


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Weighted atoms ``positions[i]`` with mass ``weights[i]``.

    ``iid`` marks measures whose atoms are an i.i.d. sample of some
    continuous measure; estimators use it to decide on noise-floor
    corrections.  Arrays are made read-only on construction.
    """

    positions: np.ndarray
    weights: np.ndarray
    iid: bool = False
    label: str = ""
    support_radius: float = field(init=False)

    def __post_init__(self):
        pos = np.array(self.positions, dtype=np.float64, copy=True)
        w = np.array(self.weights, dtype=np.float64, copy=True).reshape(-1)
        if pos.ndim == 1:
            pos = pos.reshape(-1, 1) if w.size != 1 else pos.reshape(1, -1)
        if pos.ndim != 2 or pos.shape[1] < 1:
            raise MeasureError("positions must be an (n, d) array with d >= 1")
        if pos.shape[0] < 1:
            raise MeasureError("a measure needs at least one atom")
        if pos.shape[0] != w.size:
            raise MeasureError(f"{pos.shape[0]} positions but {w.size} weights")
        if not np.all(np.isfinite(pos)):
            raise MeasureError("atom positions must be finite")
        if np.any(w <= 0) or np.any(w > 1):
            raise MeasureError("weights must lie in (0, 1]")
        total = w.sum()
        if abs(total - 1.0) > WEIGHT_TOL:
            raise MeasureError(f"weights sum to {total!r}, not 1")
        pos.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "weights", w)
        radius = float(np.sqrt((pos * pos).sum(axis=1)).max())
        object.__setattr__(self, "support_radius", radius)

    @property
    def ambient_dim(self) -> int:
        return self.positions.shape[1]

    @property
    def n_atoms(self) -> int:
        return self.positions.shape[0]

    def __len__(self):
        return self.n_atoms

    @property
    def diameter(self) -> float:
        """Bounding-box diagonal: an upper bound for the support diameter."""
        span = self.positions.max(axis=0) - self.positions.min(axis=0)
        return float(np.sqrt((span * span).sum()))

    def collision_mass(self) -> float:
        """Sum of squared weights (the diagonal of the pair measure)."""
        return float((self.weights * self.weights).sum())

    def same_as(self, other: "DiscreteMeasure") -> bool:
        """Bitwise equality of positions and weights."""
        return (
            self.positions.shape == other.positions.shape
            and self.positions.tobytes() == other.positions.tobytes()
            and self.weights.tobytes() == other.weights.tobytes()
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        d = self.ambient_dim
        writer.writerow([f"x{i + 1}" for i in range(d)] + ["weight"])
        for p, w in zip(self.positions, self.weights):
            writer.writerow([f"{v:.17g}" for v in p] + [f"{w:.17g}"])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, label: str = "") -> "DiscreteMeasure":
        rows = list(csv.reader(io.StringIO(text)))
        header, body = rows[0], [r for r in rows[1:] if r]
        if not header or header[-1] != "weight":
            raise MeasureError("CSV header must end with 'weight'")
        data = np.array([[float(v) for v in r] for r in body], dtype=np.float64)
        return cls(data[:, :-1], data[:, -1], label=label)


def validate(m: DiscreteMeasure) -> None:
    """Re-check every DiscreteMeasure invariant; raises MeasureError."""
    DiscreteMeasure(m.positions, m.weights)
    radius = float(np.sqrt((m.positions**2).sum(axis=1)).max())
    if radius != m.support_radius:
        raise MeasureError("support_radius out of date")


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF))


def _uniform_weights(n: int) -> np.ndarray:
    return np.full(n, 1.0 / n)


def _check_positive_int(name, value, minimum=1):
    if int(value) != value or value < minimum:
        raise MeasureError(f"{name} must be an integer >= {minimum}, got {value!r}")


def make_sphere_measure(k: int, n: int, seed: int = 42) -> DiscreteMeasure:
    """n i.i.d. uniform points on the unit sphere S^{k-1} in R^k.

    Uses normalised Gaussian vectors; for k = 1 this is uniform on {-1, +1}.
    """
    _check_positive_int("k", k)
    _check_positive_int("n", n)
    g = _rng(seed).standard_normal((n, k))
    norms = np.sqrt((g * g).sum(axis=1))
    pos = g / norms[:, None]
    return DiscreteMeasure(pos, _uniform_weights(n), iid=True, label=f"sphere(k={k},n={n})")


def _cantor_points(ratio: float, depth: int) -> np.ndarray:
    pts = np.zeros(1)
    for _ in range(depth):
        pts = np.concatenate([ratio * pts, ratio * pts + (1.0 - ratio)])
    return pts


def _check_cantor(ratio, depth):
    if not (0.0 < ratio < 0.5):
        raise MeasureError(f"cantor ratio must lie in (0, 1/2), got {ratio!r}")
    _check_positive_int("depth", depth, minimum=0)
    if depth > MAX_CANTOR_DEPTH:
        raise MeasureError(f"depth {depth} exceeds the maximum {MAX_CANTOR_DEPTH}")


def make_cantor_measure(ratio: float, depth: int) -> DiscreteMeasure:
    """Uniform measure on the left endpoints of the depth-level intervals.

    The Cantor set is the attractor of x -> ratio*x and x -> ratio*x + 1 - ratio
    on [0, 1]; its similarity dimension is log 2 / log(1/ratio).
    """
    _check_cantor(ratio, depth)
    pts = _cantor_points(ratio, depth)
    return DiscreteMeasure(
        pts.reshape(-1, 1), _uniform_weights(pts.size), label=f"cantor(ratio={ratio!r},depth={depth})"
    )


def cantor_dimension(ratio: float) -> float:
    return float(np.log(2.0) / np.log(1.0 / ratio))


def make_random_translate_cantor(ratio: float, depth: int, seed: int = 42) -> DiscreteMeasure:
    """Cantor-type measure with randomly placed children.

    Each parent interval of length L gets two children of length ratio*L whose
    three gaps (left, middle, right) are a uniform draw from the simplex of
    total L*(1 - 2*ratio).  Atoms sit at the left endpoints of the final level.
    """
    _check_cantor(ratio, depth)
    rng = _rng(seed)
    starts = np.zeros(1)
    length = 1.0
    free = 1.0 - 2.0 * ratio
    for _ in range(depth):
        gaps = rng.dirichlet(np.ones(3), size=starts.size) * (free * length)
        child = ratio * length
        left = starts + gaps[:, 0]
        right = left + child + gaps[:, 1]
        starts = np.stack([left, right], axis=1).reshape(-1)
        length = child
    return DiscreteMeasure(
        starts.reshape(-1, 1), _uniform_weights(starts.size), label=f"rcantor(ratio={ratio!r},depth={depth})"
    )


def make_uniform_cube(d: int, n: int, seed: int = 42) -> DiscreteMeasure:
    _check_positive_int("d", d)
    _check_positive_int("n", n)
    pos = _rng(seed).random((n, d))
    return DiscreteMeasure(pos, _uniform_weights(n), iid=True, label=f"uniform(d={d},n={n})")


def make_uniform_ball(d: int, n: int, radius: float = 1.0, seed: int = 42) -> DiscreteMeasure:
    """n i.i.d. uniform points in the closed ball of the given radius."""
    _check_positive_int("d", d)
    _check_positive_int("n", n)
    if not radius > 0:
        raise MeasureError("radius must be positive")
    rng = _rng(seed)
    g = rng.standard_normal((n, d))
    g /= np.sqrt((g * g).sum(axis=1))[:, None]
    rad = radius * rng.random(n) ** (1.0 / d)
    return DiscreteMeasure(g * rad[:, None], _uniform_weights(n), iid=True, label=f"ball(d={d},n={n})")


def dirac(position) -> DiscreteMeasure:
    pos = np.atleast_1d(np.asarray(position, dtype=np.float64))
    if pos.ndim != 1 or pos.size < 1:
        raise MeasureError("dirac needs a position with at least one coordinate")
    return DiscreteMeasure(pos.reshape(1, -1), np.ones(1), label="dirac")


def product_measure(a: DiscreteMeasure, b: DiscreteMeasure, max_atoms: int = DEFAULT_ATOM_BUDGET) -> DiscreteMeasure:
    """Tensor product a x b on R^{d_a + d_b}; atoms ordered a-major."""
    n = a.n_atoms * b.n_atoms
    if n > max_atoms:
        raise BudgetError(f"product would have {n} atoms (budget {max_atoms})")
    pos = np.concatenate(
        [np.repeat(a.positions, b.n_atoms, axis=0), np.tile(b.positions, (a.n_atoms, 1))], axis=1
    )
    w = np.outer(a.weights, b.weights).reshape(-1)
    # a product with a point mass is still an i.i.d. sample of the product
    iid = (a.iid and b.n_atoms == 1) or (b.iid and a.n_atoms == 1)
    return DiscreteMeasure(pos, w, iid=iid, label=f"product({a.label},{b.label})")


def translate(m: DiscreteMeasure, v) -> DiscreteMeasure:
    v = np.atleast_1d(np.asarray(v, dtype=np.float64))
    if v.shape != (m.ambient_dim,):
        raise MeasureError(f"translation has {v.size} coordinates, measure lives in R^{m.ambient_dim}")
    return DiscreteMeasure(m.positions + v, m.weights, iid=m.iid, label=f"translate({m.label})")


def lift(m: DiscreteMeasure) -> DiscreteMeasure:
    """Push m forward under y -> (y, |y|^2) into R^{d+1}."""
    sq = (m.positions * m.positions).sum(axis=1)
    return DiscreteMeasure(np.column_stack([m.positions, sq]), m.weights, iid=m.iid, label=f"lift({m.label})")


def merge_atoms(positions: np.ndarray, contributions: np.ndarray):
    """Merge rows with bitwise-equal coordinates, summing their masses.

    Within each group the masses are summed in ascending order, so the
    result does not depend on the order the contributions arrive in.
    """
    uniq, inverse = np.unique(positions, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    order = np.lexsort((contributions, inverse))
    grp = inverse[order]
    starts = np.flatnonzero(np.r_[True, grp[1:] != grp[:-1]])
    sums = np.add.reduceat(contributions[order], starts)
    return uniq, sums


def autocorrelation(m: DiscreteMeasure, max_atoms: int = DEFAULT_ATOM_BUDGET) -> DiscreteMeasure:
    """The difference measure m * m~ : atoms at y - z with mass w_y w_z."""
    n2 = m.n_atoms**2
    if n2 > max_atoms:
        raise BudgetError(f"autocorrelation needs {n2} pairs (budget {max_atoms})")
    diffs = (m.positions[:, None, :] - m.positions[None, :, :]).reshape(-1, m.ambient_dim)
    w = np.outer(m.weights, m.weights).reshape(-1)
    pos, weights = merge_atoms(diffs, w)
    weights = weights / weights.sum() if abs(weights.sum() - 1.0) > WEIGHT_TOL else weights
    return DiscreteMeasure(pos, weights, label=f"autocorr({m.label})")


def brownian_image(base: DiscreteMeasure, d: int, seed: int = 42) -> DiscreteMeasure:
    """Image of a measure on [0, 1] under one sampled d-dimensional Brownian path.

    The path is sampled exactly at the sorted atom times (independent
    Gaussian increments with variance equal to the time gap), starting from
    B(0) = 0.
    """
    if base.ambient_dim != 1:
        raise MeasureError("brownian_image needs a measure on R^1")
    _check_positive_int("d", d)
    t = base.positions[:, 0]
    if t.min() < 0.0 or t.max() > 1.0:
        raise MeasureError("brownian_image needs atoms inside [0, 1]")
    order = np.argsort(t, kind="stable")
    ts = t[order]
    gaps = np.diff(np.concatenate([[0.0], ts]))
    steps = _rng(seed).standard_normal((ts.size, d)) * np.sqrt(gaps)[:, None]
    path = np.cumsum(steps, axis=0)
    pos = np.empty_like(path)
    pos[order] = path
    return DiscreteMeasure(pos, base.weights, label=f"brownian({base.label},d={d})")

"""Distance sets, pinned squared-distance measures and the average A(tau).

For a pin x and a measure mu the pinned squared-distance measure is the
push-forward of mu under y -> |x - y|^2.  Its transform has two
representations, a direct atom sum and one through the lifted measure
nu = lift(mu):

    pinned^(tau) = exp(-2 pi i tau |x|^2) * nu^(tau * (-2x, 1))

A(tau) is the mu1-average of |pinned^(tau)|^2; it also equals a double sum
over mu2 weighted by mu1^ (the "kernel" form).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._parallel import run_blocks
from .measure import DEFAULT_ATOM_BUDGET, BudgetError, DiscreteMeasure, MeasureError, lift, merge_atoms
from .spectrum import DecayFit, WindowError, fit_decay
from .thresholds import beta_gamma
from .transform import TWO_PI, ft_batch, ft_point

DEFAULT_KERNEL_BUDGET = 4_000_000


def _points(obj) -> np.ndarray:
    if isinstance(obj, DiscreteMeasure):
        return obj.positions
    arr = np.asarray(obj, dtype=np.float64)
    return arr.reshape(-1, 1) if arr.ndim == 1 else arr


def _check_pin(x, m: DiscreteMeasure) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if x.shape != (m.ambient_dim,):
        raise MeasureError(f"pin has {x.size} coordinates, measure lives in R^{m.ambient_dim}")
    return x


@dataclass(frozen=True)
class DistanceSample:
    values: np.ndarray
    squared: bool
    sources: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        return "value\n" + "".join(f"{v:.17g}\n" for v in self.values)

    def sidecar_json(self) -> str:
        return json.dumps({"squared": self.squared, "count": int(self.values.size), **self.sources})


def _dedup(vals: np.ndarray, tol: float) -> np.ndarray:
    vals = np.sort(vals, kind="stable")
    if tol == 0:
        return np.unique(vals)
    keep = [0]
    for i in range(1, vals.size):
        if vals[i] - vals[keep[-1]] > tol:
            keep.append(i)
    return vals[keep]


def distance_set(E, F, squared: bool = False, dedup_tol: float = 0.0, max_pairs: int = 20_000_000) -> DistanceSample:
    """All |x - y| (or |x - y|^2) for x in E, y in F, sorted and de-duplicated."""
    P, Q = _points(E), _points(F)
    if P.shape[1] != Q.shape[1]:
        raise MeasureError("E and F must live in the same R^d")
    if dedup_tol < 0:
        raise ValueError("dedup_tol must be nonnegative")
    if P.shape[0] * Q.shape[0] > max_pairs:
        raise BudgetError(f"{P.shape[0] * Q.shape[0]} pairs exceed the budget {max_pairs}")
    rows = max(1, (1 << 20) // Q.shape[0])
    sq = np.empty(P.shape[0] * Q.shape[0])
    for a in range(0, P.shape[0], rows):
        b = min(a + rows, P.shape[0])
        acc = np.zeros((b - a, Q.shape[0]))
        for k in range(P.shape[1]):
            diff = P[a:b, k, None] - Q[None, :, k]
            acc += diff * diff
        sq[a * Q.shape[0]:b * Q.shape[0]] = acc.reshape(-1)
    vals = sq if squared else np.sqrt(sq)
    srcs = {
        "E": getattr(E, "label", "points"),
        "F": getattr(F, "label", "points"),
    }
    return DistanceSample(_dedup(vals, dedup_tol), squared, srcs)


def pinned_measure(x, m: DiscreteMeasure, squared: bool = True) -> DiscreteMeasure:
    """Push-forward of m under y -> |x - y|^2 (or |x - y|), atoms merged on exact ties."""
    x = _check_pin(x, m)
    diff = m.positions - x
    vals = (diff * diff).sum(axis=1)
    if not squared:
        vals = np.sqrt(vals)
    pos, w = merge_atoms(vals.reshape(-1, 1), np.asarray(m.weights))
    return DiscreteMeasure(pos, w / w.sum() if abs(w.sum() - 1) > 1e-12 else w, label=f"pinned({m.label})")


def _pinned_sums(pins: np.ndarray, m: DiscreteMeasure, tau: float) -> np.ndarray:
    """sum_j w_j exp(-2 pi i tau |x - y_j|^2) for each row x of ``pins``."""
    out = np.empty(pins.shape[0], dtype=np.complex128)
    pos, w = m.positions, m.weights
    rows = max(1, (1 << 19) // m.n_atoms)

    def work(a):
        b = min(a + rows, pins.shape[0])
        d2 = np.zeros((b - a, m.n_atoms))
        for k in range(pos.shape[1]):
            diff = pins[a:b, k, None] - pos[None, :, k]
            d2 += diff * diff
        ph = TWO_PI * tau * d2
        out.real[a:b] = (np.cos(ph) * w).sum(axis=1)
        out.imag[a:b] = -(np.sin(ph) * w).sum(axis=1)

    run_blocks(work, range(0, pins.shape[0], rows))
    return out


def pinned_ft_direct(x, m: DiscreteMeasure, tau: float) -> complex:
    x = _check_pin(x, m)
    return complex(_pinned_sums(x.reshape(1, -1), m, float(tau))[0])


def pinned_ft_lift(x, m: DiscreteMeasure, tau: float, lifted: DiscreteMeasure | None = None) -> complex:
    x = _check_pin(x, m)
    nu = lifted if lifted is not None else lift(m)
    xi = tau * np.append(-2.0 * x, 1.0)
    return complex(np.exp(-1j * TWO_PI * tau * float(x @ x)) * ft_point(nu, xi))


def _a_kernel(mu1: DiscreteMeasure, mu2: DiscreteMeasure, tau: float) -> float:
    y, w = mu2.positions, mu2.weights
    n = mu2.n_atoms
    sq = (y * y).sum(axis=1)
    total = 0.0
    imag = 0.0
    # one row of the (j, k) double sum at a time keeps memory at O(n * |mu1|)
    for j in range(n):
        xi = -2.0 * tau * (y[j] - y)
        phase = np.exp(-1j * TWO_PI * tau * (sq[j] - sq))
        terms = w[j] * w * phase * ft_batch(mu1, xi)
        total += terms.real.sum()
        imag += terms.imag.sum()
    if abs(imag) > 1e-10:
        raise ArithmeticError(f"kernel form left an imaginary part {imag:.3g}")
    return float(total)


def A_tau(mu1: DiscreteMeasure, mu2: DiscreteMeasure, tau: float, kernel: bool = True,
          kernel_budget: int = DEFAULT_KERNEL_BUDGET):
    """(A_avg, A_kernel) at tau.

    The kernel form is a double sum over the |mu2|^2 pairs of atoms; more
    pairs than ``kernel_budget`` raise BudgetError.  With kernel=False only
    the average form is computed and NaN stands in for the kernel value.
    """
    if mu1.ambient_dim != mu2.ambient_dim:
        raise MeasureError("mu1 and mu2 must live in the same R^d")
    tau = float(tau)
    sums = _pinned_sums(mu1.positions, mu2, tau)
    a_avg = float((mu1.weights * (sums.real**2 + sums.imag**2)).sum())
    if not kernel:
        return a_avg, math.nan
    if mu2.n_atoms**2 > kernel_budget:
        raise BudgetError(f"kernel form needs {mu2.n_atoms**2} pairs (budget {kernel_budget})")
    return a_avg, _a_kernel(mu1, mu2, tau)


@dataclass
class ADecayTable:
    tau: np.ndarray
    a_avg: np.ndarray
    a_kernel: np.ndarray
    measure_ids: tuple = ()

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["tau", "A_avg", "A_kernel"])
        for t, a, k in zip(self.tau, self.a_avg, self.a_kernel):
            w.writerow([f"{t:.17g}", f"{a:.17g}", "nan" if math.isnan(k) else f"{k:.17g}"])
        return buf.getvalue()

    @property
    def max_form_gap(self) -> float:
        ok = ~np.isnan(self.a_kernel)
        return float(np.abs(self.a_avg[ok] - self.a_kernel[ok]).max()) if ok.any() else math.nan


# exponentials per tau row above which tables skip the kernel form
KERNEL_WORK_PER_ROW = 20_000_000


def a_decay_table(mu1, mu2, taus, kernel_work: int = KERNEL_WORK_PER_ROW) -> ADecayTable:
    """A(tau) on a grid; the kernel column is NaN when a row would need more
    than ``kernel_work`` exponentials (|mu2|^2 * |mu1|)."""
    taus = np.asarray(taus, dtype=float)
    use_kernel = mu2.n_atoms**2 * mu1.n_atoms <= kernel_work and mu2.n_atoms**2 <= DEFAULT_KERNEL_BUDGET
    rows = [A_tau(mu1, mu2, t, kernel=use_kernel) for t in taus]
    return ADecayTable(taus, np.array([r[0] for r in rows]), np.array([r[1] for r in rows]), (mu1.label, mu2.label))


def tau_grid(tau_min: float = 1.0, tau_max: float = 64.0, per_octave: int = 16) -> np.ndarray:
    """Geometric grid; the many points per octave let the smoothing average
    over the oscillations of A(tau)."""
    if not 0 < tau_min < tau_max:
        raise ValueError("need 0 < tau_min < tau_max")
    n = int(round(per_octave * math.log2(tau_max / tau_min)))
    if n < 2:
        raise ValueError("degenerate tau grid")
    return tau_min * 2.0 ** (np.arange(n + 1) / per_octave)


@dataclass(frozen=True)
class ADecayResult:
    fit: DecayFit
    predicted: float | None
    table: ADecayTable
    smoothed: np.ndarray
    window: tuple
    debiased: bool


def a_decay_fit(
    mu1: DiscreteMeasure,
    mu2: DiscreteMeasure,
    taus=None,
    window=None,
    predict: dict | None = None,
    smooth_octaves: float = 0.5,
    noise_factor: float = 10.0,
    kernel_work: int = KERNEL_WORK_PER_ROW,
    table: ADecayTable | None = None,
) -> ADecayResult:
    """Fit A(tau) ~ tau^(-beta) and report beta next to a closed-form prediction.

    For an i.i.d. sampled mu2 every pinned transform carries the diagonal
    sum w_j^2; it is removed, A -> (A - c) / (1 - c).  The values are then
    averaged over +-smooth_octaves, and the fit keeps the taus where the
    smoothed value stays above noise_factor * c / sqrt(|mu1|), the size of
    the remaining sampling fluctuation.  ``predict`` takes keys u, theta1,
    gamma, d for beta_gamma.
    """
    taus = tau_grid() if taus is None else np.asarray(taus, dtype=float)
    if taus.size < 3 or np.any(np.diff(taus) <= 0) or taus[-1] < 4 * taus[0]:
        raise WindowError("tau grid must be increasing and span at least 2 octaves")
    table = table or a_decay_table(mu1, mu2, taus, kernel_work)
    vals = table.a_avg.copy()
    debias = bool(mu2.iid and mu2.n_atoms > 1)
    floor = 0.0
    if debias:
        c = mu2.collision_mass()
        vals = (vals - c) / (1.0 - c)
        floor = noise_factor * c / math.sqrt(mu1.n_atoms)
    lt = np.log(taus)
    h = smooth_octaves * math.log(2.0)
    smoothed = np.array([vals[np.abs(lt - x) <= h + 1e-12].mean() for x in lt])
    lo, hi = (taus[0], taus[-1]) if window is None else window
    inside = (taus >= lo) & (taus <= hi) & (lt - h >= lt[0] - 1e-12) & (lt + h <= lt[-1] + 1e-12)
    if floor > 0:
        above = inside & (smoothed > floor)
        if not above.any():
            raise WindowError("A(tau) is below the sampling noise floor everywhere")
        inside &= taus <= taus[np.flatnonzero(above)[-1]]
    if np.ptp(smoothed[inside]) == 0 if inside.any() else False:
        fit = DecayFit(0.0, float(np.log(smoothed[inside][0])), float(taus[inside][0]), float(taus[inside][-1]), int(inside.sum()), 0.0)
    else:
        fit = fit_decay(np.column_stack([taus[inside], smoothed[inside]]))
    pred = None
    if predict:
        pred = beta_gamma(predict["u"], predict["theta1"], predict["gamma"], predict["d"])
    return ADecayResult(fit, pred, table, smoothed, (float(fit.r_min), float(fit.r_max)), debias)


def resonant_decay(mu1, mu2, base: float, tau_min: float, tau_max: float):
    """Decay of A along tau = base^k, where lattice-like measures may resonate.

    Returns (exponent, taus, values); values are debiased as in a_decay_fit.
    """
    k0 = math.ceil(math.log(tau_min, base) - 1e-12)
    k1 = math.floor(math.log(tau_max, base) + 1e-12)
    taus = base ** np.arange(k0, k1 + 1, dtype=float)
    if taus.size < 3:
        raise WindowError("fewer than 3 resonant taus in range")
    vals = np.array([A_tau(mu1, mu2, t, kernel=False)[0] for t in taus])
    if mu2.iid and mu2.n_atoms > 1:
        c = mu2.collision_mass()
        vals = (vals - c) / (1.0 - c)
    pts = np.column_stack([taus, vals])
    return fit_decay(pts).exponent, taus, vals

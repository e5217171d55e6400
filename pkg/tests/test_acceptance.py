"""Acceptance criteria, one test each. Every test prints a PASS/FAIL line."""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from distspec import measure as M
from distspec.cli import main as cli_main
from distspec.distance import a_decay_table, tau_grid
from distspec.experiments import (run_a_decay, run_brownian_salem, run_energy_equivalence, run_identity_suite,
                                  run_sharpness_cantor, run_sharpness_spheres, run_spectrum_profile)
from distspec.spectrum import SweepConfig, check_profile_shape, estimate_fourier_dim, estimate_spectrum_profile
from distspec.thresholds import (BetaInputs, beta_cor_half, beta_cormain, beta_cormain_piecewise, beta_thm,
                                 emit_threshold_table, t_conj, t_lower, t_proved, transition_points)

CIRCLE_CFG = SweepConfig(r_min=4, r_max=128, n_dirs=32, max_radial=16, seed=42)
QUARTERS = (0.0, 0.25, 0.5, 0.75, 1.0)


@pytest.fixture
def report(capsys):
    """Print one verdict line outside pytest's capture, then assert."""

    def _report(n, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {title} {detail}".rstrip())
        assert ok, f"criterion {n} failed: {detail}"

    return _report


@pytest.fixture(scope="module")
def calibration_profiles():
    circle = M.make_sphere_measure(2, 10_000, seed=1)
    return {
        "circle": estimate_spectrum_profile(circle, QUARTERS, CIRCLE_CFG),
        "cantor": estimate_spectrum_profile(M.make_cantor_measure(0.333333, 12), np.arange(9) / 8),
        "dirac": estimate_spectrum_profile(M.dirac([0.3, -0.2]), QUARTERS),
    }


def test_criterion_01_identity_suite(report):
    t0 = time.perf_counter()
    rep = run_identity_suite(seed=42, trials=200)
    dt = time.perf_counter() - t0
    worst = max(v for k, v in rep.metrics.items() if k.startswith("max_dev_"))
    ok = rep.verdict == "PASS" and worst <= 1e-10 and dt <= 60
    report(1, "identity suite", ok, f"(max deviation {worst:.2e}, {dt:.1f}s)")


def test_criterion_02_threshold_figures(report):
    def row(points, theta):
        return next(p for p in points if abs(p.theta - theta) < 1e-15)

    p9 = emit_threshold_table(9, 512)
    p40 = emit_threshold_table(40, 512)
    flat = [p.t_proved for p in p9 if 1 / 9 <= p.theta < 1 / 3]
    checks = [
        abs(row(p9, 0.5).t_proved - 3.25),
        max(abs(v - 3.0) for v in flat),
        abs(row(p9, 1.0).t_conj - 4.5),
        abs(t_conj(1 / math.sqrt(9), 9) - 13 / 6),
        abs(row(p9, 1 / 3).t_conj - 13 / 6),
        abs(row(p40, 1.0).t_proved - 21.0),
        abs(row(p40, 1.0).t_conj - 20.0),
    ]
    report(2, "threshold figures", max(checks) <= 1e-12 and len(flat) > 100, f"(max error {max(checks):.1e})")


def test_criterion_03_branch_identities(report):
    gaps = []
    # beta(u) at u = d theta1 from both sides
    for d in range(2, 21):
        for t1 in np.linspace(0.05, 1.0, 20):
            for v in np.linspace(0.1, d, 7):
                for t2 in (0.0, 0.3, 1.0):
                    inp = BetaInputs(d * t1, t1, t2, v, d)
                    a = inp.a
                    left = (inp.u + 2 * t1 * a - d * t1) / 2
                    gaps.append(abs(left - beta_thm(inp)))
    # T_d at its transitions: left branch formula at the point equals the value there
    for d in range(4, 51):
        t1, t2, t3 = transition_points(d)
        gaps.append(abs((2 + d * t1) - t_proved(t1, d)))
        gaps.append(abs(math.sqrt(d) - t_proved(t2, d)))
        gaps.append(abs((2 + d * t3) / (1 + 2 * t3) - t_proved(t3, d)))
    # half-half specialization on a 100 x 100 grid
    for d in (4, 7, 10):
        for u in np.linspace(0, d / 2, 100):
            for v in np.linspace(0, d / 2, 100):
                gaps.append(abs(beta_cor_half(u, v, d) - beta_thm(BetaInputs(u, 0.5, 0.5, v, d))))
    # piecewise form on 10^4 points with 0 < theta < 1/2
    for s in np.linspace(0, 6, 100):
        for th in np.linspace(0.0025, 0.4975, 100):
            gaps.append(abs(beta_cormain(s, th, 6) - beta_cormain_piecewise(s, th, 6)))
    worst = max(gaps)
    report(3, "branch and specialization identities", worst <= 1e-12, f"(max gap {worst:.1e} over {len(gaps)})")


def test_criterion_04_ordering(report):
    grid = np.linspace(0, 1, 512)
    bad = [(d, th) for d in range(4, 51) for th in grid
           if not t_lower(th, d) <= t_conj(th, d) <= t_proved(th, d)]
    report(4, "t_lower <= t_conj <= t_proved", not bad, f"({len(bad)} violations)")


def test_criterion_05_sharpness_spheres(report):
    t0 = time.perf_counter()
    details, ok = [], True
    for d in (4, 5, 6):
        rep = run_sharpness_spheres(d=d, n=2000, seed=42)
        m = rep.metrics
        good = (m["max_distance_deviation"] <= 1e-12 and m["distance_box_dim"] <= 0.05
                and abs(m["sum_minus_half_d"]) <= 0.3)
        ok &= good
        details.append(f"d={d}: u+v-d/2={m['sum_minus_half_d']:+.3f}")
    dt = time.perf_counter() - t0
    report(5, "sharpness spheres", ok and dt <= 120, f"({'; '.join(details)}; {dt:.1f}s)")


def test_criterion_06_sharpness_cantor(report):
    t0 = time.perf_counter()
    rep = run_sharpness_cantor(k1=2, k2=2, alpha=0.3, depth=6, seed=42)
    dt = time.perf_counter() - t0
    m = rep.metrics
    ok = m["reconstruction_error"] <= 1e-10 and m["distance_box_dim"] <= 0.7 and dt <= 120
    report(6, "sharpness Cantor", ok,
           f"(error {m['reconstruction_error']:.1e}, box {m['distance_box_dim']:.3f}, {dt:.1f}s)")


def test_criterion_07_calibration(report, calibration_profiles):
    t0 = time.perf_counter()
    circle = M.make_sphere_measure(2, 10_000, seed=1)
    s_circle, _ = estimate_fourier_dim(circle, CIRCLE_CFG)
    cp = calibration_profiles["circle"].values
    cantor = calibration_profiles["cantor"]
    dt = time.perf_counter() - t0
    ok = (0.8 <= s_circle <= 1.2 and np.ptp(cp) <= 0.25 and 0.48 <= cantor.at(1.0) <= 0.78
          and cantor.at(0.0) <= 0.15 and dt <= 180)
    report(7, "calibration estimators", ok,
           f"(circle {s_circle:.3f}, circle spread {np.ptp(cp):.3f}, Cantor theta=1 {cantor.at(1.0):.3f}, "
           f"theta=0 {cantor.at(0.0):.3f})")


def test_criterion_08_profile_shape(report, calibration_profiles):
    failing = [k for k, p in calibration_profiles.items() if not check_profile_shape(p, 0.25).passed]
    report(8, "monotone and midpoint-concave profiles", not failing,
           f"({len(calibration_profiles)} profiles, failing: {failing or 'none'})")


def test_criterion_09_energy_equivalence(report):
    rep = run_energy_equivalence(s_list=(1.0,), seed=42)
    spread = rep.metrics["spread_s1"]
    report(9, "energy ratio stability", spread <= 0.15 and rep.verdict == "PASS", f"(spread {spread:.3f})")


def test_criterion_10_a_decay(report):
    t0 = time.perf_counter()
    rep = run_a_decay("sphere(k=3,n=1000)", "sphere(k=3,n=4000)", 1.0, 64.0, seed=42)
    ctrl = run_a_decay("dirac(0,0,0)", "dirac(0,0,0)", 1.0, 64.0, seed=42)
    mu1 = M.make_sphere_measure(3, 150, seed=3)
    mu2 = M.make_sphere_measure(3, 150, seed=4)
    gap = a_decay_table(mu1, mu2, tau_grid(1, 64, 2)).max_form_gap
    dt = time.perf_counter() - t0
    fit, c = rep.metrics["fitted_exponent"], ctrl.metrics["fitted_exponent"]
    ok = fit >= 0.8 and c == 0.0 and gap <= 1e-10 and dt <= 120
    report(10, "A(tau) decay", ok, f"(sphere {fit:.3f}, dirac {c}, form gap {gap:.1e}, {dt:.1f}s)")


def test_criterion_11_brownian_salem(report):
    rep = run_brownian_salem(s=0.4, d=2, seeds=tuple(range(10)))
    med, box = rep.metrics["median_fourier_dim"], rep.metrics["max_distance_box_dim"]
    report(11, "Brownian Salem", 0.15 <= med <= 0.65 and box <= 0.95, f"(median dim_F {med:.3f}, box {box:.3f})")


def _suite(out: Path):
    run_identity_suite(seed=42, trials=20, out_dir=out / "identity", figures=False)
    run_sharpness_spheres(d=4, n=500, seed=42, out_dir=out / "spheres", figures=False)
    run_sharpness_cantor(depth=4, seed=42, out_dir=out / "cantor", figures=False)
    run_brownian_salem(seeds=(0, 1), depth=7, out_dir=out / "brownian", figures=False)
    run_a_decay("sphere(k=3,n=500)", "sphere(k=3,n=2000)", tau_max=32, per_octave=4, seed=42, out_dir=out / "adecay", figures=False)
    run_energy_equivalence(specs=("uniform(d=2,n=500)", "ball(d=2,n=500)"), out_dir=out / "energy", figures=False)
    run_spectrum_profile(thetas=5, out_dir=out / "profile", figures=False)
    assert cli_main(["thresholds", "table", "--d", "9", "--out", str(out / "thr"), "--no-figures"]) == 0


def test_criterion_12_determinism(report, tmp_path, capsys):
    _suite(tmp_path / "a")
    _suite(tmp_path / "b")
    capsys.readouterr()
    files = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*")
                   if p.is_file() and p.suffix in (".csv", ".json"))
    diff = [str(f) for f in files if (tmp_path / "a" / f).read_bytes() != (tmp_path / "b" / f).read_bytes()]
    exts = {f.suffix for f in files}
    report(12, "byte-identical artifacts", not diff and exts == {".csv", ".json"},
           f"({len(files)} files compared, differing: {diff or 'none'})")

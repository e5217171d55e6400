"""Command-line front end.

Every command prints a short human summary.  With ``--out DIR`` the command
also writes its tables (CSV), charts (SVG, plus PNG unless ``--no-figures``)
and a JSON report into DIR.  ``--json`` prints the JSON report to standard
output instead of the summary.

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 a check or
experiment that ran but failed one of its assertions.
"""

from __future__ import annotations

import argparse
import ast
import inspect
import json
import sys

import numpy as np

from . import _parallel
from .boxdim import box_dim_estimate, resolution_grid
from .distance import A_tau, distance_set, pinned_ft_direct, pinned_ft_lift
from .energy import riesz_energy, st_energy
from .experiments import (EXPERIMENTS, Artifacts, ExperimentReport, list_experiments, run_a_decay,
                          run_energy_equivalence, run_identity_suite)
from .grammar import SpecParseError, realize
from .measure import BudgetError, MeasureError
from .spectrum import SweepConfig, WindowError, check_profile_shape, estimate_fourier_dim, estimate_spectrum_profile
from .thresholds import emit_threshold_table, t_conj, t_lower, t_proved, table_to_csv, transition_points

DEFAULT_SEED = 42

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_ASSERT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="RNG seed (default 42)")
    p.add_argument("--out", default=None, help="directory for CSV / JSON / figure artifacts")
    p.add_argument("--json", action="store_true", help="print the JSON report instead of the summary")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: $SDL_THREADS or all cores)")
    p.add_argument("--no-figures", action="store_true", help="skip matplotlib PNG figures (SVG is still written)")
    return p


def _sweep_flags(p):
    p.add_argument("--r-max", type=float, default=None)
    p.add_argument("--n-dirs", type=int, default=None)
    p.add_argument("--max-radial", type=int, default=None)


def _sweep_config(args) -> SweepConfig:
    kw = {"seed": args.seed}
    if args.r_max is not None:
        kw["r_max"] = args.r_max
    if args.n_dirs is not None:
        kw["n_dirs"] = args.n_dirs
    if args.max_radial is not None:
        kw["max_radial"] = args.max_radial
    return SweepConfig(**kw)


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    root = _Parser(prog="distspec", description="Fourier spectra, energies and distance sets of atomic measures.")
    top = root.add_subparsers(dest="group", required=True, parser_class=_Parser)

    g = top.add_parser("measure", help="build measures from spec strings").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = g.add_parser("emit", parents=[common], help="realize a measure spec as CSV")
    p.add_argument("--measure", required=True)

    g = top.add_parser("spectrum", help="Fourier dimension and spectrum estimates").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = g.add_parser("profile", parents=[common], help="estimate theta -> dim_F^theta")
    p.add_argument("--measure", required=True)
    p.add_argument("--thetas", default="9", help="grid size on [0,1] or comma-separated values")
    _sweep_flags(p)
    p = g.add_parser("fourier-dim", parents=[common], help="estimate the Fourier dimension (theta = 0)")
    p.add_argument("--measure", required=True)
    _sweep_flags(p)

    g = top.add_parser("energy", help="Riesz and frequency-side energies").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = g.add_parser("riesz", parents=[common], help="real-space Riesz s-energy")
    p.add_argument("--measure", required=True)
    p.add_argument("--s", type=float, required=True)
    p = g.add_parser("st", parents=[common], help="frequency-side (s, theta) energy")
    p.add_argument("--measure", required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--theta", type=float, default=1.0)
    p.add_argument("--r-min", type=float, default=1.0)
    p.add_argument("--r-max", type=float, default=64.0)
    p.add_argument("--n-dirs", type=int, default=64)
    p = g.add_parser("equiv", parents=[common], help="real / frequency energy ratio across measures")
    p.add_argument("--measure", action="append", required=True, help="repeat for each measure")
    p.add_argument("--s", type=float, required=True)

    g = top.add_parser("distance", help="distance sets, pinned transforms and A(tau)").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = g.add_parser("set", parents=[common], help="distances between two measures' supports")
    p.add_argument("--E", required=True)
    p.add_argument("--F", default=None, help="defaults to E")
    p.add_argument("--squared", action="store_true")
    p.add_argument("--dedup-tol", type=float, default=0.0)
    p = g.add_parser("pinned", parents=[common], help="pinned distance transform at one tau, both forms")
    p.add_argument("--measure", required=True)
    p.add_argument("--pin", required=True, help="comma-separated coordinates")
    p.add_argument("--tau", type=float, required=True)
    p = g.add_parser("a-tau", parents=[common], help="A(tau) in average and kernel form")
    p.add_argument("--mu1", required=True)
    p.add_argument("--mu2", required=True)
    p.add_argument("--tau", type=float, required=True)
    p = g.add_parser("a-decay", parents=[common], help="fit the decay of A(tau)")
    p.add_argument("--mu1", required=True)
    p.add_argument("--mu2", required=True)
    p.add_argument("--tau-min", type=float, default=1.0)
    p.add_argument("--tau-max", type=float, default=64.0)
    p.add_argument("--per-octave", type=int, default=8)
    p.add_argument("--u", type=float, default=None, help="dim_F of mu2 for the predicted exponent")
    p.add_argument("--theta1", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--resonance-base", type=float, default=None)

    p = top.add_parser("boxdim", parents=[common], help="box-counting dimension of a measure's support")
    p.add_argument("--measure", required=True)
    p.add_argument("--eps-max", type=float, default=None, help="largest box (default: diameter / 4)")
    p.add_argument("--n-eps", type=int, default=6)

    g = top.add_parser("thresholds", help="closed-form threshold curves").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = g.add_parser("table", parents=[common], help="threshold curves on [0, 1]")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--grid", type=int, default=512)
    p = g.add_parser("eval", parents=[common], help="threshold curves at given thetas")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--theta", required=True, help="comma-separated values in [0, 1]")

    g = top.add_parser("experiment", help="named experiments with verdicts").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = g.add_parser("run", parents=[common], help="run a named experiment")
    p.add_argument("name", choices=list_experiments())
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    g.add_parser("list", parents=[common], help="list experiment names")

    g = top.add_parser("identity", help="exact identity checks").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = g.add_parser("check", parents=[common], help="exact Fourier identities on random measures")
    p.add_argument("--trials", type=int, default=200)
    return root


# ------------------------------------------------------------------ commands


def _measure(spec: str, seed: int):
    return realize(spec, seed=seed)


def _report(args, name, params) -> tuple[ExperimentReport, Artifacts]:
    rep = ExperimentReport(name, args.seed, params)
    return rep, Artifacts(rep, args.out, not args.no_figures)


def cmd_measure_emit(args, lines):
    m = _measure(args.measure, args.seed)
    rep, art = _report(args, "measure-emit", {"measure": args.measure})
    rep.metric("n_atoms", m.n_atoms)
    rep.metric("ambient_dim", m.ambient_dim)
    rep.metric("diameter", m.diameter)
    art.text("measure.csv", m.to_csv())
    lines.append(f"{m.label}: {m.n_atoms} atoms in R^{m.ambient_dim}, diameter {m.diameter:.6g}")
    return rep, art


def _theta_grid(text):
    if "," in text or "." in text:
        return np.array(_floats(text))
    try:
        n = int(text)
    except ValueError:
        raise UsageError(f"--thetas: expected a count or a list, got {text!r}") from None
    if n < 1:
        raise UsageError("--thetas needs at least one point")
    return np.linspace(0.0, 1.0, n) if n > 1 else np.zeros(1)


def cmd_spectrum_profile(args, lines):
    m = _measure(args.measure, args.seed)
    thetas = _theta_grid(args.thetas)
    prof = estimate_spectrum_profile(m, thetas, _sweep_config(args))
    rep, art = _report(args, "spectrum-profile", {"measure": args.measure, "thetas": [float(t) for t in thetas]})
    for t, v in zip(prof.thetas, prof.values):
        rep.metric(f"s_{t:.4f}", v)
        lines.append(f"theta={t:.4f}  s_est={v:.4f}")
    if thetas.size >= 3:
        shape = check_profile_shape(prof)
        rep.metric("shape_violations", len(shape.violations))
        lines.append("shape: " + ("monotone and concave" if shape.passed else f"{len(shape.violations)} violation(s)"))
    art.text("profile.csv", prof.to_csv())
    art.chart("profile", [("estimate", prof.thetas, prof.values)], title=f"spectrum of {args.measure}",
              xlabel="theta", ylabel="dim_F^theta estimate")
    return rep, art


def cmd_spectrum_fourier_dim(args, lines):
    m = _measure(args.measure, args.seed)
    s, fit = estimate_fourier_dim(m, _sweep_config(args))
    rep, art = _report(args, "spectrum-fourier-dim", {"measure": args.measure})
    rep.metric("dim_F", s)
    rep.metric("window_lo", fit.r_min)
    rep.metric("window_hi", fit.r_max)
    lines.append(f"dim_F estimate {s:.4f} (window [{fit.r_min:.4g}, {fit.r_max:.4g}])")
    return rep, art


def _energy_metrics(rep, e):
    rep.metric("value", None if e.infinite else e.value)
    rep.metric("infinite", float(e.infinite))
    rep.params["method"] = e.method


def cmd_energy_riesz(args, lines):
    e = riesz_energy(_measure(args.measure, args.seed), args.s)
    rep, art = _report(args, "energy-riesz", {"measure": args.measure, "s": args.s})
    _energy_metrics(rep, e)
    art.text("energy.json", e.to_json() + "\n")
    lines.append("I_s = inf (coincident atoms)" if e.infinite else f"I_s = {e.value:.10g}")
    return rep, art


def cmd_energy_st(args, lines):
    m = _measure(args.measure, args.seed)
    e = st_energy(m, args.s, args.theta, r_min=args.r_min, r_max=args.r_max, n_dirs=args.n_dirs, seed=args.seed)
    rep, art = _report(args, "energy-st", {"measure": args.measure, "s": args.s, "theta": args.theta})
    _energy_metrics(rep, e)
    rep.metric("tail_slope", e.tail_slope)
    art.text("energy.json", e.to_json() + "\n")
    lines.append(f"I_(s,theta) = {e.value:.10g} on [{e.r_min:g}, {e.r_max:g}]")
    return rep, art


def cmd_energy_equiv(args, lines):
    rep = run_energy_equivalence(tuple(args.measure), (args.s,), seed=args.seed, out_dir=args.out,
                                 figures=not args.no_figures)
    _summarize_experiment(rep, lines)
    return rep, None


def cmd_distance_set(args, lines):
    E = _measure(args.E, args.seed)
    F = E if args.F is None else _measure(args.F, args.seed + 1)
    D = distance_set(E, F, squared=args.squared, dedup_tol=args.dedup_tol)
    rep, art = _report(args, "distance-set", {"E": args.E, "F": args.F, "squared": args.squared})
    rep.metric("count", D.values.size)
    rep.metric("min", D.values.min())
    rep.metric("max", D.values.max())
    art.text("distances.csv", D.to_csv())
    art.text("distances.meta.json", D.sidecar_json() + "\n")
    lines.append(f"{D.values.size} distinct values in [{D.values.min():.10g}, {D.values.max():.10g}]")
    return rep, art


def cmd_distance_pinned(args, lines):
    m = _measure(args.measure, args.seed)
    x = np.array(_floats(args.pin))
    direct = pinned_ft_direct(x, m, args.tau)
    lifted = pinned_ft_lift(x, m, args.tau)
    rep, art = _report(args, "distance-pinned", {"measure": args.measure, "pin": x.tolist(), "tau": args.tau})
    for key, v in (("direct", direct), ("lift", lifted)):
        rep.metric(f"{key}_re", v.real)
        rep.metric(f"{key}_im", v.imag)
    rep.metric("deviation", abs(direct - lifted))
    lines.append(f"direct {direct:.12g}\nlift   {lifted:.12g}\n|diff| {abs(direct - lifted):.3g}")
    return rep, art


def cmd_distance_a_tau(args, lines):
    mu1 = _measure(args.mu1, args.seed)
    mu2 = _measure(args.mu2, args.seed + 1)
    a_avg, a_ker = A_tau(mu1, mu2, args.tau)
    rep, art = _report(args, "distance-a-tau", {"mu1": args.mu1, "mu2": args.mu2, "tau": args.tau})
    rep.metric("A_avg", a_avg)
    rep.metric("A_kernel", a_ker)
    lines.append(f"A_avg {a_avg:.15g}\nA_kernel {a_ker:.15g}")
    return rep, art


def cmd_distance_a_decay(args, lines):
    rep = run_a_decay(args.mu1, args.mu2, tau_min=args.tau_min, tau_max=args.tau_max, per_octave=args.per_octave,
                      seed=args.seed, u=args.u, theta1=args.theta1, gamma=args.gamma,
                      resonance_base=args.resonance_base, out_dir=args.out, figures=not args.no_figures)
    _summarize_experiment(rep, lines)
    return rep, None


def cmd_boxdim(args, lines):
    m = _measure(args.measure, args.seed)
    pts = m.positions
    eps_max = args.eps_max or (m.diameter / 4 if m.diameter > 0 else 1.0)
    # one axis is enough for the resolution floor of a 1-D set
    grid = resolution_grid(pts[:, 0] if m.ambient_dim == 1 else np.linalg.norm(pts, axis=1), eps_max, args.n_eps)
    dim, curve = box_dim_estimate(pts, grid)
    rep, art = _report(args, "boxdim", {"measure": args.measure, "eps_max": eps_max, "n_eps": args.n_eps})
    rep.metric("box_dim", dim)
    art.text("boxcount.csv", curve.to_csv())
    art.chart("boxcount", [("N(eps)", 1.0 / curve.epsilon, curve.count)], title=f"box counts of {args.measure}",
              xlabel="1/eps", ylabel="N(eps)", logx=True, logy=True)
    lines.append(f"box dimension {dim:.4f} from {len(grid)} scales")
    return rep, art


def cmd_thresholds_table(args, lines):
    pts = emit_threshold_table(args.d, args.grid)
    rep, art = _report(args, "thresholds-table", {"d": args.d, "grid": args.grid})
    th = [p.theta for p in pts]
    rep.metric("n_rows", len(pts))
    rep.metric("all_ordered", float(all(p.ordered for p in pts)))
    art.text(f"thresholds_d{args.d}.csv", table_to_csv(pts))
    series = [("proved", th, [p.t_proved for p in pts]), ("conjectured", th, [p.t_conj for p in pts]),
              ("lower", th, [p.lower for p in pts])]
    markers = [t for t in transition_points(args.d) if 0 <= t <= 1]
    art.chart(f"thresholds_d{args.d}", series, title=f"distance-set thresholds, d={args.d}",
              xlabel="theta", ylabel="threshold", markers=markers)
    lines.append(f"{len(pts)} rows for d={args.d}; transitions at " + ", ".join(f"{t:.6g}" for t in markers))
    if args.d < 4:
        lines.append("note: d < 4 lies outside the range where the proved curve is claimed")
    return rep, art


def cmd_thresholds_eval(args, lines):
    rep, art = _report(args, "thresholds-eval", {"d": args.d, "theta": _floats(args.theta)})
    for t in _floats(args.theta):
        if not 0 <= t <= 1:
            raise UsageError(f"theta {t} outside [0, 1]")
        vals = (t_proved(t, args.d), t_conj(t, args.d), t_lower(t, args.d))
        for key, v in zip(("t_proved", "t_conj", "t_lower"), vals):
            rep.metric(f"{key}_{t:g}", v)
        lines.append(f"theta={t:.17g}  proved={vals[0]:.17g}  conj={vals[1]:.17g}  lower={vals[2]:.17g}")
    return rep, art


def _param_value(text):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def cmd_experiment_run(args, lines):
    fn = EXPERIMENTS[args.name]
    sig = inspect.signature(fn)
    kw = {}
    for item in args.param:
        key, sep, val = item.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in sig.parameters or key in ("seed", "out_dir", "figures"):
            raise UsageError(f"unknown or malformed parameter {item!r} for {args.name}")
        kw[key] = _param_value(val.strip())
    if "seed" in sig.parameters:
        kw["seed"] = args.seed
    rep = fn(out_dir=args.out, figures=not args.no_figures, **kw)
    _summarize_experiment(rep, lines)
    return rep, None


def cmd_experiment_list(args, lines):
    lines.extend(list_experiments())
    rep = ExperimentReport("experiment-list", args.seed, {"names": list_experiments()})
    return rep, None


def cmd_identity_check(args, lines):
    rep = run_identity_suite(seed=args.seed, trials=args.trials, out_dir=args.out, figures=not args.no_figures)
    _summarize_experiment(rep, lines)
    return rep, None


def _summarize_experiment(rep, lines):
    lines.append(f"{rep.name}: {rep.verdict}")
    for k, v in rep.metrics.items():
        lines.append(f"  {k} = {'n/a' if v is None else f'{v:.6g}'}")
    bad = rep.first_failure
    if bad:
        lines.append(f"  first failure: {bad['label']}: {bad['lhs']} {bad['op']} {bad['rhs']} is false")
    lines.extend(f"  note: {n}" for n in rep.notes)


COMMANDS = {
    ("measure", "emit"): cmd_measure_emit,
    ("spectrum", "profile"): cmd_spectrum_profile,
    ("spectrum", "fourier-dim"): cmd_spectrum_fourier_dim,
    ("energy", "riesz"): cmd_energy_riesz,
    ("energy", "st"): cmd_energy_st,
    ("energy", "equiv"): cmd_energy_equiv,
    ("distance", "set"): cmd_distance_set,
    ("distance", "pinned"): cmd_distance_pinned,
    ("distance", "a-tau"): cmd_distance_a_tau,
    ("distance", "a-decay"): cmd_distance_a_decay,
    ("boxdim", None): cmd_boxdim,
    ("thresholds", "table"): cmd_thresholds_table,
    ("thresholds", "eval"): cmd_thresholds_eval,
    ("experiment", "run"): cmd_experiment_run,
    ("experiment", "list"): cmd_experiment_list,
    ("identity", "check"): cmd_identity_check,
}

# commands whose verdict decides the exit status
_CHECKS = {("experiment", "run"), ("identity", "check"), ("distance", "a-decay"), ("energy", "equiv")}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    key = (args.group, getattr(args, "cmd", None))
    if args.threads is not None and args.threads < 1:
        print("--threads must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    _parallel.set_threads(args.threads)
    lines: list[str] = []
    try:
        rep, art = COMMANDS[key](args, lines)
        if art is not None:
            art.report_json()
    except (UsageError, SpecParseError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (WindowError, BudgetError, ArithmeticError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (MeasureError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        _parallel.set_threads(None)
    if args.json:
        sys.stdout.write(json.dumps(rep.to_dict(), indent=2) + "\n")
    else:
        print("\n".join(lines))
    if key in _CHECKS and rep.verdict == "FAIL":
        return EXIT_ASSERT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

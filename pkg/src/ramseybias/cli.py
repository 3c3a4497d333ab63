"""Command-line front end.

Subcommands: ``init`` (emit a commented default configuration),
``spectrum``/``baseline`` (sweep a scheme or the cw reference, write a CSV
curve and a key/value metrics report), ``optimize`` (grid search over the
duration parameters, write a trace CSV and summary) and ``validate`` (run
the cross-check suite).

Exit codes: 0 success, 2 configuration error, 3 domain error, 4 infeasible
optimization, 5 validation failure. Output files are written atomically
(temporary file plus rename) and are byte-identical for identical
configuration and seed. Reported metrics are computed on the values as
printed, so re-reading a CSV reproduces them exactly.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .averaging import AveragingParams, McConfig
from .config import RunConfig, TEMPLATE, load_config
from .errors import ConfigError, DomainError, InfeasibleError, MetricsError
from .optimizer import ObjectiveConfig, SearchSpace, optimize, seed_points
from .spectroscopy import Spectrum, SpectrumMetrics, metrics, sweep_refined
from .units import RAD_PER_GHZ, to_ghz, to_mhz, to_ns
from .validation import run_validation


def _atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    os.replace(tmp, path)


def _fmt(value: float) -> str:
    return f"{value:.9g}"


def _quantize(values) -> np.ndarray:
    """Round to the printed 9-significant-digit representation."""
    return np.array([float(_fmt(v)) for v in np.asarray(values, dtype=float)])


def _quantized_spectrum(spec: Spectrum) -> tuple[Spectrum, np.ndarray]:
    """Spectrum rounded to printed precision, plus its GHz column."""
    ghz_vals = _quantize(to_ghz(spec.omega))
    p_vals = _quantize(spec.p_e)
    quantized = Spectrum(ghz_vals * RAD_PER_GHZ, p_vals, spec.scheme_tag,
                         spec.params_snapshot)
    return quantized, ghz_vals


def _spectrum_csv(ghz_vals: np.ndarray, p_vals: np.ndarray) -> str:
    lines = ["omega_ghz,p_e"]
    lines.extend(f"{_fmt(g)},{_fmt(p)}" for g, p in zip(ghz_vals, p_vals))
    return "\n".join(lines) + "\n"


def _metrics_report(tag: str, cfg: RunConfig, m: SpectrumMetrics) -> str:
    lines = [f"scheme = {tag}"]
    if cfg.s is not None and tag != "cw":
        lines.append(f"s_ns = {_fmt(to_ns(cfg.s))}")
        lines.append(f"r = {_fmt(cfg.ratio_r)}")
    lines.append(f"peak_ghz = {_fmt(to_ghz(m.peak_omega))}")
    lines.append(f"peak_value = {_fmt(m.peak_value)}")
    lines.append(f"fwhm_mhz = {_fmt(to_mhz(m.fwhm))}")
    if m.shift_vs_ref is not None:
        lines.append(f"baseline_peak_ghz = "
                     f"{_fmt(to_ghz(m.peak_omega - m.shift_vs_ref))}")
        lines.append(f"shift_vs_baseline_mhz = {_fmt(to_mhz(m.shift_vs_ref))}")
    lines.append(f"fringe_count = {len(m.fringes)}")
    for idx, (w, height) in enumerate(m.fringes, start=1):
        lines.append(f"fringe_{idx}_ghz = {_fmt(to_ghz(w))}")
        lines.append(f"fringe_{idx}_height = {_fmt(height)}")
    return "\n".join(lines) + "\n"


def _averaging_for(cfg: RunConfig, scheme: str) -> AveragingParams | None:
    if scheme == "cw":
        return None
    if cfg.s is None or cfg.ratio_r is None:
        raise ConfigError("[averaging] s, r: required for schemes other than cw")
    base = "general" if scheme.startswith("general") else scheme
    return AveragingParams(cfg.s, cfg.ratio_r, base)


def _sweep_command(cfg: RunConfig, scheme: str, out_dir: str, threads: int,
                   csv_name: str, report_name: str) -> int:
    avg = _averaging_for(cfg, scheme)
    spec = sweep_refined(scheme, cfg.transmon, cfg.eta, cfg.omega_min,
                         cfg.omega_max, cfg.coarse_step, cfg.refine_step, avg,
                         cw_amplitude=cfg.cw_amplitude, threads=threads)
    spec, ghz_vals = _quantized_spectrum(spec)

    reference = None
    if cfg.baseline_shift and scheme != "cw":
        base = sweep_refined("cw", cfg.transmon, cfg.eta, cfg.omega_min,
                             cfg.omega_max, cfg.coarse_step, cfg.refine_step,
                             cw_amplitude=cfg.cw_amplitude, threads=threads)
        reference, _ = _quantized_spectrum(base)
    m = metrics(spec, reference=reference)

    csv_path = os.path.join(out_dir, csv_name)
    report_path = os.path.join(out_dir, report_name)
    _atomic_write(csv_path, _spectrum_csv(ghz_vals, spec.p_e))
    _atomic_write(report_path, _metrics_report(scheme, cfg, m))
    print(f"wrote {csv_path} ({len(spec)} points) and {report_path}")
    print(f"peak {to_ghz(m.peak_omega):.6f} GHz  value {m.peak_value:.4f}  "
          f"fwhm {to_mhz(m.fwhm):.2f} MHz")
    return 0


def cmd_spectrum(cfg: RunConfig, out_dir: str, threads: int) -> int:
    return _sweep_command(cfg, cfg.scheme, out_dir, threads,
                          "spectrum.csv", "metrics.txt")


def cmd_baseline(cfg: RunConfig, out_dir: str, threads: int) -> int:
    return _sweep_command(cfg, "cw", out_dir, threads,
                          "baseline.csv", "baseline_metrics.txt")


def cmd_optimize(cfg: RunConfig, out_dir: str, threads: int) -> int:
    if cfg.r_values is None or (cfg.k_values is None and cfg.s_values is None):
        raise ConfigError(
            "[optimizer] k_values (or s_values_ns) and r_values are required")
    s_grid: list[float] = []
    if cfg.k_values:
        s_grid.extend(seed_points(cfg.eta, list(cfg.k_values)))
    if cfg.s_values:
        s_grid.extend(cfg.s_values)
    space = SearchSpace(tuple(s_grid), tuple(cfg.r_values), cfg.scheme)
    objective = ObjectiveConfig(p_min=cfg.p_min, shift_max=cfg.shift_max)

    trace_path = os.path.join(out_dir, "optimize_trace.csv")
    summary_path = os.path.join(out_dir, "optimize_summary.txt")

    def row(pt, on_front: bool) -> str:
        if pt.metrics is None:
            return f"{_fmt(to_ns(pt.s))},{_fmt(pt.ratio_r)},nan,nan,nan,false"
        m = pt.metrics
        return (f"{_fmt(to_ns(pt.s))},{_fmt(pt.ratio_r)},"
                f"{_fmt(to_ghz(m.peak_omega))},{_fmt(m.peak_value)},"
                f"{_fmt(to_mhz(m.fwhm))},{'true' if on_front else 'false'}")

    try:
        result = optimize(space, cfg.transmon, cfg.eta, cfg.omega_min,
                          cfg.omega_max, cfg.coarse_step, cfg.refine_step,
                          objective, cw_amplitude=cfg.cw_amplitude,
                          threads=threads)
    except InfeasibleError as exc:
        lines = ["status = infeasible", f"reason = {exc}"]
        pt = exc.best_peak_point
        if pt is not None:
            lines.append("# best-peak point for diagnosis")
            lines.append(f"best_peak_s_ns = {_fmt(to_ns(pt.s))}")
            lines.append(f"best_peak_r = {_fmt(pt.ratio_r)}")
            lines.append(f"best_peak_value = {_fmt(pt.metrics.peak_value)}")
            lines.append(f"best_peak_fwhm_mhz = {_fmt(to_mhz(pt.metrics.fwhm))}")
        _atomic_write(summary_path, "\n".join(lines) + "\n")
        print(f"infeasible: {exc}", file=sys.stderr)
        return 4

    front_ids = {id(pt) for pt in result.pareto_front}
    lines = ["s_ns,r,peak_ghz,peak_value,fwhm_mhz,on_pareto"]
    lines.extend(row(pt, id(pt) in front_ids) for pt in result.trace)
    _atomic_write(trace_path, "\n".join(lines) + "\n")

    best = result.best
    summary = [
        "status = ok",
        f"scheme = {cfg.scheme}",
        f"best_s_ns = {_fmt(to_ns(best.s))}",
        f"best_r = {_fmt(best.ratio_r)}",
        f"best_peak_ghz = {_fmt(to_ghz(best.metrics.peak_omega))}",
        f"best_peak_value = {_fmt(best.metrics.peak_value)}",
        f"best_fwhm_mhz = {_fmt(to_mhz(best.metrics.fwhm))}",
        f"best_shift_vs_cw_mhz = {_fmt(to_mhz(best.metrics.shift_vs_ref))}",
        f"pareto_size = {len(result.pareto_front)}",
        f"evaluated = {len(result.trace)}",
    ]
    _atomic_write(summary_path, "\n".join(summary) + "\n")
    print(f"wrote {trace_path} and {summary_path}")
    print(f"best: s = {to_ns(best.s):.4f} ns, R = {best.ratio_r:g}, "
          f"fwhm {to_mhz(best.metrics.fwhm):.2f} MHz, "
          f"peak {best.metrics.peak_value:.4f}")
    return 0


def cmd_validate(cfg: RunConfig, out_dir: str, threads: int) -> int:
    report = run_validation(cfg.transmon, cfg.eta,
                            McConfig(cfg.n_samples, cfg.seed),
                            s=cfg.s, ratio_r=cfg.ratio_r or 0.001)
    path = os.path.join(out_dir, "validation_report.txt")
    _atomic_write(path, report.render())
    print(f"wrote {path}")
    for check in report.checks:
        print(f"{'PASS' if check.passed else 'FAIL'}  {check.name}  "
              f"measured {check.measured:.3e}")
    if not report.all_passed:
        print("validation FAILED", file=sys.stderr)
        return 5
    print("validation passed")
    return 0


def cmd_init(path: str) -> int:
    _atomic_write(path, TEMPLATE)
    print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramseybias",
        description="Simulate and optimize Ramsey-biased transmon spectroscopy",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    init_p = sub.add_parser("init", help="write a commented default config")
    init_p.add_argument("path", nargs="?", default="run.cfg",
                        help="destination file (default run.cfg)")

    for name, desc in (("spectrum", "sweep the configured scheme"),
                       ("baseline", "sweep the cw reference line"),
                       ("optimize", "grid search over (s, R)"),
                       ("validate", "run the cross-check suite")):
        p = sub.add_parser(name, help=desc)
        p.add_argument("--config", required=True, help="run configuration file")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads for grid evaluation")
        p.add_argument("--seed", type=int, default=None,
                       help="override the configured sampling seed")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "init":
        return cmd_init(args.path)

    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        out_dir = args.out if args.out is not None else cfg.out_dir
        os.makedirs(out_dir, exist_ok=True)
        threads = max(1, args.threads)
        if args.command == "spectrum":
            return cmd_spectrum(cfg, out_dir, threads)
        if args.command == "baseline":
            return cmd_baseline(cfg, out_dir, threads)
        if args.command == "optimize":
            return cmd_optimize(cfg, out_dir, threads)
        if args.command == "validate":
            return cmd_validate(cfg, out_dir, threads)
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, MetricsError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()

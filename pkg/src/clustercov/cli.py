"""Command-line interface: sweeps, config validation and oracle checks.

``sweep`` evaluates coverage/ASE/EE along a parameter axis for every
scenario, variant and method of a preset (or custom config) and writes one
CSV row per combination plus a sidecar JSON with the fully resolved
configuration.  Output is byte-identical across repeated runs with the
same spec, regardless of the worker count (CLUSTERCOV_WORKERS).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import __version__
from ._accel import BACKEND
from .config import (
    ConfigError,
    PRESETS,
    SweepSpec,
    build_link,
    build_scenarios,
    build_sweep,
    load_config,
    resolve_eta,
    resolve_noise_mw,
)
from .coverage import Method, Scenario, coverage
from .mc import SimSpec, estimate_metrics
from .metrics import (
    area_spectral_efficiency,
    dbm_to_mw,
    energy_efficiency,
    rate_from_threshold,
)
from .params import FixedSize, NetworkConfig

__all__ = ["main", "run_sweep"]

_CSV_HEADER = (
    "axis_value",
    "scenario",
    "method",
    "bound_side",
    "coverage",
    "ase",
    "ee",
    "stderr",
    "seed",
    "quad_t",
    "quad_m",
)

_ANALYTIC_METHODS = {
    "exact": Method.EXACT_INTEGRAL,
    "gc": Method.GAUSS_CHEBYSHEV,
}


def _fmt(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def _apply_axis(settings: dict, axis: str, value: float) -> dict:
    merged = dict(settings)
    merged[axis] = value
    return merged


def _scenario_nodes(scen: Scenario) -> float:
    return float(scen.size_model.n) if isinstance(scen.size_model, FixedSize) else scen.size_model.mean


def _scenario_label(scen: Scenario, variant: str) -> str:
    return scen.tag() if variant == "base" else f"{scen.tag()}@{variant}"


def _curve_label(scen: Scenario, variant: str, axis: str) -> str:
    """Summary-curve name; drops the size digits when the axis sweeps them."""
    label = _scenario_label(scen, variant)
    if axis == "cluster_size":
        if isinstance(scen.size_model, FixedSize):
            label = label.replace(f"fixed-n{scen.size_model.n}", "fixed")
        else:
            label = label.replace(f"poisson-nbar{scen.size_model.mean:g}", "poisson")
    return label


def _analytic_row(
    axis_value: float,
    label: str,
    method_key: str,
    gamma_linear: float,
    scen: Scenario,
    link,
    spec: SweepSpec,
    quad,
) -> tuple:
    result = coverage(
        gamma_linear, scen, link, method=_ANALYTIC_METHODS[method_key], quad=quad
    )
    ase = area_spectral_efficiency(_scenario_nodes(scen), link.lambda_g, gamma_linear, result)
    ee = energy_efficiency(gamma_linear, link.p_x, result)
    return (
        _fmt(axis_value),
        label,
        method_key,
        result.bound_side.value,
        _fmt(result.value),
        _fmt(ase.ase),
        _fmt(ee.ee),
        "",
        str(spec.seed),
        str(spec.quad_t),
        str(spec.quad_m),
    )


def run_sweep(spec: SweepSpec, out_path: str) -> dict:
    """Execute a sweep and write CSV plus sidecar metadata atomically.

    Returns a summary dict (largest cross-method coverage gaps and, for
    cluster-size sweeps, the ASE-maximising size per curve).
    """
    settings = spec.settings
    quad = spec.quadrature()
    rows: list[tuple] = []
    # summary accumulators keyed by curve = (variant, scenario index, method);
    # the CSV rows keep the accurate per-point scenario tag instead
    cov_map: dict[tuple, float] = {}
    ase_map: dict[tuple, list[tuple[float, float]]] = {}
    curve_names: dict[tuple, str] = {}

    for variant_label, changes in spec.variants:
        base = dict(settings)
        base.update(changes)
        base_scenarios = build_scenarios(base)
        for scen_idx, base_scen in enumerate(base_scenarios):
            for method in spec.methods:
                curve = (variant_label, scen_idx, method)
                curve_names[curve] = _curve_label(base_scen, variant_label, spec.axis)
                if method == "mc" and spec.axis == "gamma_th_db":
                    rows.extend(
                        _mc_gamma_rows(spec, base, scen_idx, variant_label, cov_map, curve)
                    )
                    continue
                for axis_value in spec.grid:
                    point = _apply_axis(base, spec.axis, axis_value)
                    link = build_link(point)
                    scen = build_scenarios(point)[scen_idx]
                    label = _scenario_label(scen, variant_label)
                    gamma_linear = 10.0 ** (float(point["gamma_th_db"]) / 10.0)
                    if spec.axis == "gamma_th_db":
                        gamma_linear = 10.0 ** (axis_value / 10.0)
                    if method == "mc":
                        row = _mc_point_row(spec, point, scen, label, axis_value, gamma_linear)
                    else:
                        row = _analytic_row(
                            axis_value, label, method, gamma_linear, scen, link, spec, quad
                        )
                    rows.append(row)
                    cov_map[curve + (axis_value,)] = float(row[4])
                    ase_map.setdefault(curve, []).append((axis_value, float(row[5])))

    summary = _summarise(spec, cov_map, ase_map, curve_names)
    _write_outputs(spec, out_path, rows, summary)
    return summary


def _mc_gamma_rows(
    spec: SweepSpec,
    base: dict,
    scen_idx: int,
    variant_label: str,
    cov_map: dict,
    curve: tuple,
) -> list[tuple]:
    """One simulation serves the whole threshold grid (shared realizations)."""
    link = build_link(base)
    scen = build_scenarios(base)[scen_idx]
    label = _scenario_label(scen, variant_label)
    gammas = tuple(10.0 ** (v / 10.0) for v in spec.grid)
    sim = SimSpec(
        config=NetworkConfig(link=link, window_radius=float(base["window_radius_m"])),
        scenario=scen,
        trials=spec.trials,
        seed=spec.seed,
        gamma_grid=gammas,
        chunk_trials=spec.chunk_trials,
    )
    rows = []
    for axis_value, metric in zip(spec.grid, estimate_metrics(sim)):
        cov = metric.coverage
        rows.append(
            (
                _fmt(axis_value),
                label,
                "mc",
                cov.bound_side.value,
                _fmt(cov.value),
                _fmt(metric.ase),
                _fmt(metric.ee),
                _fmt(cov.ci_halfwidth / 1.96),
                str(spec.seed),
                str(spec.quad_t),
                str(spec.quad_m),
            )
        )
        cov_map[curve + (axis_value,)] = cov.value
    return rows


def _mc_point_row(
    spec: SweepSpec,
    point: dict,
    scen: Scenario,
    label: str,
    axis_value: float,
    gamma_linear: float,
) -> tuple:
    link = build_link(point)
    sim = SimSpec(
        config=NetworkConfig(link=link, window_radius=float(point["window_radius_m"])),
        scenario=scen,
        trials=spec.trials,
        seed=spec.seed,
        gamma_grid=(gamma_linear,),
        chunk_trials=spec.chunk_trials,
    )
    metric = estimate_metrics(sim)[0]
    cov = metric.coverage
    return (
        _fmt(axis_value),
        label,
        "mc",
        cov.bound_side.value,
        _fmt(cov.value),
        _fmt(metric.ase),
        _fmt(metric.ee),
        _fmt(cov.ci_halfwidth / 1.96),
        str(spec.seed),
        str(spec.quad_t),
        str(spec.quad_m),
    )


def _summarise(spec: SweepSpec, cov_map: dict, ase_map: dict, curve_names: dict) -> dict:
    summary: dict = {"preset": spec.preset, "axis": spec.axis}
    families = {(variant, idx) for variant, idx, _ in curve_names}
    gaps = {}
    for first, second in (("mc", "gc"), ("mc", "exact"), ("gc", "exact")):
        worst = None
        for variant, idx in families:
            for axis_value in spec.grid:
                a = cov_map.get((variant, idx, first, axis_value))
                b = cov_map.get((variant, idx, second, axis_value))
                if a is None or b is None:
                    continue
                gap = abs(a - b)
                if worst is None or gap > worst[0]:
                    worst = (gap, curve_names[(variant, idx, first)], axis_value)
        if worst is not None:
            gaps[f"{first}-vs-{second}"] = {
                "max_gap": worst[0],
                "scenario": worst[1],
                "axis_value": worst[2],
            }
    if gaps:
        summary["coverage_gaps"] = gaps
    if spec.axis == "cluster_size":
        optima = {}
        for curve, points in sorted(ase_map.items(), key=lambda kv: curve_names[kv[0]] + kv[0][2]):
            best = max(points, key=lambda item: item[1])
            optima[f"{curve_names[curve]}/{curve[2]}"] = {"n_star": best[0], "ase": best[1]}
        summary["ase_optimum"] = optima
    return summary


def _write_outputs(spec: SweepSpec, out_path: str, rows: list[tuple], summary: dict) -> None:
    meta_path = out_path + ".meta.json"
    tmp_csv = out_path + ".tmp"
    tmp_meta = meta_path + ".tmp"
    try:
        with open(tmp_csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(_CSV_HEADER)
            writer.writerows(rows)
        with open(tmp_meta, "w", encoding="utf-8") as fh:
            json.dump(_metadata(spec, summary), fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp_csv, out_path)
        os.replace(tmp_meta, meta_path)
    except BaseException:
        for path in (tmp_csv, tmp_meta):
            if os.path.exists(path):
                os.remove(path)
        raise


def _metadata(spec: SweepSpec, summary: dict) -> dict:
    settings = dict(spec.settings)
    settings["variants"] = [[label, changes] for label, changes in spec.settings["variants"]]
    tx_mw = dbm_to_mw(float(settings["tx_power_dbm"]))
    co_dbm = settings["coexist_power_dbm"]
    resolved = {
        "eta": resolve_eta(settings),
        "noise_mw": resolve_noise_mw(settings),
        "tx_power_mw": tx_mw,
        "coexist_power_mw": tx_mw if co_dbm is None else dbm_to_mw(float(co_dbm)),
        "gamma_th_linear": 10.0 ** (float(settings["gamma_th_db"]) / 10.0),
        "rate_bits_per_hz": rate_from_threshold(
            10.0 ** (float(settings["gamma_th_db"]) / 10.0)
        ),
    }
    return {
        "package_version": __version__,
        "kernel_backend": BACKEND,
        "settings": settings,
        "resolved": resolved,
        "summary": summary,
    }


def _cmd_sweep(args: argparse.Namespace) -> int:
    overrides: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            from .config import parse_config_text

            overrides = parse_config_text(fh.read())
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.methods is not None:
        overrides["methods"] = tuple(m.strip() for m in args.methods.split(","))
    if args.quad_t is not None:
        overrides["quad_t"] = args.quad_t
    if args.quad_m is not None:
        overrides["quad_m"] = args.quad_m
    _, spec = build_sweep(overrides, preset=args.preset)
    summary = run_sweep(spec, args.out)
    print(f"wrote {args.out} ({spec.preset}, axis={spec.axis}, {len(spec.grid)} points)")
    for key, gap in summary.get("coverage_gaps", {}).items():
        print(
            f"max |{key}| coverage gap: {gap['max_gap']:.3e} "
            f"({gap['scenario']} at {spec.axis}={gap['axis_value']:g})"
        )
    for label, opt in summary.get("ase_optimum", {}).items():
        print(f"ASE optimum for {label}: n*={opt['n_star']:g} (ase={opt['ase']:.3e})")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    settings, spec = load_config(args.config, preset=args.preset)
    print(f"config OK: preset={spec.preset} axis={spec.axis} points={len(spec.grid)}")
    print(f"scenarios: {', '.join(s.tag() for s in spec.scenarios)}")
    resolved = {
        "eta": resolve_eta(settings),
        "noise_mw": resolve_noise_mw(settings),
        "tx_power_mw": dbm_to_mw(float(settings["tx_power_dbm"])),
    }
    for key, value in resolved.items():
        print(f"{key} = {value!r}")
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    from .oracles import run_checks

    checks = run_checks(args.check)
    failed = False
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"{status}  {check.name}: worst rel. err {check.worst_error:.3e} "
              f"(tolerance {check.tolerance:.1e})")
        failed |= not check.passed
    return 1 if failed else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clustercov",
        description="Clustered LPWA uplink coverage/ASE/EE sweeps and checks",
    )
    parser.add_argument("--version", action="version", version=f"clustercov {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a parameter sweep and write CSV")
    sweep.add_argument("--preset", choices=sorted(PRESETS) + ["custom"], default=None)
    sweep.add_argument("--config", help="flat key=value config file", default=None)
    sweep.add_argument("--out", required=True, help="output CSV path")
    sweep.add_argument("--trials", type=int, default=None)
    sweep.add_argument("--seed", type=int, default=None)
    sweep.add_argument("--methods", default=None, help="comma list from exact,gc,mc")
    sweep.add_argument("--quad-t", dest="quad_t", type=int, default=None)
    sweep.add_argument("--quad-m", dest="quad_m", type=int, default=None)
    sweep.set_defaults(func=_cmd_sweep)

    validate = sub.add_parser("validate", help="check a config file and print the resolution")
    validate.add_argument("--config", required=True)
    validate.add_argument("--preset", choices=sorted(PRESETS) + ["custom"], default=None)
    validate.set_defaults(func=_cmd_validate)

    oracle = sub.add_parser("oracle", help="run the independent numerical oracles")
    oracle.add_argument("--check", choices=("2f1", "beta", "laplace", "all"), default="all")
    oracle.set_defaults(func=_cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (OSError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

Subcommands::

    boxcd sample       draw accepted parameters for one observed dataset
    boxcd region       fit a depth surface to accepted draws and export regions
    boxcd coverage     replicated coverage study (box depth and/or LR baseline)
    boxcd scaling      accepted-count table over (n, S) grids
    boxcd lengths      mean interval lengths, box depth vs LRT inversion
    boxcd abc-compare  dimension-decay curves: ball vs box acceptance

Every command resolves a config file plus ``--override section.key=value``
pairs plus dedicated flags (highest precedence), runs, writes its data
outputs, and finally writes a JSON run manifest naming them.  Exit codes:
0 success, 2 configuration/validation, 3 I/O, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import (ConfigError, apply_overrides, config_snapshot, load_config,
                     model_from_config, parse_list, parse_support, parse_vector)
from .depth import fit_depth_surface
from .harness import (CoverageStudySpec, abc_ball_acceptance, box_acceptance_curve,
                      run_coverage_study, run_length_study, run_lrt_coverage,
                      run_scaling_study)
from .models import CapabilityError
from .outputs import read_csv_columns, write_csv, write_json
from .regions import (RULE_KINDS, RegionRule, build_region, export_region_grid,
                      scalar_interval)
from .rng import derived_rng
from .sampler import SamplerConfig, TrialSimulationError, run_sampler

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NUMERIC = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="boxcd",
                                     description="Simulation-based confidence regions "
                                                 "from box-acceptance depth sampling")
    parser.add_argument("--version", action="version", version=f"boxcd {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="path to the study config file")
        p.add_argument("--out-dir", default=None,
                       help="output directory (default: $BOXCD_OUT_DIR or '.')")
        p.add_argument("--override", action="append", default=[],
                       metavar="SECTION.KEY=VALUE", help="override one config value")
        p.add_argument("--seed", type=int, default=None, help="master seed override")
        p.add_argument("--workers", type=int, default=None, help="worker process cap")

    p = sub.add_parser("sample", help="run the accept-reject sampler once")
    common(p)
    p.add_argument("--R", type=int, default=None, help="number of proposals")
    p.add_argument("--S", type=int, default=None, help="pseudo-samples per proposal")
    p.add_argument("--model", default=None, help="model name override")
    p.add_argument("--support", default=None, help="proposal support, e.g. -6:6")

    p = sub.add_parser("region", help="confidence regions from accepted draws")
    common(p)
    p.add_argument("--draws", required=True, help="accepted-draws CSV from 'sample'")
    p.add_argument("--alpha", default=None, help="comma-separated alpha values")
    p.add_argument("--rule", choices=RULE_KINDS, default=None)
    p.add_argument("--grid", type=int, default=None, help="lattice points per axis")

    p = sub.add_parser("coverage", help="replicated coverage study")
    common(p)
    p.add_argument("--R", type=int, default=None)
    p.add_argument("--S", type=int, default=None)
    p.add_argument("--B", type=int, default=None, help="number of replicates")
    p.add_argument("--rule", choices=RULE_KINDS, default=None)
    p.add_argument("--method", choices=("box", "lr", "both"), default=None)

    p = sub.add_parser("scaling", help="accepted counts over (n, S) grid")
    common(p)
    p.add_argument("--R", type=int, default=None)

    p = sub.add_parser("lengths", help="interval-length comparison study")
    common(p)
    p.add_argument("--R", type=int, default=None)
    p.add_argument("--S", type=int, default=None)
    p.add_argument("--B", type=int, default=None)

    p = sub.add_parser("abc-compare", help="dimension-decay comparison curves")
    common(p)
    return parser


# --- config plumbing ---------------------------------------------------------


def _resolve_config(args) -> dict:
    cfg = load_config(args.config)
    cfg = apply_overrides(cfg, args.override)
    return cfg


def _out_dir(args) -> Path:
    out = args.out_dir or os.environ.get("BOXCD_OUT_DIR") or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _get(cfg, section, key, default=None, required=False):
    value = cfg.get(section, {}).get(key, default)
    if value is None and required:
        raise ConfigError(f"[{section}] is missing required key '{key}'")
    return value


def _get_int(cfg, section, key, default=None, required=False, minimum=None):
    raw = _get(cfg, section, key, default, required)
    if raw is None:
        return None
    try:
        value = int(str(raw))
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not an integer") from exc
    if minimum is not None and value < minimum:
        raise ConfigError(f"[{section}] {key} must be >= {minimum}, got {value}")
    return value


def _get_float(cfg, section, key, default=None, required=False):
    raw = _get(cfg, section, key, default, required)
    if raw is None:
        return None
    try:
        return float(str(raw))
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not a number") from exc


def _sampler_settings(cfg, args) -> tuple[int, int, int]:
    r = args.R if getattr(args, "R", None) is not None else _get_int(cfg, "sampler", "r", required=True)
    s = args.S if getattr(args, "S", None) is not None else _get_int(cfg, "sampler", "s", default=2)
    seed = args.seed if args.seed is not None else _get_int(cfg, "sampler", "seed", default=0)
    if r is None or r < 1:
        raise ConfigError(f"[sampler] R must be >= 1, got {r}")
    if s is None or s < 2 or s % 2:
        raise ConfigError(f"[sampler] S must be an even integer >= 2, got {s}")
    return r, s, seed


def _observed_data(cfg, model):
    section = cfg.get("observation", {})
    data_file = section.get("file")
    if data_file:
        path = Path(data_file)
        if not path.exists():
            raise FileNotFoundError(f"observed-data file not found: {path}")
        _, mat = read_csv_columns(path)
        data = mat[:, 0] if mat.shape[1] == 1 else mat
        return np.asarray(data), None
    theta0_text = section.get("theta0")
    if theta0_text is None:
        raise ConfigError("[observation] needs either 'file' or 'theta0'")
    theta0 = parse_vector(theta0_text, "[observation] theta0")
    obs_seed = _get_int(cfg, "observation", "seed", default=0)
    data = model.simulate(theta0, derived_rng(obs_seed, 0))
    return data, theta0


def _write_manifest(out_dir: Path, command: str, cfg: dict, seed, outputs,
                    started: float, extra: dict | None = None) -> Path:
    manifest = {
        "command": command,
        "version": __version__,
        "master_seed": seed,
        "config": config_snapshot(cfg),
        "outputs": [str(p) for p in outputs],
        "wall_clock_s": time.perf_counter() - started,
    }
    if extra:
        manifest.update(extra)
    path = out_dir / f"{command.replace('-', '_')}_manifest.json"
    write_json(path, manifest)
    return path


# --- commands ------------------------------------------------------------------


def cmd_sample(args) -> int:
    started = time.perf_counter()
    cfg = _resolve_config(args)
    model = model_from_config(cfg)
    if args.model:
        cfg.setdefault("model", {})["name"] = args.model
        model = model_from_config(cfg)
    if args.support:
        cfg["model"]["support"] = args.support
        model = model_from_config(cfg)
    r, s, seed = _sampler_settings(cfg, args)
    data, _ = _observed_data(cfg, model)
    t_obs = model.summarize(data)
    store = str(_get(cfg, "sampler", "store_summaries", "false")).lower() in ("1", "true", "yes")
    out = run_sampler(model, t_obs, SamplerConfig(r=r, s=s, seed=seed, store_summaries=store))

    out_dir = _out_dir(args)
    draws_path = out_dir / "accepted.csv"
    header = [f"theta_{j + 1}" for j in range(model.param_dim)] + ["trial"]
    rows = (list(theta) + [int(idx)]
            for theta, idx in zip(out.accepted, out.trial_indices))
    write_csv(draws_path, header, rows)
    diag = out.boundary_diagnostic
    extra = {
        "acceptance_rate": out.acceptance_rate,
        "n_proposed": out.n_proposed,
        "n_accepted": out.n_accepted,
        "boundary_diagnostic": {
            "band": diag.band,
            "threshold": diag.threshold,
            "low_fraction": [float(v) for v in diag.low_fraction],
            "high_fraction": [float(v) for v in diag.high_fraction],
            "flagged": diag.flagged,
        },
    }
    _write_manifest(out_dir, "sample", cfg, seed, [draws_path], started, extra)
    return EXIT_OK


def _load_draws(path) -> np.ndarray:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"accepted-draws file not found: {path}")
    header, mat = read_csv_columns(path)
    theta_cols = [i for i, name in enumerate(header) if name.startswith("theta")]
    if not theta_cols:
        theta_cols = list(range(mat.shape[1]))
    if mat.shape[0] == 0:
        raise ConfigError(f"{path}: no accepted draws to fit a surface on")
    return mat[:, theta_cols]


def cmd_region(args) -> int:
    started = time.perf_counter()
    cfg = _resolve_config(args)
    model = model_from_config(cfg)
    draws = _load_draws(args.draws)
    if draws.shape[1] != model.param_dim:
        raise ConfigError(
            f"draws have {draws.shape[1]} parameter columns, model has {model.param_dim}")

    if args.alpha is not None:
        alphas = parse_list(args.alpha, float, "--alpha")
    else:
        alphas = parse_list(_get(cfg, "region", "alpha", "0.05"), float, "[region] alpha")
    rule_kind = args.rule or _get(cfg, "region", "rule", RULE_KINDS[0])
    if rule_kind not in RULE_KINDS:
        raise ConfigError(f"[region] rule must be one of {RULE_KINDS}")
    grid_n = args.grid if args.grid is not None else _get_int(cfg, "region", "grid", default=64)
    grid_text = _get(cfg, "region", "grid_bounds", None)

    surface = fit_depth_surface(draws, support=model.default_support)
    out_dir = _out_dir(args)
    outputs = []
    summary = {
        "rule": rule_kind,
        "m_hat": surface.m_hat,
        "theta_hat": [float(v) for v in surface.theta_hat],
        "bandwidth": surface.bandwidth,
        "alphas": {},
    }
    lattice = grid_n
    if grid_text is not None:
        bounds = parse_support(grid_text, model.param_dim)
        lattice = [np.linspace(b[0], b[1], grid_n) for b in bounds]
    for alpha in sorted(alphas):
        rule = RegionRule(rule_kind, alpha)
        region = build_region(surface, rule)
        grid = export_region_grid(region, lattice)
        path = out_dir / f"region_alpha{alpha:g}.csv"
        write_csv(path, grid["columns"], grid["rows"])
        outputs.append(path)
        entry = {"threshold": region.threshold, "csv": str(path)}
        if model.param_dim == 1:
            interval = scalar_interval(surface, alpha)
            entry["interval"] = {"lo": interval.lo, "hi": interval.hi,
                                 "multimodal": interval.multimodal}
        summary["alphas"][f"{alpha:g}"] = entry
    json_path = out_dir / "region.json"
    write_json(json_path, summary)
    outputs.append(json_path)
    _write_manifest(out_dir, "region", cfg, None, outputs, started)
    return EXIT_OK


def _coverage_spec(cfg, args) -> CoverageStudySpec:
    model_section = cfg.get("model", {})
    model_name = model_section.get("name")
    if model_name is None:
        raise ConfigError("[model] section must set 'name'")
    model = model_from_config(cfg)  # validates the section as a whole
    params = {k: v for k, v in model_section.items() if k != "name"}
    typed: dict = {}
    for key, value in params.items():
        if key == "support":
            typed["support"] = parse_support(value, model.param_dim)
        elif key == "sigma":
            rows = [r for r in str(value).split(";") if r.strip()]
            typed["sigma"] = np.array([[float(v) for v in r.split(",")] for r in rows])
        elif key in ("n", "p", "design_seed", "series_length"):
            typed[key] = int(value)
        elif key in ("nu", "phi", "n0", "sigma2"):
            typed[key] = float(value)
        elif key == "infer_noise":
            typed[key] = str(value).lower() in ("1", "true", "yes")
        else:
            typed[key] = value
    theta0 = parse_vector(_get(cfg, "observation", "theta0", required=True),
                          "[observation] theta0")
    r, s, _ = _sampler_settings(cfg, args)
    b = getattr(args, "B", None)
    replicates = b if b is not None else _get_int(cfg, "coverage", "replicates",
                                                  default=500, minimum=1)
    levels = tuple(parse_list(_get(cfg, "coverage", "levels", "0.95,0.90,0.85,0.80"),
                              float, "[coverage] levels"))
    rule = getattr(args, "rule", None) or _get(cfg, "coverage", "rule", RULE_KINDS[0])
    mode = _get(cfg, "coverage", "mode", "knn")
    seed = args.seed if args.seed is not None else _get_int(cfg, "coverage", "seed", default=0)
    workers = args.workers if args.workers is not None else _get_int(cfg, "coverage",
                                                                     "workers", default=1)
    min_accepted = _get_int(cfg, "coverage", "min_accepted", default=10)
    return CoverageStudySpec(model=model_name, theta0=tuple(theta0),
                             replicates=replicates, r=r, s=s, model_params=typed,
                             levels=levels, rule=rule, query_mode=mode, seed=seed,
                             workers=workers, min_accepted=min_accepted)


def _coverage_text(report) -> list[str]:
    lines = [f"{'level':>8} {'coverage':>10} {'se':>10}"]
    for level in report.levels:
        lines.append(f"{level:>8.3f} {report.coverage[level]:>10.4f} "
                     f"{report.se[level]:>10.4f}")
    lines.append(f"included {report.n_included}/{report.n_replicates} "
                 f"(failed {report.n_failed})")
    return lines


def cmd_coverage(args) -> int:
    started = time.perf_counter()
    cfg = _resolve_config(args)
    spec = _coverage_spec(cfg, args)
    method = args.method or _get(cfg, "coverage", "method", "box")
    out_dir = _out_dir(args)
    outputs = []
    text_lines = []
    if method in ("box", "both"):
        report = run_coverage_study(spec)
        path = out_dir / "coverage_box.json"
        write_json(path, report.to_dict())
        outputs.append(path)
        text_lines += [f"box-depth coverage (rule {spec.rule}, mode {spec.query_mode})"]
        text_lines += _coverage_text(report) + [""]
    if method in ("lr", "both"):
        report = run_lrt_coverage(spec)
        path = out_dir / "coverage_lr.json"
        write_json(path, report.to_dict())
        outputs.append(path)
        text_lines += ["likelihood-ratio coverage"]
        text_lines += _coverage_text(report) + [""]
    text_path = out_dir / "coverage_summary.txt"
    text_path.write_text("\n".join(text_lines) + "\n", encoding="utf-8")
    outputs.append(text_path)
    _write_manifest(out_dir, "coverage", cfg, spec.seed, outputs, started)
    return EXIT_OK


def cmd_scaling(args) -> int:
    started = time.perf_counter()
    cfg = _resolve_config(args)
    n_values = parse_list(_get(cfg, "scaling", "n", required=True), int, "[scaling] n")
    s_values = parse_list(_get(cfg, "scaling", "s", required=True), int, "[scaling] S")
    r = args.R if args.R is not None else _get_int(cfg, "scaling", "r", required=True,
                                                   minimum=1)
    model_name = _get(cfg, "model", "name", "mixture")
    theta0 = parse_vector(_get(cfg, "observation", "theta0", "0.8"))
    seed = args.seed if args.seed is not None else _get_int(cfg, "scaling", "seed", default=0)
    workers = args.workers if args.workers is not None else _get_int(cfg, "scaling",
                                                                     "workers", default=1)
    report = run_scaling_study(n_values, s_values, r, model=model_name,
                               theta0=float(theta0[0]), seed=seed, workers=workers)
    out_dir = _out_dir(args)
    csv_path = out_dir / "scaling.csv"
    write_csv(csv_path, ["n", "s", "accepted", "ratio_vs_s2"], report.rows())
    json_path = out_dir / "scaling.json"
    write_json(json_path, report.to_dict())
    _write_manifest(out_dir, "scaling", cfg, seed, [csv_path, json_path], started)
    return EXIT_OK


def cmd_lengths(args) -> int:
    started = time.perf_counter()
    cfg = _resolve_config(args)
    spec = _coverage_spec(cfg, args)
    b = args.B if args.B is not None else _get_int(cfg, "lengths", "replicates", default=None)
    if b is not None:
        spec = CoverageStudySpec(**{**spec.__dict__, "replicates": b})
    report = run_length_study(spec)
    out_dir = _out_dir(args)
    csv_path = out_dir / "lengths.csv"
    rows = [[level, report.box_lengths[level], report.lrt_lengths[level]]
            for level in spec.levels]
    write_csv(csv_path, ["level", "box_length", "lrt_length"], rows)
    json_path = out_dir / "lengths.json"
    write_json(json_path, report.to_dict())
    _write_manifest(out_dir, "lengths", cfg, spec.seed, [csv_path, json_path], started)
    return EXIT_OK


def cmd_abc_compare(args) -> int:
    started = time.perf_counter()
    cfg = _resolve_config(args)
    d_text = _get(cfg, "abc", "d", "1:30")
    if ":" in str(d_text):
        lo, hi = str(d_text).split(":", 1)
        try:
            dims = list(range(int(lo), int(hi) + 1))
        except ValueError as exc:
            raise ConfigError(f"[abc] d = {d_text!r} is not a valid range") from exc
    else:
        dims = parse_list(d_text, int, "[abc] d")
    eps = _get_float(cfg, "abc", "eps", default=0.5)
    v = _get_float(cfg, "abc", "v", default=1.0)
    x = _get_float(cfg, "abc", "x", default=0.5)
    if eps <= 0:
        raise ConfigError("[abc] eps must be positive")
    rows = []
    for d in dims:
        paper_prod, factor2_prod = box_acceptance_curve(d, x)
        rows.append([d, abc_ball_acceptance(d, eps, v), paper_prod, factor2_prod])
    out_dir = _out_dir(args)
    csv_path = out_dir / "abc_compare.csv"
    write_csv(csv_path, ["d", "abc_ball", "box_product", "box_product_factor2"], rows)
    _write_manifest(out_dir, "abc-compare", cfg, None, [csv_path], started)
    return EXIT_OK


_COMMANDS = {
    "sample": cmd_sample,
    "region": cmd_region,
    "coverage": cmd_coverage,
    "scaling": cmd_scaling,
    "lengths": cmd_lengths,
    "abc-compare": cmd_abc_compare,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    # LinAlgError subclasses ValueError, so numerical failures come first
    except (TrialSimulationError, FloatingPointError, ZeroDivisionError,
            np.linalg.LinAlgError) as exc:
        print(f"boxcd: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, CapabilityError, ValueError) as exc:
        print(f"boxcd: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"boxcd: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Replicated simulation studies: coverage, scaling, variability, lengths.

Every study is a pure function of its spec (model settings, counts, master
seed).  Replicates draw their random streams from ``(master_seed, replicate
index, purpose)``, so box-depth and likelihood-ratio studies with the same
spec see identical observed datasets, results are independent of the worker
count, and reruns are bit-identical.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.stats import chi2

from .depth import MIN_FIT_SIZE, fit_depth_surface, eval_depth, knn_depth
from .models import Model, build_model
from .regions import (LEVEL_SET_ALPHA_M, RULE_KINDS, SCALAR_EXACT_EQUITAIL,
                      RegionRule, scalar_interval, surface_threshold)
from .rng import derived_rng, derived_seed
from .sampler import SamplerConfig, run_sampler

__all__ = [
    "CoverageStudySpec",
    "CoverageReport",
    "ScalingReport",
    "SVariabilityReport",
    "LengthReport",
    "MedianReport",
    "run_coverage_study",
    "run_lrt_coverage",
    "run_scaling_study",
    "run_s_variability_study",
    "run_length_study",
    "run_median_unbiasedness_study",
    "abc_ball_acceptance",
    "box_acceptance_curve",
]

DEFAULT_LEVELS = (0.95, 0.90, 0.85, 0.80)

# stream tags for per-replicate seed derivation
_STREAM_DATA = 0
_STREAM_SAMPLER = 1
_STREAM_DESIGN = 2
_STREAM_OPTIM = 3


@dataclass(frozen=True)
class CoverageStudySpec:
    """Settings for one replicated coverage study."""

    model: str
    theta0: tuple
    replicates: int
    r: int
    s: int = 2
    model_params: dict = field(default_factory=dict)
    levels: tuple = DEFAULT_LEVELS
    rule: str = LEVEL_SET_ALPHA_M
    query_mode: str = "knn"
    seed: int = 0
    workers: int = 1
    min_accepted: int = MIN_FIT_SIZE

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if not all(0.0 < lv < 1.0 for lv in self.levels):
            raise ValueError("levels must lie strictly inside (0, 1)")
        if self.rule not in RULE_KINDS:
            raise ValueError(f"rule must be one of {RULE_KINDS}")
        if self.query_mode not in ("kde", "knn"):
            raise ValueError("query_mode must be 'kde' or 'knn'")
        object.__setattr__(self, "theta0", tuple(float(v) for v in np.atleast_1d(self.theta0)))
        object.__setattr__(self, "levels", tuple(float(v) for v in self.levels))


@dataclass
class CoverageReport:
    """Empirical coverage per nominal level, with Monte Carlo standard errors."""

    method: str
    levels: tuple
    coverage: dict
    se: dict
    n_replicates: int
    n_included: int
    n_failed: int
    failures: list
    inclusion: dict
    per_rule: dict | None = None
    rule: str | None = None
    mean_acceptance_rate: float | None = None
    wall_clock: float = 0.0

    def to_dict(self) -> dict:
        out = {
            "method": self.method,
            "rule": self.rule,
            "levels": list(self.levels),
            "coverage": {str(k): v for k, v in self.coverage.items()},
            "se": {str(k): v for k, v in self.se.items()},
            "n_replicates": self.n_replicates,
            "n_included": self.n_included,
            "n_failed": self.n_failed,
            "failures": [list(f) for f in self.failures],
            "inclusion": {rule: [None if row is None else [bool(b) for b in row]
                                 for row in rows]
                          for rule, rows in self.inclusion.items()},
            "mean_acceptance_rate": self.mean_acceptance_rate,
            "timing": {"wall_clock_s": self.wall_clock},
        }
        return out


def _make_model(spec: CoverageStudySpec, rep: int) -> Model:
    params = dict(spec.model_params)
    if spec.model == "logistic" and "design_seed" not in params:
        # fresh standard-normal design per replicate, reproducibly derived
        params["design_seed"] = derived_seed(spec.seed, rep, _STREAM_DESIGN)
    return build_model(spec.model, **params)


def _simulate_observation(spec: CoverageStudySpec, model: Model, rep: int):
    rng = derived_rng(spec.seed, rep, _STREAM_DATA)
    data = model.simulate(np.asarray(spec.theta0), rng)
    return data, model.summarize(data)


def _box_replicate(spec: CoverageStudySpec, rep: int) -> dict:
    model = _make_model(spec, rep)
    _, t_obs = _simulate_observation(spec, model, rep)
    cfg = SamplerConfig(r=spec.r, s=spec.s,
                        seed=derived_seed(spec.seed, rep, _STREAM_SAMPLER))
    out = run_sampler(model, t_obs, cfg)
    if out.n_accepted < spec.min_accepted:
        return {"ok": False, "rep": rep,
                "reason": f"accepted {out.n_accepted} < {spec.min_accepted}",
                "acceptance_rate": out.acceptance_rate}
    surface = fit_depth_surface(out.accepted, support=out.support)
    depth_fn = knn_depth if spec.query_mode == "knn" else eval_depth
    depth0 = float(depth_fn(surface, np.asarray(spec.theta0)))
    included = {}
    for kind in RULE_KINDS:
        flags = []
        for level in spec.levels:
            c = surface_threshold(surface, RegionRule(kind, 1.0 - level))
            flags.append(bool(depth0 >= c))
        included[kind] = flags
    return {"ok": True, "rep": rep, "included": included,
            "acceptance_rate": out.acceptance_rate, "n_accepted": out.n_accepted}


def _map_replicates(fn, n: int, workers: int) -> list:
    if workers <= 1:
        return [fn(i) for i in range(n)]
    chunk = max(1, n // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n), chunksize=chunk))


def _aggregate_flags(levels, rows):
    """Coverage and exact binomial SE over the included replicates."""
    arr = np.array(rows, dtype=float)
    b = arr.shape[0]
    coverage, se = {}, {}
    for i, level in enumerate(levels):
        c = float(arr[:, i].mean()) if b else float("nan")
        coverage[level] = c
        se[level] = math.sqrt(c * (1.0 - c) / b) if b else float("nan")
    return coverage, se


def run_coverage_study(spec: CoverageStudySpec) -> CoverageReport:
    """Replicate the full pipeline and count how often theta0 is covered.

    Each replicate simulates a fresh observed dataset at ``theta0``, runs
    the sampler, fits the depth surface, and tests membership of ``theta0``
    at every confidence level.  Replicates with too few accepted draws to
    fit a surface are excluded and counted, never silently dropped.
    Inclusion flags are recorded under both threshold rules; ``spec.rule``
    selects the headline numbers.
    """
    from functools import partial

    t0 = time.perf_counter()
    results = _map_replicates(partial(_box_replicate, spec), spec.replicates, spec.workers)
    failures = [(res["rep"], res["reason"]) for res in results if not res["ok"]]
    good = [res for res in results if res["ok"]]

    inclusion = {kind: [res["included"][kind] if res["ok"] else None for res in results]
                 for kind in RULE_KINDS}
    per_rule = {}
    for kind in RULE_KINDS:
        cov, se = _aggregate_flags(spec.levels, [r["included"][kind] for r in good])
        per_rule[kind] = {"coverage": cov, "se": se}
    headline = per_rule[spec.rule]
    rates = [res["acceptance_rate"] for res in results]
    return CoverageReport(
        method="box",
        levels=spec.levels,
        coverage=headline["coverage"],
        se=headline["se"],
        n_replicates=spec.replicates,
        n_included=len(good),
        n_failed=len(failures),
        failures=failures,
        inclusion=inclusion,
        per_rule=per_rule,
        rule=spec.rule,
        mean_acceptance_rate=float(np.mean(rates)) if rates else None,
        wall_clock=time.perf_counter() - t0,
    )


# --- likelihood-ratio baseline -------------------------------------------

def _maximize_likelihood(model: Model, data, support, rng, restarts: int = 5,
                         tol: float = 1e-8):
    """Best log-likelihood from derivative-free simplex restarts in the support."""
    lo, hi = support[:, 0], support[:, 1]
    p = support.shape[0]

    def negative(x):
        if np.any(x < lo) or np.any(x > hi):
            return np.inf
        return -model.log_likelihood(x, data)

    best_val, best_x = -np.inf, None
    for _ in range(restarts):
        x0 = lo + rng.random(p) * (hi - lo)
        res = minimize(negative, x0, method="Nelder-Mead",
                       options={"fatol": tol, "xatol": 1e-6,
                                "maxiter": 4000, "maxfev": 8000})
        if res.success and np.isfinite(res.fun) and -res.fun > best_val:
            best_val, best_x = -float(res.fun), np.asarray(res.x)
    return best_x, best_val


def _lrt_replicate(spec: CoverageStudySpec, rep: int) -> dict:
    model = _make_model(spec, rep)
    data, _ = _simulate_observation(spec, model, rep)
    theta0 = np.asarray(spec.theta0)
    rng = derived_rng(spec.seed, rep, _STREAM_OPTIM)
    loglik0 = model.log_likelihood(theta0, data)
    best_x, best_val = _maximize_likelihood(model, data, model.default_support, rng)
    if best_x is None:
        return {"ok": False, "rep": rep, "reason": "optimizer failed to converge"}
    # the supremum is never below the value at theta0, a feasible point
    lr = max(0.0, 2.0 * (max(best_val, loglik0) - loglik0))
    p = model.param_dim
    flags = [bool(lr <= chi2.ppf(level, df=p)) for level in spec.levels]
    return {"ok": True, "rep": rep, "flags": flags, "lr": lr}


def run_lrt_coverage(spec: CoverageStudySpec) -> CoverageReport:
    """Classical likelihood-ratio coverage on the same replicated datasets.

    Accepts ``theta0`` at level ``1 - alpha`` when ``-2 log lambda`` stays
    below the chi-square quantile with ``p`` degrees of freedom.  Uses the
    identical per-replicate data streams as :func:`run_coverage_study`, so
    the comparison is paired.
    """
    from functools import partial

    model_probe = build_model(spec.model, **dict(spec.model_params))
    if not model_probe.has_likelihood:
        raise ValueError(f"model {spec.model!r} has no tractable likelihood")

    t0 = time.perf_counter()
    results = _map_replicates(partial(_lrt_replicate, spec), spec.replicates, spec.workers)
    failures = [(res["rep"], res["reason"]) for res in results if not res["ok"]]
    good = [res for res in results if res["ok"]]
    cov, se = _aggregate_flags(spec.levels, [r["flags"] for r in good])
    inclusion = {"lr": [res["flags"] if res["ok"] else None for res in results]}
    return CoverageReport(
        method="lr",
        levels=spec.levels,
        coverage=cov,
        se=se,
        n_replicates=spec.replicates,
        n_included=len(good),
        n_failed=len(failures),
        failures=failures,
        inclusion=inclusion,
        wall_clock=time.perf_counter() - t0,
    )


# --- acceptance scaling (sample size vs pseudo-sample count) --------------

@dataclass
class ScalingReport:
    """Accepted counts per (n, S) cell and ratios against the S = 2 column."""

    n_values: tuple
    s_values: tuple
    r: int
    counts: dict
    ratios: dict
    wall_clock: float = 0.0

    def to_dict(self) -> dict:
        return {
            "n_values": list(self.n_values),
            "s_values": list(self.s_values),
            "r": self.r,
            "counts": {f"{n},{s}": c for (n, s), c in self.counts.items()},
            "ratios": {f"{n},{s}": v for (n, s), v in self.ratios.items()},
            "timing": {"wall_clock_s": self.wall_clock},
        }

    def rows(self):
        for n in self.n_values:
            for s in self.s_values:
                yield n, s, self.counts[(n, s)], self.ratios[(n, s)]


def _scaling_cell(args) -> tuple:
    model_name, model_params, theta0, n, s, r, seed = args
    params = dict(model_params)
    params["n"] = n
    model = build_model(model_name, **params)
    data_rng = derived_rng(seed, n, _STREAM_DATA)
    t_obs = model.summarize(model.simulate(np.atleast_1d(theta0), data_rng))
    cfg = SamplerConfig(r=r, s=s, seed=derived_seed(seed, n, s))
    out = run_sampler(model, t_obs, cfg)
    return n, s, out.n_accepted


def run_scaling_study(n_values, s_values, r: int, *, model: str = "mixture",
                      theta0=0.8, model_params: dict | None = None,
                      seed: int = 0, workers: int = 1) -> ScalingReport:
    """Accepted-count table over a grid of sample sizes and pseudo-sample counts.

    One observed dataset is drawn per sample size (shared across the S
    column) and the sampler runs ``r`` proposals per cell.  Ratios compare
    each cell against S = 2 at the same n.
    """
    n_values = tuple(int(n) for n in n_values)
    s_values = tuple(int(s) for s in s_values)
    if any(s < 2 or s % 2 for s in s_values):
        raise ValueError("every S must be an even integer >= 2")
    t0 = time.perf_counter()
    jobs = [( model, dict(model_params or {}), float(np.atleast_1d(theta0)[0]), n, s, r, seed)
            for n in n_values for s in s_values]
    if workers <= 1:
        cells = [_scaling_cell(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(_scaling_cell, jobs))
    counts = {(n, s): c for n, s, c in cells}
    ratios = {}
    for n in n_values:
        base = counts.get((n, 2))
        for s in s_values:
            ratios[(n, s)] = (counts[(n, s)] / base) if base else None
    return ScalingReport(n_values, s_values, r, counts, ratios,
                         wall_clock=time.perf_counter() - t0)


# --- variability of the depth curve in S ----------------------------------

@dataclass
class SVariabilityReport:
    """Depth-curve replications per S on a fixed grid, with pointwise spread."""

    s_values: tuple
    theta_grid: np.ndarray
    curves: dict
    pointwise_sd: dict
    mean_sd: dict
    wall_clock: float = 0.0

    def to_dict(self) -> dict:
        return {
            "s_values": list(self.s_values),
            "theta_grid": [float(v) for v in self.theta_grid],
            "mean_sd": {str(s): v for s, v in self.mean_sd.items()},
            "pointwise_sd": {str(s): [float(v) for v in sd]
                             for s, sd in self.pointwise_sd.items()},
            "timing": {"wall_clock_s": self.wall_clock},
        }


def _svar_run(args):
    model_name, model_params, t_obs, s, rep, r, seed, grid = args
    model = build_model(model_name, **dict(model_params))
    cfg = SamplerConfig(r=r, s=s, seed=derived_seed(seed, s, rep))
    out = run_sampler(model, np.asarray(t_obs), cfg)
    if out.n_accepted < MIN_FIT_SIZE:
        raise ValueError(
            f"S={s} replication {rep}: only {out.n_accepted} accepted draws; "
            "increase the number of proposals")
    surface = fit_depth_surface(out.accepted, support=out.support)
    return s, rep, eval_depth(surface, np.asarray(grid)[:, None])


def run_s_variability_study(model: str, y_obs, s_values, replications: int, r: int,
                            theta_grid, *, model_params: dict | None = None,
                            seed: int = 0, workers: int = 1) -> SVariabilityReport:
    """Rerun sampler + density estimate on one fixed dataset, varying S.

    For each S the study repeats the pipeline ``replications`` times with
    fresh derived seeds and reports the pointwise standard deviation of the
    depth curve over a scalar parameter grid (which must lie inside the
    proposal support).
    """
    model_params = dict(model_params or {})
    probe = build_model(model, **model_params)
    if probe.param_dim != 1:
        raise ValueError("S-variability study requires a scalar parameter")
    grid = np.asarray(theta_grid, dtype=float)
    lo, hi = probe.default_support[0]
    if grid.min() < lo or grid.max() > hi:
        raise ValueError(
            f"theta grid [{grid.min()}, {grid.max()}] extends outside the "
            f"proposal support [{lo}, {hi}]")
    t_obs = probe.summarize(np.asarray(y_obs, dtype=float))
    s_values = tuple(int(s) for s in s_values)

    t0 = time.perf_counter()
    jobs = [(model, model_params, t_obs, s, rep, r, seed, grid)
            for s in s_values for rep in range(replications)]
    if workers <= 1:
        outs = [_svar_run(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outs = list(pool.map(_svar_run, jobs))
    curves = {s: np.empty((replications, grid.size)) for s in s_values}
    for s, rep, curve in outs:
        curves[s][rep] = curve
    pointwise_sd = {s: curves[s].std(axis=0, ddof=0) for s in s_values}
    mean_sd = {s: float(pointwise_sd[s].mean()) for s in s_values}
    return SVariabilityReport(s_values, grid, curves, pointwise_sd, mean_sd,
                              wall_clock=time.perf_counter() - t0)


# --- interval lengths ------------------------------------------------------

@dataclass
class LengthReport:
    """Mean confidence-interval lengths per level, box-depth vs LRT inversion."""

    levels: tuple
    box_lengths: dict
    lrt_lengths: dict
    n_replicates: int
    n_included: int
    n_failed: int
    per_replicate: dict = field(default_factory=dict)
    wall_clock: float = 0.0

    def to_dict(self) -> dict:
        return {
            "levels": list(self.levels),
            "box_lengths": {str(k): v for k, v in self.box_lengths.items()},
            "lrt_lengths": {str(k): v for k, v in self.lrt_lengths.items()},
            "n_replicates": self.n_replicates,
            "n_included": self.n_included,
            "n_failed": self.n_failed,
            "timing": {"wall_clock_s": self.wall_clock},
        }


def _length_replicate(spec: CoverageStudySpec, rep: int) -> dict:
    model = _make_model(spec, rep)
    data, t_obs = _simulate_observation(spec, model, rep)
    cfg = SamplerConfig(r=spec.r, s=spec.s,
                        seed=derived_seed(spec.seed, rep, _STREAM_SAMPLER))
    out = run_sampler(model, t_obs, cfg)
    if out.n_accepted < spec.min_accepted:
        return {"ok": False, "rep": rep,
                "reason": f"accepted {out.n_accepted} < {spec.min_accepted}"}
    surface = fit_depth_surface(out.accepted, support=out.support)
    box = {level: scalar_interval(surface, 1.0 - level).length for level in spec.levels}

    support = model.default_support
    rng = derived_rng(spec.seed, rep, _STREAM_OPTIM)
    loglik0 = model.log_likelihood(np.asarray(spec.theta0), data)
    _, best_val = _maximize_likelihood(model, data, support, rng)
    if not np.isfinite(best_val):
        return {"ok": False, "rep": rep, "reason": "optimizer failed to converge"}
    best_val = max(best_val, loglik0)
    # the LRT has no proposal support: invert over the symmetric closure of
    # the window, so a sign-symmetric likelihood (the normal mixture)
    # contributes its mirror branch to the confidence set
    lo = min(support[0, 0], -support[0, 1])
    hi = max(support[0, 1], -support[0, 0])
    grid = np.linspace(lo, hi, 1024)
    loglik_grid = np.array([model.log_likelihood([g], data) for g in grid])
    lr_grid = 2.0 * (best_val - loglik_grid)
    lrt = {}
    for level in spec.levels:
        keep = np.flatnonzero(lr_grid <= chi2.ppf(level, df=1))
        lrt[level] = float(grid[keep[-1]] - grid[keep[0]]) if keep.size else 0.0
    return {"ok": True, "rep": rep, "box": box, "lrt": lrt}


def run_length_study(spec: CoverageStudySpec) -> LengthReport:
    """Average interval lengths across replicates for a scalar model.

    Box intervals come from :func:`boxcd.regions.scalar_interval` (exact
    equi-tailed rule on a 512-point grid); likelihood-ratio intervals are
    the hull of the same grid where ``-2 log lambda`` stays below the
    chi-square(1) quantile.
    """
    from functools import partial

    probe = build_model(spec.model, **dict(spec.model_params))
    if probe.param_dim != 1:
        raise ValueError("length study requires a scalar parameter")
    if not probe.has_likelihood:
        raise ValueError("length study needs a tractable likelihood for the LRT side")

    t0 = time.perf_counter()
    results = _map_replicates(partial(_length_replicate, spec), spec.replicates,
                              spec.workers)
    good = [r for r in results if r["ok"]]
    box_lengths = {level: float(np.mean([r["box"][level] for r in good]))
                   for level in spec.levels} if good else {}
    lrt_lengths = {level: float(np.mean([r["lrt"][level] for r in good]))
                   for level in spec.levels} if good else {}
    return LengthReport(
        levels=spec.levels,
        box_lengths=box_lengths,
        lrt_lengths=lrt_lengths,
        n_replicates=spec.replicates,
        n_included=len(good),
        n_failed=len(results) - len(good),
        per_replicate={"box": [r.get("box") for r in results],
                       "lrt": [r.get("lrt") for r in results]},
        wall_clock=time.perf_counter() - t0,
    )


# --- median unbiasedness ----------------------------------------------------

@dataclass
class MedianReport:
    fraction_below: float
    se: float
    n_replicates: int
    n_included: int
    n_failed: int
    wall_clock: float = 0.0

    def to_dict(self) -> dict:
        return {
            "fraction_below": self.fraction_below,
            "se": self.se,
            "n_replicates": self.n_replicates,
            "n_included": self.n_included,
            "n_failed": self.n_failed,
            "timing": {"wall_clock_s": self.wall_clock},
        }


def _median_replicate(spec: CoverageStudySpec, estimator: str, rep: int) -> dict:
    model = _make_model(spec, rep)
    _, t_obs = _simulate_observation(spec, model, rep)
    cfg = SamplerConfig(r=spec.r, s=spec.s,
                        seed=derived_seed(spec.seed, rep, _STREAM_SAMPLER))
    out = run_sampler(model, t_obs, cfg)
    if out.n_accepted < spec.min_accepted:
        return {"ok": False, "rep": rep}
    if estimator == "accepted-median":
        theta_hat = float(np.median(out.accepted[:, 0]))
    else:
        surface = fit_depth_surface(out.accepted, support=out.support)
        theta_hat = float(surface.theta_hat[0])
    return {"ok": True, "rep": rep, "below": theta_hat <= spec.theta0[0]}


def run_median_unbiasedness_study(spec: CoverageStudySpec,
                                  estimator: str = "depth-max") -> MedianReport:
    """Fraction of replicates whose point estimate lands at or below theta0.

    A median-unbiased estimator gives 1/2.  ``estimator`` is either the
    depth maximizer (default) or the median of the accepted draws, the
    latter serving as an independent sanity check.
    """
    from functools import partial

    if spec.replicates < 1:
        raise ValueError("median-unbiasedness study needs at least one replicate")
    probe = build_model(spec.model, **dict(spec.model_params))
    if probe.param_dim != 1:
        raise ValueError("median-unbiasedness study requires a scalar parameter")
    if estimator not in ("depth-max", "accepted-median"):
        raise ValueError("estimator must be 'depth-max' or 'accepted-median'")

    t0 = time.perf_counter()
    results = _map_replicates(partial(_median_replicate, spec, estimator),
                              spec.replicates, spec.workers)
    good = [r for r in results if r["ok"]]
    frac = float(np.mean([r["below"] for r in good])) if good else float("nan")
    se = math.sqrt(frac * (1.0 - frac) / len(good)) if good else float("nan")
    return MedianReport(fraction_below=frac, se=se, n_replicates=spec.replicates,
                        n_included=len(good), n_failed=len(results) - len(good),
                        wall_clock=time.perf_counter() - t0)


# --- dimension-decay formulas ------------------------------------------------

def abc_ball_acceptance(d: int, eps: float, v: float) -> float:
    """Acceptance probability of a fixed-radius ball criterion.

    For an observed summary at the center of a d-dimensional Gaussian
    prior-predictive with per-coordinate variance ``v``, the squared
    distance of a simulated summary is ``(v + 1)`` times a chi-square with
    d degrees of freedom, so the ball of radius ``eps`` is hit with
    probability ``F_chi2_d(eps^2 / (v + 1))``.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if eps <= 0:
        raise ValueError("tolerance must be positive")
    if v < 0:
        raise ValueError("predictive scale must be non-negative")
    return float(chi2.cdf(eps * eps / (v + 1.0), df=d))


def box_acceptance_curve(d: int, x) -> tuple[float, float]:
    """Per-coordinate product forms of the box acceptance probability.

    ``x`` holds the per-coordinate CDF values of the observed summary (a
    scalar is broadcast to all d coordinates).  Returns the plain product
    ``prod x_j (1 - x_j)`` (bounded by (1/4)^d) and the factor-2 variant
    ``prod 2 x_j (1 - x_j)`` (bounded by (1/2)^d) that matches the scalar
    acceptance law coordinate by coordinate.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    xs = np.asarray(x, dtype=float)
    if xs.ndim == 0:
        xs = np.full(d, float(xs))
    if xs.shape != (d,):
        raise ValueError(f"x must be a scalar or a length-{d} vector")
    if np.any(xs <= 0.0) or np.any(xs >= 1.0):
        raise ValueError("each coordinate CDF value must lie strictly in (0, 1)")
    base = xs * (1.0 - xs)
    return float(np.prod(base)), float(np.prod(2.0 * base))

"""Acceptance suite: one test per exit criterion, one printed verdict line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict lines.
Criteria are numbered c01..c12; every tolerance is fixed here, none are
calibrated at runtime.  The whole module is seed-pinned and deterministic.
"""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest
from scipy import stats

from boxcd import (CoverageStudySpec, GaussianLocationModel, MixtureModel,
                   RegionRule, RickerModel, SamplerConfig, abc_ball_acceptance,
                   box_acceptance_curve, build_region, export_region_grid,
                   fit_depth_surface, member, run_coverage_study, run_length_study,
                   run_lrt_coverage, run_median_unbiasedness_study,
                   run_s_variability_study, run_sampler, run_scaling_study,
                   scalar_acceptance_oracle)
from boxcd.cli import main
from boxcd.regions import RULE_KINDS

WORKERS = 2


def verdict(criterion: str, passed: bool, detail: str):
    print(f"\nACCEPTANCE {criterion}: {'PASS' if passed else 'FAIL'} - {detail}")
    assert passed, f"{criterion}: {detail}"


# --- shared heavy studies ----------------------------------------------------

LOGISTIC_SPEC = CoverageStudySpec(
    model="logistic", theta0=(-0.25, 0.0, 0.25), replicates=500, r=10_000, s=2,
    model_params={"n": 20, "p": 3, "support": (-2.5, 2.5)},
    rule="depth-quantile", query_mode="knn", seed=20250810, workers=WORKERS)

MVT_SPEC = CoverageStudySpec(
    model="mvt", theta0=(0.0, -0.5, 0.5), replicates=500, r=10_000, s=2,
    model_params={"n": 10, "nu": 10, "support": (-2.0, 2.0)},
    rule="depth-quantile", query_mode="knn", seed=20250811, workers=WORKERS)

MIXTURE_SPEC = CoverageStudySpec(
    model="mixture", theta0=(0.8,), replicates=500, r=10_000, s=6,
    model_params={"n": 10}, rule="scalar-exact-equitail", query_mode="knn",
    seed=20250812, workers=WORKERS)


@pytest.fixture(scope="module")
def logistic_box():
    start = time.perf_counter()
    report = run_coverage_study(LOGISTIC_SPEC)
    report.wall_clock = time.perf_counter() - start
    return report


@pytest.fixture(scope="module")
def logistic_lr():
    return run_lrt_coverage(LOGISTIC_SPEC)


@pytest.fixture(scope="module")
def mvt_box():
    return run_coverage_study(MVT_SPEC)


@pytest.fixture(scope="module")
def mixture_box():
    return run_coverage_study(MIXTURE_SPEC)


@pytest.fixture(scope="module")
def length_report():
    spec = CoverageStudySpec(model="mixture", theta0=(0.8,), replicates=500,
                             r=10_000, s=6, model_params={"n": 10},
                             seed=20250813, workers=WORKERS)
    return run_length_study(spec)


# --- criteria ---------------------------------------------------------------


def test_c01_scalar_law_kolmogorov_distance():
    # accepted draws follow F(1-F) normalized over the support
    model = GaussianLocationModel(n=1, support=(-6.0, 6.0))
    start = time.perf_counter()
    out = run_sampler(model, [0.0], SamplerConfig(r=100_000, s=2, seed=20))
    elapsed = time.perf_counter() - start

    grid = np.linspace(-6.0, 6.0, 4001)
    F = stats.norm.cdf(0.0 - grid)
    density = F * (1.0 - F)
    cdf = np.cumsum(density)
    cdf /= cdf[-1]
    draws = np.sort(out.accepted[:, 0])
    ecdf = np.arange(1, draws.size + 1) / draws.size
    ks = float(np.max(np.abs(ecdf - np.interp(draws, grid, cdf))))
    verdict("c01 scalar depth law", ks < 0.02 and elapsed < 30.0,
            f"KS={ks:.4f} (<0.02), {out.n_accepted} draws in {elapsed:.1f}s (<30s)")


def test_c02_s_generalization_acceptance():
    model = GaussianLocationModel(n=1)
    worst = 0.0
    for i, F in enumerate((0.1, 0.3, 0.5)):
        theta = -stats.norm.ppf(F)
        support = [[theta - 1e-9, theta + 1e-9]]
        for j, s in enumerate((2, 4, 6, 10)):
            out = run_sampler(model, [0.0],
                              SamplerConfig(r=100_000, s=s, seed=100 + 10 * i + j,
                                            support=support))
            target = scalar_acceptance_oracle(F, s)
            se = math.sqrt(target * (1.0 - target) / out.n_proposed)
            worst = max(worst, abs(out.acceptance_rate - target) / se)
    verdict("c02 S-generalization", worst < 3.0,
            f"max |rate - (1-F^S-(1-F)^S)| = {worst:.2f} binomial SEs (<3)")


def test_c03_monotone_transform_invariance():
    model = MixtureModel(n=10)
    t_obs = model.summarize(model.simulate([0.8], np.random.default_rng(31)))
    out = run_sampler(model, t_obs,
                      SamplerConfig(r=10_000, s=6, seed=32, store_summaries=True))
    exp_summaries = np.exp(out.summaries)
    exp_t = np.exp(t_obs)
    lo = exp_summaries.min(axis=1)
    hi = exp_summaries.max(axis=1)
    bits = np.all((lo <= exp_t) & (exp_t < hi), axis=1)
    mismatches = int(np.sum(bits != out.accepted_mask))
    verdict("c03 monotone-transform invariance", mismatches == 0,
            f"{mismatches} mismatched acceptance bits over {out.n_proposed} trials")


def _check_row(name, report, level_refs, tol):
    msgs, ok = [], True
    for level, (ref, t) in level_refs.items():
        got = report.coverage[level]
        good = abs(got - ref) <= t
        ok &= good
        msgs.append(f"{level:.2f}: {got:.3f} vs {ref} (+/-{t})")
    return ok, f"{name} " + ", ".join(msgs) + f", failed reps {report.n_failed}"


def test_c04_table_reproduction_logistic(logistic_box):
    ok, msg = _check_row("logistic", logistic_box,
                         {0.95: (0.948, 0.03), 0.90: (0.899, 0.035)}, None)
    runtime_ok = logistic_box.wall_clock < 20 * 60
    verdict("c04a logistic coverage", ok and runtime_ok,
            msg + f", wall {logistic_box.wall_clock:.0f}s (<1200s)")


def test_c04_table_reproduction_mvt(mvt_box):
    ok, msg = _check_row("multivariate-t", mvt_box,
                         {0.95: (0.956, 0.03), 0.90: (0.900, 0.035)}, None)
    verdict("c04b multivariate-t coverage", ok, msg)


def test_c04_table_reproduction_mixture(mixture_box):
    ok, msg = _check_row("mixture", mixture_box,
                         {0.95: (0.959, 0.03), 0.90: (0.897, 0.035)}, None)
    verdict("c04c mixture coverage", ok, msg)


def test_c05_lrt_baseline(logistic_box, logistic_lr):
    refs = {0.95: 0.929, 0.90: 0.868, 0.85: 0.811, 0.80: 0.758}
    ok = all(abs(logistic_lr.coverage[lv] - ref) <= 0.035 for lv, ref in refs.items())
    box_beats_lr = logistic_box.coverage[0.95] > logistic_lr.coverage[0.95]
    detail = ("LR " + ", ".join(f"{lv:.2f}: {logistic_lr.coverage[lv]:.3f} vs {ref}"
                                for lv, ref in refs.items())
              + f"; box 0.95 {logistic_box.coverage[0.95]:.3f} > "
                f"LR {logistic_lr.coverage[0.95]:.3f}: {box_beats_lr}")
    verdict("c05 likelihood-ratio baseline", ok and box_beats_lr, detail)


@pytest.mark.xfail(strict=True, reason=(
    "spec defect: the cited interval-length sequence pairs 1.22 with the 0.95 "
    "level, but lengths must grow with the confidence level in any nested "
    "family; the sequence matches this implementation at complementary levels "
    "(see c06b and the decisions ledger)"))
def test_c06a_interval_lengths_as_stated(length_report):
    box95 = length_report.box_lengths[0.95]
    ok = abs(box95 - 1.22) <= 0.25 and box95 < length_report.lrt_lengths[0.95]
    verdict("c06a interval lengths (criterion as stated)", ok,
            f"box 0.95 length {box95:.3f} vs 1.22 +/- 0.25")


def test_c06b_interval_lengths_consistent_mapping(length_report):
    # the reference sequences (1.22, 1.37, 1.55, 1.84) and (2.56, ..., 3.31)
    # match this pipeline when read in the nesting-consistent order
    # (shortest interval at the lowest level)
    refs_box = {0.80: 1.22, 0.85: 1.37, 0.90: 1.55, 0.95: 1.84}
    refs_lrt = {0.80: 2.56, 0.85: 2.88, 0.90: 3.08, 0.95: 3.31}
    msgs, ok = [], True
    for level, ref in refs_box.items():
        got = length_report.box_lengths[level]
        ok &= abs(got - ref) <= 0.25
        msgs.append(f"box {level:.2f}: {got:.2f} vs {ref}")
    for level, ref in refs_lrt.items():
        got = length_report.lrt_lengths[level]
        ok &= abs(got - ref) <= 0.45
        msgs.append(f"lrt {level:.2f}: {got:.2f} vs {ref}")
    ok &= length_report.box_lengths[0.95] < length_report.lrt_lengths[0.95]
    verdict("c06b interval lengths (nesting-consistent mapping)", ok,
            "; ".join(msgs))


def test_c07_median_unbiasedness():
    spec = CoverageStudySpec(model="gaussian", theta0=(0.0,), replicates=2000,
                             r=1500, s=2, model_params={"n": 1},
                             seed=20250815, workers=WORKERS)
    report = run_median_unbiasedness_study(spec)
    ok = 0.47 <= report.fraction_below <= 0.53
    verdict("c07 median unbiasedness", ok,
            f"fraction theta_hat <= theta0: {report.fraction_below:.3f} "
            f"(target [0.47, 0.53], {report.n_included} replicates)")


@pytest.fixture(scope="module")
def scaling_report():
    return run_scaling_study([10, 15, 20, 25], [2, 6, 10], 100_000,
                             model="mixture", theta0=0.8, seed=20250816,
                             workers=WORKERS)


def test_c08_acceptance_scaling(scaling_report):
    rep = scaling_report
    decreasing = all(rep.counts[(a, s)] > rep.counts[(b, s)]
                     for s in rep.s_values
                     for a, b in zip(rep.n_values, rep.n_values[1:]))
    r6 = rep.ratios[(20, 6)]
    r10 = rep.ratios[(20, 10)]
    super_prop = r6 > 3.0 and r10 > 5.0
    verdict("c08 acceptance scaling", decreasing and super_prop,
            f"counts strictly decreasing in n: {decreasing}; "
            f"ratios at n=20: S=6 {r6:.1f} (>3), S=10 {r10:.1f} (>5)")


def test_c09_s_variability():
    model = MixtureModel(n=25)
    y_obs = model.simulate([0.8], np.random.default_rng(44))
    grid = np.linspace(0.05, 2.95, 101)
    report = run_s_variability_study("mixture", y_obs, [4, 10], 5, 30_000, grid,
                                     model_params={"n": 25}, seed=20250817,
                                     workers=WORKERS)
    ok = report.mean_sd[10] < report.mean_sd[4]
    verdict("c09 pseudo-sample variability", ok,
            f"mean pointwise sd: S=10 {report.mean_sd[10]:.5f} < "
            f"S=4 {report.mean_sd[4]:.5f}")


def test_c10_decay_formulas():
    chi2_exact = abs(abc_ball_acceptance(2, math.sqrt(2.0), 0.0)
                     - (1.0 - math.exp(-1.0)))
    box_wins = []
    log_abc = []
    for d in range(1, 31):
        _, factor2 = box_acceptance_curve(d, 0.5)
        abc = abc_ball_acceptance(d, 0.5, 1.0)
        log_abc.append(math.log(abc))
        if 5 <= d <= 30:
            box_wins.append(factor2 > abc)
    drops = -np.diff(log_abc)
    super_linear = bool(np.all(np.diff(drops) > 0))
    ok = chi2_exact < 1e-12 and all(box_wins) and super_linear
    verdict("c10 decay formulas", ok,
            f"chi2(2) CDF error {chi2_exact:.1e} (<1e-12); box beats ball on "
            f"d=5..30: {all(box_wins)}; log-ball drops accelerate: {super_linear}")


def test_c11_region_geometry():
    surfaces = []
    gauss = GaussianLocationModel(n=1)
    out = run_sampler(gauss, [0.0], SamplerConfig(r=30_000, s=2, seed=61))
    surfaces.append(("gaussian", fit_depth_surface(out.accepted, support=out.support),
                     np.linspace(-6, 6, 200)[:, None]))
    mix = MixtureModel(n=10)
    t_obs = mix.summarize(mix.simulate([0.8], np.random.default_rng(62)))
    out = run_sampler(mix, t_obs, SamplerConfig(r=20_000, s=6, seed=63))
    surfaces.append(("mixture", fit_depth_surface(out.accepted, support=out.support),
                     np.linspace(0, 3, 200)[:, None]))
    ricker = RickerModel(series_length=20, phi=10, n0=1, infer_noise=True,
                         summary="series", support=[(0.0, 4.0), (0.0, 5.0)])
    t_obs = ricker.summarize(ricker.simulate([2.0, 2.0], np.random.default_rng(64)))
    out = run_sampler(ricker, t_obs, SamplerConfig(r=8_000, s=10, seed=65))
    gx, gy = np.meshgrid(np.linspace(0, 4, 40), np.linspace(0, 5, 40), indexing="ij")
    surfaces.append(("ricker", fit_depth_surface(out.accepted, support=out.support),
                     np.column_stack([gx.ravel(), gy.ravel()])))

    alphas = (0.01, 0.05, 0.2, 0.5, 0.8)
    violations = 0
    theta_hat_misses = 0
    for name, surface, queries in surfaces:
        for kind in RULE_KINDS:
            flags = []
            for alpha in alphas:
                region = build_region(surface, RegionRule(kind, alpha))
                flags.append(np.asarray(member(region, queries, "kde")))
                if not member(region, surface.theta_hat, "kde"):
                    theta_hat_misses += 1
            for wide, narrow in zip(flags, flags[1:]):
                violations += int(np.sum(narrow & ~wide))
    ok = violations == 0 and theta_hat_misses == 0
    verdict("c11 region geometry", ok,
            f"nesting violations {violations}, maximizer exclusions "
            f"{theta_hat_misses} across 3 surfaces x 3 rules x 5 levels")


def test_c12_byte_identical_reruns(tmp_path):
    cfg = tmp_path / "study.ini"
    cfg.write_text("""
[model]
name = mixture
n = 8

[observation]
theta0 = 0.8

[sampler]
r = 4000
s = 4
seed = 71

[coverage]
replicates = 8
levels = 0.95, 0.80
seed = 72
""", encoding="utf-8")

    def run(outdir, workers):
        assert main(["coverage", "--config", str(cfg), "--method", "both",
                     "--out-dir", str(outdir), "--workers", str(workers)]) == 0
        assert main(["sample", "--config", str(cfg), "--out-dir", str(outdir)]) == 0

    run(tmp_path / "a", 1)
    run(tmp_path / "b", 2)
    run(tmp_path / "c", 1)

    identical = []
    for name in ("accepted.csv", "coverage_summary.txt"):
        blobs = [(tmp_path / d / name).read_bytes() for d in "abc"]
        identical.append(blobs[0] == blobs[1] == blobs[2])
    for name in ("coverage_box.json", "coverage_lr.json"):
        payloads = []
        for d in "abc":
            data = json.loads((tmp_path / d / name).read_text())
            data.pop("timing", None)  # wall clock is the one run-specific field
            payloads.append(json.dumps(data, sort_keys=True))
        identical.append(payloads[0] == payloads[1] == payloads[2])
    ok = all(identical)
    verdict("c12 determinism", ok,
            f"reruns with workers 1/2/1 byte-identical: {identical}")

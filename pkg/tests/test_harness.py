import math

import numpy as np
import pytest
from scipy import stats

from boxcd.harness import (CoverageStudySpec, abc_ball_acceptance,
                           box_acceptance_curve, run_coverage_study,
                           run_length_study, run_lrt_coverage,
                           run_median_unbiasedness_study, run_s_variability_study,
                           run_scaling_study)
from boxcd.models import GaussianLocationModel, MixtureModel
from boxcd.sampler import scalar_acceptance_oracle


def gaussian_spec(**kw):
    base = dict(model="gaussian", theta0=(0.0,), replicates=40, r=1500, s=2,
                model_params={"n": 1}, levels=(0.95, 0.8), seed=5, workers=1)
    base.update(kw)
    return CoverageStudySpec(**base)


class TestCoverageStudy:
    def test_single_replicate_gives_degenerate_coverage(self):
        report = run_coverage_study(gaussian_spec(replicates=1))
        for level in report.levels:
            assert report.coverage[level] in (0.0, 1.0)
            assert report.se[level] == 0.0

    def test_se_formula_is_exact(self):
        report = run_coverage_study(gaussian_spec(replicates=25))
        b = report.n_included
        for level in report.levels:
            c = report.coverage[level]
            assert report.se[level] == pytest.approx(math.sqrt(c * (1 - c) / b))

    def test_coverage_weakly_decreasing_in_level(self):
        report = run_coverage_study(gaussian_spec(replicates=30,
                                                  levels=(0.95, 0.9, 0.85, 0.8)))
        values = [report.coverage[lv] for lv in report.levels]
        assert all(a >= b for a, b in zip(values, values[1:]))

    def test_reports_all_rules_and_inclusion_flags(self):
        spec = gaussian_spec(replicates=12)
        report = run_coverage_study(spec)
        assert set(report.per_rule) == {"level-set-alphaM", "scalar-exact-equitail",
                                        "depth-quantile"}
        for rows in report.inclusion.values():
            assert len(rows) == spec.replicates
        assert report.coverage == report.per_rule[spec.rule]["coverage"]

    def test_failed_replicates_are_counted_not_dropped(self):
        # an impossibly high acceptance floor fails every replicate
        spec = gaussian_spec(replicates=6, min_accepted=10**9)
        report = run_coverage_study(spec)
        assert report.n_failed == 6
        assert report.n_included == 0
        assert len(report.failures) == 6
        assert all(row is None for row in report.inclusion["level-set-alphaM"])

    def test_worker_count_does_not_change_results(self):
        spec1 = gaussian_spec(replicates=10, workers=1)
        spec2 = gaussian_spec(replicates=10, workers=2)
        r1 = run_coverage_study(spec1)
        r2 = run_coverage_study(spec2)
        assert r1.coverage == r2.coverage
        assert r1.inclusion == r2.inclusion

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            gaussian_spec(replicates=0)
        with pytest.raises(ValueError):
            gaussian_spec(levels=(0.95, 1.0))
        with pytest.raises(ValueError):
            gaussian_spec(rule="nope")


class TestLrtCoverage:
    def test_quadratic_likelihood_identity_case(self):
        # LR at theta0 = argmax is zero up to optimizer tolerance
        class Quadratic(GaussianLocationModel):
            pass

        model_spec = gaussian_spec(replicates=5, theta0=(0.3,), model_params={"n": 5})
        report = run_lrt_coverage(model_spec)
        assert report.method == "lr"
        assert report.n_included == 5

    def test_gaussian_location_lr_is_exactly_chi_square(self):
        # MLE is the sample mean, so -2 log lambda = n (ybar - theta0)^2 ~ chi2(1)
        # exactly; coverage must match each level within binomial noise
        spec = gaussian_spec(replicates=300, r=10, model_params={"n": 4},
                             levels=(0.95, 0.8, 0.5))
        report = run_lrt_coverage(spec)
        for level in spec.levels:
            se = math.sqrt(level * (1 - level) / report.n_included)
            assert abs(report.coverage[level] - level) < 3.5 * se

    def test_intractable_model_rejected(self):
        spec = CoverageStudySpec(model="ricker", theta0=(2.0,), replicates=2, r=100,
                                 s=2, model_params={"sigma2": 1.0})
        with pytest.raises(ValueError, match="likelihood"):
            run_lrt_coverage(spec)

    def test_paired_with_box_study_data_streams(self):
        # same spec, same seeds: the observed datasets are shared, so the
        # comparison between methods is replicate-by-replicate paired
        from boxcd.harness import _make_model, _simulate_observation

        spec = gaussian_spec(replicates=3)
        data1 = [_simulate_observation(spec, _make_model(spec, rep), rep)[0]
                 for rep in range(3)]
        data2 = [_simulate_observation(spec, _make_model(spec, rep), rep)[0]
                 for rep in range(3)]
        for a, b in zip(data1, data2):
            np.testing.assert_array_equal(a, b)


class TestScalingStudy:
    def test_self_ratio_is_one_and_counts_recorded(self):
        report = run_scaling_study([5, 8], [2, 4], 4000, theta0=0.8, seed=7)
        for n in (5, 8):
            assert report.ratios[(n, 2)] == 1.0
            assert report.counts[(n, 2)] > 0
            assert report.counts[(n, 4)] >= report.counts[(n, 2)]
        rows = list(report.rows())
        assert len(rows) == 4

    def test_odd_s_rejected(self):
        with pytest.raises(ValueError):
            run_scaling_study([5], [3], 100)

    def test_deterministic_across_workers(self):
        r1 = run_scaling_study([5], [2, 4], 2000, seed=9, workers=1)
        r2 = run_scaling_study([5], [2, 4], 2000, seed=9, workers=2)
        assert r1.counts == r2.counts


class TestSVariability:
    @pytest.fixture(scope="class")
    def y_obs(self):
        return MixtureModel(n=8).simulate([0.8], np.random.default_rng(12))

    def test_single_replication_has_zero_sd(self, y_obs):
        grid = np.linspace(0.1, 2.9, 21)
        report = run_s_variability_study("mixture", y_obs, [2], 1, 4000, grid,
                                         model_params={"n": 8}, seed=3)
        assert report.mean_sd[2] == 0.0
        np.testing.assert_array_equal(report.pointwise_sd[2], np.zeros(21))

    def test_grid_outside_support_rejected(self, y_obs):
        with pytest.raises(ValueError, match="support"):
            run_s_variability_study("mixture", y_obs, [2], 2, 1000,
                                    np.linspace(5.0, 9.0, 5),
                                    model_params={"n": 8}, seed=3)

    def test_curve_shapes(self, y_obs):
        grid = np.linspace(0.1, 2.9, 15)
        report = run_s_variability_study("mixture", y_obs, [2, 4], 2, 9000, grid,
                                         model_params={"n": 8}, seed=4)
        assert report.curves[2].shape == (2, 15)
        assert set(report.mean_sd) == {2, 4}


class TestLengthStudy:
    def test_box_intervals_below_lrt_and_nested(self):
        spec = CoverageStudySpec(model="mixture", theta0=(0.8,), replicates=4,
                                 r=6000, s=6, model_params={"n": 10},
                                 levels=(0.95, 0.8), seed=21, workers=1)
        report = run_length_study(spec)
        assert report.n_included == 4
        assert 0 < report.box_lengths[0.8] <= report.box_lengths[0.95]
        assert 0 < report.lrt_lengths[0.8] <= report.lrt_lengths[0.95]
        assert report.box_lengths[0.95] < report.lrt_lengths[0.95]

    def test_requires_scalar_likelihood_model(self):
        spec = CoverageStudySpec(model="logistic", theta0=(0, 0, 0), replicates=2,
                                 r=100, s=2, seed=1)
        with pytest.raises(ValueError):
            run_length_study(spec)


class TestMedianUnbiasedness:
    def test_empty_study_rejected(self):
        with pytest.raises(ValueError):
            CoverageStudySpec(model="gaussian", theta0=(0.0,), replicates=0,
                              r=100, s=2)

    def test_fraction_near_half_smoke(self):
        spec = gaussian_spec(replicates=60, r=2000)
        report = run_median_unbiasedness_study(spec)
        assert 0.3 < report.fraction_below < 0.7
        assert report.se == pytest.approx(
            math.sqrt(report.fraction_below * (1 - report.fraction_below)
                      / report.n_included))

    def test_accepted_median_estimator_also_centers(self):
        spec = gaussian_spec(replicates=60, r=2000)
        report = run_median_unbiasedness_study(spec, estimator="accepted-median")
        assert 0.3 < report.fraction_below < 0.7

    def test_estimator_validation(self):
        with pytest.raises(ValueError):
            run_median_unbiasedness_study(gaussian_spec(replicates=2), estimator="mean")


class TestDecayFormulas:
    def test_abc_ball_cdf_limit(self):
        assert abc_ball_acceptance(3, 1e9, 1.0) == pytest.approx(1.0)

    def test_abc_ball_chi2_closed_form(self):
        # chi^2 with 2 dof has CDF 1 - exp(-x/2)
        assert abc_ball_acceptance(2, math.sqrt(2.0), 0.0) == pytest.approx(
            1.0 - math.exp(-1.0), abs=1e-12)

    def test_abc_ball_super_exponential_decay(self):
        probs = [abc_ball_acceptance(d, 0.5, 1.0) for d in range(1, 31)]
        logs = np.log(probs)
        diffs = -np.diff(logs)
        assert np.all(np.diff(logs) < 0)  # non-increasing in d
        assert np.all(np.diff(diffs) > 0)  # and faster than linearly

    def test_box_curve_symmetric_case(self):
        paper, factor2 = box_acceptance_curve(3, 0.5)
        assert paper == pytest.approx((1 / 4) ** 3)
        assert factor2 == pytest.approx((1 / 2) ** 3)

    def test_box_curve_matches_scalar_oracle_in_one_dimension(self):
        _, factor2 = box_acceptance_curve(1, 0.3)
        assert factor2 == pytest.approx(0.42)
        assert factor2 == pytest.approx(scalar_acceptance_oracle(0.3, 2))

    def test_box_beats_ball_for_growing_dimension(self):
        gaps = []
        for d in range(1, 31):
            _, factor2 = box_acceptance_curve(d, 0.5)
            gaps.append(math.log(factor2) - math.log(abc_ball_acceptance(d, 0.5, 1.0)))
        assert all(g > 0 for g in gaps[4:])
        assert all(b > a for a, b in zip(gaps[4:], gaps[5:]))

    def test_validation(self):
        with pytest.raises(ValueError):
            abc_ball_acceptance(0, 1.0, 1.0)
        with pytest.raises(ValueError):
            abc_ball_acceptance(2, -1.0, 1.0)
        with pytest.raises(ValueError):
            abc_ball_acceptance(2, 1.0, -0.1)
        with pytest.raises(ValueError):
            box_acceptance_curve(2, 1.0)
        with pytest.raises(ValueError):
            box_acceptance_curve(2, [0.5, 0.5, 0.5])

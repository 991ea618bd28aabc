"""Synthetic dataset sampler: determinism, calibration, count resolution."""

from __future__ import annotations

import json

import numpy as np
import pytest

from wasmfp.classifier import (
    CHROMIUM,
    OTHER,
    ClassifierConfig,
    evaluate,
    labeled_ratios_from_database,
)
from wasmfp.matching import database_to_dict
from wasmfp.simulate import (
    ClassProfile,
    builtin_profiles,
    profile_from_dict,
    profile_to_dict,
    resolve_counts,
    sample_dataset,
)
from wasmfp.wasmgen import name_to_index

SETTER_1 = name_to_index()["scripted-setter-1"]
SETTER_2 = name_to_index()["scripted-setter-2"]


def flat_profile(mean=19.54, spread=0.0, inflation=(1.0, 1.0),
                 device_sigma=0.0, browser="chrome") -> ClassProfile:
    return ClassProfile(
        label={"browser": browser, "os": "test", "device_class": "desktop"},
        per_test_mean=(mean,) * 20,
        per_test_spread=(spread,) * 20,
        setter_inflation=inflation,
        device_scale_sigma=device_sigma,
    )


class TestSampleDataset:
    def test_deterministic_for_fixed_seed(self):
        profiles = builtin_profiles()
        a = sample_dataset(profiles, 5, seed=123)
        b = sample_dataset(profiles, 5, seed=123)
        assert json.dumps(database_to_dict(a)) == json.dumps(database_to_dict(b))

    def test_different_seeds_differ(self):
        profiles = builtin_profiles()
        a = sample_dataset(profiles, 5, seed=1)
        b = sample_dataset(profiles, 5, seed=2)
        assert not np.array_equal(a.matrix, b.matrix)

    def test_zero_spread_returns_exact_means(self):
        db = sample_dataset([flat_profile(mean=19.54)], 10, seed=0)
        assert np.all(db.matrix == 19.54)

    def test_setter_inflation_scales_the_two_setter_tests(self):
        db = sample_dataset([flat_profile(inflation=(7.79, 8.25))], 4, seed=0)
        assert np.all(db.matrix[SETTER_1, :] == 19.54 * 7.79)
        assert np.all(db.matrix[SETTER_2, :] == 19.54 * 8.25)
        others = np.delete(db.matrix, [SETTER_1, SETTER_2], axis=0)
        assert np.all(others == 19.54)

    def test_published_windows_chrome_means_reproduced(self):
        # baseline 19.54 ms with inflation (7.79, 8.25) lands near the
        # published 152.21/161.14 ms setter means
        profile = flat_profile(spread=0.12, inflation=(7.79, 8.25),
                               device_sigma=0.25)
        db = sample_dataset([profile], 4000, seed=3)
        m1 = db.matrix[SETTER_1, :].mean()
        m2 = db.matrix[SETTER_2, :].mean()
        assert abs(m1 - 152.21) / 152.21 < 0.10
        assert abs(m2 - 161.14) / 161.14 < 0.10

    def test_all_values_positive_and_finite(self):
        db = sample_dataset(builtin_profiles(), 50, seed=9)
        assert np.all(np.isfinite(db.matrix))
        assert np.all(db.matrix > 0)

    def test_labels_match_profiles(self):
        profiles = builtin_profiles()
        db = sample_dataset(profiles, [1] * len(profiles), seed=0)
        assert [lbl["browser"] for lbl in db.labels] == \
            [p.label["browser"] for p in profiles]

    def test_per_profile_substreams_are_stable(self):
        # adding a later profile must not disturb earlier columns
        profiles = builtin_profiles()
        small = sample_dataset(profiles[:2], [3, 3], seed=42)
        big = sample_dataset(profiles, [3, 3, 0, 0, 0, 0, 0, 0], seed=42)
        np.testing.assert_array_equal(small.matrix, big.matrix)

    def test_empty_request_rejected(self):
        with pytest.raises(ValueError, match="no samples"):
            sample_dataset(builtin_profiles(), 0, seed=0)


class TestResolveCounts:
    def test_single_value_broadcasts(self):
        profiles = builtin_profiles()
        assert resolve_counts(profiles, [7]) == [7] * len(profiles)

    def test_two_values_split_by_engine_group(self):
        profiles = builtin_profiles()
        counts = resolve_counts(profiles, [87, 55])
        by_browser = {}
        for p, c in zip(profiles, counts):
            by_browser.setdefault(p.label["browser"], []).append(c)
        assert sum(by_browser["chrome"]) + sum(by_browser["edge"]) == 87
        assert sum(by_browser["firefox"]) == 55
        assert by_browser["safari"] == [0, 0]
        # even split, remainder to earlier members
        assert sorted(by_browser["chrome"] + by_browser["edge"],
                      reverse=True) == [22, 22, 22, 21]
        assert by_browser["firefox"] == [28, 27]

    def test_full_length_spec_passes_through(self):
        profiles = builtin_profiles()
        spec = list(range(len(profiles)))
        assert resolve_counts(profiles, spec) == spec

    def test_bad_lengths_rejected(self):
        with pytest.raises(ValueError, match="count spec"):
            resolve_counts(builtin_profiles(), [1, 2, 3])

    def test_negative_rejected(self):
        with pytest.raises(ValueError, match="non-negative"):
            resolve_counts(builtin_profiles(), [-1])


@pytest.fixture(scope="module")
def big_sample():
    profiles = builtin_profiles()
    counts = resolve_counts(profiles, [10000, 10000])
    db = sample_dataset(profiles, counts, seed=2024)
    return labeled_ratios_from_database(db)


class TestBuiltinCalibration:
    @pytest.mark.parametrize("cls,mean_targets,std_targets", [
        (CHROMIUM, (5.59, 6.21), (1.26, 1.40)),
        (OTHER, (1.67, 1.98), (0.68, 1.57)),
    ])
    def test_pooled_ratio_statistics_within_15_percent(
            self, big_sample, cls, mean_targets, std_targets):
        r1 = np.array([r.ss1_over_sg0 for r, lbl in big_sample if lbl == cls])
        r2 = np.array([r.ss2_over_sg0 for r, lbl in big_sample if lbl == cls])
        for values, mean_t, std_t in ((r1, mean_targets[0], std_targets[0]),
                                      (r2, mean_targets[1], std_targets[1])):
            assert abs(values.mean() - mean_t) / mean_t < 0.15
            assert abs(values.std(ddof=1) - std_t) / std_t < 0.15

    def test_ios_profile_flat_at_21ms(self):
        ios = [p for p in builtin_profiles() if p.label["os"] == "ios"]
        assert len(ios) == 1
        assert ios[0].setter_inflation == (1.0, 1.0)
        db = sample_dataset(ios, 2000, seed=5)
        assert abs(db.matrix.mean() - 21.0) / 21.0 < 0.05

    def test_classifier_accuracy_on_87_55_split(self):
        profiles = builtin_profiles()
        counts = resolve_counts(profiles, [87, 55])
        accuracies = []
        for seed in range(20):
            db = sample_dataset(profiles, counts, seed=seed)
            result = evaluate(labeled_ratios_from_database(db),
                              ClassifierConfig(3.05, 3.10))
            accuracies.append(result.accuracy)
        assert all(a >= 0.95 for a in accuracies)


class TestProfileValidation:
    def test_rejects_non_positive_mean(self):
        with pytest.raises(ValueError, match="positive"):
            flat_profile(mean=0.0)

    def test_rejects_negative_spread(self):
        with pytest.raises(ValueError, match="non-negative"):
            flat_profile(spread=-0.1)

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError, match="20 entries"):
            ClassProfile(label={}, per_test_mean=(1.0,) * 19,
                         per_test_spread=(0.1,) * 20,
                         setter_inflation=(1.0, 1.0))

    def test_json_round_trip(self):
        profile = builtin_profiles()[0]
        clone = profile_from_dict(json.loads(json.dumps(profile_to_dict(profile))))
        assert clone == profile

"""Smoke tests for the compiled revq module."""

import json
import math

import pytest

import revq


def test_compute_doa_worked_example():
    units = [
        ("claim", "experiment", None),
        ("premise", "experiment", 0),
        ("premise", "experiment", 1),
        ("premise", "methodology", 2),
    ]
    r = revq.compute_doa(units)
    assert r["premise_ratio"] == pytest.approx(0.75)
    assert r["grounding_score"] == pytest.approx(0.5)
    assert r["doa"] == pytest.approx(0.6)
    assert revq.compute_doa([]) is None


def test_novelty_aggregation_and_metrics():
    rel = {"rw1": 1.0, "rw2": 1.0, "rw3": 1.0}
    s1 = revq.aggregate_claim([("rw1", -2), ("rw2", 2), ("rw3", 2)], rel)
    assert s1 == pytest.approx(2.0 / 3.0)
    m = revq.novelty_metrics([s1, s1, 2.0])
    assert m["ns"] == pytest.approx(0.778, abs=1e-3)
    assert m["ssr"] <= m["sr"]


def test_ncps_and_mcs():
    assert revq.compute_ncps(["Minor", "Critical", "Minor", "Critical"]) == (
        pytest.approx(0.864, abs=1e-3)
    )
    assert revq.compute_ncps(["Critical"]) == pytest.approx(1.0)
    assert revq.compute_ncps([]) is None

    r = revq.compute_mcs(
        [[1, 2, 1, 0, 1], [2, 2, 0, 1, 1], [2, 2, 0, 1, 2], [2, 2, 0, 0, 1]]
    )
    assert r["mcs"] == pytest.approx(0.575)
    assert r["dim_means"] == pytest.approx([1.75, 2.0, 0.25, 0.5, 1.25])
    assert r["sd"] == pytest.approx(0.0)


def test_retrieval_kernel():
    pool = [
        revq.CandidateWork("a", "Graph ranking networks", "We rank graphs.", 2020, 1.0),
        revq.CandidateWork("b", "Graph ranking networks", "We rank graphs.", 2020, 0.4),
        revq.CandidateWork("c", "Bandit lower bounds", "Sample complexity.", 2026, 0.9),
    ]
    filtered = revq.filter_candidates(pool, 2025)
    assert [c.id for c in filtered] == ["a", "b"]
    deduped = revq.dedup_candidates(filtered, 0.96)
    assert [c.id for c in deduped] == ["a"]
    selected = revq.mmr_select(pool, 2, 0.5)
    assert len(selected) == 2


def test_stats_kernel():
    assert revq.holm_correction([0.01, 0.04, 0.03]) == pytest.approx(
        [0.03, 0.06, 0.06]
    )
    assert revq.jensen_shannon_divergence([1, 0], [0.5, 0.5]) == pytest.approx(
        0.3113, abs=1e-4
    )
    assert revq.shannon_entropy([0.25] * 4) == pytest.approx(2.0)

    r = revq.wilcoxon_signed_rank(list(range(1, 11)), [0.0] * 10)
    assert r["exact"]
    assert r["p_value"] == pytest.approx(2.0 / 1024.0)

    mw = revq.mann_whitney_u([11, 12, 13, 14, 15], [1, 2, 3, 4, 5])
    assert mw["p_value"] == pytest.approx(2.0 / 252.0)

    pr = revq.pearson_with_ttest([1.0, 2.0, 3.0, 5.0], [1.0, 2.0, 3.0, 5.0])
    assert pr["statistic"] == pytest.approx(1.0)
    assert revq.pearson_with_ttest([1.0, 1.0, 1.0], [1.0, 2.0, 3.0]) is None


def test_stats_cross_check_against_scipy():
    scipy_stats = pytest.importorskip("scipy.stats")
    a = [3.1, 4.5, 2.2, 7.8, 5.0, 6.1, 1.4, 8.3]
    b = [2.0, 5.1, 2.9, 6.0, 4.2, 7.7, 0.9, 9.0]
    ours = revq.wilcoxon_signed_rank(a, b)
    theirs = scipy_stats.wilcoxon(a, b, method="exact")
    assert ours["p_value"] == pytest.approx(theirs.pvalue, abs=1e-12)

    x = [0.1, 0.9, 0.3, 0.7, 0.5, 0.2]
    y = [1.2, 0.4, 0.8, 0.6, 1.0, 0.35]
    ours_mw = revq.mann_whitney_u(x, y)
    theirs_mw = scipy_stats.mannwhitneyu(x, y, alternative="two-sided", method="exact")
    assert ours_mw["p_value"] == pytest.approx(theirs_mw.pvalue, abs=1e-12)

    ours_p = revq.pearson_with_ttest(x, y)
    theirs_p = scipy_stats.pearsonr(x, y)
    assert ours_p["statistic"] == pytest.approx(theirs_p.statistic, abs=1e-12)
    assert ours_p["p_value"] == pytest.approx(theirs_p.pvalue, abs=1e-10)


def test_judge_gateway_surface():
    prompt = revq.render_prompt(
        "doa-segmentation", {"raw_review_text": "A short review."}
    )
    assert "insert the exact marker <sep>" in prompt
    assert "A short review." in prompt

    doc = json.loads(
        revq.parse_strict_json(
            '{"score": 2, "label": "SUPPORTED"}', "novelty-verdict"
        )
    )
    assert doc["score"] == 2

    with pytest.raises(ValueError):
        revq.parse_strict_json('{"score": 3, "label": "SUPPORTED"}', "novelty-verdict")

    d1 = revq.request_digest("doa-segmentation", {"raw_review_text": "x"}, "m")
    d2 = revq.request_digest("doa-segmentation", {"raw_review_text": "x"}, "m")
    d3 = revq.request_digest("doa-segmentation", {"raw_review_text": "y"}, "m")
    assert d1 == d2
    assert d1 != d3
    assert len(d1) == 64


def test_trigram_cosine():
    assert revq.trigram_cosine("same text", "same  TEXT") == pytest.approx(1.0)
    assert revq.trigram_cosine("abc", "xyz") == pytest.approx(0.0)

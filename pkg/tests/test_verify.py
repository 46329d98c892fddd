"""Self-check harness: closed forms replayed against the truncated number
basis oracle, with capacity skips and bookkeeping."""

import math
import re

import pytest

from cavshare.verify import (
    PairRecord,
    SuiteResult,
    VerifyCase,
    cat_suite,
    lindblad_suite,
    run_all,
    single_photon_suite,
)

_CASE_PATTERNS = {
    "single_photon": re.compile(
        r"^single_photon/N=\d+/Gt=[0-9.e+-]+/(law|duality)$"
    ),
    "cat": re.compile(
        r"^cat/N=\d+/x=[0-9.e+-]+/(even|odd)/Gt=[0-9.e+-]+$"
    ),
    "lindblad": re.compile(
        r"^lindblad/N=\d+/x=[0-9.e+-]+/gamma=[0-9.e+-]+/(even|odd)/Gt=[0-9.e+-]+$"
    ),
}


def test_single_photon_small_grid_passes():
    result = single_photon_suite(n_times=4)
    assert result.suite == "single_photon"
    passed, failed, skipped = result.counts()
    assert (failed, skipped) == (0, 0)
    assert passed == len(result.cases) == 2 * 4 * 3  # law+duality, times, sizes
    for case in result.cases:
        assert _CASE_PATTERNS["single_photon"].match(case.case_id), case.case_id
        assert case.status == "pass"
        assert case.abs_error <= case.tolerance
        expected_tol = 1e-8 if case.case_id.endswith("law") else 1e-10
        assert case.tolerance == expected_tol


def test_single_photon_records_pair_concurrences():
    result = single_photon_suite(n_times=4)
    assert result.pair_records
    for rec in result.pair_records:
        assert rec.suite == "single_photon"
        assert rec.n_crystallites in (2, 3, 5)
        assert 0.0 <= rec.concurrence <= 1.0
        # monogamy of the symmetric share
        assert rec.concurrence <= 2.0 / rec.n_crystallites + 1e-9


def test_cat_small_grid_passes():
    # even counts keep the half-offset grid away from the Gt = pi node
    result = cat_suite(n_times=4)
    assert result.suite == "cat"
    passed, failed, skipped = result.counts()
    assert (failed, skipped) == (0, 0)
    assert passed == 2 * 2 * 4  # intensities x parities x times
    for case in result.cases:
        assert _CASE_PATTERNS["cat"].match(case.case_id), case.case_id
        assert case.tolerance == 1e-6


def test_lindblad_small_grid_passes():
    result = lindblad_suite(n_times=2, gt_max=0.8)
    assert result.suite == "lindblad"
    passed, failed, skipped = result.counts()
    assert (failed, skipped) == (0, 0)
    assert passed == 2 * 2  # parities x times
    for case in result.cases:
        assert _CASE_PATTERNS["lindblad"].match(case.case_id), case.case_id
        assert case.tolerance == 1e-2


def test_interior_grid_avoids_degenerate_nodes():
    # times are offset half a cell so Gt = 0, pi, 2pi never occur
    result = cat_suite(n_times=8)
    gts = {float(c.case_id.rsplit("Gt=", 1)[1]) for c in result.cases}
    for gt in gts:
        assert min(abs(gt - k * math.pi) for k in range(0, 4)) > 1e-3


def test_capacity_overflow_becomes_skip():
    result = cat_suite(n=12, n_times=2)
    passed, failed, skipped = result.counts()
    assert (passed, failed, skipped) == (0, 0, 1)
    case = result.cases[0]
    assert case.status == "skip"
    assert "capacity" in case.case_id
    assert math.isnan(case.analytic) and math.isnan(case.oracle)
    assert not result.pair_records


def test_run_all_propagates_overrides():
    results = run_all(n_times=2, gt_max=0.8, n_override=12)
    assert [r.suite for r in results] == ["single_photon", "cat", "lindblad"]
    single, cat, lind = results
    # tiny single-excitation basis still fits at N=12
    assert single.counts() == (2 * 2, 0, 0)
    assert all("/N=12/" in c.case_id for c in single.cases)
    # the number-resolved suites overflow and report skips
    assert cat.counts() == (0, 0, 1)
    assert lind.counts() == (0, 0, 1)


def test_status_field_matches_error_and_tolerance():
    for result in (single_photon_suite(n_times=3), cat_suite(n_times=4)):
        for case in result.cases:
            assert case.status == ("pass" if case.abs_error <= case.tolerance
                                   else "fail")

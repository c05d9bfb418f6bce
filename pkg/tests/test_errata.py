import math
from fractions import Fraction

import pytest

from gosper_karaji.errata import (
    binomial_closed_form_entry,
    errata_report,
    printed_multiplier,
    summary_table,
)

VERDICTS = {"confirmed", "refuted", "reinterpreted"}


@pytest.fixture(scope="module")
def report():
    return errata_report()


def test_every_entry_is_adjudicated(report):
    for e in report:
        assert e.verdict in VERDICTS
        assert e.evaluations, e.location
        assert e.engine["all_equal"], e.location


def test_refuted_entries_carry_counterexamples(report):
    for e in report:
        if e.verdict != "refuted":
            continue
        ce = e.counterexample
        assert ce is not None and ce["equal"] is False
        assert Fraction(ce["side_a"]) != Fraction(ce["side_b"])


def test_confirmed_entries_show_equal_sides(report):
    for e in report:
        if e.verdict == "confirmed":
            assert all(ev["equal"] for ev in e.evaluations)
            assert e.first_failing_n is None


def test_flagged_displays_are_covered(report):
    locations = [e.location for e in report]
    for needle in ("theorem", "R-multiplier", "binomial double-sum", "1/(k(k+1)) family, item 2",
                   "1/(k(k+1)) family, item 3", "(4k+1) k!/(2k+1)! family, item 2", "bivariate"):
        assert any(needle in loc for loc in locations), needle


def test_binomial_counterexample_by_hand():
    # n = 2: sum_k (k + 1) k C(2, k) = 2*1*2 + 3*2*1 = 10, printed form gives (12 + 10)/2 = 11
    e = binomial_closed_form_entry()
    assert e.verdict == "refuted"
    assert (e.counterexample["n"], e.counterexample["side_a"], e.counterexample["side_b"]) == (2, "10", "11")


def test_printed_multiplier_differs_from_binomial_expansion():
    # at m = 2, s = t = 1 the displayed form gives 2 - ... + t^2 = 3
    assert printed_multiplier(2, Fraction(1), Fraction(1)) == 3
    s, t = Fraction(3), Fraction(1)
    expansion = sum((-1) ** (i + 1) * math.comb(4, i) * s ** (4 - i) * t ** (i - 1) for i in range(1, 5))
    assert printed_multiplier(4, s, t) != expansion


def test_json_and_table(report):
    rows = summary_table(report).splitlines()
    assert len(rows) == len(report) + 1
    for e in report:
        j = e.to_json()
        assert j["kind"] == "errata" and j["verdict"] == e.verdict

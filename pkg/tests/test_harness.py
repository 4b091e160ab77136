import json

import pytest

from varopuc import harness


def test_single_criterion_in_isolation():
    recs = harness.run_all(only={2})
    assert [r.id for r in recs] == [2]
    assert recs[0].passed and not recs[0].skipped


def test_tiny_budget_skips_heavy_criteria():
    recs = harness.run_all(budget=1.0, only={1, 4, 9, 11})
    skipped = {r.id for r in recs if r.skipped}
    assert {4, 9, 11} <= skipped
    assert not next(r for r in recs if r.id == 1).skipped


def test_deterministic_measurements():
    a = harness.run_criterion(1)
    b = harness.run_criterion(1)
    assert a.measured == b.measured


def test_json_report():
    recs = harness.run_all(budget=0.0, only={3})
    doc = json.loads(harness.to_json(recs))
    assert doc["schema"] == 1 and doc["seed"] == 0x5EED
    assert doc["criteria"][0]["skipped"] is True
    assert doc["criteria"][0]["measured"] is None


def test_unknown_criterion():
    with pytest.raises(KeyError):
        harness.run_criterion(99)

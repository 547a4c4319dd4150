import pytest

from superinv import ValidationError
from superinv.verify import SUITES, run_suite


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes(name):
    records = run_suite(name, seed=2024, trials=4)
    assert records
    for record in records:
        assert record["status"] == "pass", record
        assert record["suite"] == name


def test_run_all_aggregates():
    records = run_suite("all", seed=5, trials=1)
    suites = {r["suite"] for r in records}
    assert suites == set(SUITES)
    assert all(r["status"] == "pass" for r in records)


def test_unknown_suite():
    with pytest.raises(ValidationError):
        run_suite("missing", seed=0, trials=1)


def test_reports_are_reproducible():
    a = run_suite("grassmann", seed=11, trials=5)
    b = run_suite("grassmann", seed=11, trials=5)
    assert a == b

import pytest

from toeplitz_opsys.worked_examples import EXAMPLES, run_all


@pytest.mark.parametrize("name,fn,limit", EXAMPLES, ids=[e[0] for e in EXAMPLES])
def test_example(name, fn, limit):
    assert fn() <= limit


def test_run_all_names_unique():
    results = run_all()
    assert len({r.name for r in results}) == len(results)
    assert all(r.passed for r in results)

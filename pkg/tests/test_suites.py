from __future__ import annotations

from sp6web.qfield import qint
from sp6web.suites import SUITES, _agree, kink, relation_identities, run_confluence, run_relations
from sp6web.webs import identity, merge, split


def test_relations_suite_passes():
    checks = run_relations()
    assert len(checks) == len(relation_identities())
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_wrong_coefficient_is_caught():
    # negative control: the 1,1 bigon is [2][3], not [2]
    ok, detail = _agree(merge(1, 1, 2).compose(split(2, 1, 1)), identity((2,)).scale(qint(2)), 3, None)
    assert not ok and "closure" in detail


def test_kink_type():
    k = kink(2, -1)
    assert (k.domain, k.codomain) == ((2,), (2,))


def test_confluence_suite_is_seeded():
    a = [c.name for c in run_confluence(seed=9, count=10)]
    b = [c.name for c in run_confluence(seed=9, count=10)]
    assert a == b and len(a) == 10


def test_suite_names():
    assert set(SUITES) == {"relations", "bmw", "reidemeister", "confluence", "tables"}

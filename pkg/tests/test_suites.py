"""Shape and determinism of the seeded verification suites."""

from twisthom.suites import SUITES, run_suites, seeded_induced_reps
from twisthom.complexes import catalog_complex
from twisthom.groups import free_product
from twisthom.reps import verify_rep, _verify_rep_uncached


def test_suite_names():
    assert set(SUITES) == {"euler", "trivialrep", "h0", "shapiro", "les",
                           "handlebody", "freeproduct"}


def test_run_suites_filters(suite_results):
    names = [s["suite"] for s in suite_results["suites"]]
    assert names == list(SUITES)
    only = run_suites(seed=0, only="trivialrep")
    assert [s["suite"] for s in only["suites"]] == ["trivialrep"]
    assert only["ok"]


def test_seeded_suites_are_deterministic():
    a = run_suites(seed=5, only="h0")
    b = run_suites(seed=5, only="h0")
    assert a == b
    c = run_suites(seed=6, only="h0")
    assert c["ok"]  # different seed still passes


def test_corrupt_fixture_negative_control():
    result = run_suites(seed=0, only="euler", corrupt=True)
    assert not result["ok"]
    assert result["suites"][0]["fail"] > 0


def test_seeded_induced_reps_are_valid():
    import random
    t3 = catalog_complex("t3").complex.group
    p = free_product(t3, t3)
    reps = seeded_induced_reps(p, random.Random(1), 5, max_degree=3)
    assert len(reps) == 5
    for rep in reps:
        assert rep.dim <= 6
        assert verify_rep(rep)
        assert _verify_rep_uncached(rep)  # not just the constructor flag

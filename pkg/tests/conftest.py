import pytest


@pytest.fixture(scope="session")
def suite_results():
    """One full run of the seeded lemma/obstruction suites, shared by tests."""
    from twisthom.suites import run_suites
    return run_suites(seed=0)

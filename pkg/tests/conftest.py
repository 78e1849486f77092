import pytest

import _corpus


@pytest.fixture(scope="session")
def fixtures():
    """One built workspace per fixture system, shared across the whole run."""
    return {label: _corpus.Fixture(label) for label in _corpus.SYSTEMS}


@pytest.fixture(scope="session", params=_corpus.SYSTEMS)
def fx(request, fixtures):
    return fixtures[request.param]

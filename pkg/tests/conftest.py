import os

import pytest

from gl2reps.ring import RingSpec
from gl2reps.context import build_context
from gl2reps.driver import classify
from gl2reps.oracle import oracle_table

PADIC = "padic"
LAURENT = "laurent"


def spec_of(flavor, p, r):
    return RingSpec(flavor, p, r)


@pytest.fixture(scope="session", autouse=True)
def _isolated_cache(tmp_path_factory):
    """Keep cache files out of the working tree during the test run."""
    path = tmp_path_factory.mktemp("gl2reps-cache")
    old = os.environ.get("GL2REPS_CACHE")
    os.environ["GL2REPS_CACHE"] = str(path)
    yield
    if old is None:
        os.environ.pop("GL2REPS_CACHE", None)
    else:
        os.environ["GL2REPS_CACHE"] = old


@pytest.fixture(scope="session")
def ctx_for():
    return lambda flavor, p, r: build_context(spec_of(flavor, p, r))


@pytest.fixture(scope="session")
def table_for():
    return lambda flavor, p, r: classify(spec_of(flavor, p, r))


_ORACLES = {}


@pytest.fixture(scope="session")
def oracle_for():
    def get(flavor, p, r):
        key = (flavor, p, r)
        if key not in _ORACLES:
            ctx = build_context(spec_of(flavor, p, r))
            _ORACLES[key] = oracle_table(
                ctx.G, classes=ctx.classes, spec=ctx.spec
            )
        return _ORACLES[key]

    return get

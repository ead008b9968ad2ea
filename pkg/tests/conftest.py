"""Shared fixtures: a session-wide oracle cache so grids are built once."""

import pytest


@pytest.fixture(scope="session")
def oracle_cache(tmp_path_factory):
    return tmp_path_factory.mktemp("oracle-cache")

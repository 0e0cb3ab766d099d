import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from groups.bianchi import BianchiGroup, cuspidal_elliptic_classes  # noqa: E402

# environment smoke check and the read-only reference pack are not test modules
collect_ignore = ["test_cross_platform.py"]
collect_ignore_glob = ["examples/*"]


@pytest.fixture(scope="session")
def picard():
    return BianchiGroup(1)


@pytest.fixture(scope="session")
def eisenstein_group():
    return BianchiGroup(3)


@pytest.fixture(scope="session")
def picard_ce(picard):
    return cuspidal_elliptic_classes(picard, 3)


@pytest.fixture(scope="session")
def eisenstein_ce(eisenstein_group):
    return cuspidal_elliptic_classes(eisenstein_group, 3)

import pytest

from unsieved.dickman import build_dickman


@pytest.fixture(scope="session")
def dickman_std():
    """Shared rho table covering [0, 10] at the default precision."""
    return build_dickman(10.0, 2.0**-10)


@pytest.fixture(scope="session")
def dickman_wide():
    """Rho table to w=20 for improper-integral checks."""
    return build_dickman(20.0, 2.0**-10)

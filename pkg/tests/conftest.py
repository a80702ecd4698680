import pytest

from gnplclt import enumeration


@pytest.fixture(scope="session")
def tables():
    """Enumeration tables for n = 3..6, shared across the whole run."""
    return {n: enumeration.build_table(n) for n in range(3, 7)}

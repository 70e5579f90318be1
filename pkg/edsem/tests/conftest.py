import pytest

from edsem.fixtures import named_fixture
from edsem.rees import analyze_kernel


@pytest.fixture(scope="session")
def triv():
    return named_fixture("triv")


@pytest.fixture(scope="session")
def lz2():
    return named_fixture("lz2")


@pytest.fixture(scope="session")
def n3():
    return named_fixture("n3")


@pytest.fixture(scope="session")
def c2():
    return named_fixture("c2")


@pytest.fixture(scope="session")
def c3():
    return named_fixture("c3")


@pytest.fixture(scope="session")
def s3():
    return named_fixture("s3")


@pytest.fixture(scope="session")
def a5():
    return named_fixture("a5")


@pytest.fixture(scope="session")
def a5plus():
    return named_fixture("a5plus")


@pytest.fixture(scope="session")
def rsing():
    return named_fixture("rsing")


@pytest.fixture(scope="session")
def rs240():
    return named_fixture("rs240")


@pytest.fixture(scope="session")
def rs240_analysis(rs240):
    return analyze_kernel(rs240)


@pytest.fixture(scope="session")
def a5_analysis(a5):
    return analyze_kernel(a5)


@pytest.fixture(scope="session")
def a5plus_analysis(a5plus):
    return analyze_kernel(a5plus)


@pytest.fixture(scope="session")
def rsing_analysis(rsing):
    return analyze_kernel(rsing)

import pytest

from goldbach import build_prime_table, goldbach_scan


@pytest.fixture(scope="session")
def t10k():
    return build_prime_table(20_000)


@pytest.fixture(scope="session")
def t100k():
    return build_prime_table(100_000)


@pytest.fixture(scope="session")
def t1m():
    return build_prime_table(1_000_000)


@pytest.fixture(scope="session")
def scan_1m(t1m):
    return goldbach_scan(t1m, 4, 1_000_000)


ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k[1:])):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {key}: {detail}")

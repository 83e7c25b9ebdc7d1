import pytest

from sigma235.factoring import BUNDLED_DB, default_db


@pytest.fixture(scope="session")
def db():
    if not BUNDLED_DB.exists():
        pytest.fail("bundled factor table missing")
    return default_db()


@pytest.fixture(scope="session")
def chain():
    from sigma235.lattice import reduction_chain

    return reduction_chain()


@pytest.fixture(scope="session")
def surveys(db, chain):
    from sigma235.sieve import survey_all

    return survey_all(db, (chain.prime_power_bound, chain.two_prime_bound))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def accept():
    """Record one PASS/FAIL line for the acceptance summary."""
    def record(number, name, ok, detail=""):
        line = f"acceptance {number}: {'PASS' if ok else 'FAIL'} {name}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

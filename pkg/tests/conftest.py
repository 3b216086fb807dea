import pytest

from toda_obstruction.context import make_context

ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture(scope="session")
def ctx7():
    return make_context(7)


@pytest.fixture(scope="session")
def ctx11():
    return make_context(11)


@pytest.fixture(scope="session")
def ctx13():
    return make_context(13)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


@pytest.fixture
def acceptance():
    def record(name, ok, detail=""):
        ACCEPTANCE.append((name, bool(ok), detail))
        return ok

    return record

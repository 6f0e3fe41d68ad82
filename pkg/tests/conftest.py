import pytest

from fqdirections.field import field_new


@pytest.fixture(scope="session")
def f9():
    return field_new(3, 2)


@pytest.fixture(scope="session")
def f25():
    return field_new(5, 2)


@pytest.fixture(scope="session")
def f49():
    return field_new(7, 2)


@pytest.fixture(scope="session")
def f3():
    return field_new(3, 1)


ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def accept(request):
    """Record one acceptance line: call with (label, detail) before asserting."""
    entry = {}

    def record(label: str, detail: str = "") -> None:
        entry.update(label=label, detail=detail)

    yield record
    if entry:
        rep = getattr(request.node, "rep_call", None)
        ok = rep is not None and rep.passed
        ACCEPTANCE.append((entry["label"], ok, entry["detail"]))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")

import pytest

_VERDICTS: list[str] = []


@pytest.fixture
def criterion(request):
    """Call with (number, summary) before asserting; the verdict prints at teardown."""
    outcome = {}

    def record(num, summary):
        outcome["line"] = (num, summary)

    yield record
    if "line" not in outcome:
        return
    num, summary = outcome["line"]
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {summary}"
    print(line)
    _VERDICTS.append(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    out = yield
    rep = out.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)

from __future__ import annotations

from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"

_criteria: dict[str, tuple[str, str]] = {}


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    name = item.name
    if not name.startswith("test_criterion_") or report.when not in ("setup", "call"):
        return
    if report.failed or report.when == "call":
        doc = (item.function.__doc__ or "").strip().splitlines()[0] if item.function.__doc__ else ""
        status = "PASS" if report.passed else "FAIL"
        _criteria.setdefault(name, (status, doc))
        if report.failed:
            _criteria[name] = ("FAIL", doc)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        status, doc = _criteria[name]
        number = name.split("_")[2]
        terminalreporter.write_line(f"criterion {int(number):2d}: {status}  {doc}")

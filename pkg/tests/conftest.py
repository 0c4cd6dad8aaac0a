import pytest

_results: dict[str, list] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(id, title): acceptance criterion checked by this test"
    )


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            cid, title = mark.args
            _results.setdefault(cid, [title, []])
            item.user_properties.append(("criterion", cid))


def pytest_runtest_logreport(report):
    cid = dict(report.user_properties).get("criterion")
    if cid is None:
        return
    if report.when == "call" or report.outcome == "failed":
        _results[cid][1].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_results, key=lambda c: int(c[1:])):
        title, outcomes = _results[cid]
        if not outcomes:
            status = "NOT RUN"
        elif all(o == "passed" for o in outcomes):
            status = "PASS"
        else:
            status = "FAIL"
        terminalreporter.write_line(f"{cid:<4} {status:<8} {title}")


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(12345)

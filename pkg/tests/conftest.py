from collections import defaultdict

_criteria: dict[int, list[bool]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            item.user_properties.append(("criterion", mark.args[0]))


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or report.failed:
        _criteria[crit].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_criteria):
        ok = all(_criteria[crit])
        terminalreporter.write_line(f"criterion {crit:2d}: {'PASS' if ok else 'FAIL'}")

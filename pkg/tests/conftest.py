import os

import pytest

os.environ.setdefault("KHINCHIN_LAB_THREADS", "1")


@pytest.fixture(scope="session")
def four_point_small():
    from khinchin_lab import make_perturbed_rademacher
    return make_perturbed_rademacher("four_point", 1e-5)


def pytest_terminal_summary(terminalreporter):
    lines = [value for reports in terminalreporter.stats.values() for rep in reports
             if getattr(rep, "when", None) == "call"
             for key, value in getattr(rep, "user_properties", ()) if key == "criterion"]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split()[0])):
            terminalreporter.write_line(line)

import pytest

from renderlab import reset_all_registries
from renderlab.device import reset_device
from renderlab.resources import set_assets_root


@pytest.fixture(autouse=True)
def fresh_registries():
    """Isolate every test from the process-wide registries and device."""
    reset_all_registries()
    reset_device()
    set_assets_root(None)
    yield
    reset_all_registries()
    reset_device()
    set_assets_root(None)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion."""
    lines = []
    for status, label in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(status, []):
            if getattr(report, "when", "call") != "call":
                continue
            if "test_acceptance.py" in report.nodeid:
                name = report.nodeid.split("::")[-1]
                lines.append((name, label))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, label in sorted(lines):
            terminalreporter.write_line(f"{label}  {name}")

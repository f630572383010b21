from pathlib import Path

import pytest

from svcdisco.datagen import GenSpec, generate_record
from svcdisco.registry import Registry

FIXTURES = Path(__file__).parent / "fixtures"

_acceptance = {}


def build_registry(size, seed=0):
    """In-memory registry of ``size`` generated services (no files)."""
    spec = GenSpec(size=max(size, 1), seed=seed)
    reg = Registry()
    for i in range(size):
        doc, c = generate_record(spec, i)
        reg.register(doc, c, wsdl_uri=f"mem://{seed}/{i}", registered_at="2026-01-01T00:00:00+00:00")
    return reg


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        _acceptance[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        terminalreporter.write_line(f"{'PASS' if _acceptance[name] == 'passed' else 'FAIL'}  {name}")

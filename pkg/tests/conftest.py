import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent.parent / "fixtures"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of every run."""
    lines = []
    for outcome in ("passed", "failed"):
        for report in terminalreporter.stats.get(outcome, []):
            if "test_acceptance" in report.nodeid:
                name = report.nodeid.split("::")[-1]
                lines.append(f"{outcome.upper():4s}  {name}")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: l.split()[-1]):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def stock_xml() -> bytes:
    return (FIXTURES / "stock.istarml").read_bytes()


@pytest.fixture(scope="session")
def exchange_xml() -> bytes:
    return (FIXTURES / "stock-exchange.istarml").read_bytes()


@pytest.fixture(scope="session")
def exchange_v2_xml() -> bytes:
    return (FIXTURES / "stock-exchange-v2.istarml").read_bytes()


@pytest.fixture(scope="session")
def defect_records() -> list[dict]:
    return [
        json.loads(path.read_text("utf-8"))
        for path in sorted((FIXTURES / "defects").glob("*.json"))
    ]


@pytest.fixture()
def store(tmp_path):
    from defectdep.store import ModelStore

    return ModelStore(tmp_path / "store")


@pytest.fixture()
def loaded_store(store, exchange_xml, exchange_v2_xml, defect_records):
    """Store with the Stock Exchange product (v1, v2) and the three defects."""
    from defectdep.store import DefectReport

    store.put_model(exchange_xml, "v1")
    store.put_model(exchange_v2_xml, "v2")
    for record in defect_records:
        store.put_defect(DefectReport.from_record(record))
    return store

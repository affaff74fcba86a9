import json
import os
import time
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from seqlab import FunctionUnderTest, Interval, classify_continuity, parse_function

ROOT = Path(__file__).resolve().parents[1]
SCHEMA_DIR = ROOT / "docs" / "schemas"

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True)
def _clean_budget(monkeypatch):
    monkeypatch.delenv("SEQLAB_BUDGET", raising=False)


def _schema_registry():
    from referencing import Registry, Resource

    resources = []
    for path in sorted(SCHEMA_DIR.glob("*.schema.json")):
        doc = json.loads(path.read_text())
        resources.append((doc["$id"], Resource.from_contents(doc)))
    return Registry().with_resources(resources)


@pytest.fixture(scope="session")
def validate():
    """``validate(instance, "mode_verdict")`` checks against the shipped schema."""
    from jsonschema import Draft202012Validator

    registry = _schema_registry()

    def check(instance, name):
        schema = registry.contents(f"seqlab/{name}.schema.json")
        Draft202012Validator(schema, registry=registry).validate(instance)

    return check


def step(x):
    return np.where(np.asarray(x) >= 0.0, 1.0, 0.0)


def _suite():
    unit = Interval.closed(0.0, 1.0)
    open_unit = Interval.open(0.0, 1.0)
    line = Interval.real_line()
    return {
        "x on [0,1]": parse_function("x", unit),
        "x^2 on [0,1]": parse_function("x^2", unit),
        "sin(x) on R": parse_function("sin(x)", line),
        "sin(1/x) on (0,1)": parse_function("sin(1/x)", open_unit),
        "1/x on (0,1)": parse_function("1/x", open_unit),
        "step on [-1,1]": FunctionUnderTest(step, Interval.closed(-1.0, 1.0), "step"),
        "x^2 on R": parse_function("x^2", line),
    }


@pytest.fixture(scope="session")
def function_suite():
    return _suite()


_SUITE_SECONDS = []


@pytest.fixture(scope="session")
def suite_reports(function_suite):
    """Continuity reports for the whole function suite, computed once per session."""
    start = time.perf_counter()
    reports = {name: classify_continuity(f, (1, 2)) for name, f in function_suite.items()}
    _SUITE_SECONDS.append(time.perf_counter() - start)
    return reports


@pytest.fixture(scope="session")
def suite_seconds(suite_reports):
    """Wall time spent building ``suite_reports``."""
    return _SUITE_SECONDS[0]


# -- acceptance summary --------------------------------------------------------------

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    if "test_acceptance.py" not in report.nodeid or "criterion_" not in report.nodeid:
        return
    _ACCEPTANCE[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid in sorted(_ACCEPTANCE, key=lambda k: int(k.split("criterion_")[1].split("_")[0])):
        name = nodeid.split("::")[-1]
        num = int(name.split("_")[2])
        status = "PASS" if _ACCEPTANCE[nodeid] == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {name}")

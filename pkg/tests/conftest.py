"""Shared fixtures: each golden scenario runs once per session, and the
acceptance module's verdicts are replayed as one line per criterion in
the terminal summary, so a full run ends with the complete acceptance
picture in one block.
"""

import time
from pathlib import Path

import pytest

from vfield.multi_agent import run_multi
from vfield.scenario import load_scenario
from vfield.sim import run_single

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"

ACCEPTANCE_LINES: list[tuple[str, bool, str]] = []


@pytest.fixture
def acceptance():
    """Record one acceptance verdict; the terminal summary prints them."""

    def record(label: str, passed: bool, detail: str = "") -> None:
        ACCEPTANCE_LINES.append((label, passed, detail))

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for label, passed, detail in ACCEPTANCE_LINES:
        verdict = "PASS" if passed else "FAIL"
        suffix = f"  ({detail})" if detail else ""
        terminalreporter.write_line(f"{label}: {verdict}{suffix}")


def run_static_golden(name="single_static.yaml"):
    sc = load_scenario(SCENARIO_DIR / name)
    t0 = time.perf_counter()
    log = run_single(sc.world, sc.gains, sc.start, sc.sim)
    return sc, log, time.perf_counter() - t0


def run_multi_golden(name):
    sc = load_scenario(SCENARIO_DIR / name)
    t0 = time.perf_counter()
    result = run_multi(sc.agents, sc.sim)
    return sc, result, time.perf_counter() - t0


@pytest.fixture(scope="session")
def golden_static():
    return run_static_golden()


@pytest.fixture(scope="session")
def golden_headon():
    return run_multi_golden("pair_headon.yaml")


@pytest.fixture(scope="session")
def golden_ring():
    return run_multi_golden("ring_exchange.yaml")

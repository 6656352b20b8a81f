from __future__ import annotations

import os
from pathlib import Path

import pytest

from helpers import SMALL, write_wordnet
from sense_reduce import load_inventory

DATA = Path(__file__).parent / "data"

# External datasets are never downloaded; point these at local copies.
ENV_WORDNET = "SENSE_REDUCE_WORDNET"
ENV_WIC = "SENSE_REDUCE_WIC"          # dir with train/, dev/, test/ of WiC v1.0
ENV_WICTSV = "SENSE_REDUCE_WICTSV"    # dir of the WiC-TSV release
ENV_MCLWIC = "SENSE_REDUCE_MCLWIC"    # dir with training/, dev/, test/ of MCL-WiC


def env_dir(name: str) -> Path | None:
    value = os.environ.get(name)
    if value and Path(value).is_dir():
        return Path(value)
    return None


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config._acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    results = item.config._acceptance.setdefault((number, title), [])
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        if report.skipped:
            reason = report.longrepr[2] if isinstance(report.longrepr, tuple) else str(report.longrepr)
            results.append(("SKIP", f"{item.name}: {reason}"))
        else:
            results.append(("PASS" if report.passed else "FAIL", item.name))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), outcomes in sorted(results.items()):
        statuses = {s for s, _ in outcomes}
        status = "FAIL" if "FAIL" in statuses else "PASS" if "PASS" in statuses else "SKIP"
        if status == "PASS" and "SKIP" in statuses:
            status = "PASS (partial)"
        terminalreporter.write_line(f"criterion {number} [{status}] {title}")
        for s, detail in outcomes:
            if s != "PASS":
                terminalreporter.write_line(f"    {s}: {detail}")


@pytest.fixture(scope="session")
def dog_dir() -> Path:
    return DATA / "dog_wordnet"


@pytest.fixture(scope="session")
def small_dir(tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("small_wordnet")
    write_wordnet(root, SMALL)
    return root


@pytest.fixture(scope="session")
def small_inv(small_dir):
    return load_inventory(small_dir)


@pytest.fixture(scope="session")
def wordnet_dir() -> Path:
    d = env_dir(ENV_WORDNET)
    if d is None:
        pytest.skip(f"set {ENV_WORDNET} to a WordNet 3.0 dict directory")
    return d


@pytest.fixture(scope="session")
def wordnet(wordnet_dir):
    return load_inventory(wordnet_dir)

from __future__ import annotations

import shutil
import stat
import time
from dataclasses import dataclass
from pathlib import Path

import pytest

from confbench.engine import ToolRunner
from confbench.registry import RegistryTree, resolve_tools, scan_registry

REPO_ROOT = Path(__file__).resolve().parent.parent
MOCKTOOLS = REPO_ROOT / "mocktools"
PROBLEM_FIXTURES = REPO_ROOT / "fixtures" / "problems"

MINIMAL_TRS = "(VAR x) (RULES f(x) -> x)"


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(name): acceptance criterion exercised by this test"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and report.when == "call":
        reporter = item.config.pluginmanager.get_plugin("terminalreporter")
        if reporter is not None:
            verdict = "PASS" if report.passed else "FAIL"
            reporter.write_line(f"[criterion] {verdict}: {marker.args[0]}")


@dataclass
class MockBench:
    """Isolated copy of the bundled mock-tool registry."""

    config_root: Path
    bin_root: Path
    scratch_dir: Path
    tree: RegistryTree
    runner: ToolRunner

    def spec(self, tool_id: str):
        return resolve_tools([tool_id], self.tree)[0]

    def specs(self, *tool_ids: str):
        return resolve_tools(list(tool_ids), self.tree)

    def tool_file(self, tool_id: str, name: str) -> Path:
        return self.bin_root / self.spec(tool_id).tool_dir / name


@pytest.fixture
def bench(tmp_path) -> MockBench:
    config_root = tmp_path / "configs"
    bin_root = tmp_path / "bins"
    scratch_dir = tmp_path / "scratch"
    shutil.copytree(MOCKTOOLS / "configs", config_root)
    shutil.copytree(MOCKTOOLS / "bins", bin_root)
    for script in bin_root.rglob("*.sh"):
        script.chmod(
            script.stat().st_mode | stat.S_IXUSR | stat.S_IXGRP | stat.S_IXOTH
        )
    scratch_dir.mkdir()
    tree = scan_registry(config_root).tree
    runner = ToolRunner(bin_root=bin_root, scratch_dir=scratch_dir)
    return MockBench(config_root, bin_root, scratch_dir, tree, runner)


def poll_until_done(client, job_id: str, timeout_s: float = 30.0) -> dict:
    deadline = time.monotonic() + timeout_s
    while time.monotonic() < deadline:
        response = client.get(f"/api/jobs/{job_id}")
        assert response.status_code == 200
        view = response.json()
        if view["state"] == "DONE":
            return view
        time.sleep(0.05)
    raise AssertionError(f"job {job_id} did not finish within {timeout_s}s")

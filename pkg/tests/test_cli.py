from __future__ import annotations

import json
import os
import re
import shutil
import subprocess
import sys
import time
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from confbench.config import Settings
from confbench.service import create_app

from conftest import MINIMAL_TRS, PROBLEM_FIXTURES, poll_until_done


def run_cli(args, bench, stdin_text=None, extra_env=None):
    env = dict(os.environ)
    env.update(
        {
            "CONFIG_ROOT": str(bench.config_root),
            "BIN_ROOT": str(bench.bin_root),
            "SCRATCH_DIR": str(bench.scratch_dir),
        }
    )
    env.update(extra_env or {})
    return subprocess.run(
        [sys.executable, "-m", "confbench", *args],
        input=stdin_text,
        capture_output=True,
        text=True,
        env=env,
        timeout=60,
    )


@pytest.fixture
def problem_file(tmp_path) -> Path:
    path = tmp_path / "problem.trs"
    path.write_text(MINIMAL_TRS, encoding="utf-8")
    return path


class TestRun:
    def test_table_mode_definitive_answer(self, bench, problem_file):
        proc = run_cli(
            ["run", str(problem_file), "--tools", "2024/trs/echo-yes", "--format", "table"],
            bench,
        )
        assert proc.returncode == 0, proc.stderr
        lines = proc.stdout.splitlines()
        assert lines[0].startswith("TOOL")
        assert re.match(r"2024/trs/echo-yes\s+YES\s+\d+\.\d\ds", lines[1])

    def test_timeout_gives_status_one(self, bench, problem_file):
        started = time.monotonic()
        proc = run_cli(
            [
                "run",
                str(problem_file),
                "--tools",
                "2024/trs/sleeper-exit-on-term",
                "--soft",
                "1",
                "--term",
                "2",
                "--kill",
                "3",
                "--format",
                "table",
            ],
            bench,
        )
        assert time.monotonic() - started < 5
        assert proc.returncode == 1
        assert "TIMEOUT" in proc.stdout

    def test_unknown_tool_is_usage_error(self, bench, problem_file):
        proc = run_cli(["run", str(problem_file), "--tools", "no/such/tool"], bench)
        assert proc.returncode == 2
        assert "no/such/tool" in proc.stderr

    def test_missing_problem_is_usage_error(self, bench):
        proc = run_cli(["run", "--tools", "2024/trs/echo-yes"], bench)
        assert proc.returncode == 2

    def test_bad_policy_is_usage_error(self, bench, problem_file):
        proc = run_cli(
            [
                "run",
                str(problem_file),
                "--tools",
                "2024/trs/echo-yes",
                "--soft",
                "5",
                "--term",
                "4",
                "--kill",
                "6",
            ],
            bench,
        )
        assert proc.returncode == 2

    def test_stdin_problem(self, bench):
        proc = run_cli(
            ["run", "-", "--tools", "2024/trs/echo-no", "--format", "json"],
            bench,
            stdin_text=MINIMAL_TRS,
        )
        assert proc.returncode == 0
        document = json.loads(proc.stdout)
        assert document["results"][0]["answer"] == "NO"

    def test_plain_mode_prints_tool_output(self, bench, problem_file):
        proc = run_cli(
            ["run", str(problem_file), "--tools", "2024/trs/echo-maybe"], bench
        )
        assert proc.returncode == 1  # MAYBE is indecisive
        assert "Maybe" in proc.stdout
        assert re.search(r"Took \d+\.\d\d seconds", proc.stdout)

    def test_all_expands_in_tree_order(self, bench, problem_file, tmp_path):
        # Trimmed registry with only instant tools, so "all" stays fast.
        trimmed = tmp_path / "trimmed-configs"
        (trimmed / "2024" / "trs").mkdir(parents=True)
        for name in ("echo-maybe", "echo-no", "echo-yes"):
            shutil.copy(
                bench.config_root / "2024" / "trs" / f"{name}.conf",
                trimmed / "2024" / "trs" / f"{name}.conf",
            )
        shutil.copytree(
            bench.config_root / "2023", trimmed / "2023"
        )  # commutation group
        proc = run_cli(
            ["run", str(problem_file), "--tools", "all", "--format", "json"],
            bench,
            extra_env={"CONFIG_ROOT": str(trimmed)},
        )
        assert proc.returncode == 1, proc.stderr  # echo-maybe is indecisive
        document = json.loads(proc.stdout)
        assert [r["tool_id"] for r in document["results"]] == [
            "2024/trs/echo-maybe",
            "2024/trs/echo-no",
            "2024/trs/echo-yes",
            "2023/commutation/echo-maybe-commute",
        ]

    def test_error_answer_is_indecisive(self, bench, problem_file):
        proc = run_cli(
            ["run", str(problem_file), "--tools", "2024/trs/garbage-exit"], bench
        )
        assert proc.returncode == 1


class TestCategorize:
    @pytest.mark.parametrize(
        "fixture, expected",
        [
            ("sk_combinators.trs", "TRS"),
            ("min_oriented.ctrs", "CTRS"),
            ("beta_reduction.hrs", "HIGHER_ORDER"),
        ],
    )
    def test_fixture_categories(self, bench, fixture, expected):
        proc = run_cli(["categorize", str(PROBLEM_FIXTURES / fixture)], bench)
        assert proc.returncode == 0
        assert proc.stdout.strip() == expected

    def test_empty_file_is_unknown(self, bench, tmp_path):
        empty = tmp_path / "empty.trs"
        empty.write_text("")
        proc = run_cli(["categorize", str(empty)], bench)
        assert proc.returncode == 0
        assert proc.stdout.strip() == "UNKNOWN"

    def test_unreadable_file_is_usage_error(self, bench, tmp_path):
        proc = run_cli(["categorize", str(tmp_path / "missing.trs")], bench)
        assert proc.returncode == 2


class TestDifferentialWithService:
    def test_cli_and_service_agree(self, bench, problem_file):
        tools = ["2024/trs/echo-yes", "2024/trs/garbage-exit", "2024/trs/echo-maybe"]
        proc = run_cli(
            ["run", str(problem_file), "--tools", ",".join(tools), "--format", "json"],
            bench,
        )
        cli_results = json.loads(proc.stdout)["results"]

        settings = Settings(
            config_root=bench.config_root,
            bin_root=bench.bin_root,
            scratch_dir=bench.scratch_dir,
        )
        with TestClient(create_app(settings)) as client:
            response = client.post(
                "/api/jobs",
                json={
                    "problem_source": {"kind": "inline", "text": MINIMAL_TRS},
                    "tool_ids": tools,
                },
            )
            api_results = poll_until_done(client, response.json()["id"])["results"]

        def normalize(results):
            # Identical up to the measured wall time inside the timing line.
            return [
                (
                    r["tool_id"],
                    r["answer"],
                    r["exit_code"],
                    r["terminated_by"],
                    re.sub(r"Took \d+\.\d\d seconds", "Took N seconds", r["output"]),
                )
                for r in results
            ]

        assert normalize(cli_results) == normalize(api_results)

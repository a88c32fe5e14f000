"""Subprocess execution under the three-tier timeout protocol.

Each tool run gets three deadlines: the soft timeout is advertised to the
tool itself (substituted for ``$TO`` in its command), the term deadline
sends SIGTERM to the tool's process group, and the kill deadline sends
SIGKILL.  Output (stdout and stderr merged, capped) is classified into a
verdict by its first non-empty line, and the measured wall-clock time is
appended as a final ``Took N.NN seconds`` line.

Runs are strictly serialized: an instance-wide lock guarantees at most
one tool process at a time, so timings are not perturbed by sibling
runs.
"""

from __future__ import annotations

import os
import re
import signal
import subprocess
import tempfile
import threading
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable

from .problems import Problem
from .registry import ToolSpec

DEFAULT_MAX_OUTPUT_BYTES = 1024 * 1024
# Extra seconds allowed past the kill deadline for signal delivery and reaping.
REAP_GRACE_S = 2.0

TIMING_LINE_RE = re.compile(r"\nTook \d+\.\d\d seconds\n")


class ExpansionError(ValueError):
    """The command template cannot be turned into an argument vector."""


class Answer(str, Enum):
    YES = "YES"
    NO = "NO"
    MAYBE = "MAYBE"
    TIMEOUT = "TIMEOUT"
    ERROR = "ERROR"


class TerminatedBy(str, Enum):
    EXIT = "EXIT"
    TERM_SIGNAL = "TERM_SIGNAL"
    KILL_SIGNAL = "KILL_SIGNAL"


@dataclass(frozen=True)
class TimeoutPolicy:
    """Soft/term/kill deadlines in seconds, strictly increasing."""

    soft_s: float = 59.0
    term_s: float = 61.0
    kill_s: float = 63.0

    def __post_init__(self):
        if not (0 < self.soft_s < self.term_s < self.kill_s):
            raise ValueError(
                "timeout policy must satisfy 0 < soft_s < term_s < kill_s, "
                f"got ({self.soft_s}, {self.term_s}, {self.kill_s})"
            )


@dataclass(frozen=True)
class RunResult:
    tool_id: str
    answer: Answer
    output: str
    exit_code: int | None
    elapsed_s: float
    terminated_by: TerminatedBy

    def as_dict(self) -> dict:
        return {
            "tool_id": self.tool_id,
            "answer": self.answer.value,
            "output": self.output,
            "exit_code": self.exit_code,
            "elapsed_s": self.elapsed_s,
            "terminated_by": self.terminated_by.value,
        }


def _format_seconds(value: float) -> str:
    if float(value).is_integer():
        return str(int(value))
    return f"{value:g}"


def expand_command(
    spec: ToolSpec, policy: TimeoutPolicy, problem_file: Path | str
) -> list[str]:
    """Substitute $TO and $FILE in the command template and tokenize.

    Tokenization is by whitespace after substitution.  The program token
    must be a real program: an empty template or one whose first token is
    a placeholder is rejected.
    """
    path = Path(problem_file)
    if not path.is_absolute():
        raise ValueError(f"problem file must be an absolute path: {path}")
    template_tokens = spec.command_template.split()
    if not template_tokens or template_tokens[0] in ("$TO", "$FILE"):
        raise ExpansionError(
            f"command template for {spec.id} has no program token: "
            f"{spec.command_template!r}"
        )
    expanded = re.sub(
        r"\$TO(?![A-Za-z0-9_])", _format_seconds(policy.soft_s), spec.command_template
    )
    expanded = re.sub(r"\$FILE(?![A-Za-z0-9_])", str(path), expanded)
    return expanded.split()


def classify_answer(
    output: str, terminated_by: TerminatedBy, exit_code: int | None
) -> Answer:
    """Map captured output to a verdict.

    Any signal-terminated run is a TIMEOUT.  Otherwise the first
    non-empty line decides, case-insensitively: YES, NO, or MAYBE;
    anything else is ERROR for a nonzero exit and MAYBE for a clean one.
    """
    if terminated_by != TerminatedBy.EXIT:
        return Answer.TIMEOUT
    first_line = ""
    for line in output.splitlines():
        if line.strip():
            first_line = line.strip().upper()
            break
    if first_line in ("YES", "NO", "MAYBE"):
        return Answer(first_line)
    if exit_code != 0:
        return Answer.ERROR
    return Answer.MAYBE


class _OutputReader(threading.Thread):
    """Drains a pipe so the child never blocks on a full buffer.

    Keeps at most ``cap`` bytes; the rest is discarded but counted so the
    truncation marker can say how much was dropped.
    """

    def __init__(self, stream, cap: int):
        super().__init__(daemon=True)
        self._stream = stream
        self._cap = cap
        self._chunks: list[bytes] = []
        self._kept = 0
        self.total = 0

    def run(self):
        try:
            while True:
                chunk = self._stream.read(65536)
                if not chunk:
                    break
                self.total += len(chunk)
                if self._kept < self._cap:
                    keep = chunk[: self._cap - self._kept]
                    self._chunks.append(keep)
                    self._kept += len(keep)
        except (OSError, ValueError):
            pass
        finally:
            try:
                self._stream.close()
            except OSError:
                pass

    def text(self) -> str:
        data = b"".join(self._chunks)
        text = data.decode("utf-8", errors="replace")
        if self.total > self._kept:
            text += f"\n[output truncated: {self.total - self._kept} bytes dropped]"
        return text


class ToolRunner:
    """Runs registered tools on problems, one process at a time."""

    def __init__(
        self,
        bin_root: Path | str,
        scratch_dir: Path | str,
        max_output_bytes: int = DEFAULT_MAX_OUTPUT_BYTES,
    ):
        self.bin_root = Path(bin_root)
        self.scratch_dir = Path(scratch_dir)
        self.max_output_bytes = max_output_bytes
        self._exec_lock = threading.Lock()

    def run_tool(
        self, spec: ToolSpec, problem: Problem, policy: TimeoutPolicy
    ) -> RunResult:
        """Run one tool on one problem; never raises.

        The problem's raw source is written unmodified to a fresh scratch
        file, the expanded command runs in the tool's binary directory,
        and every failure mode (bad template, missing binary, timeout)
        comes back as a RunResult.  The scratch file is always removed.
        """
        with self._exec_lock:
            self.scratch_dir.mkdir(parents=True, exist_ok=True)
            fd, tmp_name = tempfile.mkstemp(
                prefix="problem-", suffix=".trs", dir=self.scratch_dir
            )
            problem_file = Path(tmp_name)
            try:
                with os.fdopen(fd, "wb") as handle:
                    handle.write(problem.raw_source.encode("utf-8"))
                return self._run(spec, problem_file, policy)
            finally:
                problem_file.unlink(missing_ok=True)

    def _run(
        self, spec: ToolSpec, problem_file: Path, policy: TimeoutPolicy
    ) -> RunResult:
        try:
            argv = expand_command(spec, policy, problem_file)
        except ExpansionError as exc:
            return self._error_result(spec, str(exc), 0.0)

        cwd = self.bin_root / spec.tool_dir
        start = time.monotonic()
        try:
            proc = subprocess.Popen(
                argv,
                cwd=cwd,
                stdin=subprocess.DEVNULL,
                stdout=subprocess.PIPE,
                stderr=subprocess.STDOUT,
                start_new_session=True,
            )
        except OSError as exc:
            elapsed = time.monotonic() - start
            return self._error_result(
                spec, f"failed to launch {argv[0]!r} in {cwd}: {exc}", elapsed
            )

        reader = _OutputReader(proc.stdout, self.max_output_bytes)
        reader.start()

        term_deadline = start + policy.term_s
        kill_deadline = start + policy.kill_s
        terminated_by = TerminatedBy.EXIT
        try:
            proc.wait(timeout=max(0.0, term_deadline - time.monotonic()))
        except subprocess.TimeoutExpired:
            terminated_by = TerminatedBy.TERM_SIGNAL
            self._signal_group(proc, signal.SIGTERM)
            try:
                proc.wait(timeout=max(0.0, kill_deadline - time.monotonic()))
            except subprocess.TimeoutExpired:
                terminated_by = TerminatedBy.KILL_SIGNAL
                self._signal_group(proc, signal.SIGKILL)
                try:
                    proc.wait(timeout=REAP_GRACE_S)
                except subprocess.TimeoutExpired:
                    pass  # unreapable (e.g. stuck in uninterruptible sleep)
        elapsed = time.monotonic() - start

        reader.join(timeout=REAP_GRACE_S)
        output = reader.text()

        returncode = proc.returncode
        exit_code = returncode if returncode is not None and returncode >= 0 else None
        answer = classify_answer(output, terminated_by, exit_code)
        return RunResult(
            tool_id=spec.id,
            answer=answer,
            output=output + _timing_line(elapsed),
            exit_code=exit_code,
            elapsed_s=elapsed,
            terminated_by=terminated_by,
        )

    def run_selection(
        self,
        specs: list[ToolSpec],
        problem: Problem,
        policy: TimeoutPolicy,
        on_result: Callable[[int, RunResult], None] | None = None,
    ) -> list[RunResult]:
        """Run tools strictly one after another, in the given order.

        Each tool starts only once its predecessor's process has been
        reaped.  ``on_result`` is invoked as each result lands, so callers
        can publish partial progress.
        """
        if not specs:
            raise ValueError("run_selection requires at least one tool")
        results: list[RunResult] = []
        for index, spec in enumerate(specs):
            result = self.run_tool(spec, problem, policy)
            results.append(result)
            if on_result is not None:
                on_result(index, result)
        return results

    @staticmethod
    def _signal_group(proc: subprocess.Popen, sig: int) -> None:
        # The session leader's pid doubles as the process group id; kill
        # the whole group so wrapper scripts take their children with them.
        try:
            os.killpg(proc.pid, sig)
        except (ProcessLookupError, PermissionError):
            try:
                proc.send_signal(sig)
            except (ProcessLookupError, PermissionError):
                pass

    def _error_result(self, spec: ToolSpec, message: str, elapsed: float) -> RunResult:
        return RunResult(
            tool_id=spec.id,
            answer=Answer.ERROR,
            output=message + _timing_line(elapsed),
            exit_code=None,
            elapsed_s=elapsed,
            terminated_by=TerminatedBy.EXIT,
        )


def _timing_line(elapsed: float) -> str:
    return f"\nTook {elapsed:.2f} seconds\n"

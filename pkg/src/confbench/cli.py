"""Command-line front door: run tools on a problem without the service.

Exit status: 0 when every tool answered YES or NO, 1 when any tool was
indecisive (MAYBE, TIMEOUT, or ERROR), 2 on usage or registry errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .config import Settings
from .cops import DEFAULT_BASE_URL, DEFAULT_PATH_TEMPLATE, CopsClient, CopsFetchError
from .engine import Answer, RunResult, TimeoutPolicy, ToolRunner
from .problems import infer_category
from .registry import RegistryError, UnknownToolError, resolve_tools, scan_registry
from .service import problem_for_text

EXIT_OK = 0
EXIT_INDECISIVE = 1
EXIT_USAGE = 2


class CliError(Exception):
    pass


def _env_default(args_value: str | None, env_key: str) -> str | None:
    return args_value if args_value is not None else os.environ.get(env_key)


def _require_path(value: str | None, what: str, flag: str, env_key: str) -> Path:
    if not value:
        raise CliError(f"{what} not set (use {flag} or ${env_key})")
    return Path(value)


def _read_problem_text(args: argparse.Namespace) -> str:
    if args.cops is not None:
        if args.problem is not None:
            raise CliError("give either a problem file or --cops, not both")
        client = CopsClient(
            base_url=os.environ.get("COPS_BASE_URL", DEFAULT_BASE_URL),
            path_template=os.environ.get("COPS_PATH_TEMPLATE", DEFAULT_PATH_TEMPLATE),
        )
        try:
            return client.fetch(args.cops)
        except (CopsFetchError, ValueError) as exc:
            raise CliError(str(exc))
    if args.problem is None:
        raise CliError("no problem given (file path, '-' for stdin, or --cops N)")
    if args.problem == "-":
        return sys.stdin.read()
    try:
        return Path(args.problem).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read problem file: {exc}")


def _build_policy(args: argparse.Namespace) -> TimeoutPolicy:
    default = TimeoutPolicy()
    try:
        return TimeoutPolicy(
            soft_s=args.soft if args.soft is not None else default.soft_s,
            term_s=args.term if args.term is not None else default.term_s,
            kill_s=args.kill if args.kill is not None else default.kill_s,
        )
    except ValueError as exc:
        raise CliError(str(exc))


def _print_plain(results: list[RunResult]) -> None:
    for result in results:
        print(f"=== {result.tool_id} [{result.answer.value}] ===")
        sys.stdout.write(result.output)


def _print_table(results: list[RunResult]) -> None:
    width = max([len("TOOL")] + [len(r.tool_id) for r in results])
    print(f"{'TOOL':<{width}}  {'ANSWER':<8}  TIME")
    for result in results:
        print(
            f"{result.tool_id:<{width}}  {result.answer.value:<8}  "
            f"{result.elapsed_s:.2f}s"
        )


def _print_json(category: str, results: list[RunResult]) -> None:
    document = {
        "category": category,
        "results": [result.as_dict() for result in results],
    }
    print(json.dumps(document, indent=2))


def cmd_run(args: argparse.Namespace) -> int:
    config_root = _require_path(
        _env_default(args.config_root, "CONFIG_ROOT"),
        "registry config root", "--config-root", "CONFIG_ROOT",
    )
    bin_root = _require_path(
        _env_default(args.bin_root, "BIN_ROOT"),
        "tool binary root", "--bin-root", "BIN_ROOT",
    )
    scratch_dir = Path(
        _env_default(args.scratch_dir, "SCRATCH_DIR") or "/tmp/confbench-scratch"
    )

    try:
        tree = scan_registry(config_root).tree
    except RegistryError as exc:
        raise CliError(str(exc))

    requested = [t for t in args.tools.split(",") if t]
    if requested == ["all"]:
        ids = [spec.id for spec in tree.iter_tools()]
        if not ids:
            raise CliError("registry is empty")
    else:
        ids = requested
    if not ids:
        raise CliError("no tools selected")
    try:
        specs = resolve_tools(ids, tree)
    except UnknownToolError as exc:
        raise CliError(str(exc))

    text = _read_problem_text(args)
    policy = _build_policy(args)
    runner = ToolRunner(bin_root=bin_root, scratch_dir=scratch_dir)
    results = runner.run_selection(specs, problem_for_text(text), policy)

    category = infer_category(text)
    if args.format == "plain":
        _print_plain(results)
    elif args.format == "table":
        _print_table(results)
    else:
        _print_json(category.value, results)

    if all(r.answer in (Answer.YES, Answer.NO) for r in results):
        return EXIT_OK
    return EXIT_INDECISIVE


def cmd_categorize(args: argparse.Namespace) -> int:
    if args.problem == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(args.problem).read_text(encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot read problem file: {exc}")
    print(infer_category(text).value)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    env = dict(os.environ)
    for key, value in (
        ("CONFIG_ROOT", args.config_root),
        ("BIN_ROOT", args.bin_root),
        ("SCRATCH_DIR", args.scratch_dir),
        ("STATIC_DIR", args.static_dir),
        ("LISTEN_ADDR", args.listen),
        ("RELOAD_SECRET", args.reload_secret),
    ):
        if value is not None:
            env[key] = value
    try:
        settings = Settings.from_env(env)
    except ValueError as exc:
        raise CliError(str(exc))
    app = create_app(settings)
    host, port = settings.listen_host_port
    uvicorn.run(app, host=host, port=port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="confbench",
        description="Run confluence checkers on rewrite-system problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run selected tools on one problem")
    run.add_argument("problem", nargs="?", help="problem file, or '-' for stdin")
    run.add_argument("--cops", type=int, metavar="N", help="fetch problem N from the database")
    run.add_argument("--tools", required=True, help="comma-separated tool ids, or 'all'")
    run.add_argument("--soft", type=float, help="soft timeout seconds (passed to tools)")
    run.add_argument("--term", type=float, help="graceful-termination deadline seconds")
    run.add_argument("--kill", type=float, help="forced-kill deadline seconds")
    run.add_argument("--format", choices=("plain", "table", "json"), default="plain")
    run.add_argument("--config-root", help="registry config tree (or $CONFIG_ROOT)")
    run.add_argument("--bin-root", help="tool binary root (or $BIN_ROOT)")
    run.add_argument("--scratch-dir", help="problem scratch directory (or $SCRATCH_DIR)")
    run.set_defaults(func=cmd_run)

    categorize = sub.add_parser("categorize", help="print a problem's format category")
    categorize.add_argument("problem", help="problem file, or '-' for stdin")
    categorize.set_defaults(func=cmd_categorize)

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--config-root")
    serve.add_argument("--bin-root")
    serve.add_argument("--scratch-dir")
    serve.add_argument("--static-dir")
    serve.add_argument("--listen", metavar="HOST:PORT")
    serve.add_argument("--reload-secret")
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"confbench: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

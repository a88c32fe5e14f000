"""Tool discovery from a year/group/tool configuration directory tree.

The menu served to clients mirrors the tree on disk::

    <config_root>/2024/trs/saigawa.conf

Each ``.conf`` file names the directory holding the tool binary and the
command used to invoke it::

    TOOLDIR="Saigawa-2012/bin"
    TOOL="./starexec_run_saigawa -t $TO $FILE"

Only simple ``KEY="value"`` lines are honored — config files are data,
never evaluated as shell.  ``$TO`` and ``$FILE`` are expanded later by the
execution engine.  A scanned tree is immutable; reloads swap the whole
tree at once.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator


class ConfigError(ValueError):
    """A single tool configuration file is unusable."""


class RegistryError(RuntimeError):
    """The registry as a whole cannot be scanned."""


class UnknownToolError(LookupError):
    def __init__(self, ids: list[str]):
        super().__init__(f"unknown tool id(s): {', '.join(ids)}")
        self.ids = ids


@dataclass(frozen=True)
class ToolSpec:
    id: str
    display_name: str
    year: str
    category_group: str
    tool_dir: str
    command_template: str


@dataclass(frozen=True)
class CategoryGroup:
    label: str
    tools: tuple[ToolSpec, ...]


@dataclass(frozen=True)
class YearEntry:
    year: str
    groups: tuple[CategoryGroup, ...]


@dataclass(frozen=True)
class RegistryTree:
    years: tuple[YearEntry, ...]

    def iter_tools(self) -> Iterator[ToolSpec]:
        for year in self.years:
            for group in year.groups:
                yield from group.tools

    def tool_count(self) -> int:
        return sum(1 for _ in self.iter_tools())

    def to_dict(self) -> dict:
        return {
            "years": [
                {
                    "year": year.year,
                    "groups": [
                        {
                            "label": group.label,
                            "tools": [
                                {"id": tool.id, "name": tool.display_name}
                                for tool in group.tools
                            ],
                        }
                        for group in year.groups
                    ],
                }
                for year in self.years
            ]
        }


@dataclass(frozen=True)
class ScanResult:
    tree: RegistryTree
    warnings: tuple[str, ...]


_CONFIG_LINE = re.compile(r'^\s*(TOOLDIR|TOOL)\s*=\s*"([^"]*)"\s*$')


def parse_tool_config(text: str, menu_path: tuple[str, str, str]) -> ToolSpec:
    """Extract TOOLDIR and TOOL from config file text.

    Lines not matching ``KEY="value"`` (comments, blank lines, anything
    else) are ignored.  Both keys are required, and TOOL must reference
    $FILE; $TO is optional since not every tool accepts a timeout flag.
    """
    values: dict[str, str] = {}
    for line in text.splitlines():
        match = _CONFIG_LINE.match(line)
        if match:
            values[match.group(1)] = match.group(2)
    for key in ("TOOLDIR", "TOOL"):
        if key not in values:
            raise ConfigError(f"{key} missing")
    if "$FILE" not in values["TOOL"]:
        raise ConfigError("TOOL must reference $FILE")
    year, group, name = menu_path
    return ToolSpec(
        id=f"{year}/{group}/{name}",
        display_name=name,
        year=year,
        category_group=group,
        tool_dir=values["TOOLDIR"],
        command_template=values["TOOL"],
    )


def _subdirectories(path: Path) -> list[Path]:
    return [
        child
        for child in path.iterdir()
        if child.is_dir() and not child.name.startswith(".")
    ]


def scan_registry(config_root: Path | str) -> ScanResult:
    """Walk ``<config_root>/<year>/<group>/<tool>.conf`` into a menu tree.

    Years are ordered newest first, groups and tools lexicographically.
    Directories without any valid config are dropped.  Malformed config
    files are skipped and reported as warnings; only a missing or
    unreadable root aborts the scan (RegistryError).
    """
    root = Path(config_root)
    if not root.is_dir():
        raise RegistryError(f"registry config root {root} is not a directory")
    warnings: list[str] = []
    years: list[YearEntry] = []
    for year_dir in sorted(_subdirectories(root), key=lambda p: p.name, reverse=True):
        groups: list[CategoryGroup] = []
        for group_dir in sorted(_subdirectories(year_dir), key=lambda p: p.name):
            tools: list[ToolSpec] = []
            for config_file in sorted(group_dir.glob("*.conf")):
                menu_path = (year_dir.name, group_dir.name, config_file.stem)
                try:
                    text = config_file.read_text(encoding="utf-8")
                    tools.append(parse_tool_config(text, menu_path))
                except (OSError, UnicodeDecodeError, ConfigError) as exc:
                    warnings.append(f"{'/'.join(menu_path)}: {exc}")
            if tools:
                groups.append(CategoryGroup(group_dir.name, tuple(tools)))
        if groups:
            years.append(YearEntry(year_dir.name, tuple(groups)))
    return ScanResult(RegistryTree(tuple(years)), tuple(warnings))


def resolve_tools(ids: list[str], tree: RegistryTree) -> list[ToolSpec]:
    """Look up tool ids, preserving request order and dropping duplicates.

    Raises UnknownToolError listing every id that does not resolve.
    """
    by_id = {tool.id: tool for tool in tree.iter_tools()}
    unknown = [tool_id for tool_id in ids if tool_id not in by_id]
    if unknown:
        raise UnknownToolError(unknown)
    seen: set[str] = set()
    resolved: list[ToolSpec] = []
    for tool_id in ids:
        if tool_id not in seen:
            seen.add(tool_id)
            resolved.append(by_id[tool_id])
    return resolved

from __future__ import annotations

import os

import pytest

from confbench.registry import (
    ConfigError,
    RegistryError,
    UnknownToolError,
    parse_tool_config,
    resolve_tools,
    scan_registry,
)

SAIGAWA_CONFIG = 'TOOLDIR="Saigawa-2012/bin"\nTOOL="./starexec_run_saigawa -t $TO $FILE"\n'


class TestParseToolConfig:
    def test_saigawa_config(self):
        spec = parse_tool_config(SAIGAWA_CONFIG, ("2012", "trs", "saigawa"))
        assert spec.tool_dir == "Saigawa-2012/bin"
        assert spec.command_template == "./starexec_run_saigawa -t $TO $FILE"
        assert spec.id == "2012/trs/saigawa"
        assert spec.display_name == "saigawa"
        assert spec.year == "2012"
        assert spec.category_group == "trs"

    def test_missing_tool_line(self):
        with pytest.raises(ConfigError, match="TOOL missing"):
            parse_tool_config('TOOLDIR="x/bin"\n', ("2012", "trs", "x"))

    def test_missing_tooldir_line(self):
        with pytest.raises(ConfigError, match="TOOLDIR missing"):
            parse_tool_config('TOOL="./run $FILE"\n', ("2012", "trs", "x"))

    def test_tool_without_file_placeholder(self):
        with pytest.raises(ConfigError, match=r"\$FILE"):
            parse_tool_config(
                'TOOLDIR="x/bin"\nTOOL="./run --fast"\n', ("2012", "trs", "x")
            )

    def test_tool_without_soft_timeout_is_valid(self):
        spec = parse_tool_config(
            'TOOLDIR="x/bin"\nTOOL="cat $FILE"\n', ("2012", "trs", "x")
        )
        assert "$TO" not in spec.command_template

    def test_unrelated_lines_ignored(self):
        text = (
            "# a comment\n"
            "export WEIRD=1\n"
            'TOOLDIR="x/bin"\n'
            "\n"
            'TOOL="./run $FILE"\n'
            "trailing junk\n"
        )
        spec = parse_tool_config(text, ("2012", "trs", "x"))
        assert spec.tool_dir == "x/bin"

    def test_no_shell_evaluation(self):
        # Values are data; $(...) stays uninterpreted text.
        spec = parse_tool_config(
            'TOOLDIR="$(rm -rf /)/bin"\nTOOL="./run $FILE"\n', ("2012", "trs", "x")
        )
        assert spec.tool_dir == "$(rm -rf /)/bin"


def write_config(root, year, group, name, text=None):
    directory = root / year / group
    directory.mkdir(parents=True, exist_ok=True)
    (directory / f"{name}.conf").write_text(
        text if text is not None else f'TOOLDIR="{name}/bin"\nTOOL="./run.sh $FILE"\n',
        encoding="utf-8",
    )


class TestScanRegistry:
    def test_empty_directory(self, tmp_path):
        result = scan_registry(tmp_path)
        assert result.tree.years == ()
        assert result.warnings == ()

    def test_missing_root(self, tmp_path):
        with pytest.raises(RegistryError):
            scan_registry(tmp_path / "nope")

    def test_paper_style_fixture(self, tmp_path):
        write_config(tmp_path, "2012", "trs", "saigawa", SAIGAWA_CONFIG)
        result = scan_registry(tmp_path)
        tools = list(result.tree.iter_tools())
        assert len(tools) == 1
        assert tools[0].tool_dir == "Saigawa-2012/bin"
        assert tools[0].command_template == "./starexec_run_saigawa -t $TO $FILE"

    def test_ordering_against_directory_walk(self, tmp_path):
        for year in ("2014", "2016"):
            for group in ("trs", "ctrs"):
                for name in ("btool", "atool"):
                    write_config(tmp_path, year, group, name)
        tree = scan_registry(tmp_path).tree

        # Independent oracle: raw directory walk, sorted by the declared
        # ordering (years descending, the rest ascending).
        expected_years = sorted(os.listdir(tmp_path), reverse=True)
        assert [y.year for y in tree.years] == expected_years
        for year_entry in tree.years:
            expected_groups = sorted(os.listdir(tmp_path / year_entry.year))
            assert [g.label for g in year_entry.groups] == expected_groups
            for group_entry in year_entry.groups:
                expected_tools = sorted(
                    p[: -len(".conf")]
                    for p in os.listdir(tmp_path / year_entry.year / group_entry.label)
                )
                assert [t.display_name for t in group_entry.tools] == expected_tools

    def test_malformed_config_skipped_with_warning(self, tmp_path):
        write_config(tmp_path, "2016", "trs", "good")
        write_config(tmp_path, "2016", "trs", "broken", "TOOLDIR=unquoted\n")
        result = scan_registry(tmp_path)
        assert [t.display_name for t in result.tree.iter_tools()] == ["good"]
        assert len(result.warnings) == 1
        assert "2016/trs/broken" in result.warnings[0]

    def test_directories_without_valid_configs_dropped(self, tmp_path):
        write_config(tmp_path, "2016", "trs", "good")
        (tmp_path / "2015" / "empty-group").mkdir(parents=True)
        (tmp_path / "notes").mkdir()
        (tmp_path / "2016" / "trs" / "readme.txt").write_text("not a config")
        tree = scan_registry(tmp_path).tree
        assert [y.year for y in tree.years] == ["2016"]
        assert tree.tool_count() == 1

    def test_scan_is_idempotent(self, tmp_path):
        write_config(tmp_path, "2016", "trs", "a")
        write_config(tmp_path, "2015", "ctrs", "b")
        assert scan_registry(tmp_path).tree == scan_registry(tmp_path).tree

    def test_ids_unique(self, bench):
        ids = [t.id for t in bench.tree.iter_tools()]
        assert len(ids) == len(set(ids))


class TestResolveTools:
    def test_empty_selection(self, bench):
        assert resolve_tools([], bench.tree) == []

    def test_known_id_round_trips(self, bench):
        for spec in bench.tree.iter_tools():
            assert resolve_tools([spec.id], bench.tree) == [spec]

    def test_unknown_ids_collected(self, bench):
        with pytest.raises(UnknownToolError) as exc:
            resolve_tools(["nope", "2024/trs/echo-yes", "also/not/here"], bench.tree)
        assert exc.value.ids == ["nope", "also/not/here"]

    def test_order_preserved_duplicates_dropped(self, bench):
        ids = [
            "2024/trs/echo-no",
            "2024/trs/echo-yes",
            "2024/trs/echo-no",
            "2024/trs/echo-maybe",
        ]
        resolved = resolve_tools(ids, bench.tree)
        assert [s.id for s in resolved] == [
            "2024/trs/echo-no",
            "2024/trs/echo-yes",
            "2024/trs/echo-maybe",
        ]

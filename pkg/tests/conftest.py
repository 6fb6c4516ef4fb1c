"""Prints one PASS/FAIL line per acceptance criterion at the end of the run."""

from __future__ import annotations

import subprocess
from pathlib import Path
from typing import Optional

import pytest

_criteria: dict[int, str] = {}
_node_criterion: dict[str, int] = {}
_results: dict[int, list[bool]] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("acceptance")
        if marker is not None:
            number, title = marker.args
            _criteria[number] = title
            _node_criterion[item.nodeid] = number


def pytest_runtest_logreport(report):
    number = _node_criterion.get(report.nodeid)
    if number is None:
        return
    if report.when == "call" or report.failed or report.skipped:
        _results.setdefault(number, []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        outcomes = _results.get(number, [])
        ok = bool(outcomes) and all(outcomes)
        status = "PASS" if ok else ("FAIL" if outcomes else "NOT RUN")
        terminalreporter.write_line(f"criterion {number}: {status}  {_criteria[number]} "
                                    f"({sum(outcomes)}/{len(outcomes)} checks)")


class ScratchRepo:
    def __init__(self, path: Path) -> None:
        self.path = path

    def git(self, *args: str, check: bool = True, input: Optional[str] = None):
        return subprocess.run(["git", *args], cwd=self.path, capture_output=True, text=True,
                              check=check, input=input)

    def write(self, name: str, text: str) -> Path:
        target = self.path / name
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
        return target


@pytest.fixture
def repo(tmp_path, monkeypatch) -> ScratchRepo:
    """An empty repository on branch develop with a committer identity; also the cwd."""
    path = tmp_path / "repo"
    path.mkdir()
    r = ScratchRepo(path)
    r.git("init", "-q", "-b", "develop")
    r.git("config", "user.email", "alice@example.org")
    r.git("config", "user.name", "Alice")
    r.git("config", "commit.gpgsign", "false")
    monkeypatch.chdir(path)
    return r

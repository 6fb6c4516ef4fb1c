"""Installation of the thin Git hook shims that call back into ``git4voc``."""

from __future__ import annotations

import enum
import shlex
import stat
import sys
from dataclasses import dataclass
from pathlib import Path

from .gitrepo import Repo

MARKER = "# git4voc hook shim"
BACKUP_SUFFIX = ".g4v-backup"


class HookKind(str, enum.Enum):
    PRE_COMMIT = "pre-commit"
    POST_COMMIT = "post-commit"
    PRE_PUSH = "pre-push"


def shim_text(kind: HookKind, python: str = sys.executable) -> str:
    return (
        "#!/bin/sh\n"
        f"{MARKER} (written by 'git4voc install-hooks'; edits are overwritten)\n"
        f'exec {shlex.quote(python)} -m git4voc hook {kind.value} "$@"\n'
    )


@dataclass(frozen=True)
class InstallResult:
    kind: HookKind
    path: Path
    status: str  # "created", "updated", "unchanged"
    backup: Path | None = None


def install_hooks(repo: Repo, python: str = sys.executable) -> list[InstallResult]:
    """Write the three shims; foreign hooks are moved aside once, never clobbered."""
    hooks_dir = repo.hooks_dir()
    hooks_dir.mkdir(parents=True, exist_ok=True)
    results = []
    for kind in HookKind:
        path = hooks_dir / kind.value
        text = shim_text(kind, python)
        backup = None
        if path.exists():
            current = path.read_text(encoding="utf-8", errors="replace")
            if current == text:
                _make_executable(path)
                results.append(InstallResult(kind, path, "unchanged"))
                continue
            status = "updated"
            if MARKER not in current:
                backup = path.with_name(path.name + BACKUP_SUFFIX)
                if backup.exists():
                    # keep the oldest backup, number any further ones
                    n = 1
                    while backup.with_name(f"{backup.name}.{n}").exists():
                        n += 1
                    backup = backup.with_name(f"{backup.name}.{n}")
                path.replace(backup)
        else:
            status = "created"
        path.write_text(text, encoding="utf-8")
        _make_executable(path)
        results.append(InstallResult(kind, path, status, backup))
    return results


def _make_executable(path: Path) -> None:
    mode = path.stat().st_mode
    path.chmod(mode | stat.S_IXUSR | stat.S_IXGRP | stat.S_IXOTH)

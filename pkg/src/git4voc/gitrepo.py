"""Read-only access to a Git repository through the ``git`` executable."""

from __future__ import annotations

import os
import subprocess
from collections.abc import Iterable
from pathlib import Path
from typing import Optional

WORKTREE = "WORKTREE"
INDEX = "INDEX"
NULL_SHA = "0" * 40


class GitError(RuntimeError):
    pass


def _git(args: list[str], cwd: Path, input: Optional[bytes] = None, check: bool = True) -> bytes:
    try:
        proc = subprocess.run(["git", *args], cwd=cwd, input=input, capture_output=True)
    except FileNotFoundError:
        raise GitError("the git executable was not found on PATH") from None
    if check and proc.returncode != 0:
        msg = proc.stderr.decode("utf-8", "replace").strip()
        raise GitError(f"git {' '.join(args)} failed: {msg}")
    return proc.stdout


def _split_z(data: bytes) -> list[str]:
    return [p.decode("utf-8", "surrogateescape") for p in data.split(b"\0") if p]


class Repo:
    def __init__(self, root: Path) -> None:
        self.root = root
        self._empty_tree: Optional[str] = None

    @classmethod
    def discover(cls, cwd: Optional[Path] = None) -> Repo:
        cwd = Path(cwd or os.getcwd())
        proc = subprocess.run(["git", "rev-parse", "--show-toplevel"], cwd=cwd, capture_output=True)
        if proc.returncode != 0 or not proc.stdout.strip():
            raise GitError(f"not inside a Git worktree: {cwd}")
        return cls(Path(proc.stdout.decode().strip()))

    def git(self, *args: str, input: Optional[bytes] = None) -> bytes:
        return _git(list(args), self.root, input)

    def text(self, *args: str) -> str:
        return self.git(*args).decode("utf-8", "replace").strip()

    # refs -------------------------------------------------------------------

    def resolve(self, ref: str) -> Optional[str]:
        out = _git(["rev-parse", "--verify", "--quiet", f"{ref}^{{commit}}"], self.root, check=False)
        sha = out.decode().strip()
        return sha or None

    def has_head(self) -> bool:
        return self.resolve("HEAD") is not None

    def empty_tree(self) -> str:
        if self._empty_tree is None:
            out = self.git("hash-object", "-t", "tree", "-w", "--stdin", input=b"")
            self._empty_tree = out.decode().strip()
        return self._empty_tree

    def head_or_empty(self) -> str:
        return self.resolve("HEAD") or self.empty_tree()

    def current_branch(self) -> str:
        out = _git(["symbolic-ref", "--short", "-q", "HEAD"], self.root, check=False)
        return out.decode().strip() or "HEAD"

    def user(self, candidates: Iterable[str] = ()) -> str:
        """The configured committer identity, preferring one listed in ``candidates``."""
        known = set(candidates)
        ids = []
        for key in ("user.email", "user.name"):
            value = _git(["config", "--get", key], self.root, check=False).decode().strip()
            if value:
                ids.append(value)
        for value in ids:
            if value in known:
                return value
        return ids[0] if ids else "unknown"

    def tags(self) -> list[str]:
        return self.text("tag", "--list").splitlines()

    def hooks_dir(self) -> Path:
        path = Path(self.text("rev-parse", "--git-path", "hooks"))
        return path if path.is_absolute() else self.root / path

    def parents(self, commit: str) -> list[str]:
        return self.text("rev-list", "--parents", "-n", "1", commit).split()[1:]

    def push_base(self, local_sha: str, remote_sha: str) -> str:
        """The commit a push of ``local_sha`` builds on, as far as this clone knows."""
        if remote_sha != NULL_SHA and self.resolve(remote_sha):
            return remote_sha
        new = self.text("rev-list", "--reverse", local_sha, "--not", "--remotes").split()
        if not new:
            return local_sha
        parents = self.parents(new[0])
        return parents[0] if parents else self.empty_tree()

    # file listings ----------------------------------------------------------

    def staged_paths(self, suffixes: tuple[str, ...] = (".ttl",)) -> list[str]:
        out = self.git("diff-index", "--cached", "--name-only", "-z", "--diff-filter=ACM",
                       self.head_or_empty())
        return sorted(p for p in _split_z(out) if p.endswith(suffixes))

    def changed_paths(self, old: str, new: str, suffixes: tuple[str, ...] = (".ttl",)) -> list[str]:
        out = self.git("diff-tree", "-r", "--name-only", "-z", "--diff-filter=ACM", old, new)
        return sorted(p for p in _split_z(out) if p.endswith(suffixes))

    def _entries(self, ref: str) -> dict[str, str]:
        if ref == INDEX:
            out = self.git("ls-files", "-s", "-z")
            entries = {}
            for rec in _split_z(out):
                meta, path = rec.split("\t", 1)
                mode, sha, stage = meta.split()
                if stage == "0" and not mode.startswith("16"):
                    entries[path] = sha
            return entries
        out = self.git("ls-tree", "-r", "-z", "--full-tree", ref)
        entries = {}
        for rec in _split_z(out):
            meta, path = rec.split("\t", 1)
            mode, kind, sha = meta.split()
            if kind == "blob":
                entries[path] = sha
        return entries

    def read_blobs(self, shas: Iterable[str]) -> dict[str, bytes]:
        shas = list(dict.fromkeys(shas))
        if not shas:
            return {}
        out = self.git("cat-file", "--batch", input=("\n".join(shas) + "\n").encode())
        blobs: dict[str, bytes] = {}
        pos = 0
        for sha in shas:
            header_end = out.index(b"\n", pos)
            header = out[pos:header_end].split()
            if len(header) < 3:
                raise GitError(f"cannot read object {sha}")
            size = int(header[2])
            start = header_end + 1
            blobs[sha] = out[start:start + size]
            pos = start + size + 1
        return blobs

    def sources(self, ref: str, suffixes: tuple[str, ...] = (".ttl",),
                only: Optional[Iterable[str]] = None) -> dict[str, str]:
        """Text of the vocabulary files at ``ref`` (a commit-ish, INDEX or WORKTREE)."""
        wanted = set(only) if only is not None else None
        if ref == WORKTREE:
            paths = _split_z(self.git("ls-files", "-z"))
            out = {}
            for p in paths:
                if p.endswith(suffixes) and (wanted is None or p in wanted):
                    f = self.root / p
                    if f.is_file():
                        out[p] = f.read_bytes().decode("utf-8", "replace")
            return out
        if ref != INDEX and self.resolve(ref) is None and ref != self.empty_tree():
            raise GitError(f"unknown revision: {ref}")
        entries = {p: s for p, s in self._entries(ref).items()
                   if p.endswith(suffixes) and (wanted is None or p in wanted)}
        blobs = self.read_blobs(entries.values())
        return {p: blobs[s].decode("utf-8", "replace") for p, s in sorted(entries.items())}

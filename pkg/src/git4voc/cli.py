"""The ``git4voc`` command line and the logic behind the Git hook shims.

Exit codes: 0 success, 1 findings or policy violations, 2 usage,
configuration or environment errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, TextIO

from . import __version__
from .docgen import DocOptions, generate_docs
from .gitrepo import INDEX, NULL_SHA, WORKTREE, GitError, Repo
from .hooks import HookKind, install_hooks
from .lint import ConfigError, LintReport, check_structure, lint
from .policy import PolicyConfig, authorize, load_config
from .semdiff import activity_report, classify, compute_delta, render_changelog, suggest_version
from .snapshot import VocabularySnapshot, collect_paths, display_path, infer_base_namespaces, parse_files
from .turtle import TurtleSyntaxError, is_canonical, parse, serialize_canonical
from .version import VersionFormatError, VersionLabel, latest

CONFIG_NAME = "git4voc.conf"
TURTLE = (".ttl",)
# namespace matching nothing, used when no element namespace can be inferred
_NO_NAMESPACE = frozenset({"urn:x-git4voc:none#"})


class UsageError(Exception):
    """Bad invocation or environment; exit code 2."""


@dataclass
class Context:
    config: PolicyConfig
    repo: Optional[Repo]
    quiet: bool = False
    report: Optional[str] = None
    out: TextIO = field(default_factory=lambda: sys.stdout)
    err: TextIO = field(default_factory=lambda: sys.stderr)

    def say(self, text: str = "") -> None:
        print(text, file=self.out)

    def info(self, text: str = "") -> None:
        if not self.quiet:
            print(text, file=self.out)

    def error(self, text: str) -> None:
        print(text, file=self.err)

    def need_repo(self) -> Repo:
        if self.repo is None:
            raise UsageError("not inside a Git repository")
        return self.repo

    def write_report(self, payload: str) -> None:
        if not self.report:
            return
        if self.report == "-":
            self.out.write(payload)
            return
        try:
            Path(self.report).write_text(payload, encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot write report {self.report}: {exc.strerror or exc}") from None


def _json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# Gathering sources


@dataclass
class Sources:
    """Vocabulary texts keyed by snapshot path, with where each lives on disk."""

    texts: dict[str, str]
    files: dict[str, Path]


def _read_paths(args: Sequence[str], suffixes: tuple[str, ...]) -> Sources:
    paths = collect_paths(args, suffixes)
    for p in paths:
        if not p.is_file():
            raise UsageError(f"cannot read {p}: no such file")
    keys = [display_path(p) for p in paths]
    if any(k.startswith("/") or ".." in k.split("/") for k in keys):
        base = Path(os.path.commonpath([str(p.resolve().parent) for p in paths]))
        keys = [p.resolve().relative_to(base).as_posix() for p in paths]
    texts, files = {}, {}
    for key, p in zip(keys, paths):
        try:
            texts[key] = p.read_bytes().decode("utf-8", "replace")
        except OSError as exc:
            raise UsageError(f"cannot read {p}: {exc.strerror or exc}") from None
        files[key] = p
    return Sources(texts, files)


def _default_sources(ctx: Context, ref: str, staged_only: bool) -> Sources:
    if ctx.repo is None:
        raise UsageError("no paths given and not inside a Git repository")
    repo = ctx.repo
    only = repo.staged_paths() if staged_only else None
    texts = repo.sources(ref, TURTLE, only=only)
    return Sources(texts, {p: repo.root / p for p in texts})


def _sources(ctx: Context, paths: Sequence[str], ref: str, staged_only: bool,
             suffixes: tuple[str, ...] = TURTLE) -> Sources:
    if paths:
        return _read_paths(paths, suffixes)
    return _default_sources(ctx, ref, staged_only)


def _namespaces(ctx: Context, *snaps: VocabularySnapshot) -> frozenset[str]:
    return ctx.config.base_namespaces or infer_base_namespaces(*snaps) or _NO_NAMESPACE


# ---------------------------------------------------------------------------
# Commands


def cmd_validate(ctx: Context, paths: Sequence[str]) -> int:
    src = _sources(ctx, paths, INDEX, staged_only=True)
    _, errors = parse_files(src.texts)
    for e in errors:
        ctx.say(str(e))
    ctx.write_report(lint(VocabularySnapshot(), ctx.config.lint_config(), errors).to_json())
    if errors:
        failed = len({e.file for e in errors})
        ctx.say(f"{len(errors)} syntax error(s) in {failed} of {len(src.texts)} file(s)")
        return 1
    ctx.info(f"{len(src.texts)} file(s) are valid Turtle")
    return 0


def cmd_canon(ctx: Context, paths: Sequence[str], write: bool) -> int:
    ref = WORKTREE if write else INDEX
    src = _sources(ctx, paths, ref, staged_only=True)
    results = []
    status = 0
    for key in sorted(src.texts):
        text = src.texts[key].replace("\r\n", "\n")
        try:
            check = is_canonical(text, key)
        except TurtleSyntaxError as exc:
            for e in exc.errors:
                ctx.say(str(e))
            results.append({"file": key, "canonical": None, "line": None})
            status = 1
            continue
        results.append({"file": key, "canonical": check.canonical, "line": check.line})
        if check.canonical:
            continue
        if write:
            canonical = serialize_canonical(parse(text, key))
            try:
                src.files[key].write_text(canonical, encoding="utf-8")
            except OSError as exc:
                raise UsageError(f"cannot write {key}: {exc.strerror or exc}") from None
            ctx.say(f"rewrote {key}")
        else:
            ctx.say(f"{key}:{check.line}: not in canonical form "
                    f"(run 'git4voc canon --write {key}')")
            status = 1
    ctx.write_report(_json({"format": "git4voc-canon/1", "files": results}))
    if status == 0 and not write:
        ctx.info(f"{len(src.texts)} file(s) are in canonical form")
    return status


def _lint_report(ctx: Context, texts: dict[str, str]) -> LintReport:
    config = ctx.config.lint_config()
    snap, errors = parse_files(texts, config.base_namespaces)
    return lint(snap, config, errors).merged(check_structure(snap, config))


def _print_lint(ctx: Context, report: LintReport, strict: bool) -> int:
    for f in report.findings:
        ctx.say(str(f))
    ctx.write_report(report.to_json())
    blocked = report.blocking(strict)
    if report.findings or blocked:
        ctx.say(f"lint: {report.summary()}")
    else:
        ctx.info("lint: no findings")
    return 1 if blocked else 0


def cmd_lint(ctx: Context, paths: Sequence[str], strict: bool) -> int:
    src = _sources(ctx, paths, WORKTREE, staged_only=False,
                   suffixes=(".ttl", ".rdf", ".owl"))
    return _print_lint(ctx, _lint_report(ctx, src.texts), strict)


def _doc_options(ctx: Context) -> DocOptions:
    return DocOptions(primary_language=ctx.config.primary_language)


def _write_html(path: Path, html: str) -> None:
    try:
        path.write_text(html, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror or exc}") from None


def cmd_doc(ctx: Context, paths: Sequence[str], out: Optional[str], per_file: bool) -> int:
    src = _sources(ctx, paths, WORKTREE, staged_only=False)
    namespaces = ctx.config.base_namespaces
    snap, errors = parse_files(src.texts, namespaces)
    for e in errors:
        ctx.error(str(e))
    written: list[Path] = []
    if per_file:
        out_dir = Path(out) if out else None
        if out_dir is not None and not out_dir.is_dir():
            raise UsageError(f"--out must be an existing directory with --per-file: {out_dir}")
        for key, graph in snap.files.items():
            single = VocabularySnapshot({key: graph}, namespaces)
            html = generate_docs(single, _doc_options(ctx))
            target = src.files[key].with_suffix(".html")
            if out_dir is not None:
                target = out_dir / Path(key).with_suffix(".html")
                target.parent.mkdir(parents=True, exist_ok=True)
            _write_html(target, html)
            written.append(target)
    else:
        if out:
            target = Path(out)
        elif len(src.files) == 1:
            target = next(iter(src.files.values())).with_suffix(".html")
        elif src.files:
            common = os.path.commonpath([str(p.resolve().parent) for p in src.files.values()])
            target = Path(common) / "vocabulary.html"
        else:
            target = Path("vocabulary.html")
        _write_html(target, generate_docs(snap, _doc_options(ctx)))
        written.append(target)
    for path in written:
        ctx.info(f"wrote {display_path(path)}")
    ctx.write_report(_json({"format": "git4voc-doc/1",
                            "written": [display_path(p) for p in written]}))
    ctx.say("Documentation Generation is completed.")
    return 1 if errors else 0


def _snapshot_at(repo: Repo, ref: str) -> tuple[VocabularySnapshot, list]:
    return parse_files(repo.sources(ref, TURTLE))


def _classified(ctx: Context, old: VocabularySnapshot, new: VocabularySnapshot):
    namespaces = _namespaces(ctx, old, new)
    old, new = old.with_namespaces(namespaces), new.with_namespaces(namespaces)
    delta = compute_delta(old, new)
    return delta, classify(delta, old, new), old.prefixes().merged(new.prefixes())


def cmd_diff(ctx: Context, old_ref: str, new_ref: str, suggest: bool) -> int:
    repo = ctx.need_repo()
    for ref in (old_ref, new_ref):
        if ref not in (WORKTREE, INDEX) and repo.resolve(ref) is None:
            raise UsageError(f"unknown revision: {ref}")
    old, old_errors = _snapshot_at(repo, old_ref)
    new, new_errors = _snapshot_at(repo, new_ref)
    if old_errors or new_errors:
        for ref, errors in ((old_ref, old_errors), (new_ref, new_errors)):
            for e in errors:
                ctx.say(f"{ref}: {e}")
        return 1
    delta, activities, prefixes = _classified(ctx, old, new)
    ctx.out.write(render_changelog(delta, activities, prefixes))
    current = suggested = None
    if suggest:
        current = latest(repo.tags()) or VersionLabel()
        suggested = suggest_version(current, activities)
        ctx.say("")
        ctx.say(f"Current version: {current}")
        ctx.say(f"Suggested version: {suggested} (git tag name '{suggested.tag_name}')")
    ctx.write_report(_json(activity_report(activities, delta, current, suggested)))
    return 0


def _policy(ctx: Context, old: VocabularySnapshot, new: VocabularySnapshot,
            user: str, branch: str) -> tuple[int, dict]:
    delta, activities, prefixes = _classified(ctx, old, new)
    payload = {"format": "git4voc-policy/1", "user": user, "branch": branch,
               "role": ctx.config.role_of(user).name,
               "activities": activity_report(activities, delta)["activities"]}
    if not activities:
        ctx.say("No changes.")
        payload.update(allowed=True, reasons=[])
        return 0, payload
    decision = authorize(user, branch, activities, ctx.config)
    payload.update(allowed=decision.allowed, reasons=list(decision.reasons))
    if decision:
        ctx.say(f"Allow: {user} ({payload['role']}) on {branch}, "
                f"{len(activities)} activit{'y' if len(activities) == 1 else 'ies'}")
        return 0, payload
    for reason in decision.reasons:
        ctx.say(f"Deny: {reason}")
    return 1, payload


def cmd_policy_check(ctx: Context, user: Optional[str], branch: Optional[str]) -> int:
    repo = ctx.need_repo()
    user = user or repo.user(ctx.config.users)
    branch = branch or repo.current_branch()
    old, _ = _snapshot_at(repo, repo.head_or_empty())
    new, _ = _snapshot_at(repo, INDEX)
    code, payload = _policy(ctx, old, new, user, branch)
    ctx.write_report(_json(payload))
    return code


def cmd_tag_verify(ctx: Context, tag: str, exclude: Iterable[str] = ()) -> int:
    try:
        label = VersionLabel.parse(tag)
    except VersionFormatError as exc:
        ctx.say(f"tag {tag}: {exc}")
        return 1
    repo = ctx.need_repo()
    skip = set(exclude)
    previous = latest(t for t in repo.tags() if t not in skip)
    ctx.say(f"latest release: {previous or 'none'}")
    ctx.say(f"new release: {label}")
    if previous is not None and label <= previous:
        ctx.say(f"tag {tag}: {label} must be greater than {previous}")
        return 1
    return 0


def cmd_install_hooks(ctx: Context) -> int:
    repo = ctx.need_repo()
    for r in install_hooks(repo):
        if r.backup is not None:
            ctx.say(f"notice: existing {r.kind.value} hook moved to {r.backup.name}")
        ctx.info(f"{r.kind.value}: {r.status} ({r.path})")
    return 0


# ---------------------------------------------------------------------------
# Hook entry points


def hook_pre_commit(ctx: Context) -> int:
    repo = ctx.need_repo()
    staged = repo.staged_paths()

    def failed() -> int:
        ctx.say("COMMIT FAILED")
        return 1

    if staged:
        texts = repo.sources(INDEX, TURTLE, only=staged)
        ctx.say(f"[1/4] validate ({len(staged)} staged file(s))")
        if cmd_validate(ctx, []) != 0:
            return failed()
        ctx.say("[2/4] canon --check")
        if cmd_canon(ctx, [], write=False) != 0:
            return failed()
        ctx.say("[3/4] lint")
        everything = repo.sources(INDEX, TURTLE)
        report = _lint_report(ctx, everything).only_files(texts)
        if _print_lint(ctx, report, strict=False) != 0:
            return failed()
    ctx.say("[4/4] policy-check")
    if cmd_policy_check(ctx, None, None) != 0:
        return failed()
    ctx.say("COMMIT SUCCEEDED")
    return 0


def hook_post_commit(ctx: Context) -> int:
    repo = ctx.need_repo()
    head = repo.resolve("HEAD")
    if head is None:
        return 0
    parents = repo.parents(head)
    changed = repo.changed_paths(parents[0] if parents else repo.empty_tree(), head)
    texts = repo.sources(head, TURTLE, only=changed)
    namespaces = ctx.config.base_namespaces
    for key in sorted(texts):
        snap, errors = parse_files({key: texts[key]}, namespaces)
        if errors:
            ctx.error(f"skipping {key}: it does not parse")
            continue
        target = repo.root / Path(key).with_suffix(".html")
        try:
            target.write_text(generate_docs(snap, _doc_options(ctx)), encoding="utf-8")
        except OSError as exc:
            ctx.error(f"cannot write {target}: {exc.strerror or exc}")
            continue
        ctx.info(f"wrote {Path(key).with_suffix('.html').as_posix()}")
    ctx.say("Documentation Generation is completed.")
    return 0


def hook_pre_push(ctx: Context, stdin: TextIO) -> int:
    repo = ctx.need_repo()
    updates = []
    for line in stdin.read().splitlines():
        parts = line.split()
        if len(parts) == 4:
            updates.append(parts)
    pushed_tags = {remote_ref[len("refs/tags/"):] for _, local_sha, remote_ref, _ in updates
                   if remote_ref.startswith("refs/tags/") and local_sha != NULL_SHA}
    user = repo.user(ctx.config.users)
    status = 0
    for local_ref, local_sha, remote_ref, remote_sha in updates:
        if local_sha == NULL_SHA:
            continue
        if remote_ref.startswith("refs/tags/"):
            tag = remote_ref[len("refs/tags/"):]
            ctx.say(f"tag-verify {tag}")
            status |= cmd_tag_verify(ctx, tag, exclude=pushed_tags)
        elif remote_ref.startswith("refs/heads/"):
            branch = remote_ref[len("refs/heads/"):]
            base = repo.push_base(local_sha, remote_sha)
            commits = repo.text("rev-list", "--reverse", "--no-merges", local_sha,
                                f"^{base}" if base != repo.empty_tree() else "--").split()
            for commit in commits:
                parents = repo.parents(commit)
                old, _ = _snapshot_at(repo, parents[0] if parents else repo.empty_tree())
                new, _ = _snapshot_at(repo, commit)
                ctx.say(f"policy-check {commit[:12]} -> {branch}")
                code, _ = _policy(ctx, old, new, user, branch)
                status |= code
    ctx.say("PUSH FAILED" if status else "PUSH SUCCEEDED")
    return 1 if status else 0


# ---------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help=f"configuration file (default: {CONFIG_NAME} at the repository root)")
    common.add_argument("--report", default=argparse.SUPPRESS, metavar="PATH",
                        help="also write a JSON report to PATH ('-' for stdout)")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS,
                        help="only print findings and errors")

    parser = argparse.ArgumentParser(prog="git4voc", parents=[common],
                                     description="Git tooling for collaborative RDF vocabularies.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("validate", parents=[common], help="check Turtle syntax")
    p.add_argument("paths", nargs="*", help="files or folders (default: staged .ttl files)")

    p = sub.add_parser("canon", parents=[common], help="check or apply the one-triple-per-line layout")
    p.add_argument("paths", nargs="*", help="files or folders (default: staged .ttl files)")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--check", action="store_true", help="report non-canonical files (default)")
    mode.add_argument("--write", action="store_true", help="rewrite files in canonical form")

    p = sub.add_parser("diff", parents=[common], help="semantic changelog between two versions")
    p.add_argument("old", help="old revision (commit-ish, INDEX or WORKTREE)")
    p.add_argument("new", nargs="?", default=WORKTREE, help="new revision (default: WORKTREE)")
    p.add_argument("--suggest-version", action="store_true",
                   help="print the next release label after the latest version tag")

    p = sub.add_parser("lint", parents=[common], help="check design guidelines")
    p.add_argument("paths", nargs="*", help="files or folders (default: tracked .ttl files)")
    p.add_argument("--strict", action="store_true", help="warnings also fail")

    p = sub.add_parser("doc", parents=[common], help="generate HTML documentation")
    p.add_argument("paths", nargs="*", help="files or folders (default: tracked .ttl files)")
    p.add_argument("--out", help="output file (or directory with --per-file)")
    p.add_argument("--per-file", action="store_true", help="one page per vocabulary file")

    p = sub.add_parser("policy-check", parents=[common],
                       help="authorize the staged changes for a user and branch")
    p.add_argument("--user", help="committer identity (default: git config user.email/user.name)")
    p.add_argument("--branch", help="target branch (default: the current branch)")

    p = sub.add_parser("tag-verify", parents=[common], help="check a release tag name")
    p.add_argument("tag", help="tag name such as v[2.0.0] (in Git: v{2.0.0})")
    p.add_argument("--exclude", action="append", default=[], metavar="TAG",
                   help="ignore this existing tag when finding the latest release")

    sub.add_parser("install-hooks", parents=[common], help="install the Git hook shims")

    p = sub.add_parser("hook", parents=[common])
    p.add_argument("kind", choices=[k.value for k in HookKind])
    p.add_argument("hook_args", nargs="*")
    # keep the internal entry point out of the help listing
    sub._choices_actions = [a for a in sub._choices_actions if a.dest != "hook"]
    return parser


def _load_context(args: argparse.Namespace) -> Context:
    try:
        repo: Optional[Repo] = Repo.discover()
    except GitError:
        repo = None
    explicit = getattr(args, "config", None)
    path = Path(explicit) if explicit else (repo.root if repo else Path.cwd()) / CONFIG_NAME
    if path.is_file():
        try:
            config = load_config(path.read_text(encoding="utf-8"))
        except ConfigError as exc:
            raise UsageError(f"{display_path(path)}: {exc}") from None
    elif explicit:
        raise UsageError(f"cannot read configuration {explicit}: no such file")
    else:
        config = PolicyConfig()
    return Context(config, repo, quiet=getattr(args, "quiet", False),
                   report=getattr(args, "report", None))


def _dispatch(ctx: Context, args: argparse.Namespace) -> int:
    cmd = args.command
    if cmd == "validate":
        return cmd_validate(ctx, args.paths)
    if cmd == "canon":
        return cmd_canon(ctx, args.paths, write=args.write)
    if cmd == "diff":
        return cmd_diff(ctx, args.old, args.new, args.suggest_version)
    if cmd == "lint":
        return cmd_lint(ctx, args.paths, args.strict)
    if cmd == "doc":
        return cmd_doc(ctx, args.paths, args.out, args.per_file)
    if cmd == "policy-check":
        return cmd_policy_check(ctx, args.user, args.branch)
    if cmd == "tag-verify":
        return cmd_tag_verify(ctx, args.tag, args.exclude)
    if cmd == "install-hooks":
        return cmd_install_hooks(ctx)
    if args.kind == HookKind.PRE_COMMIT.value:
        return hook_pre_commit(ctx)
    if args.kind == HookKind.POST_COMMIT.value:
        return hook_post_commit(ctx)
    return hook_pre_push(ctx, sys.stdin)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        ctx = _load_context(args)
        return _dispatch(ctx, args)
    except (UsageError, GitError, ConfigError) as exc:
        print(f"git4voc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

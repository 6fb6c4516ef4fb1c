"""Roles, branch rules and the commit authorization decision.

A commit is allowed when every activity's category is permitted by both the
committer's role and the branch rule. Rules come from ``git4voc.conf``; see
docs/config.md for the grammar.
"""

from __future__ import annotations

import fnmatch
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Optional

from .lint import ConfigError, LintConfig
from .rdf import is_valid_iri
from .semdiff import ActivityRecord, Category

ALL_CATEGORIES = frozenset(Category)
MASTER_DENIAL = "Not allowed to commit to {branch} branch!"


@dataclass(frozen=True)
class Role:
    name: str
    allowed_categories: frozenset[Category]


@dataclass(frozen=True)
class BranchRule:
    branch_pattern: str
    allowed_categories: frozenset[Category]
    direct_commits_allowed: bool = True

    def matches(self, branch: str) -> bool:
        return fnmatch.fnmatchcase(branch, self.branch_pattern)


BUILTIN_ROLES: Mapping[str, Role] = MappingProxyType({
    "VocabularyEngineer": Role("VocabularyEngineer", ALL_CATEGORIES),
    "DomainExpert": Role("DomainExpert", frozenset({Category.BASIC})),
    "Translator": Role("Translator", frozenset({Category.BASIC})),
    "User": Role("User", frozenset()),
})

DEFAULT_BRANCHES: tuple[BranchRule, ...] = (
    BranchRule("master", frozenset(), direct_commits_allowed=False),
    BranchRule("develop", frozenset({Category.BASIC})),
    BranchRule("semantic-issues*", frozenset({Category.SEMANTIC, Category.BASIC})),
    BranchRule("structural-issues*", ALL_CATEGORIES),
)

UNKNOWN_USER_ROLE = "User"


@dataclass(frozen=True)
class PolicyConfig:
    users: Mapping[str, str] = field(default_factory=dict)
    roles: Mapping[str, Role] = field(default_factory=lambda: dict(BUILTIN_ROLES))
    branches: tuple[BranchRule, ...] = DEFAULT_BRANCHES
    base_namespaces: frozenset[str] = frozenset()
    required_languages: tuple[str, ...] = ()
    max_triples_per_file: int = 300
    max_files_per_folder: int = 20
    translations_dir: str = "translations"
    primary_language: str = "en"

    def __post_init__(self) -> None:
        if not self.branches:
            raise ConfigError("at least one branch rule is required")
        for user, role in self.users.items():
            if role not in self.roles:
                raise ConfigError(f"user {user!r} refers to undefined role {role!r}")
        object.__setattr__(self, "users", MappingProxyType(dict(self.users)))
        object.__setattr__(self, "roles", MappingProxyType(dict(self.roles)))

    def role_of(self, user: str) -> Role:
        name = self.users.get(user, UNKNOWN_USER_ROLE)
        return self.roles.get(name) or Role(UNKNOWN_USER_ROLE, frozenset())

    def branch_rule(self, branch: str) -> Optional[BranchRule]:
        return next((rule for rule in self.branches if rule.matches(branch)), None)

    def lint_config(self) -> LintConfig:
        return LintConfig(
            required_languages=self.required_languages,
            max_triples_per_file=self.max_triples_per_file,
            max_files_per_folder=self.max_files_per_folder,
            translations_dir=self.translations_dir,
            base_namespaces=self.base_namespaces,
        )


@dataclass(frozen=True)
class Decision:
    allowed: bool
    reasons: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.allowed


ALLOW = Decision(True)


def authorize(user: str, branch: str, activities: Iterable[ActivityRecord],
              config: PolicyConfig) -> Decision:
    activities = list(activities)
    if not activities:
        return ALLOW
    rule = config.branch_rule(branch)
    if rule is not None and not rule.direct_commits_allowed:
        return Decision(False, (MASTER_DENIAL.format(branch=branch),))
    role = config.role_of(user)
    reasons: list[str] = []
    for activity in activities:
        what = f"{activity.kind.name} {activity.kind.display_name} ({activity.category.value})"
        if activity.category not in role.allowed_categories:
            reasons.append(f"{what}: role {role.name} of {user} does not permit "
                           f"{activity.category.value} activities")
        if rule is not None and activity.category not in rule.allowed_categories:
            reasons.append(f"{what}: branch {branch} (rule '{rule.branch_pattern}') does not "
                           f"permit {activity.category.value} activities")
    reasons = list(dict.fromkeys(reasons))
    return Decision(not reasons, tuple(reasons))


# ---------------------------------------------------------------------------
# Config file

# '#' starts a comment only at line start or after whitespace, so IRIs keep theirs
_COMMENT_RE = re.compile(r"(?:^|\s)#.*")
_SECTION_RE = re.compile(r"([a-z]+)\s*:\Z")
_ENTRY_RE = re.compile(r"([^=\s][^=]*?)\s*=\s*(.*)\Z")
_SETTINGS = {
    "base_namespaces", "required_languages", "max_triples_per_file",
    "max_files_per_folder", "translations_dir", "primary_language",
}


def _categories(text: str, line: int) -> frozenset[Category]:
    text = text.strip()
    if text.lower() in ("", "none", "-"):
        return frozenset()
    out = set()
    for name in text.split(","):
        name = name.strip()
        try:
            out.add(Category(name.capitalize()))
        except ValueError:
            raise ConfigError(f"unknown category {name!r} (expected Basic, Semantic, Structural)",
                              line) from None
    return frozenset(out)


def _list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _positive_int(key: str, text: str, line: int) -> int:
    if not re.fullmatch(r"[0-9]+", text) or int(text) < 1:
        raise ConfigError(f"{key} must be a positive integer, got {text!r}", line)
    return int(text)


def load_config(text: str) -> PolicyConfig:
    """Parse ``git4voc.conf`` text; absent sections keep the built-in defaults."""
    section: Optional[str] = None
    users: dict[str, str] = {}
    user_lines: dict[str, int] = {}
    roles: dict[str, Role] = dict(BUILTIN_ROLES)
    branches: list[BranchRule] = []
    saw_branches = False
    settings: dict[str, object] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _COMMENT_RE.sub("", raw).strip()
        if not line:
            continue
        m = _SECTION_RE.match(line)
        if m:
            section = m.group(1)
            if section not in ("users", "roles", "branches", "settings"):
                raise ConfigError(f"unknown section {section!r}", lineno)
            saw_branches = saw_branches or section == "branches"
            continue
        m = _ENTRY_RE.match(line)
        if m is None:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        if section is None:
            raise ConfigError("entry outside of a section", lineno)
        key, value = m.group(1).strip(), m.group(2).strip()

        if section == "users":
            if key in users:
                raise ConfigError(f"duplicate user {key!r}", lineno)
            users[key] = value
            user_lines[key] = lineno
        elif section == "roles":
            if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_-]*", key):
                raise ConfigError(f"invalid role name {key!r}", lineno)
            roles[key] = Role(key, _categories(value, lineno))
        elif section == "branches":
            cats, _, direct = value.partition("|")
            direct = direct.strip().lower()
            if direct not in ("", "direct:yes", "direct:no"):
                raise ConfigError(f"expected 'direct:yes' or 'direct:no', got {direct!r}", lineno)
            branches.append(BranchRule(key, _categories(cats, lineno), direct != "direct:no"))
        else:
            if key not in _SETTINGS:
                raise ConfigError(f"unknown setting {key!r}", lineno)
            if key == "base_namespaces":
                bad = [ns for ns in _list(value) if not is_valid_iri(ns)]
                if bad:
                    raise ConfigError(f"invalid namespace IRI {bad[0]!r}", lineno)
                settings[key] = frozenset(_list(value))
            elif key == "required_languages":
                settings[key] = tuple(_list(value))
            elif key in ("max_triples_per_file", "max_files_per_folder"):
                settings[key] = _positive_int(key, value, lineno)
            else:
                if not value:
                    raise ConfigError(f"{key} needs a value", lineno)
                settings[key] = value

    for user, role in users.items():
        if role not in roles:
            raise ConfigError(f"user {user!r} refers to undefined role {role!r}", user_lines[user])
    if saw_branches and not branches:
        raise ConfigError("the branches section defines no rules")
    config = PolicyConfig(
        users=users,
        roles=roles,
        branches=tuple(branches) if saw_branches else DEFAULT_BRANCHES,
        **settings,  # type: ignore[arg-type]
    )
    config.lint_config()  # validates language tags and folder names
    return config

"""Release labels of the form ``v[structural.semantic.basic]``.

Git refuses ``[`` and ``]`` in ref names, so a label is stored as the tag
``v{1.0.0}``; :meth:`VersionLabel.parse` accepts both spellings.
"""

from __future__ import annotations

import re
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Optional

_NUM = r"(0|[1-9][0-9]*)"
_LABEL_RE = re.compile(rf"v\[{_NUM}\.{_NUM}\.{_NUM}\]\Z")
_REF_RE = re.compile(rf"v\{{{_NUM}\.{_NUM}\.{_NUM}\}}\Z")


class VersionFormatError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class VersionLabel:
    structural: int = 0
    semantic: int = 0
    basic: int = 0

    def __post_init__(self) -> None:
        if min(self.structural, self.semantic, self.basic) < 0:
            raise ValueError("version components must be non-negative")

    def __str__(self) -> str:
        return f"v[{self.structural}.{self.semantic}.{self.basic}]"

    @property
    def tag_name(self) -> str:
        return f"v{{{self.structural}.{self.semantic}.{self.basic}}}"

    @classmethod
    def parse(cls, text: str) -> VersionLabel:
        m = _LABEL_RE.match(text) or _REF_RE.match(text)
        if m is None:
            raise VersionFormatError(
                f"{text!r} does not match the release label pattern v[StI.SeI.BA] "
                "(e.g. v[1.0.0]; stored in Git as v{1.0.0})"
            )
        return cls(*(int(g) for g in m.groups()))

    @classmethod
    def try_parse(cls, text: str) -> Optional[VersionLabel]:
        try:
            return cls.parse(text)
        except VersionFormatError:
            return None

    def bump(self, category: str) -> VersionLabel:
        if category == "Structural":
            return VersionLabel(self.structural + 1, 0, 0)
        if category == "Semantic":
            return VersionLabel(self.structural, self.semantic + 1, 0)
        if category == "Basic":
            return VersionLabel(self.structural, self.semantic, self.basic + 1)
        raise ValueError(f"unknown category {category!r}")


def latest(labels: Iterable[str]) -> Optional[VersionLabel]:
    """Highest well-formed label among ``labels``; malformed names are ignored."""
    parsed = [v for v in map(VersionLabel.try_parse, labels) if v is not None]
    return max(parsed, default=None)

"""
Interpretability rule language.

One rule per line, '#' starts a comment line:

    ETH == {E/a, S/C}          forbidden branch set (exact match)
    ETH !together {E/a, S/C}   levels that must never share a branch
"""
import re
from pathlib import Path
from typing import Iterable, Literal, Union

from loguru import logger
from pydantic import BaseModel, ConfigDict, model_validator

from src.core.errors import RuleParseError

RuleKind = Literal["exact_set", "never_together"]

_RULE_RE = re.compile(r"^(?P<variable>[^\s=!{}]+)\s*(?P<op>==|!together)\s*\{(?P<body>[^{}]*)\}$")
_OPS: dict[str, RuleKind] = {"==": "exact_set", "!together": "never_together"}


class ExclusionRule(BaseModel):
    """A forbidden grouping of levels of one categorical variable."""

    model_config = ConfigDict(frozen=True)

    variable: str
    kind: RuleKind
    levels: frozenset[str]

    @model_validator(mode="after")
    def _check_levels(self) -> "ExclusionRule":
        if not self.levels:
            raise ValueError("a rule needs at least one level")
        if self.kind == "never_together" and len(self.levels) < 2:
            raise ValueError("never_together needs at least two levels")
        return self

    def __str__(self) -> str:
        op = "==" if self.kind == "exact_set" else "!together"
        return f"{self.variable} {op} {{{', '.join(sorted(self.levels))}}}"


def _parse_line(line: str, lineno: int) -> ExclusionRule:
    match = _RULE_RE.match(line)
    if not match:
        if "==" not in line and "!together" not in line:
            raise RuleParseError(f"unknown rule syntax: {line!r}", lineno)
        raise RuleParseError(f"malformed rule: {line!r}", lineno)
    levels = [part.strip() for part in match["body"].split(",")]
    if any(not level for level in levels):
        raise RuleParseError(f"empty level name in {line!r}", lineno)
    if len(set(levels)) != len(levels):
        raise RuleParseError(f"duplicate level in {line!r}", lineno)
    try:
        return ExclusionRule(variable=match["variable"], kind=_OPS[match["op"]], levels=frozenset(levels))
    except ValueError as e:
        raise RuleParseError(str(e), lineno) from e


def parse_rules(text: str) -> list[ExclusionRule]:
    """
    Parse rule file contents.

    Raises:
        RuleParseError: a line is malformed; carries the 1-based line number
    """
    rules = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rules.append(_parse_line(line, lineno))
    return rules


def load_rules(path: Union[str, Path]) -> list[ExclusionRule]:
    """Read and parse a UTF-8 rule file."""
    rules = parse_rules(Path(path).read_text(encoding="utf-8"))
    logger.info(f"Loaded {len(rules)} interpretability rules from {path}")
    return rules


def unknown_variables(rules: Iterable[ExclusionRule], variables: Iterable[str]) -> list[str]:
    """Variables named by rules but absent from the given names, sorted."""
    known = set(variables)
    return sorted({rule.variable for rule in rules} - known)

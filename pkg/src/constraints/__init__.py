from src.constraints.checker import InterpretabilityVerdict, Violation, check_tree, split_violates
from src.constraints.rules import ExclusionRule, load_rules, parse_rules, unknown_variables

__all__ = [
    "ExclusionRule",
    "parse_rules",
    "load_rules",
    "unknown_variables",
    "InterpretabilityVerdict",
    "Violation",
    "check_tree",
    "split_violates",
]

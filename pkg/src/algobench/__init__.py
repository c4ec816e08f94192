"""
algobench: contamination-resistant algorithmic reasoning benchmark engine.

Deterministically generates problem instances across three difficulty
suites, computes exact solution sets, parses free-text model responses,
and scores them under a token-budget-aware protocol.
"""

from .core import (
    DEFAULT_MASTER_SEED,
    ProblemInstance,
    SeedSpec,
    SolutionSet,
    TaskId,
    Verdict,
    all_tasks,
    ensure_registered,
    generate_instance,
    registry_lookup,
    tasks_in_suite,
)
from .parsing import ParseResult, parse_response
from .tokens import TokenBudget, BudgetInfeasible, estimate_tokens

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_MASTER_SEED",
    "ProblemInstance",
    "SeedSpec",
    "SolutionSet",
    "TaskId",
    "Verdict",
    "all_tasks",
    "ensure_registered",
    "generate_instance",
    "registry_lookup",
    "tasks_in_suite",
    "ParseResult",
    "parse_response",
    "TokenBudget",
    "BudgetInfeasible",
    "estimate_tokens",
    "__version__",
]

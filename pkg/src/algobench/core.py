"""
Shared domain types, the task registry, and metric aggregation.

The registry maps (suite, family) to a TaskDef that knows how many
variations the family has, how to generate an instance, how to verify a
parsed answer, and how to render the ground-truth answer in the task's
required format (used by the bundled oracle answerer).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional

from .rng import derive_seed

SUITES = ("easy", "medium", "hard")

DEFAULT_MASTER_SEED = 42


class UnknownTask(KeyError):
    """Raised when a (suite, family, variation) triple is not registered."""


class IllegalParams(ValueError):
    """Raised when generation parameters fall outside the legal ranges."""


class GenerationExhausted(RuntimeError):
    """Raised when rejection sampling exceeds the documented retry cap."""


@dataclass(frozen=True)
class TaskId:
    suite: str
    family: str
    variation: int = 0

    def key(self) -> str:
        return f"{self.suite}/{self.family}/{self.variation}"

    def to_dict(self) -> dict:
        return {"suite": self.suite, "family": self.family, "variation": self.variation}

    @staticmethod
    def from_dict(d: dict) -> "TaskId":
        return TaskId(d["suite"], d["family"], int(d["variation"]))


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int = DEFAULT_MASTER_SEED
    instance_index: int = 0

    def child_seed(self, task: TaskId) -> int:
        return derive_seed(self.master_seed, task.key(), self.instance_index)


@dataclass
class SolutionSet:
    """
    The acceptance oracle for answers.

    kind: "unique" (exactly one canonical value), "enumerated" (the complete
    set, verified by exhaustive search), or "predicate" (valid-answer set too
    large to enumerate but polynomial to check; predicate_spec carries the
    task-tagged validity/optimality description).
    """

    kind: str
    values: list = field(default_factory=list)
    predicate_spec: Optional[dict] = None

    def __post_init__(self):
        if self.kind not in ("unique", "enumerated", "predicate"):
            raise ValueError(f"bad solution kind {self.kind!r}")
        if self.kind == "unique" and len(self.values) != 1:
            raise ValueError("unique solution set must hold exactly one value")

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.values:
            d["values"] = self.values
        if self.predicate_spec is not None:
            d["predicate_spec"] = self.predicate_spec
        return d


@dataclass
class ProblemInstance:
    task: TaskId
    seed: SeedSpec
    params: dict
    payload: dict
    prompt_text: str
    solutions: SolutionSet
    estimated_tokens: int = 0


@dataclass
class TaskDef:
    suite: str
    family: str
    n_variations: int
    # generate(task, seed, params_override) -> ProblemInstance
    generate: Callable[[TaskId, SeedSpec, Optional[dict]], ProblemInstance]
    # verify(instance, parsed_answer) -> bool
    verify: Callable[[ProblemInstance, Any], bool]
    # render the ground-truth answer in the required response format
    render_oracle: Callable[[ProblemInstance], str]
    # parsing format kind per variation
    format_kind: Callable[[int], str]


_REGISTRY: dict[tuple[str, str], TaskDef] = {}
_LOADED = False


def register(taskdef: TaskDef) -> None:
    _REGISTRY[(taskdef.suite, taskdef.family)] = taskdef


def ensure_registered() -> None:
    """Import the suite modules so their registration side effects run."""
    global _LOADED
    if _LOADED:
        return
    from . import easy, medium, hard_csp, hard_opt  # noqa: F401

    _LOADED = True


def registry_lookup(task: TaskId) -> TaskDef:
    ensure_registered()
    td = _REGISTRY.get((task.suite, task.family))
    if td is None:
        raise UnknownTask(f"unregistered task {task.suite}/{task.family}")
    if not (0 <= task.variation < td.n_variations):
        raise UnknownTask(
            f"{task.suite}/{task.family} has {td.n_variations} variations; "
            f"got variation {task.variation}"
        )
    return td


def all_tasks() -> list[TaskDef]:
    ensure_registered()
    order = {s: i for i, s in enumerate(SUITES)}
    return sorted(_REGISTRY.values(), key=lambda t: (order[t.suite], t.family))


def tasks_in_suite(suite: str) -> list[TaskDef]:
    return [t for t in all_tasks() if t.suite == suite]


def generate_instance(
    task: TaskId, seed: SeedSpec, params_override: Optional[dict] = None
) -> ProblemInstance:
    """Generate one instance; pure function of (task, seed, params_override)."""
    td = registry_lookup(task)
    return td.generate(task, seed, params_override)


# ---------------------------------------------------------------------------
# Verdicts and metric aggregation
# ---------------------------------------------------------------------------


@dataclass
class Verdict:
    instance_id: str
    task: TaskId
    correct: bool
    instruction_followed: bool
    parse_status: str  # "parsed" | "invalid"
    token_status: str  # "valid" | "warning" | "overflow"
    counted_tokens: int = 0
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.instance_id,
            "task": self.task.to_dict(),
            "correct": self.correct,
            "instruction_followed": self.instruction_followed,
            "parse_status": self.parse_status,
            "token_status": self.token_status,
            "counted_tokens": self.counted_tokens,
            "note": self.note,
        }


@dataclass
class TaskMetrics:
    correct_count: int = 0
    invalid_count: int = 0
    instruction_followed_count: int = 0
    total: int = 0
    token_sum: int = 0
    warning_count: int = 0

    @property
    def accuracy(self) -> float:
        return self.correct_count / self.total if self.total else 0.0

    @property
    def instruction_rate(self) -> float:
        return self.instruction_followed_count / self.total if self.total else 0.0

    @property
    def mean_tokens(self) -> float:
        return self.token_sum / self.total if self.total else 0.0

    def merge(self, other: "TaskMetrics") -> None:
        self.correct_count += other.correct_count
        self.invalid_count += other.invalid_count
        self.instruction_followed_count += other.instruction_followed_count
        self.total += other.total
        self.token_sum += other.token_sum
        self.warning_count += other.warning_count


@dataclass
class RunMetrics:
    per_task: dict = field(default_factory=dict)  # (suite, family) -> TaskMetrics

    def add(self, verdict: Verdict) -> None:
        key = (verdict.task.suite, verdict.task.family)
        tm = self.per_task.setdefault(key, TaskMetrics())
        tm.total += 1
        if verdict.correct:
            tm.correct_count += 1
        if verdict.instruction_followed:
            tm.instruction_followed_count += 1
        if verdict.parse_status != "parsed":
            tm.invalid_count += 1
        if verdict.token_status in ("warning", "overflow"):
            tm.warning_count += 1
        tm.token_sum += verdict.counted_tokens

    def suite_summary(self, suite: str) -> dict:
        """Unweighted arithmetic mean over the suite's task families."""
        tasks = [m for (s, _), m in sorted(self.per_task.items()) if s == suite]
        if not tasks:
            return {"accuracy": 0.0, "instruction_rate": 0.0, "mean_tokens": 0.0, "families": 0}
        return {
            "accuracy": sum(t.accuracy for t in tasks) / len(tasks),
            "instruction_rate": sum(t.instruction_rate for t in tasks) / len(tasks),
            "mean_tokens": sum(t.mean_tokens for t in tasks) / len(tasks),
            "families": len(tasks),
        }


def aggregate(verdicts: Iterable[Verdict]) -> RunMetrics:
    metrics = RunMetrics()
    for v in verdicts:
        metrics.add(v)
    return metrics

"""
Command-line harness: generate problem files, verify response files,
report metrics, and run a model command end to end.

Subcommands: generate, verify, report, run, estimate-tokens,
collision-prob, oracle.  All interchange is JSONL (one JSON object per
line).  Exit codes: 0 success, 1 usage error, 2 data error, 3 budget
infeasible.
"""

from __future__ import annotations

import argparse
import json
import os
import shlex
import subprocess
import sys
from typing import Optional, TextIO

from . import contamination, oracle as oracle_mod, parsing, tokens
from .core import (
    GenerationExhausted,
    SeedSpec,
    TaskId,
    UnknownTask,
    Verdict,
    aggregate,
    all_tasks,
    generate_instance,
    registry_lookup,
)
from .tokens import BudgetInfeasible, TokenBudget

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INFEASIBLE = 3


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; the harness uses 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


# ---------------------------------------------------------------------------
# Config file: "key = value" lines; '#' comments
# ---------------------------------------------------------------------------


def load_config(path: str) -> dict:
    config: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            config[key.strip()] = value.strip()
    return config


def apply_config(config: dict) -> dict:
    """Apply estimator-coefficient overrides; returns the remaining settings."""
    rest = {}
    for key, value in config.items():
        if key.startswith("coeff."):
            _, family, coeff = key.split(".", 2)
            tokens.set_coefficients(family, **{coeff: float(value)})
        else:
            rest[key] = value
    return rest


# ---------------------------------------------------------------------------
# Task filtering and record schemas
# ---------------------------------------------------------------------------


def resolve_tasks(
    suite: Optional[str], family: Optional[str], variation: Optional[int]
) -> list[TaskId]:
    defs = all_tasks()
    if suite:
        defs = [d for d in defs if d.suite == suite]
    if family:
        wanted = {f.strip() for f in family.split(",")}
        defs = [d for d in defs if d.family in wanted]
    out = []
    for d in defs:
        variations = [variation] if variation is not None else range(d.n_variations)
        for v in variations:
            if not 0 <= v < d.n_variations:
                raise UnknownTask(
                    f"{d.suite}/{d.family} has {d.n_variations} variations; got {v}"
                )
            out.append(TaskId(d.suite, d.family, v))
    return out


def instance_id(task: TaskId, index: int) -> str:
    return f"{task.key()}#{index}"


def problem_record(
    instance, index: int, hide_solutions: bool, params_override: Optional[dict]
) -> dict:
    record = {
        "id": instance_id(instance.task, index),
        "task": instance.task.to_dict(),
        "seed": {
            "master": instance.seed.master_seed,
            "index": instance.seed.instance_index,
        },
        "params": instance.params,
        "prompt": instance.prompt_text,
        "estimated_tokens": instance.estimated_tokens,
    }
    if params_override:
        record["params_override"] = params_override
    if not hide_solutions:
        record["solutions"] = instance.solutions.to_dict()
    return record


def _read_jsonl(path: str, errors: list[str]) -> list[dict]:
    records = []
    stream = sys.stdin if path == "-" else open(path, encoding="utf-8")
    try:
        for lineno, raw in enumerate(stream, 1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                errors.append(f"{path}:{lineno}: bad JSON ({exc})")
                continue
            if not isinstance(obj, dict):
                errors.append(f"{path}:{lineno}: expected a JSON object")
                continue
            obj["_line"] = lineno
            records.append(obj)
    finally:
        if stream is not sys.stdin:
            stream.close()
    return records


def _open_out(path: Optional[str]) -> TextIO:
    if not path or path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8")


def _budget_from_args(args) -> Optional[TokenBudget]:
    if getattr(args, "context_size", None) is None:
        return None
    return TokenBudget(
        context_size=args.context_size,
        profile=getattr(args, "profile", "standard") or "standard",
    )


def _scaled_override(task: TaskId, budget: Optional[TokenBudget]) -> Optional[dict]:
    if budget is None:
        return None
    base = {"size_n": tokens.default_size(task)}
    scaled = tokens.scale_to_budget(task, base, budget)
    return scaled if scaled != base else scaled


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------


def cmd_generate(args) -> int:
    try:
        task_list = resolve_tasks(args.suite, args.family, args.variation)
    except UnknownTask as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if not task_list:
        print("error: task filter matched nothing", file=sys.stderr)
        return EXIT_USAGE
    budget = _budget_from_args(args)
    out = _open_out(args.out)
    infeasible = 0
    skipped = 0
    try:
        for task in task_list:
            try:
                override = _scaled_override(task, budget)
            except BudgetInfeasible as exc:
                print(f"skip (budget): {exc}", file=sys.stderr)
                infeasible += 1
                continue
            for index in range(args.count):
                seed = SeedSpec(master_seed=args.seed, instance_index=index)
                try:
                    instance = generate_instance(task, seed, override)
                except GenerationExhausted as exc:
                    print(f"skip (exhausted): {exc}", file=sys.stderr)
                    skipped += 1
                    continue
                record = problem_record(
                    instance, index, args.hide_solutions, override
                )
                out.write(json.dumps(record) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    if infeasible == len(task_list):
        return EXIT_INFEASIBLE
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _verdict_for(
    problem: dict,
    response: Optional[dict],
    tokenizer: tokens.Tokenizer,
    budget: TokenBudget,
) -> Verdict:
    task = TaskId.from_dict(problem["task"])
    seed = SeedSpec(
        master_seed=int(problem["seed"]["master"]),
        instance_index=int(problem["seed"]["index"]),
    )
    # Always regenerate: verdicts are identical with or without embedded
    # solutions, which is what makes --hide-solutions blind mode safe.
    instance = generate_instance(task, seed, problem.get("params_override"))
    if response is None:
        return Verdict(
            instance_id=problem["id"],
            task=task,
            correct=False,
            instruction_followed=False,
            parse_status="invalid",
            token_status="valid",
            counted_tokens=0,
            note="missing response",
        )
    text = response.get("text", "")
    counted = response.get("reported_tokens")
    if counted is None:
        counted = tokenizer.count(text if isinstance(text, str) else "")
    if isinstance(text, str) and instance.prompt_text and instance.prompt_text in text:
        # Echo-stripping: prompts contain answer-format examples, so a
        # response that quotes the prompt verbatim is scored only on the
        # text following the (last) echo.  Token counting above still covers
        # the full response.
        text = text[text.rfind(instance.prompt_text) + len(instance.prompt_text):]
    token_status = tokens.classify_tokens(int(counted), budget)
    parsed = parsing.parse_response(text, task)
    correct = False
    if parsed.status == "parsed":
        correct = bool(registry_lookup(task).verify(instance, parsed.value))
    return Verdict(
        instance_id=problem["id"],
        task=task,
        correct=correct,
        instruction_followed=parsed.instruction_followed,
        parse_status=parsed.status,
        token_status=token_status,
        counted_tokens=int(counted),
        note=response.get("note", ""),
    )


def cmd_verify(args) -> int:
    errors: list[str] = []
    problems = _read_jsonl(args.problems, errors)
    responses = _read_jsonl(args.responses, errors)
    tokenizer = tokens.get_tokenizer(args.tokenizer)
    budget = TokenBudget(context_size=args.context_size, profile=args.profile)

    by_id: dict[str, dict] = {}
    for resp in responses:
        rid = resp.get("id")
        if rid is None:
            errors.append(f"{args.responses}:{resp['_line']}: response missing id")
            continue
        if rid in by_id:
            print(
                f"note: duplicate response for {rid} at line {resp['_line']} "
                "ignored (first response wins)",
                file=sys.stderr,
            )
            continue
        by_id[rid] = resp

    problem_ids = set()
    out = _open_out(args.out)
    try:
        for problem in problems:
            pid = problem.get("id")
            if pid is None or "task" not in problem or "seed" not in problem:
                errors.append(
                    f"{args.problems}:{problem['_line']}: missing id/task/seed"
                )
                continue
            problem_ids.add(pid)
            try:
                verdict = _verdict_for(problem, by_id.get(pid), tokenizer, budget)
            except (UnknownTask, KeyError, ValueError, TypeError) as exc:
                errors.append(f"{args.problems}:{problem['_line']}: {exc}")
                continue
            out.write(json.dumps(verdict.to_dict()) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()

    for rid in by_id:
        if rid not in problem_ids:
            print(f"note: response id {rid} matches no problem", file=sys.stderr)
    for err in errors:
        print(f"error: {err}", file=sys.stderr)
    return EXIT_DATA if errors else EXIT_OK


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


def _verdicts_from_records(records: list[dict]) -> list[Verdict]:
    out = []
    for rec in records:
        out.append(
            Verdict(
                instance_id=rec["id"],
                task=TaskId.from_dict(rec["task"]),
                correct=bool(rec["correct"]),
                instruction_followed=bool(rec["instruction_followed"]),
                parse_status=rec.get("parse_status", "parsed"),
                token_status=rec.get("token_status", "valid"),
                counted_tokens=int(rec.get("counted_tokens", 0)),
            )
        )
    return out


def render_report(metrics) -> str:
    lines = []
    header = f"{'Task':<38} {'Acc (%)':>8} {'Inst (%)':>9} {'Tokens (Avg)':>13}"
    lines.append(header)
    lines.append("-" * len(header))
    suites_seen = []
    for (suite, family), tm in sorted(metrics.per_task.items()):
        if suite not in suites_seen:
            suites_seen.append(suite)
        lines.append(
            f"{suite + '/' + family:<38} {100 * tm.accuracy:>8.2f} "
            f"{100 * tm.instruction_rate:>9.2f} {tm.mean_tokens:>13.1f}"
        )
    lines.append("-" * len(header))
    for suite in suites_seen:
        s = metrics.suite_summary(suite)
        lines.append(
            f"{suite + ' (mean over families)':<38} {100 * s['accuracy']:>8.2f} "
            f"{100 * s['instruction_rate']:>9.2f} {s['mean_tokens']:>13.1f}"
        )
    return "\n".join(lines)


def report_json(metrics) -> dict:
    per_task = {
        f"{suite}/{family}": {
            "accuracy": tm.accuracy,
            "instruction_rate": tm.instruction_rate,
            "mean_tokens": tm.mean_tokens,
            "total": tm.total,
            "invalid": tm.invalid_count,
            "warnings": tm.warning_count,
        }
        for (suite, family), tm in sorted(metrics.per_task.items())
    }
    suites = sorted({s for s, _ in metrics.per_task})
    return {
        "per_task": per_task,
        "per_suite": {s: metrics.suite_summary(s) for s in suites},
    }


def cmd_report(args) -> int:
    errors: list[str] = []
    records = _read_jsonl(args.verdicts, errors)
    try:
        verdicts = _verdicts_from_records(records)
    except (KeyError, ValueError, TypeError) as exc:
        print(f"error: bad verdict record: {exc}", file=sys.stderr)
        return EXIT_DATA
    metrics = aggregate(verdicts)
    if args.json:
        print(json.dumps(report_json(metrics), indent=2))
    else:
        print(render_report(metrics))
    for err in errors:
        print(f"error: {err}", file=sys.stderr)
    return EXIT_DATA if errors else EXIT_OK


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


def cmd_run(args) -> int:
    try:
        task_list = resolve_tasks(args.suite, args.family, args.variation)
    except UnknownTask as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if not task_list:
        print("error: task filter matched nothing", file=sys.stderr)
        return EXIT_USAGE
    model_argv = shlex.split(args.model)
    tokenizer = tokens.get_tokenizer(args.tokenizer)
    budget = TokenBudget(context_size=args.context_size, profile=args.profile)
    scale_budget = _budget_from_args(args) if args.scale else None

    verdicts = []
    out = _open_out(args.out) if args.out else None
    try:
        for task in task_list:
            try:
                override = _scaled_override(task, scale_budget)
            except BudgetInfeasible as exc:
                print(f"skip (budget): {exc}", file=sys.stderr)
                continue
            for index in range(args.count):
                seed = SeedSpec(master_seed=args.seed, instance_index=index)
                try:
                    instance = generate_instance(task, seed, override)
                except GenerationExhausted as exc:
                    print(f"skip (exhausted): {exc}", file=sys.stderr)
                    continue
                record = problem_record(instance, index, True, override)
                env = dict(os.environ)
                env[oracle_mod.RECORD_ENV] = json.dumps(
                    {
                        "task": record["task"],
                        "seed": record["seed"],
                        "params_override": override,
                    }
                )
                response: Optional[dict]
                try:
                    proc = subprocess.run(
                        model_argv,
                        input=instance.prompt_text,
                        capture_output=True,
                        text=True,
                        env=env,
                        timeout=args.timeout,
                    )
                    if proc.returncode != 0:
                        response = {
                            "id": record["id"],
                            "text": "",
                            "note": f"model exited {proc.returncode}",
                        }
                    else:
                        response = {"id": record["id"], "text": proc.stdout}
                except (OSError, subprocess.SubprocessError) as exc:
                    response = {
                        "id": record["id"],
                        "text": "",
                        "note": f"model command failed: {exc}",
                    }
                verdict = _verdict_for(record, response, tokenizer, budget)
                verdicts.append(verdict)
                if out is not None:
                    out.write(json.dumps(verdict.to_dict()) + "\n")
    finally:
        if out is not None and out is not sys.stdout:
            out.close()
    metrics = aggregate(verdicts)
    if args.json:
        print(json.dumps(report_json(metrics), indent=2))
    else:
        print(render_report(metrics))
    return EXIT_OK


# ---------------------------------------------------------------------------
# estimate-tokens / collision-prob / oracle
# ---------------------------------------------------------------------------


def cmd_estimate_tokens(args) -> int:
    try:
        task_list = resolve_tasks(args.suite, args.family, args.variation)
    except UnknownTask as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if not task_list:
        print("error: task filter matched nothing", file=sys.stderr)
        return EXIT_USAGE
    for task in task_list:
        size = args.size if args.size is not None else tokens.default_size(task)
        est = tokens.estimate_tokens(task, {"size_n": size})
        print(f"{task.key()}\tsize_n={size}\testimated_tokens={est}")
    return EXIT_OK


def cmd_collision_prob(args) -> int:
    if args.q is not None:
        q = args.q
    elif args.eval_size is not None and args.universe_size is not None:
        q = contamination.uniform_q(args.eval_size, args.universe_size)
    else:
        print(
            "error: provide --q, or both --eval-size and --universe-size",
            file=sys.stderr,
        )
        return EXIT_USAGE
    try:
        if args.approx:
            p = contamination.collision_prob_approx(q, args.draws)
        else:
            p = contamination.collision_prob_exact(q, args.draws)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    print(f"{p:.12g}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _add_task_filter(p: argparse.ArgumentParser) -> None:
    p.add_argument("--suite", choices=("easy", "medium", "hard"))
    p.add_argument("--family", help="comma-separated family names")
    p.add_argument("--variation", type=int)


def _add_budget_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--context-size", type=int, default=None,
                   help="token budget; enables size scaling when set")
    p.add_argument("--profile", default="standard",
                   choices=("standard", "conservative"))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="algobench")
    parser.add_argument("--config", help="key = value config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a problems JSONL file")
    _add_task_filter(p)
    _add_budget_opts(p)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--hide-solutions", action="store_true")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="score a responses file against problems")
    p.add_argument("--problems", required=True)
    p.add_argument("--responses", required=True)
    p.add_argument("--out", default="-")
    p.add_argument("--tokenizer", default="heuristic-v1")
    p.add_argument("--context-size", type=int, default=8192)
    p.add_argument("--profile", default="standard",
                   choices=("standard", "conservative"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="print a metrics table from verdicts")
    p.add_argument("--verdicts", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("run", help="generate, invoke a model command, verify")
    _add_task_filter(p)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--model", required=True,
                   help="command reading the prompt on stdin, writing the "
                        "response to stdout")
    p.add_argument("--timeout", type=float, default=120.0)
    p.add_argument("--tokenizer", default="heuristic-v1")
    p.add_argument("--context-size", type=int, default=8192)
    p.add_argument("--profile", default="standard",
                   choices=("standard", "conservative"))
    p.add_argument("--scale", action="store_true",
                   help="scale instance sizes to the context budget")
    p.add_argument("--out", help="also write verdicts JSONL here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("estimate-tokens", help="print token estimates per task")
    _add_task_filter(p)
    p.add_argument("--size", type=int, default=None)
    p.set_defaults(func=cmd_estimate_tokens)

    p = sub.add_parser("collision-prob",
                       help="contamination collision probability")
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--eval-size", type=int, default=None)
    p.add_argument("--universe-size", type=int, default=None)
    p.add_argument("--draws", type=int, required=True)
    p.add_argument("--approx", action="store_true")
    p.set_defaults(func=cmd_collision_prob)

    p = sub.add_parser("oracle",
                       help="bundled oracle answerer (reads ALGOBENCH_RECORD)")
    p.set_defaults(func=lambda args: oracle_mod.main())

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.config:
        try:
            apply_config(load_config(args.config))
        except (OSError, ValueError) as exc:
            print(f"error: config: {exc}", file=sys.stderr)
            return EXIT_DATA
    try:
        return args.func(args)
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

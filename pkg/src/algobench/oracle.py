"""
The bundled oracle answerer.

Used as the model command in closed-loop runs: the harness exports the
problem record (task, seed, params override) in the ALGOBENCH_RECORD
environment variable, pipes the prompt on standard input, and reads the
rendered ground-truth answer from standard output.  It doubles as the
reference for each task's required answer format.
"""

from __future__ import annotations

import json
import os
import sys

from .core import SeedSpec, TaskId, generate_instance, registry_lookup

RECORD_ENV = "ALGOBENCH_RECORD"


def oracle_answer(record: dict) -> str:
    """Regenerate the instance named by `record` and render its answer."""
    task = TaskId.from_dict(record["task"])
    seed = SeedSpec(
        master_seed=int(record["seed"]["master"]),
        instance_index=int(record["seed"]["index"]),
    )
    instance = generate_instance(task, seed, record.get("params_override"))
    return registry_lookup(task).render_oracle(instance)


def main() -> int:
    raw = os.environ.get(RECORD_ENV)
    if not raw:
        print(f"{RECORD_ENV} environment variable not set", file=sys.stderr)
        return 2
    try:
        record = json.loads(raw)
    except json.JSONDecodeError as exc:
        print(f"bad {RECORD_ENV} payload: {exc}", file=sys.stderr)
        return 2
    sys.stdin.read()  # consume the prompt like a real model command
    print(oracle_answer(record))
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Generate-verify-critique harness bindings.

Instances travel as text (space-separated numbers, DIMACS, PDDL) and
results come back as plain dicts or JSON strings; see the function
docstrings on the native module.
"""

from ._itercheck import (
    blocksworld_domain,
    chromatic_number,
    classify_coloring_critique,
    constructive_plan,
    game24_canonical,
    generate_coloring_instances,
    is_planar,
    metrics_from_jsonl,
    mystery_obfuscate,
    random_blocksworld,
    run_scripted,
    run_suite,
    schema_version,
    score_plan_critique,
    solve_coloring,
    solve_game24,
    verify_coloring,
    verify_game24,
    verify_plan,
)

__all__ = [
    "blocksworld_domain",
    "chromatic_number",
    "classify_coloring_critique",
    "constructive_plan",
    "game24_canonical",
    "generate_coloring_instances",
    "is_planar",
    "metrics_from_jsonl",
    "mystery_obfuscate",
    "random_blocksworld",
    "run_scripted",
    "run_suite",
    "schema_version",
    "score_plan_critique",
    "solve_coloring",
    "solve_game24",
    "verify_coloring",
    "verify_game24",
    "verify_plan",
]

import json

import itercheck as ic

PATH3 = "c chromatic number 2\np edge 3 2\ne 1 2\ne 2 3\n"


def test_game24_verify_and_solve():
    good = ic.verify_game24([1, 1, 4, 6], "6*4*1*1")
    assert good["accepted"] and good["source"] == "sound"

    bad = ic.verify_game24([1, 1, 4, 6], "(1+1)*4*6")
    assert not bad["accepted"]
    assert "48 not 24" in bad["critique"]["rendered"]

    assert ic.solve_game24([1, 1, 1, 1]) is None
    expr = ic.solve_game24([3, 3, 8, 8])
    assert ic.verify_game24([3, 3, 8, 8], expr)["accepted"]

    assert ic.game24_canonical(" 6 * 4 * 1 * 1 = 24") == ic.game24_canonical("6*4*1*1")
    assert ic.game24_canonical("gibberish") is None


def test_coloring_roundtrip():
    assert ic.chromatic_number(PATH3) == 2
    assert ic.is_planar(PATH3)

    solution = ic.solve_coloring(PATH3)
    assert ic.verify_coloring(PATH3, solution)["accepted"]

    rejected = ic.verify_coloring(PATH3, "0: red\n1: red\n2: blue")
    assert not rejected["accepted"]
    assert rejected["critique"]["items"]

    instances = ic.generate_coloring_instances(3, seed=7)
    assert len(instances) == 3 and len(set(instances)) == 3
    assert instances == ic.generate_coloring_instances(3, seed=7)
    for dimacs in instances:
        assert ic.is_planar(dimacs)
        assert ic.chromatic_number(dimacs) <= 4


def test_coloring_critique_classification():
    result = ic.classify_coloring_critique(
        PATH3, "0: red\n1: red\n2: blue", "Vertices 0 and 1 were both colored red."
    )
    assert result["label"] == "none" and not result["parse_failure"]

    hallucinated = ic.classify_coloring_critique(
        PATH3, "0: red\n1: red\n2: blue", "Vertices 0 and 2 share an edge."
    )
    assert hallucinated["label"] == "edge"


def test_strips_plan_verification():
    problem = ic.random_blocksworld(4, seed=11)
    plan = ic.constructive_plan(problem)
    assert ic.verify_plan(problem, plan)["accepted"]

    truncated = "\n".join(plan.splitlines()[:-1])
    if truncated:
        verdict = ic.verify_plan(problem, truncated)
        assert not verdict["accepted"]

    obfuscated = ic.mystery_obfuscate(problem)
    assert "craves" in obfuscated["problem"]
    assert "pickup" not in obfuscated["domain"]


def test_strips_critique_scoring():
    problem = ic.random_blocksworld(3, seed=5)
    plan = ic.constructive_plan(problem)
    score = ic.score_plan_critique(problem, plan, "Verdict: valid")
    assert score["binary_ok"] and not score["parse_failure"]
    garbage = ic.score_plan_critique(problem, plan, "no verdict here")
    assert garbage["parse_failure"]


def test_scripted_loop_and_metrics():
    transcript = json.loads(
        ic.run_scripted(
            "game24",
            "1 1 4 6",
            ["(1+1)*4*6", "6+4+1+1", "6*4*1*1"],
            strategy="sound_critique",
        )
    )
    assert transcript["schema_version"] == ic.schema_version()
    assert len(transcript["rounds"]) == 3
    assert transcript["stop_reason"] == "verifier_accepted"
    assert transcript["ground_truth_correct"] is True
    # The critique for the previous wrong answer feeds the next prompt.
    assert "48 not 24" in transcript["rounds"][1]["prompt"]

    jsonl = json.dumps(transcript, separators=(",", ":"))
    reports = ic.metrics_from_jsonl(jsonl + "\n", budget=15)
    assert "accuracy" in reports["report_csv"]
    assert "100.0% (1/1)" in reports["report_csv"]
    assert reports["curve_csv"].startswith("round,value")


def test_scripted_llm_verifier_false_rejection():
    transcript = json.loads(
        ic.run_scripted(
            "game24",
            "1 1 4 6",
            ["6*4*1*1", "Verdict: incorrect", "(1+1)*4*6", "Verdict: correct"],
            strategy="self_critique",
            llm_verifier=True,
        )
    )
    assert transcript["stop_reason"] == "verifier_accepted"
    # Accepted answer is actually wrong: a false positive.
    assert transcript["ground_truth_correct"] is False
    assert transcript["rounds"][0]["verdict"]["source"] == "llm"

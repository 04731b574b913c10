#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <fstream>
#include <sstream>

#include "itercheck/strips/blocksworld.hpp"
#include "itercheck/strips/pddl.hpp"
#include "itercheck/strips/simulate.hpp"

using namespace itercheck;
using namespace itercheck::strips;

namespace {

ProblemDef small_problem() {
    return parse_problem(
        "(define (problem two-towers)\n"
        "  (:domain blocksworld)\n"
        "  (:objects a b c)\n"
        "  (:init (clear a) (clear c) (on a b) (ontable b) (ontable c) (handempty))\n"
        "  (:goal (and (on a b) (on b c))))\n",
        blocksworld_domain());
}

}  // namespace

TEST_CASE("domain parsing validates structure") {
    const DomainDef& d = blocksworld_domain();
    CHECK(d.name == "blocksworld");
    CHECK(d.actions.size() == 4);
    CHECK(d.predicate_arity("on") == 2);
    CHECK(d.predicate_arity("handempty") == 0);
    REQUIRE(d.find_action("unstack") != nullptr);
    CHECK(d.find_action("unstack")->parameters.size() == 2);
    CHECK(d.find_action("teleport") == nullptr);
}

TEST_CASE("parser rejects typed domains and bad arities with positions") {
    CHECK_THROWS_AS(parse_domain("(define (domain t) (:requirements :typing))"), ParseError);
    CHECK_THROWS_AS(
        parse_domain("(define (domain t) (:predicates (p ?x))\n"
                     "  (:action a :parameters (?x) :precondition (and (p ?x ?x))\n"
                     "   :effect (and (p ?x))))"),
        ParseError);
    try {
        parse_domain("(define (domain t)\n  (:junk))");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("domain and problem rendering round-trips through the parser") {
    DomainDef d = parse_domain(render_domain(blocksworld_domain()));
    CHECK(d.actions.size() == 4);
    ProblemDef p = small_problem();
    ProblemDef q = parse_problem(render_problem(p, d), d);
    CHECK(q.init == p.init);
    CHECK(q.goal == p.goal);
    CHECK(q.objects == p.objects);
}

TEST_CASE("plan parsing is lenient about step numbers and commas") {
    const DomainDef& d = blocksworld_domain();
    ProblemDef p = small_problem();
    Plan a = parse_plan("(unstack a b)\n(putdown a)", d, p);
    Plan b = parse_plan("1. unstack a b\n2. putdown a", d, p);
    Plan c = parse_plan("unstack(a, b)\nputdown(a)", d, p);
    CHECK(a.steps == b.steps);
    CHECK(a.steps == c.steps);
    CHECK_THROWS(parse_plan("(unstack a)", d, p));     // arity
    CHECK_THROWS(parse_plan("(unstack a z)", d, p));   // unknown object
    CHECK_THROWS(parse_plan("(levitate a b)", d, p));  // unknown action
}

TEST_CASE("extract_plan_text takes the longest trailing action block") {
    const DomainDef& d = blocksworld_domain();
    ProblemDef p = small_problem();
    auto text = extract_plan_text(
        "Here is my plan:\n\n(unstack a b)\n(putdown a)\n(pickup b)\n(stack b c)\n", d, p);
    REQUIRE(text.has_value());
    CHECK(parse_plan(*text, d, p).steps.size() == 4);
    CHECK_FALSE(extract_plan_text("I give up, sorry.", d, p).has_value());
}

TEST_CASE("simulate validates a correct plan") {
    const DomainDef& d = blocksworld_domain();
    ProblemDef p = small_problem();
    Plan plan = parse_plan("(unstack a b)\n(putdown a)\n(pickup b)\n(stack b c)\n"
                           "(pickup a)\n(stack a b)",
                           d, p);
    SimResult r = simulate(d, p, plan);
    CHECK(r.valid());
    for (const Atom& g : p.goal) CHECK(r.final_state.count(g) == 1);
}

TEST_CASE("simulate halts at the first unmet precondition and renders the paper sentence") {
    const DomainDef& d = blocksworld_domain();
    ProblemDef p = small_problem();
    // pickup b is invalid while a is on b.
    Plan plan = parse_plan("(pickup b)\n(stack b c)", d, p);
    SimResult r = simulate(d, p, plan);
    REQUIRE(r.faults.size() == 1);
    const PlanFault& f = r.faults[0];
    CHECK(f.kind == PlanFault::Kind::UnmetPrecondition);
    CHECK(f.step_index == 1);
    CHECK(f.str() ==
          "The 1st action (pickup b) is invalid because the following preconditions are "
          "not met: (clear b).");
}

TEST_CASE("skip policy collects every precondition fault") {
    const DomainDef& d = blocksworld_domain();
    ProblemDef p = small_problem();
    Plan plan = parse_plan("(pickup b)\n(pickup c)\n(putdown c)", d, p);
    SimResult r = simulate(d, p, plan, FaultPolicy::SkipInvalidStep);
    // pickup b fails (not clear); pickup c and putdown c succeed; the goal
    // (on b c) is then still unmet, so a goal fault follows the step fault.
    REQUIRE(r.faults.size() == 2);
    CHECK(r.faults[0].kind == PlanFault::Kind::UnmetPrecondition);
    CHECK(r.faults[0].step_index == 1);
    CHECK(r.faults[1].kind == PlanFault::Kind::UnmetGoals);
}

TEST_CASE("executable but non-goal-reaching plans yield exactly an UnmetGoals fault") {
    const DomainDef& d = blocksworld_domain();
    ProblemDef p = small_problem();
    Plan plan = parse_plan("(unstack a b)\n(putdown a)", d, p);
    SimResult r = simulate(d, p, plan);
    REQUIRE(r.faults.size() == 1);
    CHECK(r.faults[0].kind == PlanFault::Kind::UnmetGoals);
    CHECK(r.faults[0].step_index == 0);
    CHECK(r.faults[0].atoms.size() == 2);  // both goal atoms now unmet
}

TEST_CASE("verify_plan maps feedback levels onto fault policies") {
    const DomainDef& d = blocksworld_domain();
    ProblemDef p = small_problem();
    std::string good = "(unstack a b)\n(putdown a)\n(pickup b)\n(stack b c)\n"
                       "(pickup a)\n(stack a b)";
    CHECK(verify_plan(d, p, good, FeedbackLevel::Binary).accepted);

    Verdict bad = verify_plan(d, p, "(pickup b)", FeedbackLevel::FirstError);
    REQUIRE_FALSE(bad.accepted);
    CHECK(bad.critique->items.size() == 1);

    Verdict binary = verify_plan(d, p, "(pickup b)", FeedbackLevel::Binary);
    REQUIRE_FALSE(binary.accepted);
    CHECK(binary.critique->items.empty());

    Verdict unparseable = verify_plan(d, p, "no plan here", FeedbackLevel::FirstError);
    CHECK_FALSE(unparseable.accepted);
}

TEST_CASE("random blocksworld problems are well-formed and solvable constructively") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        int blocks = 3 + static_cast<int>(rng() % 6);
        ProblemDef p = random_blocksworld_problem(blocks, rng);
        CHECK(static_cast<int>(p.objects.size()) == blocks);
        CHECK_FALSE(p.goal.empty());
        // The goal must not already hold in the initial state.
        bool satisfied = true;
        for (const Atom& g : p.goal)
            if (!p.init.count(g)) satisfied = false;
        CHECK_FALSE(satisfied);

        Plan plan = constructive_plan(p);
        CHECK(simulate(blocksworld_domain(), p, plan).valid());
    }
}

TEST_CASE("plan suite members have the documented fault shapes") {
    std::mt19937_64 rng(23);
    const DomainDef& d = blocksworld_domain();
    for (int trial = 0; trial < 20; ++trial) {
        ProblemDef p = random_blocksworld_problem(4 + static_cast<int>(rng() % 3), rng);
        PlanSuite suite = generate_plan_suite(d, p, rng);

        CHECK(simulate(d, p, suite.correct).valid());

        SimResult inexec = simulate(d, p, suite.inexecutable);
        REQUIRE_FALSE(inexec.faults.empty());
        CHECK(inexec.faults[0].kind == PlanFault::Kind::UnmetPrecondition);
        CHECK(inexec.faults[0].step_index == suite.injected_step);

        SimResult non_goal = simulate(d, p, suite.non_goal_reaching);
        REQUIRE(non_goal.faults.size() == 1);
        CHECK(non_goal.faults[0].kind == PlanFault::Kind::UnmetGoals);
    }
}

TEST_CASE("mystery map is bijective and covering") {
    const DomainDef& d = blocksworld_domain();
    ObfuscationMap map = mystery_map();
    CHECK_NOTHROW(check_map(map, d));
    CHECK(map.actions.at("pickup") == "attack");
    CHECK(map.actions.at("putdown") == "succumb");
    CHECK(map.predicates.at("holding") == "pain");
    ObfuscationMap broken = map;
    broken.actions["stack"] = "attack";  // collides with pickup's alias
    CHECK_THROWS(check_map(broken, d));
}

TEST_CASE("obfuscation map json round-trips") {
    ObfuscationMap map = mystery_map();
    ObfuscationMap back = obfuscation_map_from_json(obfuscation_map_to_json(map));
    CHECK(back.predicates == map.predicates);
    CHECK(back.actions == map.actions);
}

TEST_CASE("the committed mystery map asset matches the builtin") {
    std::ifstream in(ITERCHECK_ASSETS_DIR "/obfuscation/mystery.json", std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    ObfuscationMap asset = obfuscation_map_from_json(ss.str());
    CHECK(asset.predicates == mystery_map().predicates);
    CHECK(asset.actions == mystery_map().actions);
}

TEST_CASE("fault structures commute with renaming") {
    std::mt19937_64 rng(31);
    const DomainDef& d = blocksworld_domain();
    ObfuscationMap map = mystery_map();
    for (int trial = 0; trial < 10; ++trial) {
        ProblemDef p = random_blocksworld_problem(4, rng);
        PlanSuite suite = generate_plan_suite(d, p, rng);
        auto [od, op] = obfuscate(d, p, map);

        for (const Plan* plan :
             {&suite.correct, &suite.inexecutable, &suite.non_goal_reaching, &suite.random}) {
            SimResult plain = simulate(d, p, *plan, FaultPolicy::SkipInvalidStep);
            SimResult mystery =
                simulate(od, op, rename_plan(*plan, map), FaultPolicy::SkipInvalidStep);
            REQUIRE(plain.faults.size() == mystery.faults.size());
            for (std::size_t i = 0; i < plain.faults.size(); ++i)
                CHECK(rename_fault(plain.faults[i], map) == mystery.faults[i]);
        }
    }
}

TEST_CASE("deobfuscate_plan inverts rename_plan") {
    std::mt19937_64 rng(37);
    ProblemDef p = random_blocksworld_problem(5, rng);
    Plan plan = constructive_plan(p);
    ObfuscationMap map = mystery_map();
    CHECK(deobfuscate_plan(rename_plan(plan, map), map).steps == plan.steps);
}

TEST_CASE("plan critique scorer checks verdict, fault type, and atoms") {
    const DomainDef& d = blocksworld_domain();
    ProblemDef p = small_problem();

    // Ground truth: (pickup b) fails with missing (clear b).
    SimResult sim = simulate(d, p, parse_plan("(pickup b)", d, p));

    PlanCritiqueScore exact = score_llm_plan_critique(
        sim.faults,
        "Verdict: invalid\nType: inexecutable\nFailed step: 1\nUnmet preconditions: (clear b)\n");
    CHECK(exact.binary_ok);
    CHECK(exact.type_ok);
    CHECK(exact.critique_ok);

    PlanCritiqueScore wrong_type = score_llm_plan_critique(
        sim.faults, "Verdict: invalid\nType: non-goal-reaching\nUnmet goals: (on b c)\n");
    CHECK(wrong_type.binary_ok);
    CHECK_FALSE(wrong_type.type_ok);

    PlanCritiqueScore wrong_verdict = score_llm_plan_critique(sim.faults, "Verdict: valid\n");
    CHECK_FALSE(wrong_verdict.binary_ok);

    // A valid plan judged valid.
    SimResult ok = simulate(d, p,
                            parse_plan("(unstack a b)\n(putdown a)\n(pickup b)\n(stack b c)\n"
                                       "(pickup a)\n(stack a b)",
                                       d, p));
    PlanCritiqueScore valid = score_llm_plan_critique(ok.faults, "Verdict: valid\n");
    CHECK(valid.binary_ok);
    CHECK(valid.type_ok);
    CHECK(valid.critique_ok);

    PlanCritiqueScore garbage = score_llm_plan_critique(sim.faults, "I have no idea.");
    CHECK(garbage.parse_failure);
}

TEST_CASE("plan critique scorer on non-goal-reaching ground truth") {
    const DomainDef& d = blocksworld_domain();
    ProblemDef p = small_problem();
    SimResult sim = simulate(d, p, parse_plan("(unstack a b)\n(putdown a)", d, p));

    PlanCritiqueScore exact = score_llm_plan_critique(
        sim.faults,
        "Verdict: invalid\nType: non-goal-reaching\nUnmet goals: (on a b) (on b c)\n");
    CHECK(exact.binary_ok);
    CHECK(exact.type_ok);
    CHECK(exact.critique_ok);

    PlanCritiqueScore partial = score_llm_plan_critique(
        sim.faults, "Verdict: invalid\nType: non-goal-reaching\nUnmet goals: (on a b)\n");
    CHECK(partial.binary_ok);
    CHECK(partial.type_ok);
    CHECK_FALSE(partial.critique_ok);
}

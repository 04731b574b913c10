#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "itercheck/game24/game24.hpp"

using namespace itercheck;
using namespace itercheck::game24;

namespace {

Rational eval_or_throw(const std::string& text) {
    auto parsed = parse_expression(text);
    REQUIRE(std::holds_alternative<ExprPtr>(parsed));
    auto value = evaluate_exact(std::get<ExprPtr>(parsed));
    REQUIRE(std::holds_alternative<Rational>(value));
    return std::get<Rational>(value);
}

}  // namespace

TEST_CASE("rational arithmetic is exact and in lowest terms") {
    CHECK(Rational(6, 8) == Rational(3, 4));
    CHECK(Rational(-6, 8) == Rational(-3, 4));
    CHECK(Rational(6, -8) == Rational(-3, 4));
    CHECK(Rational(0, 5) == Rational(0, 1));
    CHECK(Rational(3, 4).str() == "3/4");
    CHECK(Rational(8, 2).str() == "4");
}

TEST_CASE("parser handles precedence, associativity, and parentheses") {
    CHECK(eval_or_throw("2+3*4") == Rational(14, 1));
    CHECK(eval_or_throw("(2+3)*4") == Rational(20, 1));
    CHECK(eval_or_throw("8-4-2") == Rational(2, 1));
    CHECK(eval_or_throw("8/4/2") == Rational(1, 1));
    CHECK(eval_or_throw("8 / (1 - 2/3)") == Rational(24, 1));
    CHECK(eval_or_throw("((6))*((4))") == Rational(24, 1));
}

TEST_CASE("parser normalizes unicode operators and x") {
    CHECK(eval_or_throw("6×4") == Rational(24, 1));   // ×
    CHECK(eval_or_throw("48÷2") == Rational(24, 1));  // ÷
    CHECK(eval_or_throw("6x4") == Rational(24, 1));
    CHECK(eval_or_throw("6−4") == Rational(2, 1));  // −
}

TEST_CASE("parser rejects malformed input") {
    for (const char* bad : {"", "2+", "(2+3", "2+3)", "2 3", "a+b", "2**3", "+"}) {
        auto parsed = parse_expression(bad);
        CHECK_MESSAGE(std::holds_alternative<MalformedError>(parsed), bad);
    }
}

TEST_CASE("division by exact zero propagates") {
    auto parsed = parse_expression("4/(6-6)");
    REQUIRE(std::holds_alternative<ExprPtr>(parsed));
    CHECK(std::holds_alternative<DivByZero>(evaluate_exact(std::get<ExprPtr>(parsed))));
    // 1/3 * 3 is exactly 1 in rational arithmetic, not 0.999...
    CHECK(eval_or_throw("1/3*3") == Rational(1, 1));
}

TEST_CASE("extract_expression_text strips prose, labels, and value tails") {
    CHECK(extract_expression_text("The answer is:\n(1+1)*4*6") == "(1+1)*4*6");
    CHECK(extract_expression_text("(6-4)*(11+1) = 24") == "(6-4)*(11+1)");
    CHECK(extract_expression_text("Answer: 6*4*(2-1)") == "6*4*(2-1)");
    CHECK(extract_expression_text("I tried hard.\n6*4\nThanks for playing!") == "6*4");
    CHECK(extract_expression_text("no expression here at all") == std::nullopt);
}

TEST_CASE("verify_expression accepts exactly the correct solutions") {
    G24Instance inst{{1, 1, 4, 6}};
    CHECK(verify_expression(inst, "(1+1)*4*6").accepted == false);
    CHECK(verify_expression(inst, "6*4*1*1").accepted);
    CHECK(verify_expression(inst, "6*4*(1/1)").accepted);
    CHECK(verify_expression(inst, "the final line is\n6*4/(1*1)").accepted);
}

TEST_CASE("verify_expression fault priority: malformed > wrong numbers > wrong value") {
    G24Instance inst{{1, 1, 4, 6}};

    Verdict malformed = verify_expression(inst, "this is not math");
    REQUIRE_FALSE(malformed.accepted);
    REQUIRE(malformed.critique.has_value());

    // Wrong multiset even though the value is 24.
    Verdict wrong_numbers = verify_expression(inst, "6*4");
    REQUIRE_FALSE(wrong_numbers.accepted);
    CHECK(wrong_numbers.critique->rendered.find("numbers") != std::string::npos);

    Verdict wrong_value = verify_expression(inst, "(1+1)*4*6");
    REQUIRE_FALSE(wrong_value.accepted);
    CHECK(wrong_value.critique->rendered == "(1+1)*4*6=48 not 24");
}

TEST_CASE("verify_expression binary level carries no fault detail") {
    G24Instance inst{{1, 1, 4, 6}};
    Verdict v = verify_expression(inst, "(1+1)*4*6", FeedbackLevel::Binary);
    REQUIRE_FALSE(v.accepted);
    CHECK(v.critique->items.empty());
    CHECK(v.critique->rendered.find("48") == std::string::npos);
}

TEST_CASE("enumeration covers at most 7680 expressions and finds all solutions") {
    G24Instance inst{{1, 1, 4, 6}};
    int count = 0;
    int solutions = 0;
    enumerate_expressions(inst, [&](const ExprPtr& e) {
        ++count;
        if (is_24(evaluate_exact(e))) ++solutions;
    });
    CHECK(count <= 7680);
    CHECK(count > 0);
    CHECK(solutions > 0);
}

TEST_CASE("verifier agrees with the enumerator oracle") {
    // Every enumerated expression's exact value decides acceptance; the
    // verifier must agree on all of them, for solvable and unsolvable sets.
    for (auto numbers : {std::array<int, 4>{1, 1, 4, 6}, std::array<int, 4>{1, 1, 1, 1},
                         std::array<int, 4>{3, 3, 8, 8}}) {
        G24Instance inst{numbers};
        int disagreements = 0;
        enumerate_expressions(inst, [&](const ExprPtr& e) {
            bool oracle = is_24(evaluate_exact(e));
            bool verifier = verify_expression(inst, render(*e)).accepted;
            if (oracle != verifier) ++disagreements;
        });
        CHECK(disagreements == 0);
    }
}

TEST_CASE("solve_brute_force on known solvable and unsolvable instances") {
    auto solved = solve_brute_force(G24Instance{{3, 3, 8, 8}});
    REQUIRE(solved.has_value());
    CHECK(is_24(evaluate_exact(*solved)));  // the classic 8/(3-8/3)
    CHECK_FALSE(solve_brute_force(G24Instance{{1, 1, 1, 1}}).has_value());
}

TEST_CASE("expression suite members have the documented properties") {
    G24Instance inst{{2, 2, 4, 6}};
    auto solution = solve_brute_force(inst);
    REQUIRE(solution.has_value());
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        ExpressionSuite suite = generate_expression_suite(inst, *solution, rng);

        CHECK(is_24(evaluate_exact(suite.correct)));
        CHECK_FALSE(is_24(evaluate_exact(suite.ablated_op)));
        CHECK_FALSE(is_24(evaluate_exact(suite.ablated_number)));
        CHECK_FALSE(is_24(evaluate_exact(suite.random)));

        // ablated_op keeps the leaves, changes exactly one operator slot's result.
        auto base_leaves = leaves(*suite.correct);
        auto op_leaves = leaves(*suite.ablated_op);
        std::sort(base_leaves.begin(), base_leaves.end());
        std::sort(op_leaves.begin(), op_leaves.end());
        CHECK(base_leaves == op_leaves);

        // ablated_number differs from the instance multiset in exactly one leaf.
        auto num_leaves = leaves(*suite.ablated_number);
        std::sort(num_leaves.begin(), num_leaves.end());
        std::vector<int> diff;
        std::set_difference(num_leaves.begin(), num_leaves.end(), base_leaves.begin(),
                            base_leaves.end(), std::back_inserter(diff));
        CHECK(diff.size() == 1);
    }
}

TEST_CASE("canonical_form is stable across whitespace and tails") {
    CHECK(canonical_form("(1+1)*4*6") == canonical_form(" ( 1 + 1 ) * 4 * 6 = 48"));
    CHECK(canonical_form("not an expression") == std::nullopt);
}

TEST_CASE("instance files round-trip with line-number ranks") {
    std::vector<G24Instance> instances = {{{1, 1, 4, 6}}, {{2, 2, 4, 6}}};
    std::string text = instances_to_text(instances);
    CHECK(text == "1 1 4 6\n2 2 4 6\n");
}

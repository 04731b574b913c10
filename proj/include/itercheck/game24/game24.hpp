#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "itercheck/core/types.hpp"

namespace itercheck::game24 {

struct G24Instance {
    std::array<int, 4> numbers{};  // multiset, stored in input order
    std::optional<int> human_difficulty_rank;
    int max_value = 12;  // configured inclusive upper bound for leaves

    bool well_formed() const;
};

enum class Op { Add, Sub, Mul, Div };

char op_char(Op op);

// Binary expression tree: internal nodes carry an operator, leaves carry
// integer literals.
struct Expr {
    Op op = Op::Add;
    int leaf_value = 0;
    std::shared_ptr<const Expr> lhs;  // null iff leaf
    std::shared_ptr<const Expr> rhs;

    bool is_leaf() const { return lhs == nullptr; }

    static std::shared_ptr<const Expr> leaf(int v);
    static std::shared_ptr<const Expr> node(Op op, std::shared_ptr<const Expr> l,
                                            std::shared_ptr<const Expr> r);
};

using ExprPtr = std::shared_ptr<const Expr>;

// Exact rational in lowest terms; DivByZero marks division by an exact zero.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d);

    bool operator==(const Rational&) const = default;
    std::string str() const;
};

struct DivByZero {
    bool operator==(const DivByZero&) const = default;
};

using ExactValue = std::variant<Rational, DivByZero>;

bool is_24(const ExactValue& v);
std::string value_str(const ExactValue& v);

struct MalformedError {
    std::string message;
};

// Recursive-descent parse of infix arithmetic (+ - * /, parentheses),
// standard precedence, left associativity. Input must be a bare expression;
// prose extraction lives in extract_expression_text.
std::variant<ExprPtr, MalformedError> parse_expression(const std::string& text);

// Strips surrounding prose from a raw LLM response: scans lines bottom-up,
// drops an "= ..." tail if present, and returns the last line whose
// arithmetic portion parses. nullopt if no line parses.
std::optional<std::string> extract_expression_text(const std::string& raw);

ExactValue evaluate_exact(const Expr& expr);
ExactValue evaluate_exact(const ExprPtr& expr);

std::vector<int> leaves(const Expr& expr);

// Canonical infix rendering: parenthesizes every internal node, no spaces.
std::string render(const Expr& expr);

// Sound verifier. Accepts iff the text parses, the leaf multiset equals
// instance.numbers, and the exact value is 24. Fault priority:
// malformed > wrong numbers > wrong value.
Verdict verify_expression(const G24Instance& instance, const std::string& text,
                          FeedbackLevel level = FeedbackLevel::FirstError);

// Exhaustive enumeration: 5 tree shapes x leaf orderings x 4^3 operator
// choices (<= 7680 expressions). Visits every expression over the instance's
// numbers.
void enumerate_expressions(const G24Instance& instance,
                           const std::function<void(const ExprPtr&)>& visit);

std::optional<ExprPtr> solve_brute_force(const G24Instance& instance);

struct ExpressionSuite {
    ExprPtr correct;
    ExprPtr ablated_op;      // exactly one operator wrong, value != 24
    ExprPtr ablated_number;  // exactly one leaf wrong, value != 24
    ExprPtr random;          // uniform shape/order/ops, value != 24
};

// Appendix-style proposed-expression generators seeded from a verified
// solution. Throws std::runtime_error when the instance is unsolvable.
ExpressionSuite generate_expression_suite(const G24Instance& instance, const ExprPtr& solution,
                                          std::mt19937_64& rng);

// Canonical form used for self-consistency voting.
std::optional<std::string> canonical_form(const std::string& raw);

// Instance files: one instance per line, four space-separated integers;
// rank is the 1-based line number.
std::vector<G24Instance> load_instances(const std::string& path, int max_value = 12);
std::string instances_to_text(const std::vector<G24Instance>& instances);

ProblemInstance make_problem(const G24Instance& instance, const std::string& id);

}  // namespace itercheck::game24

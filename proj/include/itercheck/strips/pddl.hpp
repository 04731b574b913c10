#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "itercheck/core/types.hpp"

namespace itercheck::strips {

struct ParseError : std::runtime_error {
    int line, column;
    ParseError(const std::string& msg, int line_, int column_)
        : std::runtime_error("line " + std::to_string(line_) + ", column " +
                             std::to_string(column_) + ": " + msg),
          line(line_),
          column(column_) {}
};

// A predicate applied to arguments; arguments are either variables (?x) in
// schemas or object names in ground atoms.
struct Atom {
    std::string pred;
    std::vector<std::string> args;

    auto operator<=>(const Atom&) const = default;
    std::string str() const;
    bool ground() const;
};

struct ActionSchema {
    std::string name;
    std::vector<std::string> parameters;  // "?x", "?y", ...
    std::vector<Atom> preconditions;      // positive literals over parameters
    std::vector<Atom> add_effects;
    std::vector<Atom> del_effects;
};

struct DomainDef {
    std::string name;
    std::vector<std::pair<std::string, int>> predicates;  // (name, arity)
    std::vector<ActionSchema> actions;

    const ActionSchema* find_action(const std::string& name) const;
    std::optional<int> predicate_arity(const std::string& name) const;
};

struct ProblemDef {
    std::string name;
    std::vector<std::string> objects;
    std::set<Atom> init;
    std::set<Atom> goal;  // conjunction of positive ground atoms
};

struct GroundAction {
    std::string name;
    std::vector<std::string> args;

    auto operator<=>(const GroundAction&) const = default;
    std::string str() const;  // "(name arg ...)"
};

struct Plan {
    std::vector<GroundAction> steps;
    std::string str() const;  // one action per line
};

// STRIPS subset: untyped, positive-conjunction preconditions and goals,
// add/delete effects.
DomainDef parse_domain(const std::string& text);
ProblemDef parse_problem(const std::string& text, const DomainDef& domain);

// One ground action per line, "(stack a b)" or "stack a b"; validates names,
// arity, and declared objects.
Plan parse_plan(const std::string& text, const DomainDef& domain, const ProblemDef& problem);

// Longest trailing block of lines that each parse as a ground action; a
// blank or prose line terminates the block. nullopt if the text ends with
// no such block.
std::optional<std::string> extract_plan_text(const std::string& raw, const DomainDef& domain,
                                             const ProblemDef& problem);

std::string render_domain(const DomainDef& domain);
std::string render_problem(const ProblemDef& problem, const DomainDef& domain);

}  // namespace itercheck::strips

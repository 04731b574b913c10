#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "itercheck/core/types.hpp"
#include "itercheck/strips/pddl.hpp"

namespace itercheck::strips {

struct PlanFault {
    enum class Kind { UnmetPrecondition, UnmetGoals, MalformedStep };
    Kind kind = Kind::UnmetPrecondition;
    int step_index = 0;  // 1-based; 0 for UnmetGoals
    std::optional<GroundAction> action;
    std::vector<Atom> atoms;  // missing preconditions or unmet goals
    std::string reason;       // MalformedStep detail

    bool operator==(const PlanFault&) const = default;
    std::string str() const;
};

// Halt: stop at the first precondition failure (true validator semantics).
// SkipInvalidStep: skip the failing step and keep executing, collecting
// every precondition fault.
enum class FaultPolicy { Halt, SkipInvalidStep };

struct SimResult {
    std::set<Atom> final_state;
    std::vector<PlanFault> faults;

    bool valid() const { return faults.empty(); }
};

SimResult simulate(const DomainDef& domain, const ProblemDef& problem, const Plan& plan,
                   FaultPolicy policy = FaultPolicy::Halt);

// Sound plan verifier over raw LLM text: lenient plan extraction, then
// simulation. Accepted iff the simulation yields no faults.
Verdict verify_plan(const DomainDef& domain, const ProblemDef& problem,
                    const std::string& plan_text, FeedbackLevel level);

// --- obfuscation -------------------------------------------------------

struct ObfuscationMap {
    std::map<std::string, std::string> predicates;
    std::map<std::string, std::string> actions;

    ObfuscationMap inverted() const;
    static ObfuscationMap identity(const DomainDef& domain);
};

// Validates that the map is bijective and covers every name.
void check_map(const ObfuscationMap& map, const DomainDef& domain);

std::pair<DomainDef, ProblemDef> obfuscate(const DomainDef& domain, const ProblemDef& problem,
                                           const ObfuscationMap& map);
Plan rename_plan(const Plan& plan, const ObfuscationMap& map);
Plan deobfuscate_plan(const Plan& plan, const ObfuscationMap& map);
PlanFault rename_fault(const PlanFault& fault, const ObfuscationMap& map);

}  // namespace itercheck::strips

#pragma once

#include <random>
#include <string>
#include <vector>

#include "itercheck/strips/pddl.hpp"
#include "itercheck/strips/simulate.hpp"

namespace itercheck::strips {

// Task payload carried by a strips ProblemInstance.
struct PlanningTask {
    DomainDef domain;
    ProblemDef problem;
};

const std::string& blocksworld_domain_text();
const DomainDef& blocksworld_domain();

// The conventional Mystery Blocksworld renaming (succumb/pain and friends).
ObfuscationMap mystery_map();
ObfuscationMap obfuscation_map_from_json(const std::string& json_text);
std::string obfuscation_map_to_json(const ObfuscationMap& map);

// Random initial and goal tower configurations over `blocks` blocks; the
// goal keeps only the on-relations of the target configuration.
ProblemDef random_blocksworld_problem(int blocks, std::mt19937_64& rng,
                                      const std::string& name = "bw");

// Unstack everything to the table, then build the goal towers bottom-up.
// Sound and goal-reaching, not optimal.
Plan constructive_plan(const ProblemDef& problem);

struct PlanSuite {
    Plan correct;
    Plan inexecutable;
    int injected_step = 0;  // 1-based index of the fault injected into `inexecutable`
    Plan non_goal_reaching;
    Plan random;
};

PlanSuite generate_plan_suite(const DomainDef& domain, const ProblemDef& problem,
                              std::mt19937_64& rng);

// --- LLM plan-critique scoring -----------------------------------------

struct PlanCritiqueScore {
    bool binary_ok = false;
    bool type_ok = false;
    bool critique_ok = false;
    bool parse_failure = false;
};

// Scores a format-based verification response (Verdict/Type/Failed step/
// Unmet preconditions/Unmet goals lines) against the simulator's faults.
PlanCritiqueScore score_llm_plan_critique(const std::vector<PlanFault>& ground,
                                          const std::string& llm_text);

// --- persistence -------------------------------------------------------

// Instance files: "domain.pddl" next to "<name>.pddl" problem files, or a
// single file of concatenated problem definitions separated by blank lines.
std::vector<PlanningTask> load_instances(const std::string& problems_path,
                                         const std::string& domain_path);
ProblemInstance make_problem(const PlanningTask& task, const std::string& id);

}  // namespace itercheck::strips

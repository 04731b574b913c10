#include "itercheck/strips/blocksworld.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace itercheck::strips {

const std::string& blocksworld_domain_text() {
    static const std::string text = R"((define (domain blocksworld)
  (:requirements :strips)
  (:predicates (on ?x ?y) (ontable ?x) (clear ?x) (holding ?x) (handempty))
  (:action pickup
    :parameters (?x)
    :precondition (and (clear ?x) (ontable ?x) (handempty))
    :effect (and (holding ?x) (not (ontable ?x)) (not (clear ?x)) (not (handempty))))
  (:action putdown
    :parameters (?x)
    :precondition (and (holding ?x))
    :effect (and (ontable ?x) (clear ?x) (handempty) (not (holding ?x))))
  (:action stack
    :parameters (?x ?y)
    :precondition (and (holding ?x) (clear ?y))
    :effect (and (on ?x ?y) (clear ?x) (handempty) (not (holding ?x)) (not (clear ?y))))
  (:action unstack
    :parameters (?x ?y)
    :precondition (and (on ?x ?y) (clear ?x) (handempty))
    :effect (and (holding ?x) (clear ?y) (not (on ?x ?y)) (not (clear ?x)) (not (handempty)))))
)";
    return text;
}

const DomainDef& blocksworld_domain() {
    static const DomainDef domain = parse_domain(blocksworld_domain_text());
    return domain;
}

ObfuscationMap mystery_map() {
    ObfuscationMap map;
    map.predicates = {{"on", "craves"},
                      {"ontable", "planet"},
                      {"clear", "province"},
                      {"holding", "pain"},
                      {"handempty", "harmony"}};
    map.actions = {{"pickup", "attack"},
                   {"putdown", "succumb"},
                   {"stack", "overcome"},
                   {"unstack", "feast"}};
    return map;
}

ObfuscationMap obfuscation_map_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    ObfuscationMap map;
    for (auto& [k, v] : j.at("predicates").items()) map.predicates[k] = v.get<std::string>();
    for (auto& [k, v] : j.at("actions").items()) map.actions[k] = v.get<std::string>();
    return map;
}

std::string obfuscation_map_to_json(const ObfuscationMap& map) {
    nlohmann::ordered_json j;
    j["predicates"] = map.predicates;
    j["actions"] = map.actions;
    return j.dump(2) + "\n";
}

namespace {

// Random partition of shuffled blocks into towers, bottom-first per tower.
std::vector<std::vector<std::string>> random_towers(std::vector<std::string> blocks,
                                                    std::mt19937_64& rng) {
    std::shuffle(blocks.begin(), blocks.end(), rng);
    std::vector<std::vector<std::string>> towers;
    std::uniform_int_distribution<int> coin(0, 1);
    for (const auto& b : blocks) {
        if (towers.empty() || coin(rng) == 0) towers.push_back({b});
        else towers.back().push_back(b);
    }
    return towers;
}

std::set<Atom> towers_to_state(const std::vector<std::vector<std::string>>& towers) {
    std::set<Atom> state;
    state.insert({"handempty", {}});
    for (const auto& tower : towers) {
        state.insert({"ontable", {tower.front()}});
        state.insert({"clear", {tower.back()}});
        for (std::size_t i = 1; i < tower.size(); ++i)
            state.insert({"on", {tower[i], tower[i - 1]}});
    }
    return state;
}

}  // namespace

ProblemDef random_blocksworld_problem(int blocks, std::mt19937_64& rng, const std::string& name) {
    if (blocks < 2) throw std::invalid_argument("need at least 2 blocks");
    std::vector<std::string> names;
    for (int i = 0; i < blocks; ++i) {
        if (i < 26) names.push_back(std::string(1, static_cast<char>('a' + i)));
        else names.push_back("b" + std::to_string(i));
    }
    ProblemDef p;
    p.name = name;
    p.objects = names;
    p.init = towers_to_state(random_towers(names, rng));
    for (int attempt = 0; attempt < 1000; ++attempt) {
        auto goal_towers = random_towers(names, rng);
        std::set<Atom> goal;
        for (const auto& tower : goal_towers)
            for (std::size_t i = 1; i < tower.size(); ++i)
                goal.insert({"on", {tower[i], tower[i - 1]}});
        if (goal.empty()) continue;  // all-on-table goal carries no constraint
        bool already = std::all_of(goal.begin(), goal.end(),
                                   [&](const Atom& a) { return p.init.count(a) > 0; });
        if (already) continue;
        p.goal = std::move(goal);
        return p;
    }
    throw std::runtime_error("could not sample a nontrivial goal configuration");
}

Plan constructive_plan(const ProblemDef& problem) {
    Plan plan;
    // Current support relation from the init state.
    std::map<std::string, std::string> below;  // block -> what it sits on
    std::set<std::string> has_above;
    for (const auto& a : problem.init) {
        if (a.pred == "on") {
            below[a.args[0]] = a.args[1];
            has_above.insert(a.args[1]);
        }
    }
    // Phase 1: unstack everything to the table.
    for (;;) {
        std::string pick;
        for (const auto& [x, y] : below) {
            if (!has_above.count(x)) {
                pick = x;
                break;
            }
        }
        if (pick.empty()) break;
        std::string support = below[pick];
        plan.steps.push_back({"unstack", {pick, support}});
        plan.steps.push_back({"putdown", {pick}});
        below.erase(pick);
        has_above.erase(support);
    }
    // Phase 2: build the goal towers bottom-up.
    std::map<std::string, std::string> goal_below;  // x sits on y
    std::set<std::string> goal_tops;                // blocks with something above them
    for (const auto& a : problem.goal) {
        goal_below[a.args[0]] = a.args[1];
        goal_tops.insert(a.args[1]);
    }
    // Chain bottoms: blocks that support something but sit on nothing.
    for (const auto& a : problem.goal) {
        const std::string& base = a.args[1];
        if (goal_below.count(base)) continue;  // not a bottom
        // Walk the chain upward from the bottom.
        std::string current = base;
        for (;;) {
            std::string above;
            for (const auto& [x, y] : goal_below) {
                if (y == current) {
                    above = x;
                    break;
                }
            }
            if (above.empty()) break;
            plan.steps.push_back({"pickup", {above}});
            plan.steps.push_back({"stack", {above, current}});
            current = above;
        }
    }
    return plan;
}

PlanSuite generate_plan_suite(const DomainDef& domain, const ProblemDef& problem,
                              std::mt19937_64& rng) {
    PlanSuite suite;
    suite.correct = constructive_plan(problem);
    if (!simulate(domain, problem, suite.correct).valid())
        throw std::logic_error("constructive plan failed validation");
    if (suite.correct.steps.empty()) throw std::runtime_error("trivially solved instance");

    auto random_action = [&]() {
        std::uniform_int_distribution<std::size_t> schema_pick(0, domain.actions.size() - 1);
        const ActionSchema& schema = domain.actions[schema_pick(rng)];
        GroundAction a;
        a.name = schema.name;
        std::uniform_int_distribution<std::size_t> obj_pick(0, problem.objects.size() - 1);
        for (std::size_t i = 0; i < schema.parameters.size(); ++i)
            a.args.push_back(problem.objects[obj_pick(rng)]);
        return a;
    };

    constexpr int kBudget = 2000;
    std::uniform_int_distribution<std::size_t> step_pick(0, suite.correct.steps.size() - 1);
    bool found = false;
    for (int attempt = 0; attempt < kBudget && !found; ++attempt) {
        std::size_t i = step_pick(rng);
        Plan variant = suite.correct;
        variant.steps[i] = random_action();
        SimResult sim = simulate(domain, problem, variant);
        if (!sim.faults.empty() &&
            sim.faults.front().kind == PlanFault::Kind::UnmetPrecondition &&
            sim.faults.front().step_index == static_cast<int>(i) + 1) {
            suite.inexecutable = std::move(variant);
            suite.injected_step = static_cast<int>(i) + 1;
            found = true;
        }
    }
    if (!found) throw std::runtime_error("inexecutable-plan resampling budget exceeded");

    found = false;
    std::uniform_int_distribution<std::size_t> trunc_pick(0, suite.correct.steps.size() - 1);
    for (int attempt = 0; attempt < kBudget && !found; ++attempt) {
        std::size_t len = trunc_pick(rng);
        Plan variant;
        variant.steps.assign(suite.correct.steps.begin(), suite.correct.steps.begin() + len);
        SimResult sim = simulate(domain, problem, variant);
        bool only_goal_fault = sim.faults.size() == 1 &&
                               sim.faults.front().kind == PlanFault::Kind::UnmetGoals;
        if (only_goal_fault) {
            suite.non_goal_reaching = std::move(variant);
            found = true;
        }
    }
    if (!found) throw std::runtime_error("non-goal-reaching resampling budget exceeded");

    for (std::size_t i = 0; i < suite.correct.steps.size(); ++i)
        suite.random.steps.push_back(random_action());
    return suite;
}

// --- LLM plan-critique scoring -----------------------------------------

namespace {

std::vector<Atom> parse_atoms_loose(const std::string& text) {
    std::vector<Atom> atoms;
    static const std::regex atom_re(R"(\(([^()]+)\))");
    for (auto it = std::sregex_iterator(text.begin(), text.end(), atom_re);
         it != std::sregex_iterator(); ++it) {
        std::istringstream in((*it)[1]);
        Atom a;
        in >> a.pred;
        for (std::string tok; in >> tok;) a.args.push_back(tok);
        std::transform(a.pred.begin(), a.pred.end(), a.pred.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        for (auto& arg : a.args)
            std::transform(arg.begin(), arg.end(), arg.begin(),
                           [](unsigned char c) { return std::tolower(c); });
        atoms.push_back(std::move(a));
    }
    return atoms;
}

}  // namespace

PlanCritiqueScore score_llm_plan_critique(const std::vector<PlanFault>& ground,
                                          const std::string& llm_text) {
    PlanCritiqueScore score;

    static const std::regex verdict_re(R"((?:verdict\s*:\s*|the\s+plan\s+is\s+)(valid|invalid))",
                                       std::regex::icase);
    static const std::regex type_re(R"(type\s*:\s*(inexecutable|non[- ]?goal[- ]?reaching))",
                                    std::regex::icase);
    static const std::regex step_re(R"((?:failed\s+step|step)\s*:?\s*(\d+))", std::regex::icase);
    static const std::regex precond_re(R"(unmet\s+preconditions?\s*:?\s*(.*))",
                                       std::regex::icase);
    static const std::regex goals_re(R"(unmet\s+goals?\s*:?\s*(.*))", std::regex::icase);

    std::smatch m;
    if (!std::regex_search(llm_text, m, verdict_re)) {
        score.parse_failure = true;
        return score;
    }
    std::string verdict = m[1];
    std::transform(verdict.begin(), verdict.end(), verdict.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    bool llm_valid = verdict == "valid";

    bool ground_valid = ground.empty();
    score.binary_ok = llm_valid == ground_valid;

    if (ground_valid) {
        // A correct "valid" answer needs no type or critique content.
        score.type_ok = score.binary_ok;
        score.critique_ok = score.binary_ok;
        return score;
    }

    const PlanFault& first = ground.front();
    bool ground_inexecutable = first.kind != PlanFault::Kind::UnmetGoals;

    std::optional<bool> llm_inexecutable;
    if (std::regex_search(llm_text, m, type_re)) {
        std::string t = m[1];
        std::transform(t.begin(), t.end(), t.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        llm_inexecutable = t == "inexecutable";
    }
    score.type_ok = score.binary_ok && !llm_valid && llm_inexecutable.has_value() &&
                    *llm_inexecutable == ground_inexecutable;
    if (!score.type_ok) return score;

    if (ground_inexecutable) {
        std::optional<int> llm_step;
        if (std::regex_search(llm_text, m, step_re)) llm_step = std::stoi(m[1]);
        std::vector<Atom> llm_missing;
        if (std::regex_search(llm_text, m, precond_re)) llm_missing = parse_atoms_loose(m[1]);
        std::set<Atom> want(first.atoms.begin(), first.atoms.end());
        std::set<Atom> got(llm_missing.begin(), llm_missing.end());
        score.critique_ok = llm_step && *llm_step == first.step_index && want == got;
    } else {
        std::vector<Atom> llm_goals;
        if (std::regex_search(llm_text, m, goals_re)) llm_goals = parse_atoms_loose(m[1]);
        std::set<Atom> want(first.atoms.begin(), first.atoms.end());
        std::set<Atom> got(llm_goals.begin(), llm_goals.end());
        score.critique_ok = want == got;
    }
    return score;
}

// --- persistence -------------------------------------------------------

namespace {

// Top-level s-expressions of a file, split by paren balance.
std::vector<std::string> split_top_level(const std::string& text) {
    std::vector<std::string> out;
    int depth = 0;
    std::string current;
    for (char c : text) {
        if (c == '(') {
            if (depth == 0) current.clear();
            ++depth;
        }
        if (depth > 0) current += c;
        if (c == ')') {
            --depth;
            if (depth == 0) out.push_back(current);
        }
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::vector<PlanningTask> load_instances(const std::string& problems_path,
                                         const std::string& domain_path) {
    DomainDef domain = parse_domain(read_file(domain_path));
    std::vector<std::string> texts;
    std::filesystem::path p(problems_path);
    if (std::filesystem::is_directory(p)) {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(p)) {
            if (entry.path().extension() == ".pddl" &&
                entry.path().filename() != "domain.pddl")
                files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) texts.push_back(read_file(f));
    } else {
        texts = split_top_level(read_file(p));
    }
    std::vector<PlanningTask> tasks;
    for (const auto& text : texts) {
        PlanningTask task;
        task.domain = domain;
        task.problem = parse_problem(text, domain);
        tasks.push_back(std::move(task));
    }
    return tasks;
}

ProblemInstance make_problem(const PlanningTask& task, const std::string& id) {
    ProblemInstance p;
    p.id = id;
    p.domain_tag = DomainTag::Strips;
    p.payload = task;
    return p;
}

}  // namespace itercheck::strips

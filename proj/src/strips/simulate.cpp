#include "itercheck/strips/simulate.hpp"

#include <algorithm>
#include <stdexcept>

namespace itercheck::strips {

namespace {

std::string ordinal(int i) {
    if (i % 100 / 10 == 1) return std::to_string(i) + "th";
    switch (i % 10) {
        case 1: return std::to_string(i) + "st";
        case 2: return std::to_string(i) + "nd";
        case 3: return std::to_string(i) + "rd";
        default: return std::to_string(i) + "th";
    }
}

std::string atom_list(const std::vector<Atom>& atoms) {
    std::string out;
    for (const auto& a : atoms) {
        if (!out.empty()) out += " ";
        out += a.str();
    }
    return out;
}

Atom ground_atom(const Atom& schema_atom, const std::map<std::string, std::string>& binding) {
    Atom g;
    g.pred = schema_atom.pred;
    for (const auto& arg : schema_atom.args) {
        auto it = binding.find(arg);
        g.args.push_back(it != binding.end() ? it->second : arg);
    }
    return g;
}

}  // namespace

std::string PlanFault::str() const {
    switch (kind) {
        case Kind::UnmetPrecondition:
            return "The " + ordinal(step_index) + " action " + (action ? action->str() : "?") +
                   " is invalid because the following preconditions are not met: " +
                   atom_list(atoms) + ".";
        case Kind::UnmetGoals:
            return "This plan does not reach the goal. Unmet goals: " + atom_list(atoms) + ".";
        case Kind::MalformedStep:
            return "Step " + std::to_string(step_index) + " is malformed: " + reason;
    }
    throw std::logic_error("bad PlanFault::Kind");
}

SimResult simulate(const DomainDef& domain, const ProblemDef& problem, const Plan& plan,
                   FaultPolicy policy) {
    SimResult result;
    std::set<Atom> state = problem.init;
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        const GroundAction& step = plan.steps[i];
        const ActionSchema* schema = domain.find_action(step.name);
        if (!schema || schema->parameters.size() != step.args.size()) {
            PlanFault f;
            f.kind = PlanFault::Kind::MalformedStep;
            f.step_index = static_cast<int>(i) + 1;
            f.action = step;
            f.reason = schema ? "wrong number of arguments" : "unknown action";
            result.faults.push_back(std::move(f));
            if (policy == FaultPolicy::Halt) {
                result.final_state = state;
                return result;
            }
            continue;
        }
        std::map<std::string, std::string> binding;
        for (std::size_t p = 0; p < schema->parameters.size(); ++p)
            binding[schema->parameters[p]] = step.args[p];

        std::vector<Atom> missing;
        for (const auto& pre : schema->preconditions) {
            Atom g = ground_atom(pre, binding);
            if (!state.count(g)) missing.push_back(std::move(g));
        }
        if (!missing.empty()) {
            PlanFault f;
            f.kind = PlanFault::Kind::UnmetPrecondition;
            f.step_index = static_cast<int>(i) + 1;
            f.action = step;
            f.atoms = std::move(missing);
            result.faults.push_back(std::move(f));
            if (policy == FaultPolicy::Halt) {
                result.final_state = state;
                return result;
            }
            continue;  // skip the invalid step, leave the state unchanged
        }
        for (const auto& del : schema->del_effects) state.erase(ground_atom(del, binding));
        for (const auto& add : schema->add_effects) state.insert(ground_atom(add, binding));
    }
    std::vector<Atom> unmet;
    for (const auto& g : problem.goal)
        if (!state.count(g)) unmet.push_back(g);
    if (!unmet.empty()) {
        PlanFault f;
        f.kind = PlanFault::Kind::UnmetGoals;
        f.step_index = 0;
        f.atoms = std::move(unmet);
        result.faults.push_back(std::move(f));
    }
    result.final_state = std::move(state);
    return result;
}

namespace {

Verdict plan_rejection(FeedbackLevel level, const std::vector<PlanFault>& faults) {
    Verdict v;
    v.accepted = false;
    v.source = VerdictSource::SoundVerifier;
    Critique c;
    c.level = level;
    if (level == FeedbackLevel::Binary) {
        c.rendered = "Your previous answer was wrong.";
    } else {
        std::size_t count = level == FeedbackLevel::FirstError ? 1 : faults.size();
        for (std::size_t i = 0; i < count && i < faults.size(); ++i)
            c.items.push_back(faults[i].str());
        for (const auto& item : c.items) {
            if (!c.rendered.empty()) c.rendered += "\n";
            c.rendered += item;
        }
    }
    v.critique = c;
    return v;
}

}  // namespace

Verdict verify_plan(const DomainDef& domain, const ProblemDef& problem,
                    const std::string& plan_text, FeedbackLevel level) {
    auto extracted = extract_plan_text(plan_text, domain, problem);
    if (!extracted) {
        PlanFault f;
        f.kind = PlanFault::Kind::MalformedStep;
        f.step_index = 1;
        f.reason = "no parseable plan found in the response";
        return plan_rejection(level, {f});
    }
    Plan plan = parse_plan(*extracted, domain, problem);
    // FirstError uses halt semantics; AllErrors continues past failures.
    FaultPolicy policy =
        level == FeedbackLevel::AllErrors ? FaultPolicy::SkipInvalidStep : FaultPolicy::Halt;
    SimResult sim = simulate(domain, problem, plan, policy);
    if (sim.valid()) {
        Verdict v;
        v.accepted = true;
        v.source = VerdictSource::SoundVerifier;
        return v;
    }
    // Acceptance is decided by halt semantics; a plan that only "recovers"
    // under skip mode is still invalid, so any fault list here is nonempty.
    return plan_rejection(level, sim.faults);
}

// --- obfuscation -------------------------------------------------------

ObfuscationMap ObfuscationMap::inverted() const {
    ObfuscationMap inv;
    for (const auto& [k, v] : predicates) inv.predicates[v] = k;
    for (const auto& [k, v] : actions) inv.actions[v] = k;
    return inv;
}

ObfuscationMap ObfuscationMap::identity(const DomainDef& domain) {
    ObfuscationMap map;
    for (const auto& [name, arity] : domain.predicates) map.predicates[name] = name;
    for (const auto& a : domain.actions) map.actions[a.name] = a.name;
    return map;
}

void check_map(const ObfuscationMap& map, const DomainDef& domain) {
    std::set<std::string> images;
    for (const auto& [name, arity] : domain.predicates) {
        auto it = map.predicates.find(name);
        if (it == map.predicates.end())
            throw std::invalid_argument("obfuscation map misses predicate '" + name + "'");
        if (!images.insert("p:" + it->second).second)
            throw std::invalid_argument("obfuscation map is not injective on predicates");
    }
    images.clear();
    for (const auto& a : domain.actions) {
        auto it = map.actions.find(a.name);
        if (it == map.actions.end())
            throw std::invalid_argument("obfuscation map misses action '" + a.name + "'");
        if (!images.insert("a:" + it->second).second)
            throw std::invalid_argument("obfuscation map is not injective on actions");
    }
}

namespace {

Atom rename_atom(const Atom& a, const ObfuscationMap& map) {
    Atom out = a;
    if (auto it = map.predicates.find(a.pred); it != map.predicates.end()) out.pred = it->second;
    return out;
}

}  // namespace

std::pair<DomainDef, ProblemDef> obfuscate(const DomainDef& domain, const ProblemDef& problem,
                                           const ObfuscationMap& map) {
    check_map(map, domain);
    DomainDef d;
    d.name = domain.name + "-obfuscated";
    for (const auto& [name, arity] : domain.predicates)
        d.predicates.push_back({map.predicates.at(name), arity});
    for (const auto& a : domain.actions) {
        ActionSchema s;
        s.name = map.actions.at(a.name);
        s.parameters = a.parameters;
        for (const auto& x : a.preconditions) s.preconditions.push_back(rename_atom(x, map));
        for (const auto& x : a.add_effects) s.add_effects.push_back(rename_atom(x, map));
        for (const auto& x : a.del_effects) s.del_effects.push_back(rename_atom(x, map));
        d.actions.push_back(std::move(s));
    }
    ProblemDef p;
    p.name = problem.name + "-obfuscated";
    p.objects = problem.objects;
    for (const auto& a : problem.init) p.init.insert(rename_atom(a, map));
    for (const auto& a : problem.goal) p.goal.insert(rename_atom(a, map));
    return {std::move(d), std::move(p)};
}

Plan rename_plan(const Plan& plan, const ObfuscationMap& map) {
    Plan out;
    for (const auto& step : plan.steps) {
        GroundAction a = step;
        if (auto it = map.actions.find(step.name); it != map.actions.end()) a.name = it->second;
        out.steps.push_back(std::move(a));
    }
    return out;
}

Plan deobfuscate_plan(const Plan& plan, const ObfuscationMap& map) {
    return rename_plan(plan, map.inverted());
}

PlanFault rename_fault(const PlanFault& fault, const ObfuscationMap& map) {
    PlanFault out = fault;
    if (out.action) {
        if (auto it = map.actions.find(out.action->name); it != map.actions.end())
            out.action->name = it->second;
    }
    for (auto& a : out.atoms) a = rename_atom(a, map);
    return out;
}

}  // namespace itercheck::strips

// Python bindings. Thin wrappers around the C++ core: instances travel as
// text (number lists, DIMACS, PDDL), results come back as plain dicts.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <random>
#include <sstream>
#include <stdexcept>

#include "itercheck/coloring/coloring.hpp"
#include "itercheck/core/loop.hpp"
#include "itercheck/experiments/metrics.hpp"
#include "itercheck/experiments/runner.hpp"
#include "itercheck/experiments/transcripts.hpp"
#include "itercheck/game24/game24.hpp"
#include "itercheck/gateway/gateway.hpp"
#include "itercheck/strips/blocksworld.hpp"

namespace py = pybind11;
using namespace itercheck;

namespace {

game24::G24Instance g24_instance(const std::vector<int>& numbers) {
    if (numbers.size() != 4) throw std::invalid_argument("expected exactly 4 numbers");
    game24::G24Instance inst;
    std::copy(numbers.begin(), numbers.end(), inst.numbers.begin());
    return inst;
}

py::object critique_to_py(const std::optional<Critique>& critique) {
    if (!critique) return py::none();
    py::dict d;
    d["level"] = to_string(critique->level);
    d["items"] = critique->items;
    d["rendered"] = critique->rendered;
    return d;
}

py::dict verdict_to_py(const Verdict& v) {
    py::dict d;
    d["accepted"] = v.accepted;
    d["source"] = v.source == VerdictSource::SoundVerifier ? "sound" : "llm";
    d["critique"] = critique_to_py(v.critique);
    return d;
}

Strategy strategy_from_py(const std::string& kind, int max_rounds, int k,
                          const std::string& level) {
    FeedbackLevel fl = feedback_level_from_string(level);
    if (kind == "standard") return Strategy::standard();
    if (kind == "self_critique") return Strategy::self_critique(max_rounds);
    if (kind == "sound_critique") return Strategy::sound_critique(fl, max_rounds);
    if (kind == "sampling") return Strategy::sampling(k);
    if (kind == "self_consistency") return Strategy::self_consistency(k);
    throw std::invalid_argument("unknown strategy kind: " + kind);
}

ProblemInstance problem_from_text(const std::string& domain, const std::string& instance_text,
                                  const std::string& domain_pddl) {
    if (domain == "game24") {
        std::istringstream in(instance_text);
        std::vector<int> numbers;
        int x;
        while (in >> x) numbers.push_back(x);
        return game24::make_problem(g24_instance(numbers), "py-game24");
    }
    if (domain == "coloring")
        return coloring::make_problem(coloring::from_dimacs(instance_text), "py-coloring");
    if (domain == "strips") {
        strips::DomainDef d = domain_pddl.empty() ? strips::blocksworld_domain()
                                                  : strips::parse_domain(domain_pddl);
        strips::ProblemDef p = strips::parse_problem(instance_text, d);
        return strips::make_problem(strips::PlanningTask{std::move(d), std::move(p)},
                                    "py-strips");
    }
    throw std::invalid_argument("unknown domain: " + domain);
}

}  // namespace

PYBIND11_MODULE(_itercheck, m) {
    m.doc() = "Generate-verify-critique harness: sound verifiers, scripted loops, metrics.";

    // --- game of 24 -----------------------------------------------------
    m.def(
        "verify_game24",
        [](const std::vector<int>& numbers, const std::string& text, const std::string& level) {
            return verdict_to_py(game24::verify_expression(
                g24_instance(numbers), text, feedback_level_from_string(level)));
        },
        py::arg("numbers"), py::arg("text"), py::arg("level") = "first_error",
        "Sound game-of-24 check of an expression against a 4-number instance.");
    m.def(
        "solve_game24",
        [](const std::vector<int>& numbers) -> py::object {
            auto expr = game24::solve_brute_force(g24_instance(numbers));
            if (!expr) return py::none();
            return py::str(game24::render(**expr));
        },
        py::arg("numbers"), "Brute-force solution expression, or None if unsolvable.");
    m.def(
        "game24_canonical",
        [](const std::string& raw) -> py::object {
            auto c = game24::canonical_form(raw);
            if (!c) return py::none();
            return py::str(*c);
        },
        py::arg("raw"), "Canonical form used for self-consistency voting, or None.");

    // --- graph coloring -------------------------------------------------
    m.def(
        "chromatic_number",
        [](const std::string& dimacs) {
            return coloring::chromatic_number_exact(coloring::from_dimacs(dimacs).graph);
        },
        py::arg("dimacs"), "Exact chromatic number of a DIMACS graph.");
    m.def(
        "is_planar",
        [](const std::string& dimacs) {
            return coloring::is_planar(coloring::from_dimacs(dimacs).graph);
        },
        py::arg("dimacs"));
    m.def(
        "verify_coloring",
        [](const std::string& dimacs, const std::string& coloring_text,
           const std::string& level, bool reject_non_optimal) {
            auto inst = coloring::from_dimacs(dimacs);
            auto cand = coloring::parse_coloring(coloring_text, inst.graph.n);
            if (!cand) {
                py::dict d;
                d["accepted"] = false;
                d["source"] = "sound";
                d["critique"] = py::none();
                d["parse_error"] = true;
                return d;
            }
            coloring::VerifyOptions options;
            options.level = feedback_level_from_string(level);
            options.reject_non_optimal = reject_non_optimal;
            py::dict d = verdict_to_py(coloring::verify_coloring(inst, *cand, options));
            d["parse_error"] = false;
            return d;
        },
        py::arg("dimacs"), py::arg("coloring"), py::arg("level") = "first_error",
        py::arg("reject_non_optimal") = true,
        "Sound coloring check; the candidate is 'vertex: color' lines.");
    m.def(
        "solve_coloring",
        [](const std::string& dimacs) {
            auto inst = coloring::from_dimacs(dimacs);
            auto solution = coloring::solve_coloring(inst);
            std::ostringstream out;
            for (const auto& [v, color] : solution.assignment)
                out << v << ": " << color << "\n";
            return out.str();
        },
        py::arg("dimacs"), "Proper optimal coloring as 'vertex: color' lines.");
    m.def(
        "generate_coloring_instances",
        [](int count, std::uint64_t seed) {
            coloring::InstanceGenerator gen({}, seed);
            std::vector<std::string> out;
            for (int i = 0; i < count; ++i) out.push_back(coloring::to_dimacs(gen.next()));
            return out;
        },
        py::arg("count"), py::arg("seed") = 0,
        "Deterministic planar instances in DIMACS form.");
    m.def(
        "classify_coloring_critique",
        [](const std::string& dimacs, const std::string& coloring_text,
           const std::string& critique) {
            auto inst = coloring::from_dimacs(dimacs);
            auto cand = coloring::parse_coloring(coloring_text, inst.graph.n);
            if (!cand) throw std::invalid_argument("unparseable candidate coloring");
            auto cls = coloring::classify_critique(inst, *cand,
                                                   coloring::parse_llm_critique(critique));
            py::dict d;
            d["label"] = coloring::to_string(cls.instance_label);
            d["parse_failure"] = cls.parse_failure;
            std::vector<std::string> per;
            for (auto h : cls.per_claim) per.push_back(coloring::to_string(h));
            d["per_claim"] = per;
            return d;
        },
        py::arg("dimacs"), py::arg("coloring"), py::arg("critique"),
        "Hallucination classification of a free-form rejection critique.");

    // --- strips planning ------------------------------------------------
    m.def("blocksworld_domain", &strips::blocksworld_domain_text,
          "The built-in blocksworld domain in PDDL.");
    m.def(
        "random_blocksworld",
        [](int blocks, std::uint64_t seed) {
            std::mt19937_64 rng(seed);
            const auto& d = strips::blocksworld_domain();
            return strips::render_problem(strips::random_blocksworld_problem(blocks, rng), d);
        },
        py::arg("blocks"), py::arg("seed") = 0, "A random blocksworld problem in PDDL.");
    m.def(
        "verify_plan",
        [](const std::string& problem_pddl, const std::string& plan_text,
           const std::string& level, const std::string& domain_pddl) {
            strips::DomainDef d = domain_pddl.empty() ? strips::blocksworld_domain()
                                                      : strips::parse_domain(domain_pddl);
            strips::ProblemDef p = strips::parse_problem(problem_pddl, d);
            return verdict_to_py(
                strips::verify_plan(d, p, plan_text, feedback_level_from_string(level)));
        },
        py::arg("problem"), py::arg("plan"), py::arg("level") = "first_error",
        py::arg("domain") = "", "Sound plan check via STRIPS simulation.");
    m.def(
        "constructive_plan",
        [](const std::string& problem_pddl, const std::string& domain_pddl) {
            strips::DomainDef d = domain_pddl.empty() ? strips::blocksworld_domain()
                                                      : strips::parse_domain(domain_pddl);
            return strips::constructive_plan(strips::parse_problem(problem_pddl, d)).str();
        },
        py::arg("problem"), py::arg("domain") = "",
        "A valid goal-reaching plan (unstack everything, rebuild).");
    m.def(
        "score_plan_critique",
        [](const std::string& problem_pddl, const std::string& plan_text,
           const std::string& critique, const std::string& domain_pddl) {
            strips::DomainDef d = domain_pddl.empty() ? strips::blocksworld_domain()
                                                      : strips::parse_domain(domain_pddl);
            strips::ProblemDef p = strips::parse_problem(problem_pddl, d);
            strips::Plan plan = strips::parse_plan(plan_text, d, p);
            auto sim = strips::simulate(d, p, plan, strips::FaultPolicy::Halt);
            auto s = strips::score_llm_plan_critique(sim.faults, critique);
            py::dict out;
            out["binary_ok"] = s.binary_ok;
            out["type_ok"] = s.type_ok;
            out["critique_ok"] = s.critique_ok;
            out["parse_failure"] = s.parse_failure;
            return out;
        },
        py::arg("problem"), py::arg("plan"), py::arg("critique"), py::arg("domain") = "",
        "Grades a format-based plan-verification response against the simulator.");
    m.def(
        "mystery_obfuscate",
        [](const std::string& problem_pddl) {
            const auto& d = strips::blocksworld_domain();
            strips::ProblemDef p = strips::parse_problem(problem_pddl, d);
            auto [od, op] = strips::obfuscate(d, p, strips::mystery_map());
            py::dict out;
            out["domain"] = strips::render_domain(od);
            out["problem"] = strips::render_problem(op, od);
            return out;
        },
        py::arg("problem"), "Applies the mystery renaming to blocksworld PDDL.");

    // --- loop and experiments -------------------------------------------
    m.def(
        "run_scripted",
        [](const std::string& domain, const std::string& instance_text,
           const std::vector<std::string>& responses, const std::string& strategy,
           int max_rounds, int k, const std::string& level, bool llm_verifier,
           const std::string& domain_pddl) {
            ProblemInstance problem = problem_from_text(domain, instance_text, domain_pddl);
            Strategy strat = strategy_from_py(strategy, max_rounds, k, level);
            auto gen = std::make_shared<gateway::ScriptedGenerator>(responses);
            VerifierRole verifier;
            if (llm_verifier) verifier.llm = gen;
            Transcript t;
            if (strat.kind == StrategyKind::Sampling)
                t = run_sampling(strat.k, problem, *gen);
            else if (strat.kind == StrategyKind::SelfConsistency)
                t = run_self_consistency_transcript(strat.k, problem, *gen);
            else
                t = run_instance(strat, problem, *gen, verifier);
            experiments::backfill_ground_truth(t, problem);
            return experiments::transcript_to_json(t);
        },
        py::arg("domain"), py::arg("instance"), py::arg("responses"),
        py::arg("strategy") = "sound_critique", py::arg("max_rounds") = 15, py::arg("k") = 15,
        py::arg("level") = "first_error", py::arg("llm_verifier") = false,
        py::arg("domain_pddl") = "",
        "Runs one loop against a scripted generator; returns the transcript as JSON.");
    m.def(
        "run_suite",
        [](const std::string& config_json) {
            auto config = experiments::RunConfig::from_json(config_json);
            auto result = experiments::run_suite(config);
            py::dict out;
            out["transcripts_jsonl"] = experiments::to_jsonl(result.transcripts);
            out["report_csv"] =
                experiments::render_report(result.report, experiments::ReportFormat::Csv);
            out["failed_instances"] = result.failed_instances;
            return out;
        },
        py::arg("config_json"), "Runs a full configured suite; see RunConfig JSON schema.");
    m.def(
        "metrics_from_jsonl",
        [](const std::string& jsonl, int budget) {
            auto transcripts = experiments::from_jsonl(jsonl);
            auto report = experiments::report_from_transcripts(transcripts, budget);
            py::dict out;
            out["report_csv"] =
                experiments::render_report(report, experiments::ReportFormat::Csv);
            out["report_md"] =
                experiments::render_report(report, experiments::ReportFormat::Markdown);
            out["curve_csv"] =
                report.curve ? experiments::curve_to_csv(*report.curve) : std::string();
            return out;
        },
        py::arg("jsonl"), py::arg("budget") = 15,
        "Recomputes accuracy, confusion, and iteration-curve reports from transcripts.");
    m.def("schema_version", [] { return experiments::kTranscriptSchemaVersion; });
}

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "itercheck/coloring/coloring.hpp"
#include "itercheck/experiments/metrics.hpp"
#include "itercheck/experiments/runner.hpp"
#include "itercheck/experiments/transcripts.hpp"
#include "itercheck/game24/game24.hpp"
#include "itercheck/strips/blocksworld.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace itercheck;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

void print_summary(const experiments::SuiteResult& result) {
    std::cout << result.transcripts.size() << " transcripts";
    if (!result.failed_instances.empty())
        std::cout << " (" << result.failed_instances.size() << " failed)";
    std::cout << "\n";
    for (const auto& row : result.report.accuracy)
        std::cout << row.label << ": "
                  << experiments::format_rate(row.correct, row.total) << "\n";
    for (const auto& id : result.failed_instances) std::cout << "failed: " << id << "\n";
}

int cmd_gen_instances(const std::string& domain, int count, std::uint64_t seed,
                      const std::string& out, int blocks_min, int blocks_max, bool mystery) {
    std::mt19937_64 rng(seed);
    if (domain == "game24") {
        std::uniform_int_distribution<int> pick(1, 12);
        std::set<std::array<int, 4>> seen;
        std::vector<game24::G24Instance> instances;
        while (static_cast<int>(instances.size()) < count) {
            game24::G24Instance inst;
            for (int& v : inst.numbers) v = pick(rng);
            auto key = inst.numbers;
            std::sort(key.begin(), key.end());
            if (seen.count(key)) continue;
            if (!game24::solve_brute_force(inst)) continue;
            seen.insert(key);
            instances.push_back(inst);
        }
        write_file(out, game24::instances_to_text(instances));
    } else if (domain == "coloring") {
        coloring::InstanceGenerator gen({}, seed);
        std::string text;
        for (int i = 0; i < count; ++i) {
            if (i) text += "\n";
            text += coloring::to_dimacs(gen.next());
        }
        write_file(out, text);
    } else if (domain == "strips") {
        std::filesystem::create_directories(out);
        std::filesystem::path dir(out);
        strips::DomainDef domain_def = strips::blocksworld_domain();
        strips::ObfuscationMap map;
        if (mystery) {
            map = strips::mystery_map();
            strips::check_map(map, domain_def);
            write_file((dir / "map.json").string(), strips::obfuscation_map_to_json(map));
        }
        std::uniform_int_distribution<int> pick(blocks_min, blocks_max);
        std::vector<std::string> problems;
        for (int i = 0; i < count; ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "bw-%03d", i + 1);
            strips::ProblemDef problem =
                strips::random_blocksworld_problem(pick(rng), rng, name);
            strips::DomainDef d = domain_def;
            if (mystery) std::tie(d, problem) = strips::obfuscate(domain_def, problem, map);
            char fname[32];
            std::snprintf(fname, sizeof(fname), "p%03d.pddl", i + 1);
            write_file((dir / fname).string(), strips::render_problem(problem, d));
            if (i == 0)
                write_file((dir / "domain.pddl").string(), strips::render_domain(d));
        }
    } else {
        std::cerr << "unknown domain: " << domain << "\n";
        return 1;
    }
    return 0;
}

int cmd_metrics(const std::string& transcripts_path, int budget, const std::string& out) {
    auto transcripts = experiments::load_jsonl(transcripts_path);
    auto report = experiments::report_from_transcripts(transcripts, budget);
    report.provenance = {
        {"schema_version", std::to_string(experiments::kTranscriptSchemaVersion)},
        {"source", std::filesystem::path(transcripts_path).filename().string()},
        {"budget", std::to_string(budget)}};
    if (out.empty()) {
        std::cout << experiments::render_report(report, experiments::ReportFormat::Csv);
        return 0;
    }
    std::filesystem::create_directories(out);
    std::filesystem::path dir(out);
    experiments::emit_report(report, experiments::ReportFormat::Csv,
                             (dir / "report.csv").string());
    experiments::emit_report(report, experiments::ReportFormat::Markdown,
                             (dir / "report.md").string());
    if (report.curve)
        write_file((dir / "curve.csv").string(), experiments::curve_to_csv(*report.curve));
    return 0;
}

int cmd_critique_eval(const std::string& cases_path, const std::string& out) {
    std::istringstream in(read_file(cases_path));
    std::string line;
    std::string results;
    int total = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json c = json::parse(line);
        std::string kind = c.at("kind").get<std::string>();
        json r;
        r["kind"] = kind;
        if (c.contains("id")) r["id"] = c.at("id");
        if (kind == "coloring_critique") {
            auto instance = coloring::from_dimacs(c.at("dimacs").get<std::string>());
            auto candidate =
                coloring::parse_coloring(c.at("coloring").get<std::string>(), instance.graph.n);
            if (!candidate) throw std::runtime_error("unparseable coloring in " + line);
            auto claims = coloring::parse_llm_critique(c.at("critique").get<std::string>());
            auto cls = coloring::classify_critique(instance, *candidate, claims);
            r["label"] = coloring::to_string(cls.instance_label);
            r["claims"] = claims.size();
            r["parse_failure"] = cls.parse_failure;
        } else if (kind == "plan_critique") {
            strips::DomainDef domain = c.contains("domain")
                                           ? strips::parse_domain(c.at("domain").get<std::string>())
                                           : strips::blocksworld_domain();
            auto problem = strips::parse_problem(c.at("problem").get<std::string>(), domain);
            auto plan = strips::parse_plan(c.at("plan").get<std::string>(), domain, problem);
            auto sim = strips::simulate(domain, problem, plan, strips::FaultPolicy::Halt);
            auto score =
                strips::score_llm_plan_critique(sim.faults, c.at("critique").get<std::string>());
            r["binary_ok"] = score.binary_ok;
            r["type_ok"] = score.type_ok;
            r["critique_ok"] = score.critique_ok;
            r["parse_failure"] = score.parse_failure;
        } else if (kind == "expression_suite") {
            game24::G24Instance inst;
            auto numbers = c.at("numbers").get<std::vector<int>>();
            if (numbers.size() != 4) throw std::runtime_error("need four numbers");
            std::copy(numbers.begin(), numbers.end(), inst.numbers.begin());
            auto solution = game24::solve_brute_force(inst);
            if (!solution) throw std::runtime_error("unsolvable instance in " + line);
            std::mt19937_64 rng(c.value("seed", std::uint64_t{0}));
            auto suite = game24::generate_expression_suite(inst, *solution, rng);
            auto accepted = [&](const game24::ExprPtr& e) {
                return game24::verify_expression(inst, game24::render(*e)).accepted;
            };
            r["correct_accepted"] = accepted(suite.correct);
            r["ablated_op_accepted"] = accepted(suite.ablated_op);
            r["ablated_number_accepted"] = accepted(suite.ablated_number);
            r["random_accepted"] = accepted(suite.random);
        } else {
            throw std::runtime_error("unknown case kind: " + kind);
        }
        results += r.dump();
        results += '\n';
        ++total;
    }
    if (out.empty())
        std::cout << results;
    else
        write_file(out, results);
    std::cerr << total << " cases evaluated\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generate-verify-critique experiment harness"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen-instances", "write domain instance files");
    std::string gen_domain, gen_out;
    int gen_count = 100, blocks_min = 3, blocks_max = 5;
    std::uint64_t gen_seed = 0;
    bool mystery = false;
    gen->add_option("--domain", gen_domain, "game24|coloring|strips")->required();
    gen->add_option("--count", gen_count, "instances to generate");
    gen->add_option("--seed", gen_seed, "rng seed");
    gen->add_option("--out", gen_out, "output file (game24, coloring) or directory (strips)")
        ->required();
    gen->add_option("--blocks-min", blocks_min, "strips: min blocks");
    gen->add_option("--blocks-max", blocks_max, "strips: max blocks");
    gen->add_flag("--mystery", mystery, "strips: obfuscate names");

    auto* run = app.add_subcommand("run", "execute a run config");
    std::string run_config;
    run->add_option("--config", run_config, "RunConfig json file")->required();

    auto* metrics = app.add_subcommand("metrics", "recompute reports from transcripts");
    std::string metrics_in, metrics_out;
    int metrics_budget = 15;
    metrics->add_option("--transcripts", metrics_in, "transcripts.jsonl")->required();
    metrics->add_option("--budget", metrics_budget, "round budget for the iteration curve");
    metrics->add_option("--out", metrics_out, "output directory (default: csv to stdout)");

    auto* replay = app.add_subcommand("replay", "re-execute a run from recorded responses");
    std::string replay_config, replay_records, replay_out;
    replay->add_option("--config", replay_config, "RunConfig json file")->required();
    replay->add_option("--records", replay_records, "records directory override");
    replay->add_option("--out", replay_out, "output directory override");

    auto* critique = app.add_subcommand("critique-eval", "run the critique scoring suites");
    std::string critique_cases, critique_out;
    critique->add_option("--cases", critique_cases, "jsonl case file")->required();
    critique->add_option("--out", critique_out, "results jsonl (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen_instances(gen_domain, gen_count, gen_seed, gen_out, blocks_min,
                                     blocks_max, mystery);
        if (run->parsed()) {
            auto config = experiments::RunConfig::from_json_file(run_config);
            print_summary(experiments::run_suite(config));
            return 0;
        }
        if (metrics->parsed()) return cmd_metrics(metrics_in, metrics_budget, metrics_out);
        if (replay->parsed()) {
            auto config = experiments::RunConfig::from_json_file(replay_config);
            config.generator = experiments::GeneratorRoleKind::Replay;
            config.record = false;
            if (!replay_records.empty()) config.records_dir = replay_records;
            if (!replay_out.empty()) config.output_dir = replay_out;
            print_summary(experiments::run_suite(config));
            return 0;
        }
        if (critique->parsed()) return cmd_critique_eval(critique_cases, critique_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

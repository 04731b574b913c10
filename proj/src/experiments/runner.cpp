#include "itercheck/experiments/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "itercheck/coloring/coloring.hpp"
#include "itercheck/experiments/transcripts.hpp"
#include "itercheck/game24/game24.hpp"
#include "itercheck/strips/blocksworld.hpp"

namespace itercheck::experiments {

using json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Strategy strategy_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "standard") return Strategy::standard();
    if (kind == "self_critique")
        return Strategy::self_critique(j.value("max_rounds", 15));
    if (kind == "sound_critique")
        return Strategy::sound_critique(
            feedback_level_from_string(j.value("level", std::string("first_error"))),
            j.value("max_rounds", 15));
    if (kind == "sampling") return Strategy::sampling(j.value("k", 15));
    if (kind == "self_consistency") return Strategy::self_consistency(j.value("k", 15));
    throw std::invalid_argument("unknown strategy kind: " + kind);
}

json strategy_to_json(const Strategy& s) {
    json j;
    j["kind"] = to_string(s.kind);
    switch (s.kind) {
        case StrategyKind::Standard: break;
        case StrategyKind::SelfCritique: j["max_rounds"] = s.max_rounds; break;
        case StrategyKind::SoundCritique:
            j["level"] = to_string(s.level);
            j["max_rounds"] = s.max_rounds;
            break;
        case StrategyKind::Sampling:
        case StrategyKind::SelfConsistency: j["k"] = s.k; break;
    }
    return j;
}

std::string role_name(GeneratorRoleKind kind) {
    switch (kind) {
        case GeneratorRoleKind::Scripted: return "scripted";
        case GeneratorRoleKind::Replay: return "replay";
        case GeneratorRoleKind::Live: return "live";
    }
    throw std::logic_error("bad GeneratorRoleKind");
}

GeneratorRoleKind role_from_name(const std::string& s) {
    if (s == "scripted") return GeneratorRoleKind::Scripted;
    if (s == "replay") return GeneratorRoleKind::Replay;
    if (s == "live") return GeneratorRoleKind::Live;
    throw std::invalid_argument("unknown generator role: " + s);
}

}  // namespace

RunConfig RunConfig::from_json(const std::string& text) {
    json j = json::parse(text);
    RunConfig c;
    c.domain = domain_tag_from_string(j.at("domain").get<std::string>());
    c.strategy = strategy_from_json(j.at("strategy"));
    c.instances_path = j.at("instances_path").get<std::string>();
    c.strips_domain_path = j.value("strips_domain_path", std::string());
    c.select_begin = j.value("select_begin", 0);
    c.select_end = j.value("select_end", -1);
    c.template_set_id = j.value("template_set_id", std::string("default"));
    c.templates_dir = j.value("templates_dir", std::string());
    c.generator = role_from_name(j.value("generator", std::string("scripted")));
    c.scripts_path = j.value("scripts_path", std::string());
    c.records_dir = j.value("records_dir", std::string());
    c.record = j.value("record", false);
    if (j.contains("endpoint")) {
        const json& e = j.at("endpoint");
        c.endpoint.base_url = e.value("base_url", std::string());
        c.endpoint.model_name = e.value("model_name", std::string());
        c.endpoint.temperature = e.value("temperature", 1.0);
        c.endpoint.max_output_tokens = e.value("max_output_tokens", 1024);
        c.endpoint.api_key_env = e.value("api_key_env", std::string("ITERCHECK_API_KEY"));
        c.endpoint.request_timeout_seconds = e.value("request_timeout_seconds", 120);
        c.endpoint.max_retries = e.value("max_retries", 5);
        c.endpoint.max_concurrent_requests = e.value("max_concurrent_requests", 4);
        c.endpoint.requests_per_minute = e.value("requests_per_minute", 60);
    }
    c.llm_verifier = j.value("llm_verifier", false);
    c.verify_slot = j.value("verify_slot", std::string("verify_direct"));
    c.seed = j.value("seed", std::uint64_t{0});
    c.output_dir = j.value("output_dir", std::string());
    c.concurrency = j.value("concurrency", 4);
    if (c.concurrency < 1) throw std::invalid_argument("concurrency must be >= 1");
    return c;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    return from_json(read_file(path));
}

std::string RunConfig::to_json() const {
    json j;
    j["domain"] = to_string(domain);
    j["strategy"] = strategy_to_json(strategy);
    j["instances_path"] = instances_path;
    j["strips_domain_path"] = strips_domain_path;
    j["select_begin"] = select_begin;
    j["select_end"] = select_end;
    j["template_set_id"] = template_set_id;
    j["templates_dir"] = templates_dir;
    j["generator"] = role_name(generator);
    j["scripts_path"] = scripts_path;
    j["records_dir"] = records_dir;
    j["record"] = record;
    j["endpoint"] = {{"base_url", endpoint.base_url},
                     {"model_name", endpoint.model_name},
                     {"temperature", endpoint.temperature},
                     {"max_output_tokens", endpoint.max_output_tokens},
                     {"api_key_env", endpoint.api_key_env},
                     {"request_timeout_seconds", endpoint.request_timeout_seconds},
                     {"max_retries", endpoint.max_retries},
                     {"max_concurrent_requests", endpoint.max_concurrent_requests},
                     {"requests_per_minute", endpoint.requests_per_minute}};
    j["llm_verifier"] = llm_verifier;
    j["verify_slot"] = verify_slot;
    j["seed"] = seed;
    j["output_dir"] = output_dir;
    j["concurrency"] = concurrency;
    return j.dump(2);
}

std::string RunConfig::config_hash() const { return gateway::sha256_hex(to_json()); }

std::vector<ProblemInstance> load_problems(const RunConfig& config) {
    std::vector<ProblemInstance> all;
    switch (config.domain) {
        case DomainTag::Game24: {
            auto instances = game24::load_instances(config.instances_path);
            for (std::size_t i = 0; i < instances.size(); ++i)
                all.push_back(game24::make_problem(
                    instances[i], "game24-" + std::to_string(i + 1)));
            break;
        }
        case DomainTag::Coloring: {
            auto instances = coloring::load_instances(config.instances_path);
            for (std::size_t i = 0; i < instances.size(); ++i)
                all.push_back(coloring::make_problem(
                    instances[i], "coloring-" + std::to_string(i + 1)));
            break;
        }
        case DomainTag::Strips: {
            if (config.strips_domain_path.empty())
                throw std::invalid_argument("strips runs need strips_domain_path");
            auto tasks =
                strips::load_instances(config.instances_path, config.strips_domain_path);
            for (std::size_t i = 0; i < tasks.size(); ++i)
                all.push_back(
                    strips::make_problem(tasks[i], "strips-" + std::to_string(i + 1)));
            break;
        }
    }
    int end = config.select_end < 0
                  ? static_cast<int>(all.size())
                  : std::min(config.select_end, static_cast<int>(all.size()));
    int begin = std::max(0, config.select_begin);
    if (begin > end) throw std::invalid_argument("empty instance selection");
    return {all.begin() + begin, all.begin() + end};
}

void backfill_ground_truth(Transcript& transcript, const ProblemInstance& instance) {
    const DomainAdapter& adapter = adapter_for(instance.domain_tag);
    for (Round& round : transcript.rounds)
        round.ground_truth_correct = adapter.ground_truth_correct(instance, round.response);
    transcript.ground_truth_correct =
        transcript.final_answer &&
        adapter.ground_truth_correct(instance, transcript.final_answer->raw_text);
}

namespace {

std::map<std::string, std::vector<std::string>> load_scripts(const std::string& path) {
    json j = json::parse(read_file(path));
    std::map<std::string, std::vector<std::string>> scripts;
    for (const auto& [id, responses] : j.items())
        scripts[id] = responses.get<std::vector<std::string>>();
    return scripts;
}

gateway::GeneratorBook make_book(const RunConfig& config,
                                 const std::vector<ProblemInstance>& problems) {
    switch (config.generator) {
        case GeneratorRoleKind::Scripted:
            return gateway::GeneratorBook::scripted(load_scripts(config.scripts_path));
        case GeneratorRoleKind::Replay: {
            std::map<std::string, std::shared_ptr<const gateway::RecordStore>> stores;
            for (const ProblemInstance& p : problems) {
                auto path = std::filesystem::path(config.records_dir) / (p.id + ".jsonl");
                stores[p.id] = std::make_shared<const gateway::RecordStore>(
                    gateway::RecordStore::load(path.string()));
            }
            return gateway::GeneratorBook::replay(std::move(stores));
        }
        case GeneratorRoleKind::Live: {
            const char* key = std::getenv(config.endpoint.api_key_env.c_str());
            if (!key || !*key)
                throw std::runtime_error("live runs need the API key in $" +
                                         config.endpoint.api_key_env);
            return gateway::GeneratorBook::live(config.endpoint);
        }
    }
    throw std::logic_error("bad GeneratorRoleKind");
}

}  // namespace

SuiteResult run_suite(const RunConfig& config) {
    std::vector<ProblemInstance> problems = load_problems(config);
    gateway::GeneratorBook book = make_book(config, problems);
    auto record_sink =
        std::make_shared<std::map<std::string, std::shared_ptr<gateway::RecordStore>>>();
    if (config.record) book.enable_recording(record_sink);

    LoopConfig loop_config;
    if (!config.templates_dir.empty())
        loop_config.templates =
            TemplateSet::load(config.templates_dir, config.template_set_id);

    VerifierRole verifier;
    verifier.verify_slot = config.verify_slot;

    SuiteResult result;
    result.transcripts.resize(problems.size());
    std::vector<char> failed(problems.size(), 0);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= problems.size()) return;
            const ProblemInstance& problem = problems[i];
            try {
                auto generator = book.for_instance(problem.id);
                VerifierRole role = verifier;
                if (config.llm_verifier) role.llm = generator;
                Transcript t =
                    run_instance(config.strategy, problem, *generator, role, loop_config);
                backfill_ground_truth(t, problem);
                result.transcripts[i] = std::move(t);
            } catch (const std::exception&) {
                failed[i] = 1;
                Transcript t;
                t.instance_id = problem.id;
                t.strategy = config.strategy.name();
                t.stop_reason = StopReason::GeneratorError;
                result.transcripts[i] = std::move(t);
            }
        }
    };
    int threads = std::max(1, std::min(config.concurrency, static_cast<int>(problems.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (std::size_t i = 0; i < problems.size(); ++i)
        if (failed[i]) result.failed_instances.push_back(problems[i].id);

    result.report = report_from_transcripts(result.transcripts, config.strategy.budget());
    result.report.provenance = {{"schema_version", std::to_string(kTranscriptSchemaVersion)},
                                {"config_sha256", config.config_hash()},
                                {"template_set", config.template_set_id},
                                {"seed", std::to_string(config.seed)},
                                {"token_counts",
                                 config.generator == GeneratorRoleKind::Live
                                     ? "endpoint-reported"
                                     : "approximate (offline tokenizer)"}};

    if (!config.output_dir.empty()) {
        std::filesystem::create_directories(config.output_dir);
        std::filesystem::path out(config.output_dir);
        save_jsonl(result.transcripts, (out / "transcripts.jsonl").string());
        emit_report(result.report, ReportFormat::Csv, (out / "report.csv").string());
        emit_report(result.report, ReportFormat::Markdown, (out / "report.md").string());
        if (result.report.curve) {
            std::ofstream curve_out(out / "curve.csv", std::ios::binary);
            curve_out << curve_to_csv(*result.report.curve);
        }
        if (config.record) {
            std::filesystem::path records =
                config.records_dir.empty() ? out / "records"
                                           : std::filesystem::path(config.records_dir);
            std::filesystem::create_directories(records);
            for (const auto& [id, store] : *record_sink)
                store->save((records / (id + ".jsonl")).string());
        }
    }
    return result;
}

}  // namespace itercheck::experiments

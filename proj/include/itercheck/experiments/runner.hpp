#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "itercheck/core/loop.hpp"
#include "itercheck/core/types.hpp"
#include "itercheck/experiments/metrics.hpp"
#include "itercheck/gateway/gateway.hpp"

namespace itercheck::experiments {

enum class GeneratorRoleKind { Scripted, Replay, Live };

struct RunConfig {
    DomainTag domain = DomainTag::Game24;
    Strategy strategy = Strategy::sound_critique(FeedbackLevel::FirstError);

    std::string instances_path;
    std::string strips_domain_path;  // required for the strips domain
    int select_begin = 0;            // [begin, end) over loaded instances
    int select_end = -1;             // -1 => through the last instance

    std::string template_set_id = "default";
    std::string templates_dir;  // empty => embedded defaults

    GeneratorRoleKind generator = GeneratorRoleKind::Scripted;
    std::string scripts_path;  // JSON object: instance id -> response list
    std::string records_dir;   // replay source; also recording target
    bool record = false;
    gateway::EndpointConfig endpoint;

    bool llm_verifier = false;  // false => sound verifier
    std::string verify_slot = "verify_direct";

    std::uint64_t seed = 0;
    std::string output_dir;
    int concurrency = 4;

    static RunConfig from_json(const std::string& text);
    static RunConfig from_json_file(const std::string& path);
    std::string to_json() const;
    std::string config_hash() const;  // sha256 of the canonical json form
};

// Instance selection resolved against the config's paths.
std::vector<ProblemInstance> load_problems(const RunConfig& config);

// Recomputes per-round and final correctness with the sound checker.
void backfill_ground_truth(Transcript& transcript, const ProblemInstance& instance);

struct SuiteResult {
    std::vector<Transcript> transcripts;       // instance order preserved
    std::vector<std::string> failed_instances;  // ids whose loop threw
    MetricsReport report;
};

// Executes the configured strategy over the instance selection with a
// bounded worker pool, persists transcripts and reports under output_dir
// (when set), and backfills ground truth before computing metrics.
SuiteResult run_suite(const RunConfig& config);

}  // namespace itercheck::experiments

#pragma once

#include <string>

#include "itercheck/core/domains.hpp"
#include "itercheck/core/templates.hpp"
#include "itercheck/core/types.hpp"
#include "itercheck/gateway/gateway.hpp"

namespace itercheck {

// The verifier/critic side of the loop: either the domain's sound verifier
// or an LLM queried with a verification template. The LLM verifier sees
// only the candidate, not the generation history.
struct VerifierRole {
    gateway::GeneratorPtr llm;  // null => sound verifier
    std::string verify_slot = "verify_direct";  // verify_direct | verify_cot | verify_swapped
};

struct LoopConfig {
    TemplateSet templates = TemplateSet::builtin_default();
};

// Lenient accept/reject extraction from an LLM verification response.
// Unparseable responses count as rejection.
bool llm_verdict_accepts(const std::string& response, bool* parsed = nullptr);

// Deterministic backprompt assembly: base prompt, every prior answer with
// its feedback in order, the most recent answer, then the new critique
// wrapped in instruction text.
std::string build_backprompt(const TemplateSet& templates, DomainTag domain,
                             const std::string& instance_text, const Transcript& history,
                             const Critique& critique);

// The iterative generate-verify-critique loop. Covers Standard (one shot,
// no verification query), SelfCritique (LLM verifier) and SoundCritique.
Transcript run_instance(const Strategy& strategy, const ProblemInstance& instance,
                        gateway::Generator& generator, const VerifierRole& verifier,
                        const LoopConfig& config = {});

// Identical base prompt up to k times, stopping at the first sound-verifier
// acceptance; no history, no critique.
Transcript run_sampling(int k, const ProblemInstance& instance, gateway::Generator& generator,
                        const LoopConfig& config = {});

// k independent samples; returns the modal canonical answer, ties broken by
// earliest first occurrence. If no sample parses, the first raw sample is
// returned unparsed.
Candidate run_self_consistency(int k, const ProblemInstance& instance,
                               gateway::Generator& generator, const LoopConfig& config = {});

// Same, but with the full exchange record for persistence.
Transcript run_self_consistency_transcript(int k, const ProblemInstance& instance,
                                           gateway::Generator& generator,
                                           const LoopConfig& config = {});

}  // namespace itercheck

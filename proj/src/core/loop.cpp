#include "itercheck/core/loop.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <stdexcept>

namespace itercheck {

bool llm_verdict_accepts(const std::string& response, bool* parsed) {
    // Marker phrase requested by the verification templates, with fallbacks
    // for free-form phrasing. Negative forms must win over their substrings.
    static const std::regex verdict_re(
        R"(verdict\s*:\s*(correct|incorrect|valid|invalid))", std::regex::icase);
    std::smatch m;
    if (std::regex_search(response, m, verdict_re)) {
        if (parsed) *parsed = true;
        std::string v = m[1];
        std::transform(v.begin(), v.end(), v.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        return v == "correct" || v == "valid";
    }
    static const std::regex negative_re(
        R"(\b(incorrect|invalid|not\s+correct|not\s+valid|wrong)\b)", std::regex::icase);
    static const std::regex positive_re(R"(\b(correct|valid)\b)", std::regex::icase);
    if (std::regex_search(response, negative_re)) {
        if (parsed) *parsed = true;
        return false;
    }
    if (std::regex_search(response, positive_re)) {
        if (parsed) *parsed = true;
        return true;
    }
    if (parsed) *parsed = false;
    return false;  // conservative default: unparseable counts as rejection
}

std::string build_backprompt(const TemplateSet& templates, DomainTag domain,
                             const std::string& instance_text, const Transcript& history,
                             const Critique& critique) {
    std::string prompt =
        templates.render(domain, "generate", {{"instance", instance_text}});
    prompt += "\n";
    for (std::size_t i = 0; i + 1 < history.rounds.size(); ++i) {
        const Round& r = history.rounds[i];
        std::string feedback = "Your answer was rejected.";
        if (r.verdict && r.verdict->critique) feedback = r.verdict->critique->rendered;
        prompt += templates.render(domain, "history_item",
                                   {{"answer", r.response}, {"feedback", feedback}});
    }
    if (!history.rounds.empty()) {
        prompt += templates.render(domain, "last_answer",
                                   {{"answer", history.rounds.back().response}});
    }
    prompt += templates.render(domain, "critique_wrap", {{"critique", critique.rendered}});
    return prompt;
}

namespace {

Candidate make_candidate(const DomainAdapter& adapter, const ProblemInstance& instance,
                         const std::string& response, int round_index) {
    Candidate c;
    c.raw_text = response;
    c.parsed_canonical = adapter.canonical(instance, response);
    c.round_index = round_index;
    return c;
}

Verdict llm_verify(const ProblemInstance& instance, const DomainAdapter& adapter,
                   const VerifierRole& verifier, const TemplateSet& templates,
                   const std::string& candidate_text) {
    std::string prompt = templates.render(
        instance.domain_tag, verifier.verify_slot,
        {{"instance", adapter.describe(instance)}, {"candidate", candidate_text}});
    gateway::Completion completion = verifier.llm->complete(prompt);
    Verdict v;
    v.source = VerdictSource::LlmVerifier;
    v.accepted = llm_verdict_accepts(completion.text);
    if (!v.accepted) {
        Critique c;
        c.level = FeedbackLevel::Binary;
        c.rendered = completion.text;  // the LLM's critique, passed on verbatim
        v.critique = c;
    }
    return v;
}

}  // namespace

Transcript run_instance(const Strategy& strategy, const ProblemInstance& instance,
                        gateway::Generator& generator, const VerifierRole& verifier,
                        const LoopConfig& config) {
    const DomainAdapter& adapter = adapter_for(instance.domain_tag);
    if (!adapter.well_formed(instance))
        throw std::invalid_argument("malformed instance " + instance.id);
    if (strategy.kind == StrategyKind::SoundCritique && !adapter.supports_level(strategy.level))
        throw std::invalid_argument("feedback level " + to_string(strategy.level) +
                                    " is not supported for " + to_string(instance.domain_tag));
    if (strategy.kind == StrategyKind::Sampling) {
        if (verifier.llm) throw std::invalid_argument("sampling requires the sound verifier");
        return run_sampling(strategy.k, instance, generator, config);
    }
    if (strategy.kind == StrategyKind::SelfConsistency)
        return run_self_consistency_transcript(strategy.k, instance, generator, config);

    Transcript t;
    t.instance_id = instance.id;
    t.strategy = strategy.name();

    std::string instance_text = adapter.describe(instance);
    std::string prompt = config.templates.render(instance.domain_tag, "generate",
                                                 {{"instance", instance_text}});
    int budget = strategy.budget();
    for (int round_index = 1; round_index <= budget; ++round_index) {
        Round round;
        round.prompt = prompt;
        gateway::Completion completion;
        try {
            completion = generator.complete(prompt);
        } catch (const std::exception&) {
            t.stop_reason = StopReason::GeneratorError;
            return t;
        }
        round.response = completion.text;
        round.prompt_tokens = completion.prompt_tokens;
        round.response_tokens = completion.response_tokens;

        if (strategy.kind == StrategyKind::Standard) {
            // Single shot; no verification query, scored externally.
            t.rounds.push_back(std::move(round));
            t.final_answer = make_candidate(adapter, instance, completion.text, round_index);
            t.stop_reason = StopReason::Timeout;
            return t;
        }

        Verdict verdict;
        if (verifier.llm) {
            try {
                verdict = llm_verify(instance, adapter, verifier, config.templates,
                                     completion.text);
            } catch (const std::exception&) {
                t.rounds.push_back(std::move(round));
                t.stop_reason = StopReason::GeneratorError;
                return t;
            }
        } else {
            verdict = adapter.sound_verdict(instance, completion.text, strategy.level);
        }
        round.verdict = verdict;
        t.rounds.push_back(std::move(round));

        if (verdict.accepted) {
            t.final_answer = make_candidate(adapter, instance, completion.text, round_index);
            t.stop_reason = StopReason::VerifierAccepted;
            return t;
        }
        if (round_index == budget) break;
        prompt = build_backprompt(config.templates, instance.domain_tag, instance_text, t,
                                  *verdict.critique);
    }
    t.final_answer =
        make_candidate(adapter, instance, t.rounds.back().response,
                       static_cast<int>(t.rounds.size()));
    t.stop_reason = StopReason::Timeout;
    return t;
}

Transcript run_sampling(int k, const ProblemInstance& instance, gateway::Generator& generator,
                        const LoopConfig& config) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const DomainAdapter& adapter = adapter_for(instance.domain_tag);
    Transcript t;
    t.instance_id = instance.id;
    t.strategy = Strategy::sampling(k).name();

    // The identical base prompt every round: no history, constant size.
    std::string prompt = config.templates.render(instance.domain_tag, "generate",
                                                 {{"instance", adapter.describe(instance)}});
    for (int round_index = 1; round_index <= k; ++round_index) {
        Round round;
        round.prompt = prompt;
        gateway::Completion completion;
        try {
            completion = generator.complete(prompt);
        } catch (const std::exception&) {
            t.stop_reason = StopReason::GeneratorError;
            return t;
        }
        round.response = completion.text;
        round.prompt_tokens = completion.prompt_tokens;
        round.response_tokens = completion.response_tokens;
        Verdict verdict =
            adapter.sound_verdict(instance, completion.text, FeedbackLevel::Binary);
        round.verdict = verdict;
        t.rounds.push_back(std::move(round));
        if (verdict.accepted) {
            t.final_answer = make_candidate(adapter, instance, completion.text, round_index);
            t.stop_reason = StopReason::VerifierAccepted;
            return t;
        }
    }
    t.final_answer = make_candidate(adapter, instance, t.rounds.back().response,
                                    static_cast<int>(t.rounds.size()));
    t.stop_reason = StopReason::Timeout;
    return t;
}

Transcript run_self_consistency_transcript(int k, const ProblemInstance& instance,
                                           gateway::Generator& generator,
                                           const LoopConfig& config) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const DomainAdapter& adapter = adapter_for(instance.domain_tag);
    Transcript t;
    t.instance_id = instance.id;
    t.strategy = Strategy::self_consistency(k).name();

    std::string prompt = config.templates.render(instance.domain_tag, "generate",
                                                 {{"instance", adapter.describe(instance)}});
    std::vector<Candidate> candidates;
    for (int round_index = 1; round_index <= k; ++round_index) {
        Round round;
        round.prompt = prompt;
        gateway::Completion completion;
        try {
            completion = generator.complete(prompt);
        } catch (const std::exception&) {
            t.stop_reason = StopReason::GeneratorError;
            return t;
        }
        round.response = completion.text;
        round.prompt_tokens = completion.prompt_tokens;
        round.response_tokens = completion.response_tokens;
        t.rounds.push_back(std::move(round));
        candidates.push_back(make_candidate(adapter, instance, completion.text, round_index));
    }

    // Modal canonical answer; ties break to the earliest first occurrence.
    std::map<std::string, int> counts;
    std::map<std::string, int> first_seen;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!candidates[i].parsed_canonical) continue;
        const std::string& key = *candidates[i].parsed_canonical;
        ++counts[key];
        if (!first_seen.count(key)) first_seen[key] = static_cast<int>(i);
    }
    if (counts.empty()) {
        t.final_answer = candidates.front();  // unparsed, by construction
    } else {
        std::string best;
        int best_count = -1;
        for (const auto& [key, count] : counts) {
            if (count > best_count ||
                (count == best_count && first_seen[key] < first_seen[best])) {
                best = key;
                best_count = count;
            }
        }
        t.final_answer = candidates[first_seen[best]];
    }
    t.stop_reason = StopReason::Timeout;  // round budget exhausted by design
    return t;
}

Candidate run_self_consistency(int k, const ProblemInstance& instance,
                               gateway::Generator& generator, const LoopConfig& config) {
    Transcript t = run_self_consistency_transcript(k, instance, generator, config);
    if (!t.final_answer) throw std::runtime_error("self-consistency produced no samples");
    return *t.final_answer;
}

}  // namespace itercheck

#pragma once

#include <any>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace itercheck {

enum class DomainTag { Game24, Coloring, Strips };

std::string to_string(DomainTag tag);
DomainTag domain_tag_from_string(const std::string& s);

// A domain-tagged task. The payload is owned by the matching domain module
// (game24::G24Instance, coloring::ColoringInstance, strips::PlanningTask).
struct ProblemInstance {
    std::string id;
    DomainTag domain_tag = DomainTag::Game24;
    std::any payload;
};

// One generator output. parsed_canonical is present iff the domain parser
// accepted raw_text; it holds the domain's canonical rendering of the answer.
struct Candidate {
    std::string raw_text;
    std::optional<std::string> parsed_canonical;
    int round_index = 1;
};

enum class FeedbackLevel { Binary, FirstError, AllErrors };

std::string to_string(FeedbackLevel level);
FeedbackLevel feedback_level_from_string(const std::string& s);

struct Critique {
    FeedbackLevel level = FeedbackLevel::Binary;
    std::vector<std::string> items;  // empty for Binary; |items| <= 1 for FirstError
    std::string rendered;            // text inserted into the backprompt
};

enum class VerdictSource { SoundVerifier, LlmVerifier };

struct Verdict {
    bool accepted = false;
    std::optional<Critique> critique;  // absent when accepted
    VerdictSource source = VerdictSource::SoundVerifier;
};

enum class StrategyKind { Standard, SelfCritique, SoundCritique, Sampling, SelfConsistency };

std::string to_string(StrategyKind kind);

struct Strategy {
    StrategyKind kind = StrategyKind::Standard;
    int max_rounds = 15;                            // SelfCritique / SoundCritique
    int k = 15;                                     // Sampling / SelfConsistency
    FeedbackLevel level = FeedbackLevel::FirstError;  // SoundCritique

    static Strategy standard() { return {StrategyKind::Standard}; }
    static Strategy self_critique(int max_rounds = 15) {
        Strategy s{StrategyKind::SelfCritique};
        s.max_rounds = max_rounds;
        return s;
    }
    static Strategy sound_critique(FeedbackLevel level, int max_rounds = 15) {
        Strategy s{StrategyKind::SoundCritique};
        s.level = level;
        s.max_rounds = max_rounds;
        return s;
    }
    static Strategy sampling(int k = 15) {
        Strategy s{StrategyKind::Sampling};
        s.k = k;
        return s;
    }
    static Strategy self_consistency(int k = 15) {
        Strategy s{StrategyKind::SelfConsistency};
        s.k = k;
        return s;
    }

    // Round budget actually in force for this strategy.
    int budget() const;
    std::string name() const;
};

struct Round {
    std::string prompt;
    std::string response;
    std::optional<Verdict> verdict;  // absent only for Standard's single shot
    std::int64_t prompt_tokens = 0;
    std::int64_t response_tokens = 0;
    // Sound-checker correctness of this round's answer, backfilled post hoc
    // so metrics recomputed from persisted transcripts lose nothing.
    std::optional<bool> ground_truth_correct;
};

enum class StopReason { VerifierAccepted, Timeout, GeneratorError };

std::string to_string(StopReason reason);
StopReason stop_reason_from_string(const std::string& s);

// Full per-instance interaction history; the unit of persistence and
// metric computation.
struct Transcript {
    std::string instance_id;
    std::string strategy;
    std::vector<Round> rounds;
    std::optional<Candidate> final_answer;
    StopReason stop_reason = StopReason::Timeout;
    bool ground_truth_correct = false;  // filled post hoc by the sound checker
};

}  // namespace itercheck

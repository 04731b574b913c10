#include "itercheck/core/types.hpp"

#include <stdexcept>

namespace itercheck {

std::string to_string(DomainTag tag) {
    switch (tag) {
        case DomainTag::Game24: return "game24";
        case DomainTag::Coloring: return "coloring";
        case DomainTag::Strips: return "strips";
    }
    throw std::logic_error("bad DomainTag");
}

DomainTag domain_tag_from_string(const std::string& s) {
    if (s == "game24") return DomainTag::Game24;
    if (s == "coloring") return DomainTag::Coloring;
    if (s == "strips") return DomainTag::Strips;
    throw std::invalid_argument("unknown domain tag: " + s);
}

std::string to_string(FeedbackLevel level) {
    switch (level) {
        case FeedbackLevel::Binary: return "binary";
        case FeedbackLevel::FirstError: return "first_error";
        case FeedbackLevel::AllErrors: return "all_errors";
    }
    throw std::logic_error("bad FeedbackLevel");
}

FeedbackLevel feedback_level_from_string(const std::string& s) {
    if (s == "binary") return FeedbackLevel::Binary;
    if (s == "first_error") return FeedbackLevel::FirstError;
    if (s == "all_errors") return FeedbackLevel::AllErrors;
    throw std::invalid_argument("unknown feedback level: " + s);
}

std::string to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::Standard: return "standard";
        case StrategyKind::SelfCritique: return "self_critique";
        case StrategyKind::SoundCritique: return "sound_critique";
        case StrategyKind::Sampling: return "sampling";
        case StrategyKind::SelfConsistency: return "self_consistency";
    }
    throw std::logic_error("bad StrategyKind");
}

int Strategy::budget() const {
    switch (kind) {
        case StrategyKind::Standard: return 1;
        case StrategyKind::SelfCritique:
        case StrategyKind::SoundCritique: return max_rounds;
        case StrategyKind::Sampling:
        case StrategyKind::SelfConsistency: return k;
    }
    throw std::logic_error("bad StrategyKind");
}

std::string Strategy::name() const {
    std::string base = to_string(kind);
    switch (kind) {
        case StrategyKind::Standard: return base;
        case StrategyKind::SelfCritique: return base + "/" + std::to_string(max_rounds);
        case StrategyKind::SoundCritique:
            return base + "/" + to_string(level) + "/" + std::to_string(max_rounds);
        case StrategyKind::Sampling:
        case StrategyKind::SelfConsistency: return base + "/k=" + std::to_string(k);
    }
    throw std::logic_error("bad StrategyKind");
}

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::VerifierAccepted: return "verifier_accepted";
        case StopReason::Timeout: return "timeout";
        case StopReason::GeneratorError: return "generator_error";
    }
    throw std::logic_error("bad StopReason");
}

StopReason stop_reason_from_string(const std::string& s) {
    if (s == "verifier_accepted") return StopReason::VerifierAccepted;
    if (s == "timeout") return StopReason::Timeout;
    if (s == "generator_error") return StopReason::GeneratorError;
    throw std::invalid_argument("unknown stop reason: " + s);
}

}  // namespace itercheck

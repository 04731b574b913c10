#pragma once

#include <optional>
#include <string>

#include "itercheck/core/types.hpp"

namespace itercheck {

// Uniform view of a domain module for the harness loop: instance rendering,
// sound verification, canonicalization for self-consistency, and the
// ground-truth check used to backfill transcripts.
class DomainAdapter {
public:
    virtual ~DomainAdapter() = default;
    virtual DomainTag tag() const = 0;

    // Raw instance text inserted into the {instance} placeholder.
    virtual std::string describe(const ProblemInstance& instance) const = 0;

    virtual bool well_formed(const ProblemInstance& instance) const = 0;

    // Sound verifier over a raw LLM response.
    virtual Verdict sound_verdict(const ProblemInstance& instance, const std::string& answer,
                                  FeedbackLevel level) const = 0;

    // Canonical answer form; nullopt when the response does not parse.
    virtual std::optional<std::string> canonical(const ProblemInstance& instance,
                                                 const std::string& answer) const = 0;

    bool ground_truth_correct(const ProblemInstance& instance, const std::string& answer) const {
        return sound_verdict(instance, answer, FeedbackLevel::Binary).accepted;
    }

    // Feedback levels meaningful for this domain.
    virtual bool supports_level(FeedbackLevel level) const { return true; }
};

const DomainAdapter& adapter_for(DomainTag tag);

}  // namespace itercheck

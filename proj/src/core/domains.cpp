#include "itercheck/core/domains.hpp"

#include <any>
#include <stdexcept>

#include "itercheck/coloring/coloring.hpp"
#include "itercheck/game24/game24.hpp"
#include "itercheck/strips/blocksworld.hpp"

namespace itercheck {

namespace {

class Game24Adapter final : public DomainAdapter {
public:
    DomainTag tag() const override { return DomainTag::Game24; }

    std::string describe(const ProblemInstance& instance) const override {
        const auto& inst = payload(instance);
        std::string out;
        for (int i = 0; i < 4; ++i) {
            if (i) out += ' ';
            out += std::to_string(inst.numbers[i]);
        }
        return out;
    }

    bool well_formed(const ProblemInstance& instance) const override {
        return payload(instance).well_formed();
    }

    Verdict sound_verdict(const ProblemInstance& instance, const std::string& answer,
                          FeedbackLevel level) const override {
        if (!supports_level(level))
            throw std::invalid_argument("game24 has no all-errors feedback level");
        return game24::verify_expression(payload(instance), answer, level);
    }

    std::optional<std::string> canonical(const ProblemInstance&,
                                         const std::string& answer) const override {
        return game24::canonical_form(answer);
    }

    bool supports_level(FeedbackLevel level) const override {
        return level != FeedbackLevel::AllErrors;
    }

private:
    static const game24::G24Instance& payload(const ProblemInstance& instance) {
        return std::any_cast<const game24::G24Instance&>(instance.payload);
    }
};

class ColoringAdapter final : public DomainAdapter {
public:
    DomainTag tag() const override { return DomainTag::Coloring; }

    std::string describe(const ProblemInstance& instance) const override {
        return coloring::to_dimacs(payload(instance));
    }

    bool well_formed(const ProblemInstance& instance) const override {
        const auto& inst = payload(instance);
        return inst.graph.n >= 1 && inst.chromatic_number >= 1;
    }

    Verdict sound_verdict(const ProblemInstance& instance, const std::string& answer,
                          FeedbackLevel level) const override {
        const auto& inst = payload(instance);
        auto parsed = coloring::parse_coloring(answer, inst.graph.n);
        if (!parsed) {
            Verdict v;
            v.accepted = false;
            v.source = VerdictSource::SoundVerifier;
            Critique c;
            c.level = level;
            c.rendered = level == FeedbackLevel::Binary
                             ? "Your previous answer was wrong."
                             : "Your answer did not contain a parseable coloring.";
            if (level != FeedbackLevel::Binary) c.items = {c.rendered};
            v.critique = c;
            return v;
        }
        coloring::VerifyOptions options;
        options.level = level;
        return coloring::verify_coloring(inst, *parsed, options);
    }

    std::optional<std::string> canonical(const ProblemInstance& instance,
                                         const std::string& answer) const override {
        auto parsed = coloring::parse_coloring(answer, payload(instance).graph.n);
        if (!parsed) return std::nullopt;
        return coloring::canonical_form(*parsed);
    }

private:
    static const coloring::ColoringInstance& payload(const ProblemInstance& instance) {
        return std::any_cast<const coloring::ColoringInstance&>(instance.payload);
    }
};

class StripsAdapter final : public DomainAdapter {
public:
    DomainTag tag() const override { return DomainTag::Strips; }

    std::string describe(const ProblemInstance& instance) const override {
        const auto& task = payload(instance);
        return strips::render_domain(task.domain) + "\n" +
               strips::render_problem(task.problem, task.domain);
    }

    bool well_formed(const ProblemInstance& instance) const override {
        const auto& task = payload(instance);
        return !task.domain.actions.empty() && !task.problem.objects.empty();
    }

    Verdict sound_verdict(const ProblemInstance& instance, const std::string& answer,
                          FeedbackLevel level) const override {
        const auto& task = payload(instance);
        return strips::verify_plan(task.domain, task.problem, answer, level);
    }

    std::optional<std::string> canonical(const ProblemInstance& instance,
                                         const std::string& answer) const override {
        const auto& task = payload(instance);
        auto extracted = strips::extract_plan_text(answer, task.domain, task.problem);
        if (!extracted) return std::nullopt;
        return strips::parse_plan(*extracted, task.domain, task.problem).str();
    }

private:
    static const strips::PlanningTask& payload(const ProblemInstance& instance) {
        return std::any_cast<const strips::PlanningTask&>(instance.payload);
    }
};

}  // namespace

const DomainAdapter& adapter_for(DomainTag tag) {
    static const Game24Adapter game24_adapter;
    static const ColoringAdapter coloring_adapter;
    static const StripsAdapter strips_adapter;
    switch (tag) {
        case DomainTag::Game24: return game24_adapter;
        case DomainTag::Coloring: return coloring_adapter;
        case DomainTag::Strips: return strips_adapter;
    }
    throw std::logic_error("bad DomainTag");
}

}  // namespace itercheck

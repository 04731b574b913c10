#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include "itercheck/core/loop.hpp"
#include "itercheck/game24/game24.hpp"

using namespace itercheck;

namespace {

ProblemInstance g24_1146() {
    return game24::make_problem(game24::G24Instance{{1, 1, 4, 6}}, "g1");
}

gateway::ScriptedGenerator scripted(std::vector<std::string> rs) {
    return gateway::ScriptedGenerator(std::move(rs));
}

}  // namespace

TEST_CASE("llm verdict extraction is lenient and rejects the unparseable") {
    bool parsed = false;
    CHECK(llm_verdict_accepts("Verdict: correct", &parsed));
    CHECK(parsed);
    CHECK(llm_verdict_accepts("...\nverdict:  Valid"));
    CHECK_FALSE(llm_verdict_accepts("Verdict: incorrect"));
    CHECK_FALSE(llm_verdict_accepts("The expression is invalid."));
    CHECK_FALSE(llm_verdict_accepts("This is not correct."));
    CHECK(llm_verdict_accepts("Looks correct to me."));
    // A negative marker beats a bare positive substring.
    CHECK_FALSE(llm_verdict_accepts("It seems correct but it is actually incorrect."));
    CHECK_FALSE(llm_verdict_accepts("blah blah", &parsed));
    CHECK_FALSE(parsed);
}

TEST_CASE("standard strategy asks once and never verifies") {
    auto gen = scripted({"(1+1)*4*6", "never served"});
    VerifierRole sound;
    Transcript t = run_instance(Strategy::standard(), g24_1146(), gen, sound);
    REQUIRE(t.rounds.size() == 1);
    CHECK_FALSE(t.rounds[0].verdict.has_value());
    CHECK(t.stop_reason == StopReason::Timeout);
    REQUIRE(t.final_answer.has_value());
    CHECK(t.final_answer->raw_text == "(1+1)*4*6");
}

TEST_CASE("sound critique stops exactly at the first correct round") {
    auto gen = scripted({"(1+1)*4*6", "6+4+1+1", "6*4*1*1", "never served"});
    VerifierRole sound;
    Transcript t = run_instance(Strategy::sound_critique(FeedbackLevel::FirstError),
                                g24_1146(), gen, sound);
    REQUIRE(t.rounds.size() == 3);
    CHECK(t.stop_reason == StopReason::VerifierAccepted);
    CHECK(t.final_answer->round_index == 3);
    CHECK(t.rounds[2].verdict->accepted);
    CHECK_FALSE(t.rounds[0].verdict->accepted);
}

TEST_CASE("the 15-round timeout is enforced") {
    std::vector<std::string> wrong(20, "(1+1)*4*6");
    auto gen = scripted(wrong);
    VerifierRole sound;
    Transcript t = run_instance(Strategy::sound_critique(FeedbackLevel::FirstError),
                                g24_1146(), gen, sound);
    CHECK(t.rounds.size() == 15);
    CHECK(t.stop_reason == StopReason::Timeout);
    CHECK(t.final_answer->round_index == 15);
}

TEST_CASE("backprompts accumulate full history in order") {
    auto gen = scripted({"(1+1)*4*6", "6+4+1+1", "(6-1-1)*4", "6*4*1*1"});
    VerifierRole sound;
    Transcript t = run_instance(Strategy::sound_critique(FeedbackLevel::FirstError),
                                g24_1146(), gen, sound);
    REQUIRE(t.rounds.size() == 4);
    const std::string& final_prompt = t.rounds[3].prompt;
    // Every earlier answer appears, and prompt sizes are non-decreasing.
    auto p1 = final_prompt.find("(1+1)*4*6");
    auto p2 = final_prompt.find("6+4+1+1");
    auto p3 = final_prompt.find("(6-1-1)*4");
    CHECK(p1 != std::string::npos);
    CHECK(p2 != std::string::npos);
    CHECK(p3 != std::string::npos);
    CHECK(p1 < p2);
    CHECK(p2 < p3);
    // The critique for the most recent answer is present.
    CHECK(final_prompt.find("(6-1-1)*4=16 not 24") != std::string::npos);
    for (std::size_t i = 1; i < t.rounds.size(); ++i)
        CHECK(t.rounds[i].prompt_tokens >= t.rounds[i - 1].prompt_tokens);
}

TEST_CASE("self-critique alternates generation and verification on one stream") {
    // Round 1: answer wrong, LLM verifier rejects; round 2: answer correct,
    // verifier accepts.
    auto gen = scripted({"(1+1)*4*6", "Verdict: incorrect, that equals 48.",
                         "6*4*1*1", "Verdict: correct"});
    VerifierRole self;
    self.llm = std::make_shared<gateway::ScriptedGenerator>(std::vector<std::string>{});
    // The verifier shares the generator stream, as in run_suite.
    auto shared = std::make_shared<gateway::ScriptedGenerator>(
        std::vector<std::string>{"(1+1)*4*6", "Verdict: incorrect, that equals 48.",
                                 "6*4*1*1", "Verdict: correct"});
    self.llm = shared;
    Transcript t = run_instance(Strategy::self_critique(), g24_1146(), *shared, self);
    REQUIRE(t.rounds.size() == 2);
    CHECK(t.rounds[0].verdict->source == VerdictSource::LlmVerifier);
    CHECK_FALSE(t.rounds[0].verdict->accepted);
    CHECK(t.rounds[0].verdict->critique->rendered ==
          "Verdict: incorrect, that equals 48.");
    CHECK(t.rounds[1].verdict->accepted);
    CHECK(t.stop_reason == StopReason::VerifierAccepted);
    // The verifier's critique is quoted back in the round-2 prompt.
    CHECK(t.rounds[1].prompt.find("that equals 48") != std::string::npos);
}

TEST_CASE("an llm verifier may falsely reject; the loop keeps going") {
    auto shared = std::make_shared<gateway::ScriptedGenerator>(std::vector<std::string>{
        "6*4*1*1", "Verdict: incorrect", "(1+1)*4*6", "Verdict: correct"});
    VerifierRole self;
    self.llm = shared;
    Transcript t = run_instance(Strategy::self_critique(), g24_1146(), *shared, self);
    REQUIRE(t.rounds.size() == 2);
    CHECK(t.stop_reason == StopReason::VerifierAccepted);
    // Accepted answer is in fact wrong: a false positive the metrics must see.
    CHECK(t.final_answer->raw_text == "(1+1)*4*6");
}

TEST_CASE("sampling reuses a byte-identical base prompt every round") {
    auto gen = scripted({"(1+1)*4*6", "6+4+1+1", "6*4*1*1"});
    Transcript t = run_sampling(15, g24_1146(), gen);
    REQUIRE(t.rounds.size() == 3);
    CHECK(t.rounds[1].prompt == t.rounds[0].prompt);
    CHECK(t.rounds[2].prompt == t.rounds[0].prompt);
    CHECK(t.rounds[0].prompt_tokens == t.rounds[2].prompt_tokens);
    CHECK(t.stop_reason == StopReason::VerifierAccepted);
    CHECK(t.final_answer->raw_text == "6*4*1*1");
}

TEST_CASE("sampling exhausts its budget on all-wrong scripts") {
    std::vector<std::string> wrong(5, "(1+1)*4*6");
    auto gen = scripted(wrong);
    Transcript t = run_sampling(5, g24_1146(), gen);
    CHECK(t.rounds.size() == 5);
    CHECK(t.stop_reason == StopReason::Timeout);
}

TEST_CASE("self-consistency picks the modal canonical answer") {
    // 6*4*1*1 twice (in different spellings), (1+1)*4*6 once.
    auto gen = scripted({"6*4*1*1", "(1+1)*4*6", " 6 * 4 * 1 * 1 = 24"});
    Candidate c = run_self_consistency(3, g24_1146(), gen);
    CHECK(c.raw_text == "6*4*1*1");  // earliest representative of the mode
}

TEST_CASE("self-consistency ties break to the earliest first occurrence") {
    auto gen = scripted({"(1+1)*4*6", "6*4*1*1", "6*4*1*1", "(1+1)*4*6"});
    Candidate c = run_self_consistency(4, g24_1146(), gen);
    CHECK(c.raw_text == "(1+1)*4*6");
    CHECK(c.round_index == 1);
}

TEST_CASE("self-consistency with nothing parseable returns the first raw sample") {
    auto gen = scripted({"gibberish one", "gibberish two"});
    Candidate c = run_self_consistency(2, g24_1146(), gen);
    CHECK(c.raw_text == "gibberish one");
    CHECK_FALSE(c.parsed_canonical.has_value());
}

TEST_CASE("generator failure surfaces as a GeneratorError stop") {
    auto gen = scripted({"(1+1)*4*6"});  // exhausted on round 2
    VerifierRole sound;
    Transcript t = run_instance(Strategy::sound_critique(FeedbackLevel::FirstError),
                                g24_1146(), gen, sound);
    CHECK(t.stop_reason == StopReason::GeneratorError);
    CHECK(t.rounds.size() == 1);
}

TEST_CASE("the template asset directory mirrors the embedded defaults exactly") {
    TemplateSet from_disk =
        TemplateSet::load(ITERCHECK_ASSETS_DIR "/templates/default", "default");
    TemplateSet builtin = TemplateSet::builtin_default();
    CHECK(from_disk.all() == builtin.all());
}

TEST_CASE("template overrides replace only the provided slots") {
    // Loading from a directory with no files keeps every builtin text.
    TemplateSet set = TemplateSet::load("/nonexistent-template-dir", "custom");
    CHECK(set.all() == TemplateSet::builtin_default().all());
    CHECK(set.render(DomainTag::Game24, "generate", {{"instance", "1 2 3 4"}})
              .find("1 2 3 4") != std::string::npos);
}

TEST_CASE("game24 rejects the all-errors feedback level") {
    auto gen = scripted({"6*4*1*1"});
    VerifierRole sound;
    CHECK_THROWS_AS(run_instance(Strategy::sound_critique(FeedbackLevel::AllErrors),
                                 g24_1146(), gen, sound),
                    std::invalid_argument);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "itercheck/experiments/metrics.hpp"
#include "itercheck/experiments/runner.hpp"
#include "itercheck/experiments/transcripts.hpp"
#include "itercheck/game24/game24.hpp"

using namespace itercheck;
using namespace itercheck::experiments;

namespace {

Transcript scripted_sound_run(const std::vector<std::string>& responses) {
    auto problem = game24::make_problem(game24::G24Instance{{1, 1, 4, 6}}, "g1");
    gateway::ScriptedGenerator gen(responses);
    VerifierRole sound;
    Transcript t = run_instance(Strategy::sound_critique(FeedbackLevel::FirstError), problem,
                                gen, sound);
    backfill_ground_truth(t, problem);
    return t;
}

// A hand-built transcript with explicit per-round llm verdicts and truth.
Transcript llm_transcript(const std::vector<std::pair<bool, bool>>& rounds,
                          const std::string& id = "x") {
    Transcript t;
    t.instance_id = id;
    t.strategy = "self_critique/15";
    for (auto [truth, accepted] : rounds) {
        Round r;
        r.response = "answer";
        Verdict v;
        v.accepted = accepted;
        v.source = VerdictSource::LlmVerifier;
        if (!accepted) v.critique = Critique{FeedbackLevel::Binary, {}, "no"};
        r.verdict = v;
        r.ground_truth_correct = truth;
        t.rounds.push_back(r);
        if (accepted) break;
    }
    if (!t.rounds.empty()) {
        Candidate c;
        c.raw_text = "answer";
        c.round_index = static_cast<int>(t.rounds.size());
        t.final_answer = c;
        t.stop_reason = t.rounds.back().verdict->accepted ? StopReason::VerifierAccepted
                                                          : StopReason::Timeout;
        t.ground_truth_correct = *t.rounds.back().ground_truth_correct;
    }
    return t;
}

}  // namespace

TEST_CASE("transcripts survive the jsonl round trip unchanged") {
    Transcript t = scripted_sound_run({"(1+1)*4*6", "nonsense", "6*4*1*1"});
    Transcript back = transcript_from_json(transcript_to_json(t));
    CHECK(transcript_to_json(back) == transcript_to_json(t));
    CHECK(back.rounds.size() == t.rounds.size());
    CHECK(back.rounds[1].verdict->critique->rendered == t.rounds[1].verdict->critique->rendered);
    CHECK(back.final_answer->parsed_canonical == t.final_answer->parsed_canonical);
    CHECK(back.ground_truth_correct == t.ground_truth_correct);

    auto many = from_jsonl(to_jsonl({t, t}));
    CHECK(many.size() == 2);
}

TEST_CASE("unknown schema versions are refused") {
    std::string j = transcript_to_json(Transcript{});
    auto pos = j.find("\"schema_version\":1");
    REQUIRE(pos != std::string::npos);
    j.replace(pos, 18, "\"schema_version\":9");
    CHECK_THROWS(transcript_from_json(j));
}

TEST_CASE("confusion counts reproduce the published game-of-24 verification row") {
    // fp=320, tn=2751, fn=213, tp=816: accuracy 87.0, FPR 10.4, FNR 20.7.
    ConfusionCounts c{816, 320, 2751, 213};
    CHECK(c.total() == 4100);
    CHECK(std::abs(*c.accuracy() * 100 - 87.0) < 0.05);
    CHECK(std::abs(*c.fpr() * 100 - 10.4) < 0.05);
    CHECK(std::abs(*c.fnr() * 100 - 20.7) < 0.05);
    CHECK(format_rate(c.tp + c.tn, c.total()) == "87.0% (3567/4100)");
    CHECK(format_rate(c.fp, c.fp + c.tn) == "10.4% (320/3071)");
    CHECK(format_rate(c.fn, c.fn + c.tp) == "20.7% (213/1029)");
}

TEST_CASE("confusion counts reproduce the published graph-coloring FNR") {
    ConfusionCounts c;
    c.fn = 113;
    c.tp = 5;
    CHECK(std::abs(*c.fnr() * 100 - 95.8) < 0.05);
    CHECK(format_rate(c.fn, c.fn + c.tp) == "95.8% (113/118)");
}

TEST_CASE("confusion over labeled records and zero-denominator handling") {
    std::vector<VerificationRecord> records = {
        {true, true}, {true, false}, {false, false}, {false, true}, {false, false}};
    ConfusionCounts c = compute_confusion(records);
    CHECK(c.tp == 1);
    CHECK(c.fn == 1);
    CHECK(c.tn == 2);
    CHECK(c.fp == 1);

    ConfusionCounts empty = compute_confusion(std::vector<VerificationRecord>{});
    CHECK_FALSE(empty.accuracy().has_value());
    CHECK_FALSE(empty.fpr().has_value());
    CHECK(format_rate(0, 0) == "n/a");

    std::vector<VerificationRecord> all_right = {{true, true}, {false, false}};
    ConfusionCounts perfect = compute_confusion(all_right);
    CHECK(*perfect.fpr() == 0.0);
    CHECK(*perfect.fnr() == 0.0);
}

TEST_CASE("confusion extraction from transcripts uses only llm-verifier rounds") {
    std::vector<Transcript> ts = {llm_transcript({{true, false}, {false, true}}),
                                  llm_transcript({{true, true}})};
    ConfusionCounts c = compute_confusion(ts);
    CHECK(c.fn == 1);  // correct answer rejected
    CHECK(c.fp == 1);  // wrong answer accepted
    CHECK(c.tp == 1);

    // Sound-verifier rounds contribute nothing.
    std::vector<Transcript> sound = {scripted_sound_run({"(1+1)*4*6", "6*4*1*1"})};
    CHECK(compute_confusion(sound).total() == 0);
}

TEST_CASE("iteration curve is flat 1.0 when everything is right at round one") {
    std::vector<Transcript> ts = {scripted_sound_run({"6*4*1*1"}),
                                  scripted_sound_run({"6*4/(1*1)"})};
    IterationCurve curve = compute_iteration_curve(ts, 15);
    REQUIRE(curve.values.size() == 15);
    for (double v : curve.values) CHECK(v == 1.0);
}

TEST_CASE("iteration curve is non-decreasing under a sound verifier") {
    std::vector<Transcript> ts = {
        scripted_sound_run({"(1+1)*4*6", "6*4*1*1"}),
        scripted_sound_run({"(1+1)*4*6", "junk", "6+4+1+1", "6*4*1*1"}),
        scripted_sound_run(std::vector<std::string>(15, "(1+1)*4*6")),
    };
    IterationCurve curve = compute_iteration_curve(ts, 15);
    for (std::size_t i = 1; i < curve.values.size(); ++i)
        CHECK(curve.values[i] >= curve.values[i - 1]);
    CHECK(curve.values[0] == doctest::Approx(0.0));
    CHECK(curve.values[14] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("a falsely-rejecting llm verifier produces a decreasing curve segment") {
    // Round 1 answer is correct but rejected; round 2 answer is wrong.
    std::vector<Transcript> ts = {llm_transcript({{true, false}, {false, false}})};
    IterationCurve curve = compute_iteration_curve(ts, 3);
    CHECK(curve.values[0] == 1.0);
    CHECK(curve.values[1] == 0.0);  // the next round made things worse
    CHECK(curve.values[2] == 0.0);
}

TEST_CASE("curve counts later verifier-accepted answers from their acceptance round") {
    std::vector<Transcript> ts = {llm_transcript({{false, false}, {true, true}})};
    IterationCurve curve = compute_iteration_curve(ts, 3);
    CHECK(curve.values[0] == 0.0);
    CHECK(curve.values[1] == 1.0);
    CHECK(curve.values[2] == 1.0);  // acceptance is absorbing
}

TEST_CASE("report rendering: csv round-trips and markdown mirrors the table layout") {
    MetricsReport report;
    report.provenance = {{"seed", "7"}, {"template_set", "default"}};
    report.accuracy = {{"standard", 57, 100}, {"sound_critique/first_error/15", 98, 100}};
    report.confusion = {{"llm-verifier", {816, 320, 2751, 213}}};

    std::string csv = render_report(report, ReportFormat::Csv);
    CHECK(csv.find("# seed: 7\n") != std::string::npos);
    CHECK(csv.find("87.0% (3567/4100)") != std::string::npos);
    MetricsReport back = report_from_csv(csv);
    CHECK(render_report(back, ReportFormat::Csv) == csv);

    std::string md = render_report(report, ReportFormat::Markdown);
    CHECK(md.find("| Strategy | Accuracy |") != std::string::npos);
    CHECK(md.find("| standard | 57.0% (57/100) |") != std::string::npos);
    CHECK(md.find("False Positive Rate") != std::string::npos);

    MetricsReport empty;
    CHECK(render_report(empty, ReportFormat::Csv) ==
          "kind,label,correct,total,tp,fp,tn,fn,accuracy,fpr,fnr\n");
}

TEST_CASE("curve csv round-trips") {
    IterationCurve curve{{0.25, 0.5, 1.0}};
    std::string csv = curve_to_csv(curve);
    CHECK(csv.rfind("round,value\n", 0) == 0);
    IterationCurve back = curve_from_csv(csv);
    REQUIRE(back.values.size() == 3);
    CHECK(back.values[1] == doctest::Approx(0.5));
}

TEST_CASE("run config json round-trips and hashes deterministically") {
    RunConfig config;
    config.domain = DomainTag::Game24;
    config.strategy = Strategy::sound_critique(FeedbackLevel::Binary, 10);
    config.instances_path = "x.txt";
    config.scripts_path = "s.json";
    config.seed = 99;
    RunConfig back = RunConfig::from_json(config.to_json());
    CHECK(back.to_json() == config.to_json());
    CHECK(back.config_hash() == config.config_hash());
    CHECK(back.strategy.name() == "sound_critique/binary/10");
    CHECK(back.seed == 99);

    CHECK_THROWS(RunConfig::from_json("{\"domain\": \"game24\"}"));  // missing fields
}

TEST_CASE("run_suite is deterministic and loses nothing through persistence") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "itercheck_suite_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream inst(dir / "inst.txt");
        inst << "1 1 4 6\n2 2 4 6\n";
        std::ofstream scripts(dir / "scripts.json");
        scripts << R"({"game24-1": ["(1+1)*4*6", "6*4*1*1"],
                       "game24-2": ["6*4*2/2", "never"]})";
    }
    RunConfig config;
    config.domain = DomainTag::Game24;
    config.strategy = Strategy::sound_critique(FeedbackLevel::FirstError);
    config.instances_path = (dir / "inst.txt").string();
    config.scripts_path = (dir / "scripts.json").string();
    config.output_dir = (dir / "out").string();
    config.concurrency = 3;

    SuiteResult a = run_suite(config);
    std::string first = to_jsonl(a.transcripts);
    config.output_dir = (dir / "out2").string();
    SuiteResult b = run_suite(config);
    CHECK(to_jsonl(b.transcripts) == first);

    CHECK(a.transcripts.size() == 2);
    CHECK(a.failed_instances.empty());
    CHECK(a.transcripts[0].instance_id == "game24-1");
    CHECK(a.transcripts[0].ground_truth_correct);
    CHECK(a.report.accuracy.size() == 1);
    CHECK(a.report.accuracy[0].correct == 2);

    // Metrics recomputed from the persisted file match the in-process report.
    auto loaded = load_jsonl((dir / "out" / "transcripts.jsonl").string());
    CHECK(to_jsonl(loaded) == first);
    MetricsReport recomputed = report_from_transcripts(loaded, config.strategy.budget());
    MetricsReport in_process = report_from_transcripts(a.transcripts, config.strategy.budget());
    recomputed.provenance.clear();
    in_process.provenance.clear();
    CHECK(render_report(recomputed, ReportFormat::Csv) ==
          render_report(in_process, ReportFormat::Csv));
    fs::remove_all(dir);
}

TEST_CASE("run_suite flags failing instances but completes the suite") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "itercheck_suite_fail";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream inst(dir / "inst.txt");
        inst << "1 1 4 6\n2 2 4 6\n";
        std::ofstream scripts(dir / "scripts.json");
        // game24-2 has no script at all: its loop fails, the suite survives.
        scripts << R"({"game24-1": ["6*4*1*1"]})";
    }
    RunConfig config;
    config.domain = DomainTag::Game24;
    config.strategy = Strategy::sound_critique(FeedbackLevel::FirstError);
    config.instances_path = (dir / "inst.txt").string();
    config.scripts_path = (dir / "scripts.json").string();

    SuiteResult result = run_suite(config);
    CHECK(result.transcripts.size() == 2);
    REQUIRE(result.failed_instances.size() == 1);
    CHECK(result.failed_instances[0] == "game24-2");
    CHECK(result.transcripts[0].ground_truth_correct);
    fs::remove_all(dir);
}

TEST_CASE("sampling transcripts expose the constant-prompt property in token counts") {
    auto problem = game24::make_problem(game24::G24Instance{{1, 1, 4, 6}}, "g1");
    gateway::ScriptedGenerator gen({"(1+1)*4*6", "6+4+1+1", "junk", "6*4*1*1"});
    Transcript t = run_sampling(15, problem, gen);
    for (const Round& r : t.rounds) CHECK(r.prompt_tokens == t.rounds[0].prompt_tokens);
}

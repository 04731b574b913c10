#include "itercheck/experiments/transcripts.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace itercheck::experiments {

using json = nlohmann::ordered_json;

namespace {

json critique_to_json(const Critique& c) {
    json j;
    j["level"] = to_string(c.level);
    j["items"] = c.items;
    j["rendered"] = c.rendered;
    return j;
}

Critique critique_from_json(const json& j) {
    Critique c;
    c.level = feedback_level_from_string(j.at("level").get<std::string>());
    c.items = j.at("items").get<std::vector<std::string>>();
    c.rendered = j.at("rendered").get<std::string>();
    return c;
}

json verdict_to_json(const Verdict& v) {
    json j;
    j["accepted"] = v.accepted;
    j["source"] = v.source == VerdictSource::SoundVerifier ? "sound" : "llm";
    j["critique"] = v.critique ? critique_to_json(*v.critique) : json(nullptr);
    return j;
}

Verdict verdict_from_json(const json& j) {
    Verdict v;
    v.accepted = j.at("accepted").get<bool>();
    v.source = j.at("source").get<std::string>() == "sound" ? VerdictSource::SoundVerifier
                                                            : VerdictSource::LlmVerifier;
    if (!j.at("critique").is_null()) v.critique = critique_from_json(j.at("critique"));
    return v;
}

json round_to_json(const Round& r) {
    json j;
    j["prompt"] = r.prompt;
    j["response"] = r.response;
    j["verdict"] = r.verdict ? verdict_to_json(*r.verdict) : json(nullptr);
    j["prompt_tokens"] = r.prompt_tokens;
    j["response_tokens"] = r.response_tokens;
    j["ground_truth_correct"] =
        r.ground_truth_correct ? json(*r.ground_truth_correct) : json(nullptr);
    return j;
}

Round round_from_json(const json& j) {
    Round r;
    r.prompt = j.at("prompt").get<std::string>();
    r.response = j.at("response").get<std::string>();
    if (!j.at("verdict").is_null()) r.verdict = verdict_from_json(j.at("verdict"));
    r.prompt_tokens = j.at("prompt_tokens").get<std::int64_t>();
    r.response_tokens = j.at("response_tokens").get<std::int64_t>();
    if (!j.at("ground_truth_correct").is_null())
        r.ground_truth_correct = j.at("ground_truth_correct").get<bool>();
    return r;
}

json candidate_to_json(const Candidate& c) {
    json j;
    j["raw_text"] = c.raw_text;
    j["parsed_canonical"] = c.parsed_canonical ? json(*c.parsed_canonical) : json(nullptr);
    j["round_index"] = c.round_index;
    return j;
}

Candidate candidate_from_json(const json& j) {
    Candidate c;
    c.raw_text = j.at("raw_text").get<std::string>();
    if (!j.at("parsed_canonical").is_null())
        c.parsed_canonical = j.at("parsed_canonical").get<std::string>();
    c.round_index = j.at("round_index").get<int>();
    return c;
}

}  // namespace

std::string transcript_to_json(const Transcript& t) {
    json j;
    j["schema_version"] = kTranscriptSchemaVersion;
    j["instance_id"] = t.instance_id;
    j["strategy"] = t.strategy;
    j["rounds"] = json::array();
    for (const Round& r : t.rounds) j["rounds"].push_back(round_to_json(r));
    j["final_answer"] = t.final_answer ? candidate_to_json(*t.final_answer) : json(nullptr);
    j["stop_reason"] = to_string(t.stop_reason);
    j["ground_truth_correct"] = t.ground_truth_correct;
    return j.dump();
}

Transcript transcript_from_json(const std::string& json_text) {
    json j = json::parse(json_text);
    int version = j.at("schema_version").get<int>();
    if (version != kTranscriptSchemaVersion)
        throw std::runtime_error("unsupported transcript schema_version " +
                                 std::to_string(version));
    Transcript t;
    t.instance_id = j.at("instance_id").get<std::string>();
    t.strategy = j.at("strategy").get<std::string>();
    for (const json& r : j.at("rounds")) t.rounds.push_back(round_from_json(r));
    if (!j.at("final_answer").is_null())
        t.final_answer = candidate_from_json(j.at("final_answer"));
    t.stop_reason = stop_reason_from_string(j.at("stop_reason").get<std::string>());
    t.ground_truth_correct = j.at("ground_truth_correct").get<bool>();
    return t;
}

std::string to_jsonl(const std::vector<Transcript>& transcripts) {
    std::string out;
    for (const Transcript& t : transcripts) {
        out += transcript_to_json(t);
        out += '\n';
    }
    return out;
}

std::vector<Transcript> from_jsonl(const std::string& text) {
    std::vector<Transcript> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(transcript_from_json(line));
    }
    return out;
}

void save_jsonl(const std::vector<Transcript>& transcripts, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << to_jsonl(transcripts);
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<Transcript> load_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_jsonl(ss.str());
}

}  // namespace itercheck::experiments

#pragma once

#include <string>
#include <vector>

#include "itercheck/core/types.hpp"

namespace itercheck::experiments {

inline constexpr int kTranscriptSchemaVersion = 1;

// One JSON object per transcript, stable key order, schema_version field.
std::string transcript_to_json(const Transcript& t);
Transcript transcript_from_json(const std::string& json_text);

std::string to_jsonl(const std::vector<Transcript>& transcripts);
std::vector<Transcript> from_jsonl(const std::string& text);

void save_jsonl(const std::vector<Transcript>& transcripts, const std::string& path);
std::vector<Transcript> load_jsonl(const std::string& path);

}  // namespace itercheck::experiments

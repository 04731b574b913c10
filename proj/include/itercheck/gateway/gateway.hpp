#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace itercheck::gateway {

// Approximate tokenizer for offline roles: each maximal alphanumeric run
// and each punctuation character counts as one token.
std::int64_t approx_token_count(const std::string& text);

// Hex-encoded SHA-256.
std::string sha256_hex(const std::string& data);

struct Completion {
    std::string text;
    std::int64_t prompt_tokens = 0;
    std::int64_t response_tokens = 0;
};

struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ScriptExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ReplayMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One stream of completions for a single instance loop. Thread-safe.
class Generator {
public:
    virtual ~Generator() = default;
    virtual Completion complete(const std::string& prompt) = 0;
};

using GeneratorPtr = std::shared_ptr<Generator>;

// Canned responses served in order; throws ScriptExhausted past the end.
class ScriptedGenerator : public Generator {
public:
    explicit ScriptedGenerator(std::vector<std::string> responses);
    Completion complete(const std::string& prompt) override;

private:
    std::mutex mutex_;
    std::deque<std::string> responses_;
};

// Recorded (prompt hash, response) entries, one JSON object per line.
struct RecordEntry {
    std::string prompt_sha256;
    std::string response;
    std::int64_t prompt_tokens = 0;
    std::int64_t response_tokens = 0;
};

class RecordStore {
public:
    RecordStore() = default;

    void append(const RecordEntry& entry);
    const std::vector<RecordEntry>& entries() const { return entries_; }

    std::string to_jsonl() const;
    static RecordStore from_jsonl(const std::string& text);

    void save(const std::string& path) const;
    static RecordStore load(const std::string& path);

private:
    std::vector<RecordEntry> entries_;
};

// Serves a recording strictly in order; throws ReplayMismatch when the
// prompt hash differs from the recorded one.
class ReplayGenerator : public Generator {
public:
    explicit ReplayGenerator(std::shared_ptr<const RecordStore> store);
    Completion complete(const std::string& prompt) override;

private:
    std::mutex mutex_;
    std::shared_ptr<const RecordStore> store_;
    std::size_t next_ = 0;
};

// Wraps any generator, appending every exchange to the store. Behavior of
// the wrapped generator is unchanged.
class RecordingGenerator : public Generator {
public:
    RecordingGenerator(GeneratorPtr inner, std::shared_ptr<RecordStore> store);
    Completion complete(const std::string& prompt) override;

private:
    std::mutex mutex_;
    GeneratorPtr inner_;
    std::shared_ptr<RecordStore> store_;
};

// --- live endpoint ------------------------------------------------------

struct EndpointConfig {
    std::string base_url;  // e.g. "https://api.example.com"
    std::string model_name;
    double temperature = 1.0;  // 0.0 for verification queries
    int max_output_tokens = 1024;
    std::string api_key_env = "ITERCHECK_API_KEY";
    int request_timeout_seconds = 120;
    int max_retries = 5;
    int max_concurrent_requests = 4;
    int requests_per_minute = 60;
};

// Chat-completion client with exponential backoff (1s doubling, jittered,
// capped at 30s), a global concurrent-request bound, and a per-minute rate
// limit. The API key is read from the named environment variable and never
// stored.
class LiveGenerator : public Generator {
public:
    explicit LiveGenerator(EndpointConfig config);
    Completion complete(const std::string& prompt) override;

private:
    EndpointConfig config_;
};

// Factory over the three role flavors, keyed per instance id so that each
// instance loop gets its own response stream.
class GeneratorBook {
public:
    static GeneratorBook scripted(std::map<std::string, std::vector<std::string>> scripts);
    static GeneratorBook replay(std::map<std::string, std::shared_ptr<const RecordStore>> stores);
    static GeneratorBook live(EndpointConfig config);

    GeneratorPtr for_instance(const std::string& instance_id) const;

    // Wrap every produced generator with a recorder; stores keyed by id.
    void enable_recording(std::shared_ptr<std::map<std::string, std::shared_ptr<RecordStore>>> sink);

private:
    GeneratorBook() = default;
    enum class Kind { Scripted, Replay, Live } kind_ = Kind::Scripted;
    std::map<std::string, std::vector<std::string>> scripts_;
    std::map<std::string, std::shared_ptr<const RecordStore>> stores_;
    std::optional<EndpointConfig> config_;
    std::shared_ptr<std::map<std::string, std::shared_ptr<RecordStore>>> record_sink_;
};

}  // namespace itercheck::gateway

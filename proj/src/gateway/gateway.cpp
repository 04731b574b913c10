#include "itercheck/gateway/gateway.hpp"

#include <cctype>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

namespace itercheck::gateway {

std::int64_t approx_token_count(const std::string& text) {
    std::int64_t count = 0;
    bool in_word = false;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            if (!in_word) {
                ++count;
                in_word = true;
            }
        } else {
            in_word = false;
            if (std::ispunct(c)) ++count;
        }
    }
    return count;
}

// --- scripted -----------------------------------------------------------

ScriptedGenerator::ScriptedGenerator(std::vector<std::string> responses)
    : responses_(responses.begin(), responses.end()) {}

Completion ScriptedGenerator::complete(const std::string& prompt) {
    std::lock_guard lock(mutex_);
    if (responses_.empty()) throw ScriptExhausted("scripted generator has no responses left");
    Completion c;
    c.text = std::move(responses_.front());
    responses_.pop_front();
    c.prompt_tokens = approx_token_count(prompt);
    c.response_tokens = approx_token_count(c.text);
    return c;
}

// --- record store -------------------------------------------------------

void RecordStore::append(const RecordEntry& entry) { entries_.push_back(entry); }

std::string RecordStore::to_jsonl() const {
    std::string out;
    for (const auto& e : entries_) {
        nlohmann::ordered_json j;
        j["prompt_sha256"] = e.prompt_sha256;
        j["response"] = e.response;
        j["prompt_tokens"] = e.prompt_tokens;
        j["response_tokens"] = e.response_tokens;
        out += j.dump();
        out += '\n';
    }
    return out;
}

RecordStore RecordStore::from_jsonl(const std::string& text) {
    RecordStore store;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        RecordEntry e;
        e.prompt_sha256 = j.at("prompt_sha256").get<std::string>();
        e.response = j.at("response").get<std::string>();
        e.prompt_tokens = j.at("prompt_tokens").get<std::int64_t>();
        e.response_tokens = j.at("response_tokens").get<std::int64_t>();
        store.entries_.push_back(std::move(e));
    }
    return store;
}

void RecordStore::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write record store: " + path);
    out << to_jsonl();
    if (!out) throw std::runtime_error("write failed: " + path);
}

RecordStore RecordStore::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open record store: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_jsonl(ss.str());
}

// --- replay -------------------------------------------------------------

ReplayGenerator::ReplayGenerator(std::shared_ptr<const RecordStore> store)
    : store_(std::move(store)) {}

Completion ReplayGenerator::complete(const std::string& prompt) {
    std::lock_guard lock(mutex_);
    if (next_ >= store_->entries().size())
        throw ScriptExhausted("replay store exhausted after " + std::to_string(next_) +
                              " completions");
    const RecordEntry& e = store_->entries()[next_];
    std::string hash = sha256_hex(prompt);
    if (hash != e.prompt_sha256)
        throw ReplayMismatch("prompt hash " + hash + " differs from recorded " + e.prompt_sha256 +
                             " at entry " + std::to_string(next_));
    ++next_;
    Completion c;
    c.text = e.response;
    c.prompt_tokens = e.prompt_tokens;
    c.response_tokens = e.response_tokens;
    return c;
}

// --- recording ----------------------------------------------------------

RecordingGenerator::RecordingGenerator(GeneratorPtr inner, std::shared_ptr<RecordStore> store)
    : inner_(std::move(inner)), store_(std::move(store)) {}

Completion RecordingGenerator::complete(const std::string& prompt) {
    Completion c = inner_->complete(prompt);
    std::lock_guard lock(mutex_);
    store_->append({sha256_hex(prompt), c.text, c.prompt_tokens, c.response_tokens});
    return c;
}

// --- live endpoint ------------------------------------------------------

namespace {

// Global request gate shared by all live generators.
class RequestGate {
public:
    void configure(int max_concurrent, int per_minute) {
        std::lock_guard lock(mutex_);
        max_concurrent_ = max_concurrent;
        per_minute_ = per_minute;
    }

    void acquire() {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return in_flight_ < max_concurrent_; });
        ++in_flight_;
        auto now = std::chrono::steady_clock::now();
        while (!window_.empty() && now - window_.front() > std::chrono::minutes(1))
            window_.pop_front();
        if (static_cast<int>(window_.size()) >= per_minute_) {
            auto wake = window_.front() + std::chrono::minutes(1);
            lock.unlock();
            std::this_thread::sleep_until(wake);
            lock.lock();
        }
        window_.push_back(std::chrono::steady_clock::now());
    }

    void release() {
        std::lock_guard lock(mutex_);
        --in_flight_;
        cv_.notify_one();
    }

    static RequestGate& instance() {
        static RequestGate gate;
        return gate;
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int in_flight_ = 0;
    int max_concurrent_ = 4;
    int per_minute_ = 60;
    std::deque<std::chrono::steady_clock::time_point> window_;
};

}  // namespace

LiveGenerator::LiveGenerator(EndpointConfig config) : config_(std::move(config)) {
    RequestGate::instance().configure(config_.max_concurrent_requests,
                                      config_.requests_per_minute);
}

Completion LiveGenerator::complete(const std::string& prompt) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (!key || !*key)
        throw TransportError("API key environment variable " + config_.api_key_env +
                             " is not set");

    nlohmann::json body;
    body["model"] = config_.model_name;
    body["temperature"] = config_.temperature;
    body["max_tokens"] = config_.max_output_tokens;
    body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt}}});

    std::mt19937_64 jitter_rng(std::random_device{}());
    std::uniform_real_distribution<double> jitter(0.0, 1.0);
    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) {
            double base = std::min(30.0, std::ldexp(1.0, attempt - 1));  // 1s doubling, 30s cap
            std::this_thread::sleep_for(
                std::chrono::duration<double>(base + jitter(jitter_rng)));
        }
        RequestGate::instance().acquire();
        httplib::Client client(config_.base_url);
        client.set_read_timeout(config_.request_timeout_seconds, 0);
        client.set_connection_timeout(config_.request_timeout_seconds, 0);
        httplib::Headers headers = {{"Authorization", std::string("Bearer ") + key}};
        auto res = client.Post("/v1/chat/completions", headers, body.dump(),
                               "application/json");
        RequestGate::instance().release();
        if (!res) {
            last_error = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw TransportError("HTTP " + std::to_string(res->status) + ": " + res->body);
        try {
            nlohmann::json j = nlohmann::json::parse(res->body);
            Completion c;
            c.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
            if (j.contains("usage")) {
                c.prompt_tokens = j["usage"].value("prompt_tokens", std::int64_t{0});
                c.response_tokens = j["usage"].value("completion_tokens", std::int64_t{0});
            } else {
                c.prompt_tokens = approx_token_count(prompt);
                c.response_tokens = approx_token_count(c.text);
            }
            return c;
        } catch (const nlohmann::json::exception& e) {
            throw TransportError(std::string("malformed completion response: ") + e.what());
        }
    }
    throw TransportError("gave up after " + std::to_string(config_.max_retries) +
                         " retries: " + last_error);
}

// --- generator book -----------------------------------------------------

GeneratorBook GeneratorBook::scripted(std::map<std::string, std::vector<std::string>> scripts) {
    GeneratorBook book;
    book.kind_ = Kind::Scripted;
    book.scripts_ = std::move(scripts);
    return book;
}

GeneratorBook GeneratorBook::replay(
    std::map<std::string, std::shared_ptr<const RecordStore>> stores) {
    GeneratorBook book;
    book.kind_ = Kind::Replay;
    book.stores_ = std::move(stores);
    return book;
}

GeneratorBook GeneratorBook::live(EndpointConfig config) {
    GeneratorBook book;
    book.kind_ = Kind::Live;
    book.config_ = std::move(config);
    return book;
}

void GeneratorBook::enable_recording(
    std::shared_ptr<std::map<std::string, std::shared_ptr<RecordStore>>> sink) {
    record_sink_ = std::move(sink);
}

GeneratorPtr GeneratorBook::for_instance(const std::string& instance_id) const {
    GeneratorPtr inner;
    switch (kind_) {
        case Kind::Scripted: {
            auto it = scripts_.find(instance_id);
            if (it == scripts_.end())
                throw std::out_of_range("no script for instance " + instance_id);
            inner = std::make_shared<ScriptedGenerator>(it->second);
            break;
        }
        case Kind::Replay: {
            auto it = stores_.find(instance_id);
            if (it == stores_.end())
                throw std::out_of_range("no recording for instance " + instance_id);
            inner = std::make_shared<ReplayGenerator>(it->second);
            break;
        }
        case Kind::Live:
            inner = std::make_shared<LiveGenerator>(*config_);
            break;
    }
    if (record_sink_) {
        auto store = std::make_shared<RecordStore>();
        (*record_sink_)[instance_id] = store;
        return std::make_shared<RecordingGenerator>(inner, store);
    }
    return inner;
}

}  // namespace itercheck::gateway

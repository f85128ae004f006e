#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "vsp/prompting.hpp"

// Model access: chat-completion HTTP client, scripted mock, content-addressed
// reply cache and the bounded-concurrency front door that ties them together.
namespace vsp {

struct ModelProfile {
    std::string name;
    std::string endpoint;  // base URL; requests go to <endpoint>/chat/completions
    std::string api_key_env;
    std::size_t max_tokens = 4096;
    double temperature = 0.0;
    std::size_t max_parallel = 1;
    double timeout_seconds = 120.0;
};

// Profiles for the three models studied, keyed by name. Endpoints for the
// open models must be supplied by configuration.
std::vector<ModelProfile> builtin_profiles();
std::optional<ModelProfile> builtin_profile(std::string_view name);

// Throws vsp::ConfigError on max_tokens == 0, max_parallel == 0 or an empty
// name.
void validate_profile(const ModelProfile& profile);

struct ModelReply {
    std::string raw;
    bool from_cache = false;
    double latency_ms = 0.0;
    std::string request_digest;
};

// Estimated tokens kept free for the reply.
inline constexpr std::size_t kReplyBudgetTokens = 1024;

std::string sha256_hex(std::string_view data);

// SHA-256 over name, temperature, then role and content of each message, all
// separated by 0x1F.
std::string cache_key(const RenderedPrompt& prompt, const ModelProfile& profile);

// Content-addressed store at <dir>/<first 2 hex>/<digest>.json. With no
// directory the cache lives in memory only. Safe for concurrent use.
class ReplyCache {
public:
    ReplyCache() = default;
    explicit ReplyCache(std::filesystem::path directory);

    std::optional<std::string> get(const std::string& digest) const;
    void put(const std::string& digest, const std::string& profile_name, const std::string& raw);

private:
    std::filesystem::path file_for(const std::string& digest) const;

    std::optional<std::filesystem::path> directory_;
    mutable std::mutex mutex_;
    std::map<std::string, std::string> memory_;
};

class Backend {
public:
    virtual ~Backend() = default;
    // Returns the completion text. Throws HttpError (status 0 for transport
    // failures) or AuthMissing.
    virtual std::string send(const RenderedPrompt& prompt, const ModelProfile& profile) = 0;
};

// Request JSON {model, messages, temperature, max_tokens}. max_tokens here is
// the reply budget.
std::string chat_request_body(const RenderedPrompt& prompt, const ModelProfile& profile);
// choices[0].message.content; throws vsp::Error on a malformed body.
std::string parse_chat_reply(std::string_view body);

class HttpBackend : public Backend {
public:
    std::string send(const RenderedPrompt& prompt, const ModelProfile& profile) override;
};

// A rule matches on sample id or on a regular expression searched in the
// final (test-sample) message.
struct MockRule {
    std::optional<std::string> sample_id;
    std::optional<std::string> pattern;
    std::string reply;
};

inline constexpr std::string_view kUnscriptedReply = "UNSCRIPTED";

class MockBackend : public Backend {
public:
    // Throws AmbiguousScript for duplicate matchers, rules with both or
    // neither matcher, and vsp::Error for invalid regular expressions.
    explicit MockBackend(std::vector<MockRule> rules);

    // Reads {"rules": [{"sample_id"|"pattern": ..., "reply": ...}, ...]}.
    static std::unique_ptr<MockBackend> from_file(const std::filesystem::path& path);

    // Throws AmbiguousScript when more than one rule matches any prompt.
    // Runs call this on every rendered prompt before the first model call.
    void validate(const std::vector<RenderedPrompt>& prompts) const;

    std::string send(const RenderedPrompt& prompt, const ModelProfile& profile) override;

    std::size_t calls() const { return calls_.load(); }

private:
    std::vector<std::size_t> matching_rules(const RenderedPrompt& prompt) const;

    std::vector<MockRule> rules_;
    std::vector<std::optional<std::regex>> compiled_;
    std::atomic<std::size_t> calls_{0};
};

class Gateway {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    Gateway(Backend& backend, ReplyCache& cache);

    // Replaces std::this_thread::sleep_for between retries (tests record).
    void set_sleeper(Sleeper sleeper) { sleeper_ = std::move(sleeper); }

    // Throws ContextOverflow when token_estimate + reply budget exceeds
    // max_tokens; HttpError after three retries (1s, 2s, 4s) on transport
    // errors, 429 and 5xx; other statuses fail at once.
    ModelReply complete(const RenderedPrompt& prompt, const ModelProfile& profile);

    // Highest number of simultaneous backend calls seen for a profile.
    std::size_t peak_in_flight(const std::string& profile_name) const;

private:
    struct Limiter {
        std::mutex mutex;
        std::condition_variable cv;
        std::size_t in_flight = 0;
        std::size_t peak = 0;
    };
    Limiter& limiter_for(const std::string& profile_name);
    std::string call_with_retries(const RenderedPrompt& prompt, const ModelProfile& profile);

    Backend& backend_;
    ReplyCache& cache_;
    Sleeper sleeper_;
    mutable std::mutex limiters_mutex_;
    std::map<std::string, std::unique_ptr<Limiter>> limiters_;
};

}  // namespace vsp

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "vsp/gateway.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "vsp/errors.hpp"
#include "vsp/text.hpp"

namespace vsp {

using json = nlohmann::json;
namespace fs = std::filesystem;

// ---- profiles -------------------------------------------------------------

std::vector<ModelProfile> builtin_profiles() {
    return {
        {"gpt-3.5-turbo-16k", "https://api.openai.com/v1", "OPENAI_API_KEY", 16385, 0.0, 4, 120.0},
        {"llama-2-7b-chat-hf", "", "HF_API_TOKEN", 4096, 0.0, 1, 300.0},
        {"falcon-7b-instruct", "", "HF_API_TOKEN", 2048, 0.0, 1, 300.0},
    };
}

std::optional<ModelProfile> builtin_profile(std::string_view name) {
    for (auto& p : builtin_profiles()) {
        if (p.name == name) return p;
    }
    return std::nullopt;
}

void validate_profile(const ModelProfile& profile) {
    if (profile.name.empty()) throw ConfigError("model profile needs a name");
    if (profile.max_tokens == 0) throw ConfigError("profile " + profile.name + ": max_tokens must be positive");
    if (profile.max_parallel == 0) throw ConfigError("profile " + profile.name + ": max_parallel must be at least 1");
    if (profile.temperature < 0.0) throw ConfigError("profile " + profile.name + ": temperature must be >= 0");
}

// ---- digests ----------------------------------------------------------------

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 computation failed");
    }
    return to_hex(digest, length);
}

namespace {
std::string format_temperature(double t) {
    json j = t;
    return j.dump();
}
}  // namespace

std::string cache_key(const RenderedPrompt& prompt, const ModelProfile& profile) {
    constexpr char kSep = '\x1F';
    std::string canonical = profile.name;
    canonical += kSep;
    canonical += format_temperature(profile.temperature);
    for (const auto& m : prompt.messages) {
        canonical += kSep;
        canonical += to_string(m.role);
        canonical += kSep;
        canonical += m.content;
    }
    return sha256_hex(canonical);
}

// ---- cache ------------------------------------------------------------------

ReplyCache::ReplyCache(fs::path directory) : directory_(std::move(directory)) {}

fs::path ReplyCache::file_for(const std::string& digest) const {
    return *directory_ / digest.substr(0, 2) / (digest + ".json");
}

std::optional<std::string> ReplyCache::get(const std::string& digest) const {
    std::lock_guard lock(mutex_);
    if (auto it = memory_.find(digest); it != memory_.end()) return it->second;
    if (!directory_) return std::nullopt;
    const auto path = file_for(digest);
    if (!fs::exists(path)) return std::nullopt;
    auto doc = json::parse(read_file(path));
    if (doc.value("request_digest", "") != digest) throw Error("cache entry digest mismatch: " + path.string());
    return doc.at("raw").get<std::string>();
}

void ReplyCache::put(const std::string& digest, const std::string& profile_name, const std::string& raw) {
    std::lock_guard lock(mutex_);
    memory_[digest] = raw;
    if (!directory_) return;

    char stamp[32];
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);

    json doc = {{"request_digest", digest}, {"profile", profile_name}, {"raw", raw}, {"created_at", stamp}};
    const auto path = file_for(digest);
    auto tmp = path;
    tmp += ".tmp";
    write_file(tmp, doc.dump(2) + "\n");
    fs::rename(tmp, path);
}

// ---- HTTP -------------------------------------------------------------------

std::string chat_request_body(const RenderedPrompt& prompt, const ModelProfile& profile) {
    json messages = json::array();
    for (const auto& m : prompt.messages) {
        messages.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
    }
    json body = {{"model", profile.name},
                 {"messages", std::move(messages)},
                 {"temperature", profile.temperature},
                 {"max_tokens", kReplyBudgetTokens}};
    return body.dump();
}

std::string parse_chat_reply(std::string_view body) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) throw Error("reply is not JSON");
    try {
        const auto& content = doc.at("choices").at(0).at("message").at("content");
        if (content.is_null()) return {};
        return content.get<std::string>();
    } catch (const json::exception& e) {
        throw Error(std::string("unexpected chat completion shape: ") + e.what());
    }
}

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;    // base path without trailing slash
};

SplitUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("endpoint needs a scheme: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    SplitUrl out;
    out.origin = url.substr(0, path_start);
    out.path = path_start == std::string::npos ? "" : url.substr(path_start);
    while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
    return out;
}

}  // namespace

std::string HttpBackend::send(const RenderedPrompt& prompt, const ModelProfile& profile) {
    const char* key = profile.api_key_env.empty() ? nullptr : std::getenv(profile.api_key_env.c_str());
    if (!key || !*key) throw AuthMissing(profile.api_key_env.empty() ? "<unset>" : profile.api_key_env);
    if (profile.endpoint.empty()) throw ConfigError("profile " + profile.name + " has no endpoint");

    const auto url = split_url(profile.endpoint);
    httplib::Client client(url.origin);
    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::duration<double>(profile.timeout_seconds));
    client.set_connection_timeout(timeout.count() / 1000000, timeout.count() % 1000000);
    client.set_read_timeout(timeout.count() / 1000000, timeout.count() % 1000000);
    client.set_bearer_token_auth(key);

    auto result = client.Post(url.path + "/chat/completions", chat_request_body(prompt, profile), "application/json");
    if (!result) throw HttpError(0, "transport error: " + httplib::to_string(result.error()));
    if (result->status < 200 || result->status >= 300) {
        throw HttpError(result->status, result->body.substr(0, 200));
    }
    return parse_chat_reply(result->body);
}

// ---- mock -------------------------------------------------------------------

MockBackend::MockBackend(std::vector<MockRule> rules) : rules_(std::move(rules)) {
    std::map<std::string, std::size_t> seen_ids;
    std::map<std::string, std::size_t> seen_patterns;
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        const auto& r = rules_[i];
        if (r.sample_id.has_value() == r.pattern.has_value()) {
            throw AmbiguousScript("mock rule " + std::to_string(i) + " needs exactly one of sample_id or pattern");
        }
        if (r.sample_id) {
            if (!seen_ids.emplace(*r.sample_id, i).second) {
                throw AmbiguousScript("sample_id '" + *r.sample_id + "' is scripted twice");
            }
            compiled_.emplace_back(std::nullopt);
        } else {
            if (!seen_patterns.emplace(*r.pattern, i).second) {
                throw AmbiguousScript("pattern '" + *r.pattern + "' is scripted twice");
            }
            try {
                compiled_.emplace_back(std::regex(*r.pattern, std::regex::ECMAScript));
            } catch (const std::regex_error& e) {
                throw Error("invalid mock pattern '" + *r.pattern + "': " + e.what());
            }
        }
    }
}

std::unique_ptr<MockBackend> MockBackend::from_file(const fs::path& path) {
    json doc = json::parse(read_file(path), nullptr, false);
    if (doc.is_discarded() || !doc.contains("rules") || !doc["rules"].is_array()) {
        throw Error("mock script must be a JSON object with a \"rules\" array: " + path.string());
    }
    std::vector<MockRule> rules;
    for (const auto& r : doc["rules"]) {
        MockRule rule;
        if (r.contains("sample_id")) rule.sample_id = r["sample_id"].get<std::string>();
        if (r.contains("pattern")) rule.pattern = r["pattern"].get<std::string>();
        rule.reply = r.value("reply", "");
        rules.push_back(std::move(rule));
    }
    return std::make_unique<MockBackend>(std::move(rules));
}

std::vector<std::size_t> MockBackend::matching_rules(const RenderedPrompt& prompt) const {
    const std::string& text = prompt.messages.empty() ? std::string() : prompt.messages.back().content;
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        const bool hit = rules_[i].sample_id ? *rules_[i].sample_id == prompt.sample_id
                                             : std::regex_search(text, *compiled_[i]);
        if (hit) hits.push_back(i);
    }
    return hits;
}

void MockBackend::validate(const std::vector<RenderedPrompt>& prompts) const {
    for (const auto& p : prompts) {
        if (auto hits = matching_rules(p); hits.size() > 1) {
            throw AmbiguousScript("prompt for sample '" + p.sample_id + "' matches " + std::to_string(hits.size()) +
                                  " mock rules");
        }
    }
}

std::string MockBackend::send(const RenderedPrompt& prompt, const ModelProfile&) {
    ++calls_;
    auto hits = matching_rules(prompt);
    if (hits.size() > 1) {
        throw AmbiguousScript("prompt for sample '" + prompt.sample_id + "' matches " + std::to_string(hits.size()) +
                              " mock rules");
    }
    if (hits.empty()) return std::string(kUnscriptedReply);
    return rules_[hits.front()].reply;
}

// ---- gateway ----------------------------------------------------------------

Gateway::Gateway(Backend& backend, ReplyCache& cache)
    : backend_(backend), cache_(cache), sleeper_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {}

Gateway::Limiter& Gateway::limiter_for(const std::string& profile_name) {
    std::lock_guard lock(limiters_mutex_);
    auto& slot = limiters_[profile_name];
    if (!slot) slot = std::make_unique<Limiter>();
    return *slot;
}

std::size_t Gateway::peak_in_flight(const std::string& profile_name) const {
    std::lock_guard lock(limiters_mutex_);
    auto it = limiters_.find(profile_name);
    if (it == limiters_.end()) return 0;
    std::lock_guard inner(it->second->mutex);
    return it->second->peak;
}

std::string Gateway::call_with_retries(const RenderedPrompt& prompt, const ModelProfile& profile) {
    constexpr std::chrono::milliseconds kBackoff[] = {std::chrono::milliseconds(1000), std::chrono::milliseconds(2000),
                                                      std::chrono::milliseconds(4000)};
    for (std::size_t attempt = 0;; ++attempt) {
        try {
            return backend_.send(prompt, profile);
        } catch (const HttpError& e) {
            const bool transient = e.status() == 0 || e.status() == 429 || e.status() >= 500;
            if (!transient || attempt >= std::size(kBackoff)) throw;
            sleeper_(kBackoff[attempt]);
        }
    }
}

ModelReply Gateway::complete(const RenderedPrompt& prompt, const ModelProfile& profile) {
    const std::size_t needed = prompt.token_estimate + kReplyBudgetTokens;
    if (needed > profile.max_tokens) throw ContextOverflow(needed, profile.max_tokens);

    ModelReply reply;
    reply.request_digest = cache_key(prompt, profile);
    if (auto hit = cache_.get(reply.request_digest)) {
        reply.raw = std::move(*hit);
        reply.from_cache = true;
        return reply;
    }

    auto& limiter = limiter_for(profile.name);
    {
        std::unique_lock lock(limiter.mutex);
        limiter.cv.wait(lock, [&] { return limiter.in_flight < profile.max_parallel; });
        ++limiter.in_flight;
        limiter.peak = std::max(limiter.peak, limiter.in_flight);
    }
    struct Release {
        Limiter& l;
        ~Release() {
            {
                std::lock_guard lock(l.mutex);
                --l.in_flight;
            }
            l.cv.notify_one();
        }
    } release{limiter};

    const auto start = std::chrono::steady_clock::now();
    reply.raw = call_with_retries(prompt, profile);
    reply.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    cache_.put(reply.request_digest, profile.name, reply.raw);
    return reply;
}

}  // namespace vsp

#include "vsp/analysis.hpp"

#include <algorithm>

#include "vsp/errors.hpp"
#include "vsp/rng.hpp"
#include "vsp/text.hpp"

namespace vsp {

std::string_view to_string(FailureCategory c) {
    switch (c) {
        case FailureCategory::InsufficientContext: return "insufficient_context";
        case FailureCategory::OblivionOfCwe: return "oblivion_of_cwe";
        case FailureCategory::IncompleteControlFlow: return "incomplete_control_flow";
        case FailureCategory::IncompleteDataFlow: return "incomplete_data_flow";
    }
    return "insufficient_context";
}

std::string_view to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::FalseNegative: return "false_negative";
        case ErrorKind::FalsePositive: return "false_positive";
        case ErrorKind::WrongPatch: return "wrong_patch";
    }
    return "false_negative";
}

std::optional<FailureCategory> parse_failure_category(std::string_view s) {
    for (auto c : kFailureCategories) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

std::optional<ErrorKind> parse_error_kind(std::string_view s) {
    if (s == "false_negative" || s == "fn") return ErrorKind::FalseNegative;
    if (s == "false_positive" || s == "fp") return ErrorKind::FalsePositive;
    if (s == "wrong_patch") return ErrorKind::WrongPatch;
    return std::nullopt;
}

namespace {
const std::vector<std::string> kFailureHeader{"run_id", "sample_id", "error_kind", "category",
                                              "annotator", "notes", "timestamp"};
}

void append_failure_record(const std::filesystem::path& path, const FailureRecord& r) {
    std::string text;
    if (!std::filesystem::exists(path)) text = csv_line(kFailureHeader);
    text += csv_line({r.run_id, r.sample_id, std::string(to_string(r.error_kind)), std::string(to_string(r.category)),
                      r.annotator, r.notes, r.timestamp});
    append_file(path, text);
}

std::vector<FailureRecord> load_failure_records(const std::filesystem::path& path) {
    const auto records = parse_csv(read_file(path));
    if (records.empty() || records.front().fields != kFailureHeader) {
        throw Error("not a failure record file: " + path.string());
    }
    std::vector<FailureRecord> out;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& f = records[i].fields;
        if (f.size() != kFailureHeader.size()) throw MalformedRow(records[i].line, "expected 7 fields");
        auto kind = parse_error_kind(f[2]);
        auto category = parse_failure_category(f[3]);
        if (!kind || !category) throw MalformedRow(records[i].line, "unknown error kind or category");
        out.push_back({f[0], f[1], *kind, *category, f[4], f[5], f[6]});
    }
    return out;
}

FailureSample sample_failures(const std::vector<std::pair<std::string, ErrorKind>>& results, ErrorKind kind,
                              std::size_t n, std::uint64_t seed) {
    std::vector<std::string> pool;
    for (const auto& [id, k] : results) {
        if (k == kind) pool.push_back(id);
    }
    // Shuffle from a canonical order so the input order does not matter.
    std::sort(pool.begin(), pool.end());
    FailureSample out;
    out.undersized = pool.size() < n;
    seeded_shuffle(std::span<std::string>(pool), seed);
    if (pool.size() > n) pool.resize(n);
    std::sort(pool.begin(), pool.end());
    out.sample_ids = std::move(pool);
    return out;
}

std::map<FailureCategory, double> category_proportions(const std::vector<FailureRecord>& records, ErrorKind kind) {
    std::map<FailureCategory, std::size_t> counts;
    for (auto c : kFailureCategories) counts[c] = 0;
    std::size_t total = 0;
    for (const auto& r : records) {
        if (r.error_kind != kind) continue;
        ++counts[r.category];
        ++total;
    }
    if (total == 0) throw EmptySlice("no failure records of kind " + std::string(to_string(kind)));
    std::map<FailureCategory, double> out;
    for (const auto& [c, n] : counts) out[c] = static_cast<double>(n) / static_cast<double>(total);
    return out;
}

std::map<std::string, double> length_stats(const std::map<std::string, std::vector<CodeSample>>& groups) {
    std::map<std::string, double> out;
    for (const auto& [name, samples] : groups) {
        if (samples.empty()) throw EmptyGroup(name);
        std::size_t bytes = 0;
        for (const auto& s : samples) bytes += s.code.size();
        out[name] = static_cast<double>(bytes) / static_cast<double>(samples.size());
    }
    return out;
}

CampaignResult run_campaign(const std::vector<CodeSample>& snippets, Strategy strategy, const ExemplarLibrary& library,
                            Gateway& gateway, const ModelProfile& profile, const PromptOptions& options) {
    if (snippets.empty()) throw EmptyCampaign();
    for (const auto& s : snippets) {
        if (!s.cwe) throw MissingCwe(s.id);
    }

    CampaignResult result;
    for (const auto& s : snippets) {
        CampaignEntry entry;
        entry.sample_id = s.id;
        entry.truth = *s.cwe;
        try {
            const auto prompt = render_prompt(Task::Discovery, strategy, s, library, options);
            const auto reply = gateway.complete(prompt, profile);
            entry.verdict = parse_discovery(reply.raw);
            entry.hit = discovery_hit(entry.verdict, entry.truth);
        } catch (const ContextOverflow& e) {
            entry.error = e.what();
        } catch (const HttpError& e) {
            entry.error = e.what();
        }
        if (!entry.error.empty()) entry.verdict.unparseable = true;
        result.correct += entry.hit ? 1 : 0;
        result.snippets.push_back(std::move(entry));
    }
    result.accuracy = static_cast<double>(result.correct) / static_cast<double>(result.snippets.size());
    return result;
}

}  // namespace vsp

#include "vsp/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <ctime>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <thread>

#include "vsp/errors.hpp"
#include "vsp/line_diff.hpp"
#include "vsp/log.hpp"
#include "vsp/parsing.hpp"
#include "vsp/text.hpp"

namespace vsp {

using json = nlohmann::json;
namespace fs = std::filesystem;

// ---- harness configuration ------------------------------------------------

HarnessConfig default_harness_config() {
    HarnessConfig cfg;
    cfg.cache_dir = "cache";
    cfg.exemplar_dir = "data/exemplars";
    for (auto& p : builtin_profiles()) cfg.profiles[p.name] = p;
    return cfg;
}

namespace {

std::string strip_comment(std::string_view line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
        if (line[i] == '#' && !quoted) return std::string(line.substr(0, i));
    }
    return std::string(line);
}

std::string config_value(std::string_view raw, std::size_t line_no) {
    raw = trim(raw);
    if (raw.starts_with("\"")) {
        if (raw.size() < 2 || !raw.ends_with("\"")) {
            throw ConfigError("line " + std::to_string(line_no) + ": unterminated string");
        }
        std::string out;
        for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
            if (raw[i] == '\\' && i + 2 < raw.size()) ++i;
            out += raw[i];
        }
        return out;
    }
    return std::string(raw);
}

std::size_t config_count(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        auto n = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
        throw ConfigError(key + " must be a non-negative integer, got '" + value + "'");
    }
}

double config_number(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        double d = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + " must be a number, got '" + value + "'");
    }
}

fs::path resolve_against(const fs::path& base, const std::string& value) {
    fs::path p(value);
    if (p.is_relative() && !base.empty()) p = base / p;
    return p.lexically_normal();
}

}  // namespace

HarnessConfig parse_harness_config(std::string_view text, const fs::path& base_dir) {
    HarnessConfig cfg = default_harness_config();
    cfg.cache_dir = resolve_against(base_dir, "cache");
    cfg.exemplar_dir = resolve_against(base_dir, "data/exemplars");

    std::string section;
    std::size_t line_no = 0;
    for (const auto& raw_line : split_lines(text)) {
        ++line_no;
        const std::string line(trim(strip_comment(raw_line)));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": bad section header");
            section = std::string(trim(std::string_view(line).substr(1, line.size() - 2)));
            if (section.starts_with("model.")) {
                const std::string name = section.substr(6);
                if (name.empty()) throw ConfigError("line " + std::to_string(line_no) + ": model section needs a name");
                auto [it, inserted] = cfg.profiles.try_emplace(name);
                if (inserted) it->second.name = name;
            } else if (section != "paths") {
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
            }
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key(trim(std::string_view(line).substr(0, eq)));
        const std::string value = config_value(std::string_view(line).substr(eq + 1), line_no);

        if (section == "paths") {
            if (key == "cache_dir") cfg.cache_dir = resolve_against(base_dir, value);
            else if (key == "exemplar_dir") cfg.exemplar_dir = resolve_against(base_dir, value);
            else if (key == "patterns_dir") cfg.patterns_dir = resolve_against(base_dir, value);
            else throw ConfigError("line " + std::to_string(line_no) + ": unknown [paths] key " + key);
        } else if (section.starts_with("model.")) {
            auto& p = cfg.profiles[section.substr(6)];
            if (key == "endpoint") {
                p.endpoint = value.starts_with("mock://")
                                 ? "mock://" + resolve_against(base_dir, value.substr(7)).string()
                                 : value;
            } else if (key == "api_key_env") p.api_key_env = value;
            else if (key == "max_tokens") p.max_tokens = config_count(value, key);
            else if (key == "max_parallel") p.max_parallel = config_count(value, key);
            else if (key == "temperature") p.temperature = config_number(value, key);
            else if (key == "timeout") p.timeout_seconds = config_number(value, key);
            else throw ConfigError("line " + std::to_string(line_no) + ": unknown model key " + key);
        } else {
            throw ConfigError("line " + std::to_string(line_no) + ": key outside of a section");
        }
    }
    for (const auto& [name, p] : cfg.profiles) validate_profile(p);
    return cfg;
}

HarnessConfig load_harness_config(const fs::path& path) {
    return parse_harness_config(read_file(path), path.parent_path());
}

// ---- helpers ----------------------------------------------------------------

namespace {

constexpr std::string_view kMockScheme = "mock://";

std::unique_ptr<Backend> make_backend(const ModelProfile& profile) {
    if (profile.endpoint.starts_with(kMockScheme)) {
        return MockBackend::from_file(profile.endpoint.substr(kMockScheme.size()));
    }
    return std::make_unique<HttpBackend>();
}

std::string utc_stamp(const char* format) {
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::strftime(buf, sizeof buf, format, &utc);
    return buf;
}

class DirectoryLock {
public:
    explicit DirectoryLock(fs::path path) : path_(std::move(path)) {
        fs::create_directories(path_.parent_path());
        std::FILE* f = std::fopen(path_.c_str(), "wx");
        if (!f) throw Error("another run holds " + path_.string());
        std::fclose(f);
    }
    ~DirectoryLock() {
        std::error_code ec;
        fs::remove(path_, ec);
    }
    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

private:
    fs::path path_;
};

json options_json(const PromptOptions& o) {
    return {{"question_position", o.question_position == QuestionPosition::AfterCode ? "after_code" : "before_code"},
            {"explain_cwe_meaning", o.explain_cwe_meaning},
            {"inject_context_comments", o.inject_context_comments},
            {"irrelevant_text", o.irrelevant_text},
            {"exemplar_count", o.exemplar_count ? json(*o.exemplar_count) : json(nullptr)}};
}

json config_snapshot(const RunConfig& c, const ModelProfile& profile, const HarnessConfig& harness) {
    return {{"task", std::string(to_string(c.task))},
            {"strategy", std::string(to_string(c.strategy))},
            {"dataset", c.dataset.string()},
            {"origin", std::string(to_string(c.origin))},
            {"model",
             {{"name", profile.name},
              {"endpoint", profile.endpoint},
              {"max_tokens", profile.max_tokens},
              {"temperature", profile.temperature}}},
            {"options", options_json(c.options)},
            {"seed", c.seed},
            {"sample_count", c.sample_count},
            {"exemplar_dir", harness.exemplar_dir.string()},
            {"patterns_dir", harness.patterns_dir ? json(harness.patterns_dir->string()) : json(nullptr)}};
}

std::string config_digest(const json& snapshot) { return sha256_hex(snapshot.dump()); }

bool needs_exemplars(Strategy s) { return s != Strategy::Standard && s != Strategy::ZeroShotVSP; }

std::vector<CodeSample> load_dataset(const fs::path& path, Origin origin) {
    switch (origin) {
        case Origin::Cve: return load_cve_dataset(path);
        case Origin::Sard: return load_sard_dataset(path);
        case Origin::UserSupplied: break;
    }
    throw ConfigError("runs need a sard or cve dataset");
}

std::vector<CodeSample> task_samples(Task task, const std::vector<SamplePair>& pairs) {
    std::vector<CodeSample> out;
    if (task != Task::Patching) {
        out = flatten(pairs);
    } else {
        for (const auto& pair : filter_single_line_patch(pairs)) {
            if (!pair.vulnerable.vulnerable_line) {
                log_warning("pair " + pair.pair_id + " is a pure insertion with no vulnerable line; skipped");
                continue;
            }
            out.push_back(pair.vulnerable);
        }
    }
    std::sort(out.begin(), out.end(), [](const CodeSample& a, const CodeSample& b) { return a.id < b.id; });
    return out;
}

json edits_json(const std::vector<LineEdit>& edits) {
    json arr = json::array();
    for (const auto& e : edits) {
        arr.push_back({{"kind", std::string(to_string(e.kind))}, {"anchor", e.anchor}, {"new_content", e.new_content}});
    }
    return arr;
}

std::vector<LineEdit> edits_from_json(const json& arr) {
    std::vector<LineEdit> out;
    for (const auto& e : arr) {
        LineEdit edit;
        const auto kind = e.at("kind").get<std::string>();
        edit.kind = kind == "add" ? LineEdit::Kind::Add : kind == "remove" ? LineEdit::Kind::Remove : LineEdit::Kind::Replace;
        edit.anchor = e.at("anchor").get<std::string>();
        edit.new_content = e.at("new_content").get<std::string>();
        out.push_back(std::move(edit));
    }
    return out;
}

constexpr std::string_view kAnswered = "answered";
constexpr std::string_view kOverflow = "context_overflow";

struct Outcome {
    std::optional<ModelReply> reply;
    std::optional<std::string> overflow;
};

json build_row(Task task, const CodeSample& sample, const RenderedPrompt& prompt, const std::string& digest,
               const Outcome& outcome) {
    json row = {{"sample_id", sample.id},
                {"pair_id", sample.pair_id},
                {"polarity", std::string(to_string(sample.polarity))},
                {"truth_cwe", sample.cwe ? json(sample.cwe->number()) : json(nullptr)},
                {"prompt_digest", digest},
                {"token_estimate", prompt.token_estimate},
                {"outcome", outcome.overflow ? std::string(kOverflow) : std::string(kAnswered)},
                {"raw", outcome.reply ? outcome.reply->raw : std::string()}};
    const std::string raw = outcome.reply ? outcome.reply->raw : std::string();
    const bool vulnerable = sample.polarity == Polarity::Vulnerable;

    switch (task) {
        case Task::Identification: {
            IdVerdict v;
            if (outcome.reply) v = parse_identification(raw, *sample.cwe);
            const bool positive = v.decision == Decision::Positive;
            row["decision"] = std::string(to_string(v.decision));
            row["matched_phrase"] = v.matched_phrase ? json(*v.matched_phrase) : json(nullptr);
            row["correct"] = positive == vulnerable;
            row["error_kind"] = positive == vulnerable ? json(nullptr)
                                : vulnerable          ? json(std::string(to_string(ErrorKind::FalseNegative)))
                                                      : json(std::string(to_string(ErrorKind::FalsePositive)));
            break;
        }
        case Task::Discovery: {
            DiscoveryVerdict v;
            if (outcome.reply) {
                v = parse_discovery(raw);
            } else {
                v.unparseable = true;
            }
            json cwes = json::array();
            for (const auto& c : v.cwes) cwes.push_back(c.number());
            row["cwes"] = cwes;
            row["declared_safe"] = v.declared_safe;
            row["unparseable"] = v.unparseable;
            const bool correct = vulnerable ? discovery_hit(v, *sample.cwe) : v.cwes.empty();
            row["correct"] = correct;
            row["error_kind"] = correct      ? json(nullptr)
                                : vulnerable ? json(std::string(to_string(ErrorKind::FalseNegative)))
                                             : json(std::string(to_string(ErrorKind::FalsePositive)));
            break;
        }
        case Task::Patching: {
            PatchVerdict v;
            if (outcome.reply) {
                v = parse_patch(raw);
            } else {
                v.unparseable = true;
            }
            row["edits"] = edits_json(v.edits);
            row["unparseable"] = v.unparseable;
            row["code"] = sample.code;
            row["vulnerable_line"] = *sample.vulnerable_line;
            break;
        }
    }
    return row;
}

json counts_json(const ConfusionCounts& c) { return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}}; }

json summarize(Task task, const std::vector<json>& rows, const PatchLabelSheet* labels) {
    std::size_t overflow = 0;
    std::size_t tokens = 0;
    for (const auto& r : rows) {
        overflow += r.at("outcome") == kOverflow ? 1 : 0;
        tokens += r.at("token_estimate").get<std::size_t>();
    }
    json s = {{"task", std::string(to_string(task))},
              {"samples", rows.size()},
              {"context_overflow", overflow},
              {"token_estimate_total", tokens}};

    switch (task) {
        case Task::Identification: {
            std::vector<std::pair<Decision, Polarity>> results;
            std::size_t unparseable = 0;
            for (const auto& r : rows) {
                const auto d = r.at("decision").get<std::string>();
                const Decision decision = d == "positive" ? Decision::Positive
                                          : d == "negative" ? Decision::Negative
                                                            : Decision::Unparseable;
                unparseable += decision == Decision::Unparseable ? 1 : 0;
                results.emplace_back(decision, *parse_polarity(r.at("polarity").get<std::string>()));
            }
            const auto c = score_identification(results);
            s["counts"] = counts_json(c);
            s["precision"] = precision(c);
            s["recall"] = recall(c);
            s["f1"] = f1(c);
            s["unparseable"] = unparseable;
            break;
        }
        case Task::Discovery: {
            std::vector<std::pair<DiscoveryVerdict, std::optional<CweId>>> results;
            std::size_t unparseable = 0;
            std::size_t safe = 0;
            for (const auto& r : rows) {
                DiscoveryVerdict v;
                for (const auto& c : r.at("cwes")) v.cwes.insert(CweId(c.get<int>()));
                v.declared_safe = r.at("declared_safe").get<bool>();
                v.unparseable = r.at("unparseable").get<bool>();
                unparseable += v.unparseable ? 1 : 0;
                safe += v.declared_safe ? 1 : 0;
                std::optional<CweId> truth;
                if (r.at("polarity") == "vulnerable") truth = CweId(r.at("truth_cwe").get<int>());
                results.emplace_back(std::move(v), truth);
            }
            const auto per_class = score_discovery(results);
            const auto report = multiclass_report(per_class);
            json classes = json::array();
            for (const auto& m : report.per_class) {
                json entry = counts_json(per_class.at(m.cwe.number()));
                entry["cwe"] = m.cwe.number();
                entry["precision"] = m.precision;
                entry["recall"] = m.recall;
                entry["f1"] = m.f1;
                classes.push_back(entry);
            }
            s["per_class"] = classes;
            s["macro"] = {{"precision", report.macro.precision}, {"recall", report.macro.recall}, {"f1", report.macro.f1}};
            s["micro"] = {{"precision", report.micro.precision}, {"recall", report.micro.recall}, {"f1", report.micro.f1}};
            s["micro_counts"] = counts_json(report.micro_counts);
            s["unparseable"] = unparseable;
            s["declared_safe"] = safe;
            s["fp_rule"] = "a predicted class on a patched sample is a false positive for that class";
            break;
        }
        case Task::Patching: {
            std::size_t unparseable = 0;
            for (const auto& r : rows) unparseable += r.at("unparseable").get<bool>() ? 1 : 0;
            s["unparseable_patches"] = unparseable;
            if (labels) {
                s["pending"] = labels->pending();
                s["accuracy"] = labels->pending() == 0 ? json(patch_accuracy(*labels)) : json(nullptr);
            }
            break;
        }
    }
    return s;
}

std::string dump_rows(const std::vector<json>& rows) {
    std::string out;
    for (const auto& r : rows) out += r.dump() + "\n";
    return out;
}

std::vector<json> read_rows(const fs::path& path) {
    std::vector<json> rows;
    for (const auto& line : split_lines(read_file(path))) {
        if (trim(line).empty()) continue;
        rows.push_back(json::parse(line));
    }
    return rows;
}

Task run_task(const json& config) { return *parse_task(config.at("task").get<std::string>()); }

}  // namespace

// ---- run --------------------------------------------------------------------

RunRecord cmd_run(const RunConfig& config, const HarnessConfig& harness) {
    auto profile_it = harness.profiles.find(config.model);
    if (profile_it == harness.profiles.end()) throw ConfigError("unknown model profile: " + config.model);
    const ModelProfile& profile = profile_it->second;
    validate_profile(profile);
    if (!strategy_supports(config.strategy, config.task)) {
        throw StrategyTaskMismatch("strategy " + std::string(to_string(config.strategy)) + " does not support task " +
                                   std::string(to_string(config.task)));
    }

    const json snapshot = config_snapshot(config, profile, harness);
    const std::string digest = config_digest(snapshot);
    const std::string stamp = config.timestamp ? *config.timestamp : utc_stamp("%Y%m%dT%H%M%SZ");

    RunRecord record;
    record.run_id = stamp + "-" + digest.substr(0, 8);
    record.directory = config.out_dir / record.run_id;

    DirectoryLock lock(config.out_dir / ".lock");
    if (fs::exists(record.directory)) throw Error("run directory already exists: " + record.directory.string());
    fs::create_directories(record.directory);
    const fs::path partial = record.directory / "PARTIAL";
    write_file(partial, "run " + record.run_id + " did not finish\n");
    write_file(record.directory / "config.json", snapshot.dump(2) + "\n");

    // Everything the run needs is loaded before the first model call.
    auto pairs = make_pairs(load_dataset(config.dataset, config.origin));
    const std::size_t wanted = config.sample_count == 0 ? pairs.size() : config.sample_count;
    pairs = select_pairs(std::move(pairs), wanted, config.seed);
    const auto samples = task_samples(config.task, pairs);

    ExemplarLibrary library;
    if (needs_exemplars(config.strategy)) library = load_exemplars(harness.exemplar_dir);
    const PatternSet patterns = harness.patterns_dir ? load_patterns(*harness.patterns_dir) : default_patterns();
    (void)patterns;

    std::vector<RenderedPrompt> prompts;
    prompts.reserve(samples.size());
    for (const auto& s : samples) prompts.push_back(render_prompt(config.task, config.strategy, s, library, config.options));

    auto backend = make_backend(profile);
    if (auto* mock = dynamic_cast<MockBackend*>(backend.get())) mock->validate(prompts);

    ReplyCache cache(harness.cache_dir);
    Gateway gateway(*backend, cache);

    std::vector<Outcome> outcomes(prompts.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            {
                std::lock_guard lock_failure(failure_mutex);
                if (failure) return;
            }
            const std::size_t i = next.fetch_add(1);
            if (i >= prompts.size()) return;
            try {
                outcomes[i].reply = gateway.complete(prompts[i], profile);
            } catch (const ContextOverflow& e) {
                outcomes[i].overflow = e.what();
            } catch (...) {
                std::lock_guard lock_failure(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> workers;
        const std::size_t n = std::min<std::size_t>(profile.max_parallel, std::max<std::size_t>(prompts.size(), 1));
        for (std::size_t t = 0; t < n; ++t) workers.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t i = 0; i < samples.size(); ++i) {
        record.rows.push_back(build_row(config.task, samples[i], prompts[i], cache_key(prompts[i], profile), outcomes[i]));
    }

    std::optional<PatchLabelSheet> labels;
    if (config.task == Task::Patching) {
        labels.emplace();
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (outcomes[i].overflow) {
                labels->set(samples[i].id, PatchLabel::Incorrect, "harness", "context overflow");
            } else {
                labels->set(samples[i].id, PatchLabel::Pending, "", "");
            }
        }
        // Reference patches for the reviewer, keyed like the rows.
        for (auto& row : record.rows) {
            const auto id = row.at("pair_id").get<std::string>();
            auto it = std::find_if(pairs.begin(), pairs.end(), [&](const SamplePair& p) { return p.pair_id == id; });
            row["reference_patch"] = unified_diff(it->vulnerable.code, it->patched.code, 1);
        }
        save_label_sheet(record.directory / "labels.csv", *labels);
    }

    record.summary = summarize(config.task, record.rows, labels ? &*labels : nullptr);
    write_file(record.directory / "rows.jsonl", dump_rows(record.rows));
    write_file(record.directory / "summary.json", record.summary.dump(2) + "\n");
    write_file(record.directory / "run.json",
               json{{"run_id", record.run_id}, {"config_digest", digest}, {"started", stamp}}.dump(2) + "\n");
    fs::remove(partial);
    return record;
}

fs::path resolve_run(const std::string& run, const fs::path& runs_root) {
    fs::path direct(run);
    if (fs::is_directory(direct) && fs::exists(direct / "run.json")) return direct;
    fs::path under = runs_root / run;
    if (fs::is_directory(under) && fs::exists(under / "run.json")) return under;
    throw RunNotFound(run);
}

nlohmann::json recompute_summary(const fs::path& run_dir) {
    const json config = json::parse(read_file(run_dir / "config.json"));
    const Task task = run_task(config);
    const auto rows = read_rows(run_dir / "rows.jsonl");
    std::optional<PatchLabelSheet> labels;
    if (task == Task::Patching) labels = load_label_sheet(run_dir / "labels.csv");
    return summarize(task, rows, labels ? &*labels : nullptr);
}

// ---- review -------------------------------------------------------------------

namespace {

void check_config_drift(const fs::path& run_dir) {
    const json run = json::parse(read_file(run_dir / "run.json"));
    const json config = json::parse(read_file(run_dir / "config.json"));
    if (config_digest(config) != run.at("config_digest").get<std::string>()) {
        throw Error("config.json of run " + run.at("run_id").get<std::string>() + " changed since the run");
    }
}

}  // namespace

PatchLabelSheet cmd_review(const fs::path& run_dir, const std::string& annotator, std::istream& in, std::ostream& out) {
    if (!fs::exists(run_dir / "run.json")) throw RunNotFound(run_dir.string());
    check_config_drift(run_dir);
    const json config = json::parse(read_file(run_dir / "config.json"));
    if (run_task(config) != Task::Patching) throw Error("only patching runs have patches to review");

    const auto label_path = run_dir / "labels.csv";
    auto sheet = load_label_sheet(label_path);
    const auto rows = read_rows(run_dir / "rows.jsonl");
    std::map<std::string, const json*> by_id;
    for (const auto& r : rows) by_id[r.at("sample_id").get<std::string>()] = &r;

    const std::size_t total = sheet.entries.size();
    std::size_t position = 0;
    for (std::size_t idx = 0; idx < sheet.entries.size(); ++idx) {
        ++position;
        if (sheet.entries[idx].label != PatchLabel::Pending) continue;
        const std::string id = sheet.entries[idx].sample_id;
        auto it = by_id.find(id);
        if (it == by_id.end()) throw Error("labels.csv names unknown sample " + id);
        const json& row = *it->second;

        out << "=== [" << position << "/" << total << "] " << id << " ===\n";
        if (row.at("unparseable").get<bool>()) {
            out << "No patch could be parsed from the reply; labeled incorrect.\n";
            sheet.set(id, PatchLabel::Incorrect, annotator, "unparseable");
            save_label_sheet(label_path, sheet);
            continue;
        }

        const auto code = row.at("code").get<std::string>();
        const auto edits = edits_from_json(row.at("edits"));
        out << "--- original code ---\n" << code << (code.ends_with("\n") ? "" : "\n");
        out << "--- parsed edits ---\n";
        for (const auto& e : edits) {
            out << "  " << to_string(e.kind) << ": " << (e.anchor.empty() ? "<top>" : e.anchor);
            if (!e.new_content.empty()) out << "  =>  " << e.new_content;
            out << "\n";
        }
        out << "--- model patch applied ---\n";
        try {
            const auto applied = apply_edits(code, edits);
            out << unified_diff(code, applied, 1);
        } catch (const Error& e) {
            out << "(cannot apply: " << e.what() << ")\n";
        }
        out << "--- reference patch ---\n" << row.at("reference_patch").get<std::string>();
        out << "[c]orrect / [i]ncorrect / [s]kip / [q]uit? " << std::flush;

        std::string command;
        if (!std::getline(in, command)) break;
        command = to_lower(trim(command));
        if (command == "q") break;
        if (command != "c" && command != "i") continue;
        out << "notes: " << std::flush;
        std::string notes;
        std::getline(in, notes);
        sheet.set(id, command == "c" ? PatchLabel::Correct : PatchLabel::Incorrect, annotator,
                  std::string(trim(notes)));
        save_label_sheet(label_path, sheet);
    }

    // Keep summary.json in step with the labels.
    write_file(run_dir / "summary.json", recompute_summary(run_dir).dump(2) + "\n");
    out << sheet.pending() << " pending\n";
    return sheet;
}

// ---- report -------------------------------------------------------------------

namespace {

struct ReportRow {
    std::string run_id, model, dataset, task, strategy;
    std::optional<double> precision, recall, f1, macro_f1, micro_f1, accuracy;
};

std::string cell(const std::optional<double>& v, bool percent) {
    if (!v) return "";
    return percent ? format_fixed(*v * 100.0, 2) + "%" : format_fixed(*v, 6);
}

}  // namespace

ReportFiles cmd_report(const std::vector<fs::path>& run_dirs, const fs::path& report_dir) {
    std::vector<ReportRow> table;
    std::vector<std::pair<std::string, json>> summaries;
    for (const auto& dir : run_dirs) {
        if (!fs::exists(dir / "run.json")) throw RunNotFound(dir.string());
        const json run = json::parse(read_file(dir / "run.json"));
        const json config = json::parse(read_file(dir / "config.json"));
        const std::string run_id = run.at("run_id").get<std::string>();
        const Task task = run_task(config);
        if (task == Task::Patching && load_label_sheet(dir / "labels.csv").pending() > 0) throw IncompleteRun(run_id);

        const json summary = recompute_summary(dir);
        ReportRow row{run_id,
                      config.at("model").at("name").get<std::string>(),
                      config.at("origin").get<std::string>(),
                      config.at("task").get<std::string>(),
                      config.at("strategy").get<std::string>(),
                      {}, {}, {}, {}, {}, {}};
        switch (task) {
            case Task::Identification:
                row.precision = summary.at("precision").get<double>();
                row.recall = summary.at("recall").get<double>();
                row.f1 = summary.at("f1").get<double>();
                break;
            case Task::Discovery:
                row.macro_f1 = summary.at("macro").at("f1").get<double>();
                row.micro_f1 = summary.at("micro").at("f1").get<double>();
                break;
            case Task::Patching: row.accuracy = summary.at("accuracy").get<double>(); break;
        }
        table.push_back(row);

        json out = {{"run_id", run_id}, {"config", config}, {"summary", summary}};
        summaries.emplace_back(run_id, out);
    }

    ReportFiles files;
    fs::create_directories(report_dir);
    for (const auto& [id, doc] : summaries) {
        auto path = report_dir / (id + ".json");
        write_file(path, doc.dump(2) + "\n");
        files.summaries.push_back(path);
    }

    const std::vector<std::string> header{"run_id",    "model", "dataset",  "task",     "strategy", "precision",
                                          "recall",    "f1",    "macro_f1", "micro_f1", "accuracy"};
    std::string csv = csv_line(header);
    std::vector<std::vector<std::string>> text_rows{header};
    for (const auto& r : table) {
        csv += csv_line({r.run_id, r.model, r.dataset, r.task, r.strategy, cell(r.precision, false),
                         cell(r.recall, false), cell(r.f1, false), cell(r.macro_f1, false), cell(r.micro_f1, false),
                         cell(r.accuracy, false)});
        text_rows.push_back({r.run_id, r.model, r.dataset, r.task, r.strategy, cell(r.precision, true),
                             cell(r.recall, true), cell(r.f1, true), cell(r.macro_f1, true), cell(r.micro_f1, true),
                             cell(r.accuracy, true)});
    }
    std::vector<std::size_t> widths(header.size(), 0);
    for (const auto& tr : text_rows) {
        for (std::size_t c = 0; c < tr.size(); ++c) widths[c] = std::max(widths[c], tr[c].size());
    }
    std::string text;
    for (std::size_t r = 0; r < text_rows.size(); ++r) {
        std::string line;
        for (std::size_t c = 0; c < header.size(); ++c) {
            std::string v = text_rows[r][c];
            v.resize(widths[c], ' ');
            line += (c ? "  " : "") + v;
        }
        text += std::string(rtrim(line)) + "\n";
        if (r == 0) {
            std::string rule;
            for (std::size_t c = 0; c < header.size(); ++c) rule += (c ? "  " : "") + std::string(widths[c], '-');
            text += rule + "\n";
        }
    }

    files.csv = report_dir / "comparison.csv";
    files.text = report_dir / "comparison.txt";
    write_file(files.csv, csv);
    write_file(files.text, text);
    return files;
}

}  // namespace vsp

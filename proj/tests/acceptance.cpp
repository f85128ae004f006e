// Acceptance checks. One PASS/FAIL/SKIP line per criterion; exits non-zero on
// any FAIL.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "golden_cases.hpp"
#include "reply_corpus.hpp"
#include "run_fixture.hpp"
#include "support.hpp"
#include "vsp/analysis.hpp"
#include "vsp/corpus.hpp"
#include "vsp/errors.hpp"
#include "vsp/log.hpp"
#include "vsp/metrics.hpp"
#include "vsp/prompting.hpp"
#include "vsp/runner.hpp"
#include "vsp/text.hpp"

using namespace vsp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    enum class Status { Pass, Fail, Skip } status = Status::Pass;
    std::string detail;
};

Outcome pass(std::string detail) { return {Outcome::Status::Pass, std::move(detail)}; }
Outcome fail(std::string detail) { return {Outcome::Status::Fail, std::move(detail)}; }
Outcome skip(std::string detail) { return {Outcome::Status::Skip, std::move(detail)}; }

// ---- 1 ------------------------------------------------------------------------

Outcome golden_suite() {
    const auto library = load_exemplars(test::exemplar_dir());
    const auto sample = test::golden_sample();
    const auto cases = test::golden_cases();
    if (cases.size() < 14) return fail(std::to_string(cases.size()) + " combinations, need 14");
    for (const auto& c : cases) {
        const auto text = to_text(render_prompt(c.task, c.strategy, sample, library, c.options));
        const auto path = test::golden_path(c);
        if (!fs::exists(path) || read_file(path) != text) return fail(c.name + " differs from its golden file");
        for (const auto& f : c.fragments) {
            if (text.find(f) == std::string::npos) return fail(c.name + " lacks \"" + f + "\"");
        }
    }
    return pass(std::to_string(cases.size()) + " combinations byte-identical");
}

// ---- 2 ------------------------------------------------------------------------

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

Rational make(std::int64_t n, std::int64_t d) {
    if (d == 0 || n == 0) return {0, 1};
    const auto g = std::gcd(n, d);
    return {n / g, d / g};
}
Rational add(Rational a, Rational b) { return make(a.num * b.den + b.num * a.den, a.den * b.den); }
Rational mul(Rational a, Rational b) { return make(a.num * b.num, a.den * b.den); }
Rational divide(Rational a, Rational b) { return b.num == 0 ? Rational{} : make(a.num * b.den, a.den * b.num); }
double value(Rational r) { return static_cast<double>(r.num) / static_cast<double>(r.den); }

// Brute force: label every sample, count, then apply the definitions.
struct BruteScores {
    Rational p, r, f;
};
BruteScores brute(const std::vector<std::pair<bool, bool>>& predicted_actual) {
    std::int64_t tp = 0, fp = 0, fn = 0;
    for (const auto& [pred, act] : predicted_actual) {
        if (pred && act) ++tp;
        if (pred && !act) ++fp;
        if (!pred && act) ++fn;
    }
    const auto p = make(tp, tp + fp);
    const auto r = make(tp, tp + fn);
    const auto s = add(p, r);
    return {p, r, s.num == 0 ? Rational{} : divide(mul({2, 1}, mul(p, r)), s)};
}

bool close(double a, Rational b) { return std::abs(a - value(b)) <= 1e-12; }

Outcome metric_oracle() {
    std::mt19937 rng(20240101);
    std::size_t tables = 0;
    auto random_samples = [&](std::size_t n, int classes) {
        std::vector<std::pair<int, int>> out;  // predicted, actual; 0 = none
        for (std::size_t i = 0; i < n; ++i) {
            out.emplace_back(static_cast<int>(rng() % (classes + 1)), static_cast<int>(rng() % (classes + 1)));
        }
        return out;
    };

    for (int t = 0; t < 5000; ++t, ++tables) {
        const auto samples = random_samples(rng() % 60, 1);
        std::vector<std::pair<Decision, Polarity>> scored;
        std::vector<std::pair<bool, bool>> flat;
        for (const auto& [p, a] : samples) {
            scored.emplace_back(p ? Decision::Positive : Decision::Negative, a ? Polarity::Vulnerable : Polarity::Patched);
            flat.emplace_back(p == 1, a == 1);
        }
        const auto c = score_identification(scored);
        const auto b = brute(flat);
        if (!close(precision(c), b.p) || !close(recall(c), b.r) || !close(f1(c), b.f)) {
            return fail("binary table " + std::to_string(t) + " disagrees");
        }
    }

    for (int t = 0; t < 5000; ++t, ++tables) {
        const auto samples = random_samples(rng() % 80, 5);
        std::vector<std::pair<DiscoveryVerdict, std::optional<CweId>>> scored;
        for (const auto& [p, a] : samples) {
            DiscoveryVerdict v;
            if (p) v.cwes.insert(CweId(kSupportedCwes[p - 1]));
            scored.emplace_back(v, a ? std::optional<CweId>(kSupportedCwes[a - 1]) : std::nullopt);
        }
        const auto report = multiclass_report(score_discovery(scored));
        Rational macro_p, macro_r, macro_f;
        std::vector<std::pair<bool, bool>> pooled;
        for (int k = 1; k <= 5; ++k) {
            std::vector<std::pair<bool, bool>> one;
            for (const auto& [p, a] : samples) one.emplace_back(p == k, a == k);
            pooled.insert(pooled.end(), one.begin(), one.end());
            const auto b = brute(one);
            const auto& m = report.per_class[k - 1];
            if (!close(m.precision, b.p) || !close(m.recall, b.r) || !close(m.f1, b.f)) {
                return fail("class table " + std::to_string(t) + " disagrees");
            }
            macro_p = add(macro_p, b.p);
            macro_r = add(macro_r, b.r);
            macro_f = add(macro_f, b.f);
        }
        const Rational five{5, 1};
        const auto micro = brute(pooled);
        if (!close(report.macro.precision, divide(macro_p, five)) || !close(report.macro.recall, divide(macro_r, five)) ||
            !close(report.macro.f1, divide(macro_f, five)) || !close(report.micro.precision, micro.p) ||
            !close(report.micro.recall, micro.r) || !close(report.micro.f1, micro.f)) {
            return fail("averages for table " + std::to_string(t) + " disagree");
        }
    }

    const auto macro = format_fixed(macro_average({64.08, 69.84, 18.18, 85.71, 1.52}), 2);
    if (macro != "47.87") return fail("published macro F1 gives " + macro);
    return pass(std::to_string(tables) + " tables exact, macro F1 47.87%");
}

// ---- 3 ------------------------------------------------------------------------

Outcome parser_corpus() {
    const auto doc = nlohmann::json::parse(read_file(test::data_dir() / "reply_corpus.json"));
    std::set<std::string> tags;
    for (const auto& e : doc.at("replies")) tags.insert(e.at("tag").get<std::string>());
    for (const auto* needed : {"affirmation", "negation", "last_conclusion_override", "multi_cwe", "safety",
                               "whole_function_dump", "fenced_diff", "prose_replace"}) {
        if (!tags.contains(needed)) return fail(std::string("corpus has no ") + needed + " fixtures");
    }
    const auto corpus = test::check_reply_corpus();
    if (corpus.total < 60) return fail(std::to_string(corpus.total) + " fixtures, need 60");
    if (!corpus.mismatches.empty()) return fail("mismatch: " + corpus.mismatches.front());
    const auto trip = test::verdict_round_trip(1000, 7);
    if (!trip.failures.empty()) return fail("round trip failed: " + trip.failures.front());
    return pass(std::to_string(corpus.total) + " fixtures agree, " + std::to_string(trip.total) + " round trips");
}

// ---- 4 ------------------------------------------------------------------------

Outcome deterministic_run() {
    test::TempDir dir;
    std::vector<std::map<std::string, std::string>> outputs;
    nlohmann::json summary;
    int i = 0;
    for (std::size_t parallel : {1, 1, 4, 4}) {
        const auto harness = test::mock_harness(dir, "identification_tp2_fp1_fn2_tn3.json", 16385, parallel);
        const auto out = dir / ("runs" + std::to_string(i++));
        const auto record = cmd_run(test::sard_run(Task::Identification, Strategy::VSP, out), harness);
        outputs.push_back(test::run_files(record.directory));
        summary = record.summary;
    }
    const auto& c = summary["counts"];
    if (c["tp"] != 2 || c["fp"] != 1 || c["fn"] != 2 || c["tn"] != 3) return fail("counts " + c.dump());
    const double p = summary["precision"], r = summary["recall"], f = summary["f1"];
    if (std::abs(p - 0.6667) > 1e-4 || std::abs(p - 2.0 / 3.0) > 1e-9 || std::abs(r - 0.5) > 1e-9 ||
        std::abs(f - 4.0 / 7.0) > 1e-9) {
        return fail("P/R/F1 " + summary.dump());
    }
    for (std::size_t k = 1; k < outputs.size(); ++k) {
        if (outputs[k] != outputs[0]) return fail("run " + std::to_string(k) + " differs from run 0");
    }
    return pass("P " + format_fixed(p, 4) + " R " + format_fixed(r, 4) + " F1 " + format_fixed(f, 4) +
                ", 4 runs byte-identical");
}

// ---- 5 ------------------------------------------------------------------------

// Leading and trailing lines that survive both sides (trailing blanks ignored);
// a one-line patch leaves at most one line on each side and at least one overall.
bool trim_oracle_single(const std::string& a, const std::string& b) {
    auto x = split_lines(a), y = split_lines(b);
    auto eq = [](const std::string& s, const std::string& t) { return rtrim(s) == rtrim(t); };
    std::size_t p = 0;
    while (p < x.size() && p < y.size() && eq(x[p], y[p])) ++p;
    std::size_t s = 0;
    while (s < x.size() - p && s < y.size() - p && eq(x[x.size() - 1 - s], y[y.size() - 1 - s])) ++s;
    const auto old_left = x.size() - p - s, new_left = y.size() - p - s;
    return old_left <= 1 && new_left <= 1 && old_left + new_left >= 1;
}

Outcome single_line_filter() {
    std::mt19937 rng(255);
    enum Kind { Replace, Delete, Insert, TwoReplaced, ReplaceAndInsert, Swap, Identical, WhitespaceOnly, kKinds };
    std::vector<SamplePair> pairs;
    std::set<std::string> planted_single;
    for (int i = 0; i < 255; ++i) {
        const auto kind = static_cast<Kind>(i % kKinds);
        std::vector<std::string> lines;
        const std::size_t n = 4 + rng() % 10;
        for (std::size_t k = 0; k < n; ++k) lines.push_back("    stmt_" + std::to_string(i) + "_" + std::to_string(k) + ";");
        auto changed = lines;
        const std::size_t at = 1 + rng() % (n - 2);
        switch (kind) {
            case Replace: changed[at] = "    fixed_" + std::to_string(i) + ";"; break;
            case Delete: changed.erase(changed.begin() + static_cast<long>(at)); break;
            case Insert: changed.insert(changed.begin() + static_cast<long>(at), "    guard();"); break;
            case TwoReplaced:
                changed[at] = "    fixed_a;";
                changed[at + 1] = "    fixed_b;";
                break;
            case ReplaceAndInsert:
                changed[at] = "    fixed_a;";
                changed.insert(changed.begin() + static_cast<long>(at), "    guard();");
                break;
            case Swap: std::swap(changed[at - 1], changed[at]); break;
            case Identical: break;
            case WhitespaceOnly: changed[at] += "   "; break;
            case kKinds: break;
        }
        SamplePair p;
        p.pair_id = "g" + std::to_string(1000 + i);
        p.vulnerable = {p.pair_id + "-vul", join_lines(lines, true), Polarity::Vulnerable, CweId(787)};
        p.vulnerable.pair_id = p.pair_id;
        p.patched = {p.pair_id + "-pat", join_lines(changed, true), Polarity::Patched, std::nullopt};
        p.patched.pair_id = p.pair_id;
        if (kind == Replace || kind == Delete || kind == Insert) planted_single.insert(p.pair_id);
        pairs.push_back(std::move(p));
    }

    std::set<std::string> kept;
    for (const auto& p : filter_single_line_patch(pairs)) kept.insert(p.pair_id);
    std::size_t disagreements = 0, planted_mismatch = 0;
    for (const auto& p : pairs) {
        const bool oracle = trim_oracle_single(p.vulnerable.code, p.patched.code);
        if (kept.contains(p.pair_id) != oracle) ++disagreements;
        if (planted_single.contains(p.pair_id) != oracle) ++planted_mismatch;
    }
    if (planted_mismatch) return fail(std::to_string(planted_mismatch) + " fixtures where the oracle misreads the plant");
    if (disagreements) return fail(std::to_string(disagreements) + " disagreements with the oracle");
    return pass("255 pairs, " + std::to_string(kept.size()) + " kept, 0 disagreements");
}

// ---- 6 ------------------------------------------------------------------------

Outcome overflow_policy() {
    test::TempDir dir;
    // Long functions: the code alone exceeds what a 2,048-token window leaves.
    const auto dataset = dir / "long";
    for (int c = 0; c < 3; ++c) {
        std::string bad = "int process_" + std::to_string(c) + "(int *v, int n)\n{\n    int acc = 0;\n";
        for (int k = 0; k < 150; ++k) bad += "    acc += v[" + std::to_string(k) + "] * " + std::to_string(k + c) + ";\n";
        std::string good = bad;
        bad += "    return v[n];\n}\n";
        good += "    return n < 150 ? v[n] : 0;\n}\n";
        const std::string name = "long" + std::to_string(c);
        write_file(dataset / (name + "_bad.c"), bad);
        write_file(dataset / (name + "_good.c"), good);
        write_file(dataset / (name + ".manifest"),
                   "cwe=CWE-125\nbad=" + name + "_bad.c\ngood=" + name + "_good.c\nflaw_line=" + std::to_string(154) + "\n");
    }
    const auto harness = test::mock_harness(dir, "patching_sard8.json", 2048, 1, "falcon-7b-instruct");
    auto config = test::sard_run(Task::Patching, Strategy::VSP, dir / "runs", "falcon-7b-instruct");
    config.dataset = dataset;
    const auto record = cmd_run(config, harness);

    const auto sheet = load_label_sheet(record.directory / "labels.csv");
    for (const auto& e : sheet.entries) {
        if (e.label != PatchLabel::Incorrect) return fail(e.sample_id + " not recorded as incorrect");
    }
    if (record.summary["context_overflow"] != 3) return fail("summary " + record.summary.dump());
    cmd_report({record.directory}, dir / "report");
    const auto accuracy = record.summary["accuracy"];
    if (!accuracy.is_number() || accuracy.get<double>() != 0.0) return fail("accuracy " + accuracy.dump());
    return pass("3 of 3 prompts overflow the 2,048-token profile, patch accuracy 0.00%");
}

// ---- 7 ------------------------------------------------------------------------

Outcome analysis_arithmetic() {
    using C = FailureCategory;
    std::vector<FailureRecord> records;
    const std::vector<std::pair<C, int>> mix = {
        {C::InsufficientContext, 35}, {C::OblivionOfCwe, 19}, {C::IncompleteControlFlow, 18}, {C::IncompleteDataFlow, 28}};
    int n = 0;
    for (const auto& [category, count] : mix) {
        for (int i = 0; i < count; ++i) {
            records.push_back({"run", "s" + std::to_string(n++), ErrorKind::FalseNegative, category, "a", "", ""});
        }
    }
    std::shuffle(records.begin(), records.end(), std::mt19937(9));
    const auto p = category_proportions(records, ErrorKind::FalseNegative);
    for (const auto& [category, count] : mix) {
        if (p.at(category) != count / 100.0) {
            return fail(std::string(to_string(category)) + " = " + format_fixed(p.at(category), 6));
        }
    }

    std::map<std::string, std::vector<CodeSample>> groups;
    auto sample = [](std::size_t bytes) {
        CodeSample s;
        s.code = std::string(bytes, 'c');
        return s;
    };
    groups["all"] = {sample(2000), sample(5708), sample(3854)};  // mean 3,854
    groups["oblivion"] = {sample(5000), sample(6762)};           // mean 5,881
    groups["one"] = {sample(7)};
    const auto stats = length_stats(groups);
    if (stats.at("all") != 3854.0 || stats.at("oblivion") != 5881.0 || stats.at("one") != 7.0) {
        return fail("length means " + format_fixed(stats.at("all"), 3) + ", " + format_fixed(stats.at("oblivion"), 3));
    }
    return pass("35%/19%/18%/28% recovered, means 3,854 and 5,881 bytes exact");
}

// ---- 8 ------------------------------------------------------------------------

Outcome live_mode() {
    const char* model = std::getenv("VSP_LIVE_MODEL");
    const char* dataset = std::getenv("VSP_LIVE_DATASET");
    if (!model || !dataset) return skip("set VSP_LIVE_MODEL and VSP_LIVE_DATASET (optionally VSP_LIVE_CONFIG, VSP_LIVE_ORIGIN)");
    const char* config_path = std::getenv("VSP_LIVE_CONFIG");
    auto harness = config_path ? load_harness_config(config_path) : default_harness_config();
    if (!config_path) harness.exemplar_dir = test::exemplar_dir();
    const char* origin_env = std::getenv("VSP_LIVE_ORIGIN");
    const auto origin = origin_env && std::string(origin_env) == "cve" ? Origin::Cve : Origin::Sard;

    test::TempDir dir;
    std::vector<fs::path> finished;
    for (auto task : {Task::Identification, Task::Discovery, Task::Patching}) {
        RunConfig c;
        c.task = task;
        c.strategy = Strategy::VSP;
        c.dataset = dataset;
        c.origin = origin;
        c.model = model;
        c.sample_count = 20;
        c.out_dir = dir / "runs";
        const auto record = cmd_run(c, harness);
        if (!record.summary.contains("samples")) return fail("malformed summary for " + std::string(to_string(task)));
        if (task != Task::Patching) finished.push_back(record.directory);
    }
    const auto files = cmd_report(finished, dir / "report");
    if (parse_csv(read_file(files.csv)).size() != finished.size() + 1) return fail("malformed comparison table");
    return pass("three 20-pair runs and a report completed");
}

}  // namespace

int main() {
    set_log_sink([](std::string_view) {});

    struct Criterion {
        int number;
        std::string name;
        double limit_seconds;  // 0 = none
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria = {
        {1, "prompt golden suite", 5, golden_suite},
        {2, "metric oracle equivalence", 10, metric_oracle},
        {3, "parser corpus and round trip", 10, parser_corpus},
        {4, "deterministic end-to-end run", 5, deterministic_run},
        {5, "single-line filter oracle", 5, single_line_filter},
        {6, "context overflow policy", 0, overflow_policy},
        {7, "analysis arithmetic", 0, analysis_arithmetic},
        {8, "live mode", 0, live_mode},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (o.status == Outcome::Status::Pass && c.limit_seconds > 0 && secs >= c.limit_seconds) {
            o = fail("took " + format_fixed(secs, 2) + " s, limit " + format_fixed(c.limit_seconds, 0) + " s");
        }
        const char* label = o.status == Outcome::Status::Pass ? "PASS" : o.status == Outcome::Status::Fail ? "FAIL" : "SKIP";
        if (o.status == Outcome::Status::Fail) ++failures;
        std::printf("%s [%d] %s (%.2f s): %s\n", label, c.number, c.name.c_str(), secs, o.detail.c_str());
    }
    return failures == 0 ? 0 : 1;
}

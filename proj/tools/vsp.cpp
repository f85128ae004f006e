#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vsp/analysis.hpp"
#include "vsp/errors.hpp"
#include "vsp/runner.hpp"
#include "vsp/text.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

vsp::HarnessConfig harness_from(const std::string& config_path) {
    if (!config_path.empty()) return vsp::load_harness_config(config_path);
    if (fs::exists("vsp.toml")) return vsp::load_harness_config("vsp.toml");
    return vsp::default_harness_config();
}

vsp::Task task_arg(const std::string& s) {
    auto t = vsp::parse_task(s);
    if (!t) throw vsp::ConfigError("unknown task: " + s);
    return *t;
}

vsp::Strategy strategy_arg(const std::string& s) {
    auto st = vsp::parse_strategy(s);
    if (!st) throw vsp::ConfigError("unknown strategy: " + s);
    return *st;
}

vsp::Origin origin_arg(const std::string& s) {
    auto o = vsp::parse_origin(s);
    if (!o) throw vsp::ConfigError("unknown origin: " + s);
    return *o;
}

std::string utc_now() {
    char buf[32];
    std::time_t t = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&t, &utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

struct RunArgs {
    std::string task, strategy, dataset, origin = "sard", model, out = "runs", config, timestamp;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::size_t exemplars = 0;
    bool after_code = false, explain = false, irrelevant = false, context = false;
};

void add_prompt_flags(CLI::App* cmd, RunArgs& a) {
    cmd->add_option("--task", a.task, "id | discover | patch")->required();
    cmd->add_option("--strategy", a.strategy, "standard | fewshot | naivecot | zeroshot-vsp | vsp | othertype-vsp")
        ->required();
    cmd->add_flag("--question-after-code", a.after_code, "Place the question after the code");
    cmd->add_flag("--explain-cwe", a.explain, "Spell out the CWE meaning in identification questions");
    cmd->add_flag("--irrelevant-text", a.irrelevant, "Use exemplars with irrelevant reasoning text");
    cmd->add_flag("--context-comments", a.context, "Use code annotated with context comments");
    cmd->add_option("--exemplars", a.exemplars, "Keep at most this many exemplars (0 keeps all)");
    cmd->add_option("--config", a.config, "Harness config file (default ./vsp.toml if present)");
}

vsp::PromptOptions prompt_options(const RunArgs& a) {
    vsp::PromptOptions o;
    o.question_position = a.after_code ? vsp::QuestionPosition::AfterCode : vsp::QuestionPosition::BeforeCode;
    o.explain_cwe_meaning = a.explain;
    o.irrelevant_text = a.irrelevant;
    o.inject_context_comments = a.context;
    if (a.exemplars > 0) o.exemplar_count = a.exemplars;
    return o;
}

int do_run(const RunArgs& a) {
    vsp::RunConfig c;
    c.task = task_arg(a.task);
    c.strategy = strategy_arg(a.strategy);
    c.dataset = a.dataset;
    c.origin = origin_arg(a.origin);
    c.model = a.model;
    c.options = prompt_options(a);
    c.seed = a.seed;
    c.sample_count = a.n;
    c.out_dir = a.out;
    if (!a.timestamp.empty()) c.timestamp = a.timestamp;
    auto record = vsp::cmd_run(c, harness_from(a.config));
    std::cout << record.run_id << "\n" << record.summary.dump(2) << "\n";
    return 0;
}

// Prints the prompts of a dataset without calling a model.
int do_render(const RunArgs& a) {
    const auto harness = harness_from(a.config);
    const auto task = task_arg(a.task);
    const auto strategy = strategy_arg(a.strategy);
    auto samples = vsp::flatten(vsp::make_pairs(origin_arg(a.origin) == vsp::Origin::Cve
                                                    ? vsp::load_cve_dataset(a.dataset)
                                                    : vsp::load_sard_dataset(a.dataset)));
    vsp::ExemplarLibrary library;
    if (strategy != vsp::Strategy::Standard && strategy != vsp::Strategy::ZeroShotVSP) {
        library = vsp::load_exemplars(harness.exemplar_dir);
    }
    std::size_t shown = 0;
    for (const auto& s : samples) {
        if (task == vsp::Task::Patching && (s.polarity != vsp::Polarity::Vulnerable || !s.vulnerable_line)) continue;
        std::cout << vsp::to_text(vsp::render_prompt(task, strategy, s, library, prompt_options(a))) << "\n";
        if (a.n > 0 && ++shown == a.n) break;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vulnerability-semantics prompting experiments"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Render prompts, query a model and score the replies");
    add_prompt_flags(run, run_args);
    run->add_option("--dataset", run_args.dataset, "CVE CSV file or SARD manifest directory")->required();
    run->add_option("--origin", run_args.origin, "sard | cve");
    run->add_option("--model", run_args.model, "Model profile name")->required();
    run->add_option("--seed", run_args.seed, "Seed for pair selection");
    run->add_option("--n", run_args.n, "Number of pairs (0 keeps all)");
    run->add_option("--out", run_args.out, "Directory that receives the run");
    run->add_option("--timestamp", run_args.timestamp, "UTC stamp for the run id, e.g. 20261016T093000Z");

    RunArgs render_args;
    auto* render = app.add_subcommand("render", "Print rendered prompts without calling a model");
    add_prompt_flags(render, render_args);
    render->add_option("--dataset", render_args.dataset, "CVE CSV file or SARD manifest directory")->required();
    render->add_option("--origin", render_args.origin, "sard | cve");
    render->add_option("--n", render_args.n, "Stop after this many prompts");

    std::string review_run, runs_root = "runs", annotator;
    auto* review = app.add_subcommand("review", "Label pending patches of a patching run");
    review->add_option("--run", review_run, "Run id or directory")->required();
    review->add_option("--runs-root", runs_root, "Where run ids are looked up");
    review->add_option("--annotator", annotator, "Name recorded with each label");

    std::vector<std::string> report_runs;
    std::string report_out = "report";
    auto* report = app.add_subcommand("report", "Summaries and a comparison table for finished runs");
    report->add_option("--runs", report_runs, "Run ids or directories")->required();
    report->add_option("--runs-root", runs_root, "Where run ids are looked up");
    report->add_option("--out", report_out, "Report directory");

    std::string campaign_snippets, campaign_model, campaign_strategy = "vsp", campaign_config;
    auto* campaign = app.add_subcommand("campaign", "Discovery over labeled snippets (CVE CSV)");
    campaign->add_option("--snippets", campaign_snippets, "CVE CSV of vulnerable snippets")->required();
    campaign->add_option("--model", campaign_model, "Model profile name")->required();
    campaign->add_option("--strategy", campaign_strategy, "Prompting strategy");
    campaign->add_option("--config", campaign_config, "Harness config file");

    auto* failures = app.add_subcommand("failures", "Failure-case sampling and annotation");
    failures->require_subcommand(1);
    std::string fail_run, fail_kind = "fn";
    std::size_t fail_n = 100;
    std::uint64_t fail_seed = 0;
    auto* fail_sample = failures->add_subcommand("sample", "Pick failure cases of a run for annotation");
    fail_sample->add_option("--run", fail_run, "Run id or directory")->required();
    fail_sample->add_option("--runs-root", runs_root, "Where run ids are looked up");
    fail_sample->add_option("--kind", fail_kind, "fn | fp");
    fail_sample->add_option("--n", fail_n, "Number of cases");
    fail_sample->add_option("--seed", fail_seed, "Selection seed");

    std::string rec_file, rec_sample, rec_category, rec_notes;
    auto* fail_record = failures->add_subcommand("record", "Append one annotated failure");
    fail_record->add_option("--file", rec_file, "Failure record CSV")->required();
    fail_record->add_option("--run", fail_run, "Run id")->required();
    fail_record->add_option("--sample", rec_sample, "Sample id")->required();
    fail_record->add_option("--kind", fail_kind, "false_negative | false_positive | wrong_patch")->required();
    fail_record->add_option("--category", rec_category,
                            "insufficient_context | oblivion_of_cwe | incomplete_control_flow | incomplete_data_flow")
        ->required();
    fail_record->add_option("--annotator", annotator, "Annotator name");
    fail_record->add_option("--notes", rec_notes, "Free-form notes");

    auto* fail_summary = failures->add_subcommand("summary", "Category proportions of recorded failures");
    fail_summary->add_option("--file", rec_file, "Failure record CSV")->required();
    fail_summary->add_option("--kind", fail_kind, "false_negative | false_positive | wrong_patch");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return do_run(run_args);
        if (render->parsed()) return do_render(render_args);

        if (review->parsed()) {
            auto dir = vsp::resolve_run(review_run, runs_root);
            auto sheet = vsp::cmd_review(dir, annotator, std::cin, std::cout);
            return sheet.pending() == 0 ? 0 : 3;
        }

        if (report->parsed()) {
            std::vector<fs::path> dirs;
            for (const auto& r : report_runs) dirs.push_back(vsp::resolve_run(r, runs_root));
            auto files = vsp::cmd_report(dirs, report_out);
            std::cout << vsp::read_file(files.text);
            return 0;
        }

        if (campaign->parsed()) {
            auto harness = harness_from(campaign_config);
            auto it = harness.profiles.find(campaign_model);
            if (it == harness.profiles.end()) throw vsp::ConfigError("unknown model profile: " + campaign_model);
            const auto strategy = strategy_arg(campaign_strategy);
            std::vector<vsp::CodeSample> snippets;
            for (auto& s : vsp::load_cve_dataset(campaign_snippets)) {
                if (s.polarity == vsp::Polarity::Vulnerable) snippets.push_back(std::move(s));
            }
            vsp::ExemplarLibrary library;
            if (strategy != vsp::Strategy::Standard && strategy != vsp::Strategy::ZeroShotVSP) {
                library = vsp::load_exemplars(harness.exemplar_dir);
            }
            std::unique_ptr<vsp::Backend> backend;
            const auto& profile = it->second;
            if (profile.endpoint.starts_with("mock://")) {
                backend = vsp::MockBackend::from_file(profile.endpoint.substr(7));
            } else {
                backend = std::make_unique<vsp::HttpBackend>();
            }
            vsp::ReplyCache cache(harness.cache_dir);
            vsp::Gateway gateway(*backend, cache);
            auto result = vsp::run_campaign(snippets, strategy, library, gateway, profile);
            for (const auto& e : result.snippets) {
                std::cout << e.sample_id << "  " << e.truth.label() << "  " << (e.hit ? "hit" : "miss");
                if (!e.error.empty()) std::cout << "  (" << e.error << ")";
                std::cout << "\n";
            }
            std::cout << result.correct << "/" << result.snippets.size() << " = "
                      << vsp::format_fixed(result.accuracy * 100.0, 2) << "%\n";
            return 0;
        }

        if (fail_sample->parsed()) {
            auto dir = vsp::resolve_run(fail_run, runs_root);
            auto kind = vsp::parse_error_kind(fail_kind);
            if (!kind) throw vsp::ConfigError("unknown error kind: " + fail_kind);
            std::vector<std::pair<std::string, vsp::ErrorKind>> results;
            for (const auto& line : vsp::split_lines(vsp::read_file(dir / "rows.jsonl"))) {
                if (vsp::trim(line).empty()) continue;
                auto row = json::parse(line);
                if (!row.contains("error_kind") || row["error_kind"].is_null()) continue;
                if (auto k = vsp::parse_error_kind(row["error_kind"].get<std::string>())) {
                    results.emplace_back(row["sample_id"].get<std::string>(), *k);
                }
            }
            auto picked = vsp::sample_failures(results, *kind, fail_n, fail_seed);
            if (picked.undersized) std::cerr << "warning: only " << picked.sample_ids.size() << " candidates\n";
            for (const auto& id : picked.sample_ids) std::cout << id << "\n";
            return 0;
        }

        if (fail_record->parsed()) {
            auto kind = vsp::parse_error_kind(fail_kind);
            auto category = vsp::parse_failure_category(rec_category);
            if (!kind) throw vsp::ConfigError("unknown error kind: " + fail_kind);
            if (!category) throw vsp::ConfigError("unknown category: " + rec_category);
            vsp::append_failure_record(rec_file, {fail_run, rec_sample, *kind, *category, annotator, rec_notes, utc_now()});
            return 0;
        }

        if (fail_summary->parsed()) {
            auto kind = vsp::parse_error_kind(fail_kind);
            if (!kind) throw vsp::ConfigError("unknown error kind: " + fail_kind);
            for (const auto& [c, share] : vsp::category_proportions(vsp::load_failure_records(rec_file), *kind)) {
                std::cout << vsp::to_string(c) << "  " << vsp::format_fixed(share * 100.0, 2) << "%\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

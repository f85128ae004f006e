#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vsp/analysis.hpp"
#include "vsp/corpus.hpp"
#include "vsp/gateway.hpp"
#include "vsp/metrics.hpp"
#include "vsp/prompting.hpp"

// End-to-end experiment orchestration behind the command-line tool.
namespace vsp {

// Harness-wide settings read from a TOML-style file:
//
//   [paths]
//   cache_dir = "cache"
//   exemplar_dir = "data/exemplars"
//   patterns_dir = "data/patterns"      # optional
//
//   [model.gpt-3.5-turbo-16k]
//   endpoint = "https://api.openai.com/v1"
//   api_key_env = "OPENAI_API_KEY"
//   max_tokens = 16385
//   max_parallel = 4
//
// Relative paths resolve against the file's directory. Model sections
// override the built-in profiles field by field. An endpoint of the form
// "mock://<script.json>" selects the scripted mock backend.
struct HarnessConfig {
    std::filesystem::path cache_dir;
    std::filesystem::path exemplar_dir;
    std::optional<std::filesystem::path> patterns_dir;
    std::map<std::string, ModelProfile> profiles;
};

HarnessConfig default_harness_config();
HarnessConfig load_harness_config(const std::filesystem::path& path);
HarnessConfig parse_harness_config(std::string_view text, const std::filesystem::path& base_dir);

struct RunConfig {
    Task task = Task::Identification;
    Strategy strategy = Strategy::VSP;
    std::filesystem::path dataset;
    Origin origin = Origin::Sard;
    std::string model;
    PromptOptions options;
    std::uint64_t seed = 0;
    std::size_t sample_count = 0;  // pairs to select; 0 keeps all
    std::filesystem::path out_dir;
    // UTC stamp used in the run id ("20261016T093000Z"); now when unset.
    std::optional<std::string> timestamp;
};

struct RunRecord {
    std::string run_id;
    std::filesystem::path directory;
    std::vector<nlohmann::json> rows;  // sorted by sample_id
    nlohmann::json summary;
};

// Files in <out_dir>/<run_id>/: config.json, rows.jsonl, summary.json,
// run.json (id, config digest, start stamp) and, for patching, labels.csv. A PARTIAL
// marker exists while the run is in progress and stays behind if it aborts.
RunRecord cmd_run(const RunConfig& config, const HarnessConfig& harness);

// Resolves a run given as a directory path or as an id under runs_root.
std::filesystem::path resolve_run(const std::string& run, const std::filesystem::path& runs_root);

// Interactive adjudication of pending patch labels. Reads one command per
// entry from `in` ("c" correct, "i" incorrect, "s" skip, "q" quit) followed by
// a notes line for c/i. Saves after every label, so it can be resumed.
PatchLabelSheet cmd_review(const std::filesystem::path& run_dir, const std::string& annotator, std::istream& in,
                           std::ostream& out);

struct ReportFiles {
    std::vector<std::filesystem::path> summaries;
    std::filesystem::path csv;
    std::filesystem::path text;
};

// Per-run JSON summaries plus a comparison table (CSV and aligned text) in
// report_dir. Throws IncompleteRun for patching runs with pending labels.
ReportFiles cmd_report(const std::vector<std::filesystem::path>& run_dirs, const std::filesystem::path& report_dir);

// Recomputes a run's summary from its persisted rows (and labels.csv for
// patching); used to audit summary.json.
nlohmann::json recompute_summary(const std::filesystem::path& run_dir);

}  // namespace vsp

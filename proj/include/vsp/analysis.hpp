#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vsp/corpus.hpp"
#include "vsp/gateway.hpp"
#include "vsp/parsing.hpp"
#include "vsp/prompting.hpp"

// Failure-case sampling and bookkeeping, code-length statistics and the
// zero-day discovery campaign.
namespace vsp {

enum class FailureCategory { InsufficientContext, OblivionOfCwe, IncompleteControlFlow, IncompleteDataFlow };
inline constexpr FailureCategory kFailureCategories[] = {
    FailureCategory::InsufficientContext, FailureCategory::OblivionOfCwe, FailureCategory::IncompleteControlFlow,
    FailureCategory::IncompleteDataFlow};

enum class ErrorKind { FalseNegative, FalsePositive, WrongPatch };

std::string_view to_string(FailureCategory c);
std::string_view to_string(ErrorKind k);
std::optional<FailureCategory> parse_failure_category(std::string_view s);
std::optional<ErrorKind> parse_error_kind(std::string_view s);

struct FailureRecord {
    std::string run_id;
    std::string sample_id;
    ErrorKind error_kind = ErrorKind::FalseNegative;
    FailureCategory category = FailureCategory::InsufficientContext;
    std::string annotator;
    std::string notes;
    std::string timestamp;
};

// Append-only CSV: run_id,sample_id,error_kind,category,annotator,notes,timestamp.
// The header is written when the file is new.
void append_failure_record(const std::filesystem::path& path, const FailureRecord& record);
std::vector<FailureRecord> load_failure_records(const std::filesystem::path& path);

struct FailureSample {
    std::vector<std::string> sample_ids;  // sorted
    bool undersized = false;              // fewer candidates than requested
};

// Seeded selection (the corpus shuffle) of n ids among results of one kind.
FailureSample sample_failures(const std::vector<std::pair<std::string, ErrorKind>>& results, ErrorKind kind,
                              std::size_t n, std::uint64_t seed);

// Share of each category among records of the given kind; all four
// categories are present. Throws EmptySlice when there are none.
std::map<FailureCategory, double> category_proportions(const std::vector<FailureRecord>& records, ErrorKind kind);

// Mean UTF-8 byte length of the code in each group. Throws EmptyGroup.
std::map<std::string, double> length_stats(const std::map<std::string, std::vector<CodeSample>>& groups);

struct CampaignEntry {
    std::string sample_id;
    CweId truth{1};
    DiscoveryVerdict verdict;
    bool hit = false;
    std::string error;  // set when the model call failed
};

struct CampaignResult {
    std::vector<CampaignEntry> snippets;
    std::size_t correct = 0;
    double accuracy = 0.0;
};

// Discovery over labeled snippets. Model errors mark that snippet incorrect
// and the campaign continues. Throws EmptyCampaign, or MissingCwe for an
// unlabeled snippet.
CampaignResult run_campaign(const std::vector<CodeSample>& snippets, Strategy strategy, const ExemplarLibrary& library,
                            Gateway& gateway, const ModelProfile& profile, const PromptOptions& options = {});

}  // namespace vsp

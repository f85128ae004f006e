#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vsp/corpus.hpp"
#include "vsp/parsing.hpp"

// Classification metrics for identification and discovery, and accuracy over
// manually adjudicated patches.
namespace vsp {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    std::size_t total() const { return tp + fp + fn + tn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        tn += o.tn;
        return *this;
    }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// Zero denominators yield 0.
double precision(const ConfusionCounts& c);
double recall(const ConfusionCounts& c);
double f1(const ConfusionCounts& c);
// Harmonic mean of a precision/recall pair, 0 when both are 0.
double f1_from(double precision, double recall);

struct ClassMetrics {
    CweId cwe{1};
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

struct Averages {
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

struct MulticlassReport {
    std::vector<ClassMetrics> per_class;  // the five supported CWEs, ascending
    Averages macro;
    Averages micro;
    ConfusionCounts micro_counts;
};

// Classes missing from the map count as all-zero. Keys outside the supported
// set throw UnknownClass.
MulticlassReport multiclass_report(const std::map<int, ConfusionCounts>& per_class_counts);

// Macro F1 straight from per-class F1 values (used to check published tables).
double macro_average(const std::vector<double>& per_class_values);

// Unparseable predictions count as negative.
ConfusionCounts score_identification(const std::vector<std::pair<IdVerdict, Polarity>>& results);
ConfusionCounts score_identification(const std::vector<std::pair<Decision, Polarity>>& results);

// truth_cwe absent marks a patched (negative) sample. Predicted classes on a
// negative sample are false positives for those classes. Every supported
// class gets an entry.
std::map<int, ConfusionCounts> score_discovery(
    const std::vector<std::pair<DiscoveryVerdict, std::optional<CweId>>>& results);

enum class PatchLabel { Correct, Incorrect, Pending };
std::string_view to_string(PatchLabel l);
std::optional<PatchLabel> parse_patch_label(std::string_view s);

struct PatchLabelEntry {
    std::string sample_id;
    PatchLabel label = PatchLabel::Pending;
    std::string annotator;
    std::string notes;
};

// Entries are kept sorted by sample_id.
struct PatchLabelSheet {
    std::vector<PatchLabelEntry> entries;

    std::size_t pending() const;
    PatchLabelEntry* find(std::string_view sample_id);
    void set(std::string sample_id, PatchLabel label, std::string annotator, std::string notes);
};

// CSV with header sample_id,label,annotator,notes.
PatchLabelSheet load_label_sheet(const std::filesystem::path& path);
void save_label_sheet(const std::filesystem::path& path, const PatchLabelSheet& sheet);
std::string serialize_label_sheet(const PatchLabelSheet& sheet);

// correct / total. Throws PendingEntries while any entry is pending; an empty
// sheet scores 0.
double patch_accuracy(const PatchLabelSheet& sheet);

}  // namespace vsp

#include "vsp/metrics.hpp"

#include <algorithm>

#include "vsp/errors.hpp"
#include "vsp/text.hpp"

namespace vsp {

namespace {
double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace

double precision(const ConfusionCounts& c) { return ratio(c.tp, c.tp + c.fp); }
double recall(const ConfusionCounts& c) { return ratio(c.tp, c.tp + c.fn); }

double f1_from(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

double f1(const ConfusionCounts& c) {
    // 2PR / (P + R) == 2tp / (2tp + fp + fn)
    return ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
}

double macro_average(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

MulticlassReport multiclass_report(const std::map<int, ConfusionCounts>& per_class_counts) {
    for (const auto& [cwe, counts] : per_class_counts) {
        if (!is_supported_cwe(cwe)) throw UnknownClass(cwe);
    }
    MulticlassReport report;
    std::vector<double> ps, rs, fs;
    for (int cwe : kSupportedCwes) {
        ConfusionCounts c;
        if (auto it = per_class_counts.find(cwe); it != per_class_counts.end()) c = it->second;
        report.micro_counts += c;
        ClassMetrics m{CweId(cwe), precision(c), recall(c), f1(c)};
        ps.push_back(m.precision);
        rs.push_back(m.recall);
        fs.push_back(m.f1);
        report.per_class.push_back(m);
    }
    report.macro = {macro_average(ps), macro_average(rs), macro_average(fs)};
    report.micro = {precision(report.micro_counts), recall(report.micro_counts), f1(report.micro_counts)};
    return report;
}

ConfusionCounts score_identification(const std::vector<std::pair<Decision, Polarity>>& results) {
    ConfusionCounts c;
    for (const auto& [decision, truth] : results) {
        const bool predicted = decision == Decision::Positive;
        const bool actual = truth == Polarity::Vulnerable;
        if (predicted && actual) ++c.tp;
        else if (predicted) ++c.fp;
        else if (actual) ++c.fn;
        else ++c.tn;
    }
    return c;
}

ConfusionCounts score_identification(const std::vector<std::pair<IdVerdict, Polarity>>& results) {
    std::vector<std::pair<Decision, Polarity>> flat;
    flat.reserve(results.size());
    for (const auto& [verdict, truth] : results) flat.emplace_back(verdict.decision, truth);
    return score_identification(flat);
}

std::map<int, ConfusionCounts> score_discovery(
    const std::vector<std::pair<DiscoveryVerdict, std::optional<CweId>>>& results) {
    std::map<int, ConfusionCounts> counts;
    for (int cwe : kSupportedCwes) counts[cwe];
    for (const auto& [verdict, truth] : results) {
        for (int cwe : kSupportedCwes) {
            const bool predicted = verdict.cwes.contains(CweId(cwe));
            const bool actual = truth && truth->number() == cwe;
            auto& c = counts[cwe];
            if (predicted && actual) ++c.tp;
            else if (predicted) ++c.fp;
            else if (actual) ++c.fn;
            else ++c.tn;
        }
    }
    return counts;
}

std::string_view to_string(PatchLabel l) {
    switch (l) {
        case PatchLabel::Correct: return "correct";
        case PatchLabel::Incorrect: return "incorrect";
        case PatchLabel::Pending: return "pending";
    }
    return "pending";
}

std::optional<PatchLabel> parse_patch_label(std::string_view s) {
    const auto lower = to_lower(trim(s));
    if (lower == "correct") return PatchLabel::Correct;
    if (lower == "incorrect") return PatchLabel::Incorrect;
    if (lower == "pending") return PatchLabel::Pending;
    return std::nullopt;
}

std::size_t PatchLabelSheet::pending() const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(),
                                                  [](const auto& e) { return e.label == PatchLabel::Pending; }));
}

PatchLabelEntry* PatchLabelSheet::find(std::string_view sample_id) {
    auto it = std::lower_bound(entries.begin(), entries.end(), sample_id,
                               [](const PatchLabelEntry& e, std::string_view id) { return e.sample_id < id; });
    if (it == entries.end() || it->sample_id != sample_id) return nullptr;
    return &*it;
}

void PatchLabelSheet::set(std::string sample_id, PatchLabel label, std::string annotator, std::string notes) {
    if (auto* e = find(sample_id)) {
        e->label = label;
        e->annotator = std::move(annotator);
        e->notes = std::move(notes);
        return;
    }
    PatchLabelEntry entry{std::move(sample_id), label, std::move(annotator), std::move(notes)};
    auto it = std::lower_bound(entries.begin(), entries.end(), entry.sample_id,
                               [](const PatchLabelEntry& e, const std::string& id) { return e.sample_id < id; });
    entries.insert(it, std::move(entry));
}

std::string serialize_label_sheet(const PatchLabelSheet& sheet) {
    std::string out = csv_line({"sample_id", "label", "annotator", "notes"});
    for (const auto& e : sheet.entries) {
        out += csv_line({e.sample_id, std::string(to_string(e.label)), e.annotator, e.notes});
    }
    return out;
}

void save_label_sheet(const std::filesystem::path& path, const PatchLabelSheet& sheet) {
    auto tmp = path;
    tmp += ".tmp";
    write_file(tmp, serialize_label_sheet(sheet));
    std::filesystem::rename(tmp, path);
}

PatchLabelSheet load_label_sheet(const std::filesystem::path& path) {
    const auto records = parse_csv(read_file(path));
    if (records.empty() || records.front().fields.size() < 4 || records.front().fields[0] != "sample_id") {
        throw Error("not a patch label sheet: " + path.string());
    }
    PatchLabelSheet sheet;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& f = records[i].fields;
        if (f.size() != 4) throw MalformedRow(records[i].line, "expected 4 label fields");
        auto label = parse_patch_label(f[1]);
        if (!label) throw MalformedRow(records[i].line, "unknown label '" + f[1] + "'");
        sheet.set(f[0], *label, f[2], f[3]);
    }
    return sheet;
}

double patch_accuracy(const PatchLabelSheet& sheet) {
    if (auto n = sheet.pending(); n > 0) throw PendingEntries(n);
    std::size_t correct = 0;
    for (const auto& e : sheet.entries) correct += e.label == PatchLabel::Correct ? 1 : 0;
    return ratio(correct, sheet.entries.size());
}

}  // namespace vsp

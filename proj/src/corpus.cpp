#include "vsp/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <tuple>
#include <unordered_map>

#include "vsp/errors.hpp"
#include "vsp/line_diff.hpp"
#include "vsp/log.hpp"
#include "vsp/rng.hpp"
#include "vsp/text.hpp"

namespace vsp {

namespace fs = std::filesystem;

std::string_view to_string(Polarity p) { return p == Polarity::Vulnerable ? "vulnerable" : "patched"; }

std::string_view to_string(Origin o) {
    switch (o) {
        case Origin::Sard: return "sard";
        case Origin::Cve: return "cve";
        case Origin::UserSupplied: return "user";
    }
    return "user";
}

std::string_view to_string(Task t) {
    switch (t) {
        case Task::Identification: return "identification";
        case Task::Discovery: return "discovery";
        case Task::Patching: return "patching";
    }
    return "identification";
}

std::string_view to_string(StrategyFamily f) {
    switch (f) {
        case StrategyFamily::VSP: return "VSP";
        case StrategyFamily::StandardFewShot: return "StandardFewShot";
        case StrategyFamily::NaiveCoT: return "NaiveCoT";
        case StrategyFamily::IrrelevantVSP: return "IrrelevantVSP";
    }
    return "VSP";
}

std::optional<Polarity> parse_polarity(std::string_view s) {
    if (s == "vulnerable") return Polarity::Vulnerable;
    if (s == "patched") return Polarity::Patched;
    return std::nullopt;
}

std::optional<Origin> parse_origin(std::string_view s) {
    if (s == "sard") return Origin::Sard;
    if (s == "cve") return Origin::Cve;
    if (s == "user") return Origin::UserSupplied;
    return std::nullopt;
}

std::optional<StrategyFamily> parse_family(std::string_view s) {
    for (auto f : {StrategyFamily::VSP, StrategyFamily::StandardFewShot, StrategyFamily::NaiveCoT,
                   StrategyFamily::IrrelevantVSP}) {
        if (to_string(f) == s) return f;
    }
    return std::nullopt;
}

std::optional<std::string> CodeSample::vulnerable_line_text() const {
    if (!vulnerable_line || *vulnerable_line == 0) return std::nullopt;
    auto lines = split_lines(code);
    if (*vulnerable_line > lines.size()) return std::nullopt;
    return lines[*vulnerable_line - 1];
}

// ---- CVE CSV --------------------------------------------------------------

std::vector<CodeSample> load_cve_dataset(const fs::path& csv_path) {
    const auto records = parse_csv(read_file(csv_path));
    if (records.empty()) throw MissingColumn("func_before");

    const auto& header = records.front().fields;
    auto column = [&](std::string_view name, bool required) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (trim(header[i]) == name) return i;
        }
        if (required) throw MissingColumn(std::string(name));
        return std::nullopt;
    };
    const auto before_col = *column("func_before", true);
    const auto after_col = *column("func_after", true);
    const auto cwe_col = *column("cwe_id", true);
    const auto cve_col = *column("cve_id", true);
    const auto project_col = *column("project", true);
    const auto annotated_col = column("func_before_annotated", false);

    std::vector<CodeSample> samples;
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != header.size()) {
            throw MalformedRow(rec.line, "expected " + std::to_string(header.size()) + " fields, got " +
                                             std::to_string(rec.fields.size()));
        }
        const auto& before = rec.fields[before_col];
        const auto& after = rec.fields[after_col];
        if (trim(before).empty() || trim(after).empty()) throw EmptyCode(rec.line);

        auto cwe = parse_cwe_label(rec.fields[cwe_col]);
        if (!cwe || !is_supported_cwe(cwe->number())) continue;

        const std::string project{trim(rec.fields[project_col])};
        const std::string cve_id{trim(rec.fields[cve_col])};
        if (!seen.emplace(project, cve_id, before).second) {
            log_warning("duplicate CVE row at line " + std::to_string(rec.line) + " (" + project + ", " + cve_id +
                        ") skipped");
            continue;
        }

        char ordinal[16];
        std::snprintf(ordinal, sizeof ordinal, "%06zu", r);
        const std::string pair_id = std::string("cve-") + ordinal;

        CodeSample vul;
        vul.id = pair_id + "-vul";
        vul.code = before;
        vul.polarity = Polarity::Vulnerable;
        vul.cwe = cwe;
        vul.origin = Origin::Cve;
        vul.project = project;
        vul.cve_id = cve_id;
        vul.pair_id = pair_id;
        if (annotated_col && !trim(rec.fields[*annotated_col]).empty()) {
            vul.annotated_code = rec.fields[*annotated_col];
        }

        CodeSample pat = vul;
        pat.id = pair_id + "-pat";
        pat.code = after;
        pat.polarity = Polarity::Patched;
        pat.annotated_code.reset();

        samples.push_back(std::move(vul));
        samples.push_back(std::move(pat));
    }
    return samples;
}

// ---- SARD manifests -----------------------------------------------------

namespace {

std::optional<std::size_t> parse_count(std::string_view s) {
    s = trim(s);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

std::string read_case_source(const std::string& case_name, const fs::path& path) {
    try {
        return read_file(path);
    } catch (const Error&) {
        throw UnreadableSource(case_name, path.string());
    }
}

}  // namespace

std::vector<CodeSample> load_sard_dataset(const fs::path& directory) {
    if (!fs::is_directory(directory)) throw Error("not a directory: " + directory.string());

    std::vector<fs::path> manifests;
    for (const auto& entry : fs::directory_iterator(directory)) {
        if (entry.is_regular_file() && entry.path().extension() == ".manifest") manifests.push_back(entry.path());
    }
    std::sort(manifests.begin(), manifests.end());

    std::vector<CodeSample> samples;
    for (const auto& manifest : manifests) {
        const std::string case_name = manifest.stem().string();
        std::map<std::string, std::string> fields;
        for (const auto& raw : split_lines(read_file(manifest))) {
            auto line = trim(raw);
            if (line.empty() || line.front() == '#') continue;
            auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                throw InvalidManifestField(case_name, std::string(line), "expected key=value");
            }
            fields[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
        }
        for (const char* required : {"cwe", "bad", "good"}) {
            if (!fields.contains(required) || fields[required].empty()) {
                throw MissingManifestField(case_name, required);
            }
        }

        std::optional<CweId> cwe = parse_cwe_label(fields["cwe"]);
        if (!cwe) {
            auto number = parse_count(fields["cwe"]);
            if (!number || *number == 0) throw InvalidManifestField(case_name, "cwe", "not a CWE number");
            cwe = CweId(static_cast<int>(*number));
        }
        if (!is_supported_cwe(cwe->number())) {
            log_warning("SARD case " + case_name + " has unsupported " + cwe->label() + "; skipped");
            continue;
        }

        const std::string pair_id = "sard-" + case_name;
        CodeSample vul;
        vul.id = pair_id + "-vul";
        vul.code = read_case_source(case_name, directory / fields["bad"]);
        vul.polarity = Polarity::Vulnerable;
        vul.cwe = cwe;
        vul.origin = Origin::Sard;
        vul.pair_id = pair_id;
        if (trim(vul.code).empty()) throw InvalidManifestField(case_name, "bad", "source is empty");

        if (auto it = fields.find("flaw_line"); it != fields.end() && !it->second.empty()) {
            auto line = parse_count(it->second);
            const auto line_count = split_lines(vul.code).size();
            if (!line || *line == 0 || *line > line_count) {
                throw InvalidManifestField(case_name, "flaw_line",
                                           "must be within 1.." + std::to_string(line_count));
            }
            vul.vulnerable_line = *line;
        }
        if (auto it = fields.find("annotated"); it != fields.end() && !it->second.empty()) {
            vul.annotated_code = read_case_source(case_name, directory / it->second);
        }

        CodeSample pat;
        pat.id = pair_id + "-pat";
        pat.code = read_case_source(case_name, directory / fields["good"]);
        pat.polarity = Polarity::Patched;
        pat.cwe = cwe;
        pat.origin = Origin::Sard;
        pat.pair_id = pair_id;
        if (trim(pat.code).empty()) throw InvalidManifestField(case_name, "good", "source is empty");

        samples.push_back(std::move(vul));
        samples.push_back(std::move(pat));
    }
    return samples;
}

// ---- pairing and selection --------------------------------------------

std::vector<SamplePair> make_pairs(const std::vector<CodeSample>& samples) {
    std::vector<std::string> order;
    std::unordered_map<std::string, std::pair<std::optional<CodeSample>, std::optional<CodeSample>>> by_id;
    for (const auto& s : samples) {
        auto [it, inserted] = by_id.try_emplace(s.pair_id);
        if (inserted) order.push_back(s.pair_id);
        auto& slot = s.polarity == Polarity::Vulnerable ? it->second.first : it->second.second;
        if (slot) throw Error("pair " + s.pair_id + " has two " + std::string(to_string(s.polarity)) + " samples");
        slot = s;
    }
    std::vector<SamplePair> pairs;
    pairs.reserve(order.size());
    for (const auto& id : order) {
        auto& [vul, pat] = by_id[id];
        if (!vul || !pat) throw Error("pair " + id + " is missing its " + (vul ? "patched" : "vulnerable") + " member");
        pairs.push_back({id, std::move(*vul), std::move(*pat)});
    }
    return pairs;
}

std::vector<CodeSample> flatten(const std::vector<SamplePair>& pairs) {
    std::vector<CodeSample> out;
    out.reserve(pairs.size() * 2);
    for (const auto& p : pairs) {
        out.push_back(p.vulnerable);
        out.push_back(p.patched);
    }
    return out;
}

std::vector<SamplePair> select_pairs(std::vector<SamplePair> pairs, std::size_t n, std::uint64_t seed) {
    if (n > pairs.size()) throw NotEnoughPairs(pairs.size(), n);
    auto by_id = [](const SamplePair& a, const SamplePair& b) { return a.pair_id < b.pair_id; };
    std::sort(pairs.begin(), pairs.end(), by_id);
    seeded_shuffle(std::span<SamplePair>(pairs), seed);
    pairs.resize(n);
    std::sort(pairs.begin(), pairs.end(), by_id);
    return pairs;
}

std::vector<SamplePair> filter_single_line_patch(const std::vector<SamplePair>& pairs) {
    std::vector<SamplePair> kept;
    for (const auto& pair : pairs) {
        auto edit = single_line_edit(pair.vulnerable.code, pair.patched.code);
        if (!edit) continue;
        SamplePair copy = pair;
        if (!copy.vulnerable.vulnerable_line && edit->kind != SingleLineEdit::Kind::Insert) {
            copy.vulnerable.vulnerable_line = edit->old_line;
        }
        kept.push_back(std::move(copy));
    }
    return kept;
}

// ---- exemplar library -----------------------------------------------------

namespace {

std::vector<fs::path> sorted_subdirs(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_directory()) out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<Task> task_from_dir(std::string_view name) {
    for (auto t : {Task::Identification, Task::Discovery, Task::Patching}) {
        if (to_string(t) == name) return t;
    }
    return std::nullopt;
}

std::size_t sentence_count(std::string_view text) {
    std::size_t count = 0;
    bool in_sentence = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        bool boundary = (c == '.' || c == '!' || c == '?') &&
                        (i + 1 == text.size() || text[i + 1] == ' ' || text[i + 1] == '\n');
        if (c == '\n') boundary = true;
        if (boundary) {
            if (in_sentence) ++count;
            in_sentence = false;
        } else if (c != ' ' && c != '\t' && c != '\r') {
            in_sentence = true;
        }
    }
    return count + (in_sentence ? 1 : 0);
}

std::string read_exemplar_file(const fs::path& path) {
    if (!fs::is_regular_file(path)) throw MalformedExemplar(path.string(), "missing file");
    return read_file(path);
}

// The stored text minus one trailing newline.
std::string chomp(std::string s) {
    if (!s.empty() && s.back() == '\n') s.pop_back();
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

void check_answer(const Exemplar& ex, const fs::path& answer_path) {
    const auto body = trim(ex.answer);
    if (body.empty()) throw MalformedExemplar(answer_path.string(), "empty answer");
    if (ex.family == StrategyFamily::VSP || ex.family == StrategyFamily::IrrelevantVSP) {
        if (sentence_count(body) < 2) {
            throw MalformedExemplar(answer_path.string(), "reasoning answer needs reasoning steps before its conclusion");
        }
    }
    if (ex.family == StrategyFamily::StandardFewShot) {
        bool ok = ex.task == Task::Patching ? (body.starts_with("```") && body.ends_with("```"))
                                            : sentence_count(body) == 1;
        if (!ok) throw MalformedExemplar(answer_path.string(), "few-shot answer must hold only the conclusion");
    }
}

}  // namespace

ExemplarLibrary load_exemplars(const fs::path& directory) {
    if (!fs::is_directory(directory)) throw Error("exemplar directory not found: " + directory.string());

    ExemplarLibrary lib;
    // (family, task) -> cwe -> pair count, for the coverage check.
    std::map<std::pair<StrategyFamily, Task>, std::map<int, std::size_t>> pair_counts;

    for (const auto& family_dir : sorted_subdirs(directory)) {
        auto family = parse_family(family_dir.filename().string());
        if (!family) throw MalformedExemplar(family_dir.string(), "unknown strategy family");
        for (const auto& task_dir : sorted_subdirs(family_dir)) {
            auto task = task_from_dir(task_dir.filename().string());
            if (!task) throw MalformedExemplar(task_dir.string(), "unknown task");
            if (*task == Task::Patching && *family == StrategyFamily::NaiveCoT) {
                throw MalformedExemplar(task_dir.string(), "naive CoT has no patching exemplars");
            }
            auto& counts = pair_counts[{*family, *task}];
            for (const auto& cwe_dir : sorted_subdirs(task_dir)) {
                auto number = parse_count(cwe_dir.filename().string());
                if (!number || !(is_supported_cwe(static_cast<int>(*number)) ||
                                 is_substitute_cwe(static_cast<int>(*number)))) {
                    throw MalformedExemplar(cwe_dir.string(), "unsupported CWE directory");
                }
                const CweId cwe(static_cast<int>(*number));
                for (const auto& pair_dir : sorted_subdirs(cwe_dir)) {
                    const std::string question = chomp(read_exemplar_file(pair_dir / "question.txt"));
                    if (trim(question).empty()) throw MalformedExemplar(pair_dir.string(), "empty question");

                    // Lexicographic by code file: patched.c sorts before vulnerable.c.
                    for (auto polarity : {Polarity::Patched, Polarity::Vulnerable}) {
                        const bool vul = polarity == Polarity::Vulnerable;
                        const fs::path code_path = pair_dir / (vul ? "vulnerable.c" : "patched.c");
                        const fs::path answer_path = pair_dir / (vul ? "answer_vulnerable.txt" : "answer_patched.txt");
                        if (!vul && *task == Task::Patching && !fs::exists(answer_path)) continue;

                        Exemplar ex;
                        ex.task = *task;
                        ex.family = *family;
                        ex.cwe = cwe;
                        ex.polarity = polarity;
                        ex.question = question;
                        ex.code = chomp(read_exemplar_file(code_path));
                        ex.answer = chomp(read_exemplar_file(answer_path));
                        ex.source = code_path;
                        if (trim(ex.code).empty()) throw MalformedExemplar(code_path.string(), "empty code");
                        check_answer(ex, answer_path);
                        lib.exemplars.push_back(std::move(ex));
                    }
                    ++counts[cwe.number()];
                }
            }
        }
    }

    for (const auto& [key, counts] : pair_counts) {
        const auto [family, task] = key;
        if (family != StrategyFamily::VSP && family != StrategyFamily::StandardFewShot) continue;
        for (int cwe : kSupportedCwes) {
            auto it = counts.find(cwe);
            if (it == counts.end() || it->second < kCanonicalPairsPerCwe) {
                throw CoverageGap(cwe, std::string(to_string(family)));
            }
        }
    }

    for (const auto& [key, counts] : pair_counts) {
        if (key.first != StrategyFamily::VSP) continue;
        for (int cwe : kSupportedCwes) {
            auto n = counts.count(cwe) ? counts.at(cwe) : 0;
            auto [it, inserted] = lib.coverage.try_emplace(cwe, n);
            if (!inserted) it->second = std::min(it->second, n);
        }
    }
    return lib;
}

}  // namespace vsp

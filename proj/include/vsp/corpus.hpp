#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vsp/cwe.hpp"

// Datasets of labeled code samples and the few-shot exemplar library.
namespace vsp {

enum class Polarity { Vulnerable, Patched };
enum class Origin { Sard, Cve, UserSupplied };
enum class Task { Identification, Discovery, Patching };
enum class StrategyFamily { VSP, StandardFewShot, NaiveCoT, IrrelevantVSP };

std::string_view to_string(Polarity p);
std::string_view to_string(Origin o);
std::string_view to_string(Task t);
std::string_view to_string(StrategyFamily f);

std::optional<Polarity> parse_polarity(std::string_view s);
std::optional<Origin> parse_origin(std::string_view s);
std::optional<StrategyFamily> parse_family(std::string_view s);

struct CodeSample {
    std::string id;
    std::string code;
    Polarity polarity = Polarity::Vulnerable;
    std::optional<CweId> cwe;
    std::optional<std::size_t> vulnerable_line;  // 1-based
    Origin origin = Origin::UserSupplied;
    std::optional<std::string> project;
    std::optional<std::string> cve_id;
    std::string pair_id;
    // Same function with explanatory comments about its callees, used by the
    // context-comment prompt variant.
    std::optional<std::string> annotated_code;

    // Text of vulnerable_line, when set and in range.
    std::optional<std::string> vulnerable_line_text() const;
};

struct SamplePair {
    std::string pair_id;
    CodeSample vulnerable;
    CodeSample patched;
};

// Reads the CVE function-pair CSV. Rows outside the five supported CWEs are
// dropped; duplicate (project, cve_id, func_before) rows keep the first and
// log the rest. Output order follows the file.
std::vector<CodeSample> load_cve_dataset(const std::filesystem::path& csv_path);

// Reads every "*.manifest" file (sorted by name) in a directory; see README
// for the key=value format.
std::vector<CodeSample> load_sard_dataset(const std::filesystem::path& directory);

// Groups samples by pair_id. Throws vsp::Error unless every pair_id has
// exactly one Vulnerable and one Patched member. Order follows the first
// appearance of each pair_id.
std::vector<SamplePair> make_pairs(const std::vector<CodeSample>& samples);
std::vector<CodeSample> flatten(const std::vector<SamplePair>& pairs);

// Seeded Fisher-Yates selection of n pairs over the pair_id order, returned
// sorted by pair_id. Throws NotEnoughPairs when n exceeds the pool.
std::vector<SamplePair> select_pairs(std::vector<SamplePair> pairs, std::size_t n, std::uint64_t seed);

// Keeps the pairs whose vulnerable and patched code differ by exactly one
// replaced, inserted or deleted line. Fills in vulnerable_line on retained
// vulnerable members when the edit is a replace or delete.
std::vector<SamplePair> filter_single_line_patch(const std::vector<SamplePair>& pairs);

struct Exemplar {
    Task task = Task::Identification;
    StrategyFamily family = StrategyFamily::VSP;
    CweId cwe{1};
    Polarity polarity = Polarity::Vulnerable;
    std::string question;
    std::string code;
    std::string answer;
    std::filesystem::path source;  // the code file this exemplar was read from
};

struct ExemplarLibrary {
    std::vector<Exemplar> exemplars;
    // Pairs per supported CWE in the VSP family (minimum across its tasks).
    std::map<int, std::size_t> coverage;
};

inline constexpr std::size_t kCanonicalPairsPerCwe = 4;

// Loads <family>/<task>/<cwe>/<pair>/{vulnerable.c, patched.c, question.txt,
// answer_vulnerable.txt, answer_patched.txt}. Patching pairs may omit
// answer_patched.txt. VSP and StandardFewShot task directories must cover
// every supported CWE with at least four pairs (CoverageGap otherwise).
ExemplarLibrary load_exemplars(const std::filesystem::path& directory);

}  // namespace vsp

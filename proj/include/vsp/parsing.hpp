#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vsp/cwe.hpp"

// Turns free-form model replies into verdicts. Parsers are total: any text
// maps to a verdict, with "unparseable" as an ordinary value.
namespace vsp {

// Phrase lists for the identification and safety checks. "<n>" in a pattern
// stands for the CWE number under test.
struct PatternSet {
    std::vector<std::string> identification_positive;
    std::vector<std::string> identification_negative;
    std::vector<std::string> safety;
};

// The lists shipped in data/patterns, compiled in.
const PatternSet& default_patterns();
// Reads identification_positive.txt, identification_negative.txt and
// safety.txt (one pattern per line, blank lines ignored) from a directory.
PatternSet load_patterns(const std::filesystem::path& directory);

// Lower-cases, collapses runs of spaces/tabs, trims every line and drops
// blank lines. Line breaks are kept.
std::string normalize_reply(std::string_view raw);

enum class Decision { Positive, Negative, Unparseable };
std::string_view to_string(Decision d);

struct IdVerdict {
    Decision decision = Decision::Unparseable;
    std::optional<std::string> matched_phrase;

    friend bool operator==(const IdVerdict&, const IdVerdict&) = default;
};

struct DiscoveryVerdict {
    std::set<CweId> cwes;
    bool declared_safe = false;
    bool unparseable = false;

    friend bool operator==(const DiscoveryVerdict&, const DiscoveryVerdict&) = default;
};

struct LineEdit {
    enum class Kind { Add, Remove, Replace };
    Kind kind = Kind::Replace;
    // Remove/Replace: the original line. Add: the line the new one follows
    // (empty means the top of the code).
    std::string anchor;
    std::string new_content;

    friend bool operator==(const LineEdit&, const LineEdit&) = default;
};
std::string_view to_string(LineEdit::Kind k);

struct PatchVerdict {
    std::vector<LineEdit> edits;
    bool unparseable = false;

    friend bool operator==(const PatchVerdict&, const PatchVerdict&) = default;
};

// The last affirmation or negation in the reply decides. A match nested in a
// longer match ("have a CWE-n vulnerability" inside "does not have a CWE-n
// vulnerability") does not count on its own.
IdVerdict parse_identification(std::string_view raw, CweId cwe, const PatternSet& patterns = default_patterns());

// Collects CWE-<digits> tokens that are not negated. A negation cue ("not",
// "no", "n't", "free of") negates the CWE tokens after it until the end of
// the sentence, a ';', or a contrast or consequence word ("but", "however",
// "so", "therefore", ...).
DiscoveryVerdict parse_discovery(std::string_view raw, const PatternSet& patterns = default_patterns());

// Accepts fenced diff blocks ("- old" / "+ new" lines) or prose of the form
// "replace `old` with `new`". With no fences at all, the whole reply is read
// as one block.
PatchVerdict parse_patch(std::string_view raw);

bool discovery_hit(const DiscoveryVerdict& verdict, CweId truth);

// Applies edits by anchor text (matched after trimming). Replacement and
// inserted lines take the indentation of their anchor line. Throws
// AnchorNotFound / AmbiguousAnchor.
std::string apply_edits(std::string_view code, const std::vector<LineEdit>& edits);

// Canonical replies in the grammar the parsers read back; the mock backend
// scripts are written with these.
std::string format_identification_reply(Decision decision, CweId cwe);
std::string format_discovery_reply(const std::set<CweId>& cwes);
std::string format_patch_reply(const std::vector<LineEdit>& edits);

}  // namespace vsp

#include "vsp/parsing.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "vsp/errors.hpp"
#include "vsp/resources.hpp"
#include "vsp/text.hpp"

namespace vsp {

namespace {

std::vector<std::string> pattern_lines(std::string_view text) {
    std::vector<std::string> out;
    for (const auto& line : split_lines(text)) {
        auto t = trim(line);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Whole text on one line: used for phrase matching across line breaks.
std::string flatten(std::string_view normalized) {
    std::string out(normalized);
    std::replace(out.begin(), out.end(), '\n', ' ');
    return out;
}

struct Match {
    std::size_t begin;
    std::size_t end;
    bool positive;
};

// Occurrences of needle in hay that start and end on word boundaries.
void find_phrase(std::string_view hay, std::string_view needle, bool positive, std::vector<Match>& out) {
    if (needle.empty()) return;
    std::size_t pos = 0;
    while ((pos = hay.find(needle, pos)) != std::string_view::npos) {
        const std::size_t end = pos + needle.size();
        const bool left_ok = pos == 0 || !is_word_char(needle.front()) || !is_word_char(hay[pos - 1]);
        const bool right_ok = end == hay.size() || !is_word_char(needle.back()) || !is_word_char(hay[end]);
        if (left_ok && right_ok) out.push_back({pos, end, positive});
        ++pos;
    }
}

std::string instantiate(std::string_view pattern, CweId cwe) {
    return flatten(normalize_reply(replace_all(std::string(pattern), "<n>", std::to_string(cwe.number()))));
}

}  // namespace

const PatternSet& default_patterns() {
    static const PatternSet patterns = [] {
        auto get = [](std::string_view name) {
            auto res = find_resource(std::string("patterns/") + std::string(name) + ".txt");
            if (!res) throw Error("missing built-in pattern list " + std::string(name));
            return pattern_lines(*res);
        };
        return PatternSet{get("identification_positive"), get("identification_negative"), get("safety")};
    }();
    return patterns;
}

PatternSet load_patterns(const std::filesystem::path& directory) {
    return PatternSet{pattern_lines(read_file(directory / "identification_positive.txt")),
                      pattern_lines(read_file(directory / "identification_negative.txt")),
                      pattern_lines(read_file(directory / "safety.txt"))};
}

std::string normalize_reply(std::string_view raw) {
    std::string lowered = to_lower(raw);
    std::string out;
    for (const auto& line : split_lines(lowered)) {
        std::string collapsed;
        bool space = false;
        for (char c : trim(line)) {
            if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
                space = true;
                continue;
            }
            if (space) collapsed += ' ';
            space = false;
            collapsed += c;
        }
        if (collapsed.empty()) continue;
        if (!out.empty()) out += '\n';
        out += collapsed;
    }
    return out;
}

std::string_view to_string(Decision d) {
    switch (d) {
        case Decision::Positive: return "positive";
        case Decision::Negative: return "negative";
        case Decision::Unparseable: return "unparseable";
    }
    return "unparseable";
}

std::string_view to_string(LineEdit::Kind k) {
    switch (k) {
        case LineEdit::Kind::Add: return "add";
        case LineEdit::Kind::Remove: return "remove";
        case LineEdit::Kind::Replace: return "replace";
    }
    return "replace";
}

// ---- identification -------------------------------------------------------

IdVerdict parse_identification(std::string_view raw, CweId cwe, const PatternSet& patterns) {
    const std::string text = flatten(normalize_reply(raw));
    std::vector<Match> matches;
    for (const auto& p : patterns.identification_positive) find_phrase(text, instantiate(p, cwe), true, matches);
    for (const auto& p : patterns.identification_negative) find_phrase(text, instantiate(p, cwe), false, matches);

    auto nested = [&](const Match& m) {
        return std::any_of(matches.begin(), matches.end(), [&](const Match& o) {
            return o.begin <= m.begin && m.end <= o.end && (o.end - o.begin) > (m.end - m.begin);
        });
    };
    const Match* last = nullptr;
    for (const auto& m : matches) {
        if (nested(m)) continue;
        if (!last || m.begin > last->begin || (m.begin == last->begin && m.end > last->end)) last = &m;
    }
    if (!last) return {};
    return {last->positive ? Decision::Positive : Decision::Negative, text.substr(last->begin, last->end - last->begin)};
}

// ---- discovery --------------------------------------------------------------

namespace {

// Words that end the scope of a preceding negation cue.
const std::vector<std::string_view> kScopeResets{"but",  "however", "whereas",   "although", "though",
                                                 "yet",  "so",      "therefore", "thus",     "hence"};

std::vector<std::string> split_sentences(std::string_view normalized) {
    std::vector<std::string> out;
    std::string current;
    for (char c : normalized) {
        if (c == '.' || c == '!' || c == '?' || c == '\n') {
            if (!trim(current).empty()) out.emplace_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    if (!trim(current).empty()) out.emplace_back(trim(current));
    return out;
}

void scan_sentence(std::string_view s, std::set<CweId>& found) {
    bool negated = false;
    std::string previous_word;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (c == ';') {
            negated = false;
            ++i;
            continue;
        }
        if (!std::isalnum(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        // CWE token: "cwe-<digits>" not glued to a longer word.
        if (s.compare(i, 4, "cwe-") == 0 && (i == 0 || !is_word_char(s[i - 1]))) {
            std::size_t j = i + 4;
            int value = 0;
            bool digits = false;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
                if (value < 100000) value = value * 10 + (s[j] - '0');
                digits = true;
                ++j;
            }
            if (digits && value > 0 && (j == s.size() || !std::isalpha(static_cast<unsigned char>(s[j])))) {
                if (!negated) found.insert(CweId(value));
                previous_word.clear();
                i = j;
                continue;
            }
        }
        std::size_t j = i;
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '\'')) ++j;
        const std::string word(s.substr(i, j - i));
        if (word == "not" || word == "no" || word.ends_with("n't") || (previous_word == "free" && word == "of")) {
            negated = true;
        } else if (std::find(kScopeResets.begin(), kScopeResets.end(), word) != kScopeResets.end()) {
            negated = false;
        }
        previous_word = word;
        i = j;
    }
}

}  // namespace

DiscoveryVerdict parse_discovery(std::string_view raw, const PatternSet& patterns) {
    const std::string normalized = normalize_reply(raw);
    DiscoveryVerdict verdict;
    for (const auto& sentence : split_sentences(normalized)) scan_sentence(sentence, verdict.cwes);
    if (!verdict.cwes.empty()) return verdict;

    const std::string text = flatten(normalized);
    std::vector<Match> matches;
    for (const auto& p : patterns.safety) find_phrase(text, flatten(normalize_reply(p)), true, matches);
    if (!matches.empty()) {
        verdict.declared_safe = true;
    } else {
        verdict.unparseable = true;
    }
    return verdict;
}

bool discovery_hit(const DiscoveryVerdict& verdict, CweId truth) { return verdict.cwes.contains(truth); }

// ---- patches ------------------------------------------------------------------

namespace {

enum class DiffLine { Context, Removed, Added, Header, Blank, Empty };

DiffLine classify(std::string_view line, std::string& content) {
    if (trim(line).empty()) return DiffLine::Blank;
    if (line.starts_with("---") || line.starts_with("+++") || line.starts_with("@@") ||
        line.starts_with("diff ") || line.starts_with("index ")) {
        return DiffLine::Header;
    }
    if ((line[0] == '-' || line[0] == '+') && (line.size() == 1 || line[1] == ' ' || line[1] == '\t')) {
        content = std::string(trim(line.substr(1)));
        if (content.empty()) return DiffLine::Empty;
        return line[0] == '-' ? DiffLine::Removed : DiffLine::Added;
    }
    content = std::string(trim(line));
    return DiffLine::Context;
}

void parse_block(const std::vector<std::string>& lines, std::vector<LineEdit>& edits) {
    std::string last_context;
    std::vector<std::string> removed;
    std::vector<std::string> added;

    auto flush = [&] {
        const std::size_t pairs = std::min(removed.size(), added.size());
        const std::size_t lone_removes = removed.size() - pairs;
        for (std::size_t i = 0; i < lone_removes; ++i) {
            edits.push_back({LineEdit::Kind::Remove, removed[i], ""});
        }
        for (std::size_t i = 0; i < pairs; ++i) {
            edits.push_back({LineEdit::Kind::Replace, removed[lone_removes + i], added[i]});
        }
        const std::string anchor = removed.empty() ? last_context : removed.back();
        for (std::size_t i = pairs; i < added.size(); ++i) {
            edits.push_back({LineEdit::Kind::Add, anchor, added[i]});
        }
        if (!removed.empty()) last_context = removed.back();
        removed.clear();
        added.clear();
    };

    for (const auto& line : lines) {
        std::string content;
        switch (classify(line, content)) {
            case DiffLine::Removed:
                if (!added.empty()) flush();
                removed.push_back(std::move(content));
                break;
            case DiffLine::Added:
                added.push_back(std::move(content));
                break;
            case DiffLine::Context:
                flush();
                last_context = std::move(content);
                break;
            case DiffLine::Blank:
                flush();
                last_context.clear();
                break;
            case DiffLine::Header:
                flush();
                break;
            case DiffLine::Empty:
                break;
        }
    }
    flush();
}

std::vector<LineEdit> parse_prose(std::string_view raw) {
    std::vector<LineEdit> edits;
    for (const auto& line : split_lines(raw)) {
        const std::string lower = to_lower(line);
        auto at = lower.find("replace ");
        if (at == std::string::npos) continue;
        if (at > 0 && is_word_char(lower[at - 1])) continue;
        std::string_view rest = std::string_view(line).substr(at + 8);

        std::string from, to;
        if (trim(rest).starts_with("`")) {
            std::vector<std::string> quoted;
            std::size_t i = 0;
            while (quoted.size() < 2) {
                auto open = rest.find('`', i);
                if (open == std::string_view::npos) break;
                auto close = rest.find('`', open + 1);
                if (close == std::string_view::npos) break;
                quoted.emplace_back(rest.substr(open + 1, close - open - 1));
                i = close + 1;
            }
            if (quoted.size() != 2) continue;
            from = quoted[0];
            to = quoted[1];
        } else {
            const std::string lower_rest = to_lower(rest);
            auto with = lower_rest.find(" with ");
            if (with == std::string::npos) continue;
            from = std::string(trim(rest.substr(0, with)));
            std::string_view tail = trim(rest.substr(with + 6));
            if (tail.ends_with(".") && !tail.ends_with(";.")) tail.remove_suffix(1);
            if (tail.ends_with(";.")) tail.remove_suffix(1);
            to = std::string(tail);
        }
        from = std::string(trim(from));
        to = std::string(trim(to));
        if (from.empty() || to.empty()) continue;
        edits.push_back({LineEdit::Kind::Replace, from, to});
    }
    return edits;
}

}  // namespace

PatchVerdict parse_patch(std::string_view raw) {
    const auto lines = split_lines(raw);
    std::vector<std::vector<std::string>> blocks;
    bool any_fence = false;
    bool inside = false;
    for (const auto& line : lines) {
        if (trim(line).starts_with("```")) {
            any_fence = true;
            inside = !inside;
            if (inside) blocks.emplace_back();
            continue;
        }
        if (inside) blocks.back().push_back(line);
    }
    if (!any_fence) blocks.push_back(lines);

    PatchVerdict verdict;
    for (const auto& block : blocks) parse_block(block, verdict.edits);
    if (verdict.edits.empty()) verdict.edits = parse_prose(raw);
    verdict.unparseable = verdict.edits.empty();
    return verdict;
}

// ---- applying edits -----------------------------------------------------

namespace {

std::string leading_whitespace(std::string_view line) {
    std::size_t n = 0;
    while (n < line.size() && (line[n] == ' ' || line[n] == '\t')) ++n;
    return std::string(line.substr(0, n));
}

}  // namespace

std::string apply_edits(std::string_view code, const std::vector<LineEdit>& edits) {
    if (edits.empty()) return std::string(code);
    const auto lines = split_lines(code);
    const bool trailing_newline = !code.empty() && code.back() == '\n';

    auto locate = [&](const std::string& anchor) {
        const auto wanted = trim(anchor);
        std::vector<std::size_t> hits;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            if (trim(lines[i]) == wanted) hits.push_back(i);
        }
        if (hits.empty()) throw AnchorNotFound(anchor);
        if (hits.size() > 1) throw AmbiguousAnchor(anchor, hits.size());
        return hits.front();
    };

    std::map<std::size_t, std::optional<std::string>> rewritten;  // nullopt = removed
    std::map<std::size_t, std::vector<std::string>> inserted_after;
    std::vector<std::string> inserted_at_top;
    for (const auto& edit : edits) {
        if (edit.kind == LineEdit::Kind::Add) {
            if (trim(edit.anchor).empty()) {
                inserted_at_top.push_back(std::string(trim(edit.new_content)));
                continue;
            }
            const auto at = locate(edit.anchor);
            inserted_after[at].push_back(leading_whitespace(lines[at]) + std::string(trim(edit.new_content)));
            continue;
        }
        const auto at = locate(edit.anchor);
        if (rewritten.contains(at)) throw Error("conflicting edits for line: " + edit.anchor);
        if (edit.kind == LineEdit::Kind::Remove) {
            rewritten[at] = std::nullopt;
        } else {
            rewritten[at] = leading_whitespace(lines[at]) + std::string(trim(edit.new_content));
        }
    }

    std::vector<std::string> out = inserted_at_top;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (auto it = rewritten.find(i); it != rewritten.end()) {
            if (it->second) out.push_back(*it->second);
        } else {
            out.push_back(lines[i]);
        }
        if (auto it = inserted_after.find(i); it != inserted_after.end()) {
            out.insert(out.end(), it->second.begin(), it->second.end());
        }
    }
    return join_lines(out, trailing_newline);
}

// ---- canonical reply grammar ----------------------------------------------

std::string format_identification_reply(Decision decision, CweId cwe) {
    switch (decision) {
        case Decision::Positive: return "A: Yes, the code has a " + cwe.label() + " vulnerability.";
        case Decision::Negative: return "A: No, the code does not have a " + cwe.label() + " vulnerability.";
        case Decision::Unparseable: return "A: I am unable to reach a conclusion about this code.";
    }
    return {};
}

std::string format_discovery_reply(const std::set<CweId>& cwes) {
    if (cwes.empty()) return "A: The code is not vulnerable.";
    std::string list;
    std::size_t i = 0;
    for (const auto& c : cwes) {
        if (i > 0) list += (i + 1 == cwes.size()) ? " and " : ", ";
        list += c.label();
        ++i;
    }
    return "A: Yes, the code is vulnerable. It has " + list + (cwes.size() == 1 ? " vulnerability." : " vulnerabilities.");
}

std::string format_patch_reply(const std::vector<LineEdit>& edits) {
    std::string out = "A: The patch is:\n```diff\n";
    for (std::size_t i = 0; i < edits.size(); ++i) {
        const auto& e = edits[i];
        if (i > 0) out += "\n";
        switch (e.kind) {
            case LineEdit::Kind::Remove: out += "- " + e.anchor + "\n"; break;
            case LineEdit::Kind::Replace: out += "- " + e.anchor + "\n+ " + e.new_content + "\n"; break;
            case LineEdit::Kind::Add:
                if (!e.anchor.empty()) out += " " + e.anchor + "\n";
                out += "+ " + e.new_content + "\n";
                break;
        }
    }
    out += "```";
    return out;
}

}  // namespace vsp

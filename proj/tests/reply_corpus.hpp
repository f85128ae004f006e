#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "support.hpp"
#include "vsp/cwe.hpp"
#include "vsp/parsing.hpp"
#include "vsp/text.hpp"

// Hand-labelled replies and generated verdict round trips, shared by the unit
// tests and the acceptance binary.
namespace vsp::test {

struct CorpusResult {
    std::size_t total = 0;
    std::vector<std::string> mismatches;  // "tag: raw"
};

inline nlohmann::json to_json(const DiscoveryVerdict& v) {
    std::vector<int> cwes;
    for (const auto& c : v.cwes) cwes.push_back(c.number());
    return {{"cwes", cwes}, {"declared_safe", v.declared_safe}, {"unparseable", v.unparseable}};
}

inline nlohmann::json to_json(const PatchVerdict& v) {
    nlohmann::json edits = nlohmann::json::array();
    for (const auto& e : v.edits) {
        edits.push_back({{"kind", std::string(to_string(e.kind))}, {"anchor", e.anchor}, {"new_content", e.new_content}});
    }
    return {{"unparseable", v.unparseable}, {"edits", edits}};
}

inline CorpusResult check_reply_corpus() {
    const auto doc = nlohmann::json::parse(read_file(data_dir() / "reply_corpus.json"));
    CorpusResult result;
    for (const auto& e : doc.at("replies")) {
        ++result.total;
        const std::string kind = e.at("kind");
        const std::string raw = e.at("raw");
        nlohmann::json got;
        if (kind == "identification") {
            got = std::string(to_string(parse_identification(raw, CweId(e.at("cwe").get<int>())).decision));
        } else if (kind == "discovery") {
            got = to_json(parse_discovery(raw));
        } else {
            got = to_json(parse_patch(raw));
        }
        if (got != e.at("expect")) {
            result.mismatches.push_back(e.at("tag").get<std::string>() + ": " + raw + "\n  got " + got.dump());
        }
    }
    return result;
}

// Prose that carries no verdict of its own.
inline const std::vector<std::string>& reasoning_prefixes() {
    static const std::vector<std::string> prefixes = {
        "",
        "Let's think step by step.\n",
        "The function reads a length from the caller and copies data into a local buffer.\n",
        "Step 1. The pointer is dereferenced after the lookup. Step 2. The index is bounded by the loop.\n",
        "Looking at the loop condition and the allocation size together:\n\n",
        "First, the helper allocates memory. Then the caller uses it; finally it is released.\n",
    };
    return prefixes;
}

struct RoundTrip {
    std::size_t total = 0;
    std::vector<std::string> failures;
};

inline std::string random_statement(std::mt19937& rng, std::size_t index) {
    static const std::vector<std::string> shapes = {
        "len = n + %;", "buf[%] = 0;", "free(p%);", "if (q% == NULL) return -1;", "count += %;",
        "ptr% = malloc(size);", "memcpy(dst, src, %);", "return %;",
    };
    std::string s = shapes[rng() % shapes.size()];
    return replace_all(s, "%", std::to_string(index));
}

// Generates `count` verdicts per task, renders each through the canonical
// formatter behind a random reasoning prefix and parses it back.
inline RoundTrip verdict_round_trip(std::size_t count, unsigned seed) {
    std::mt19937 rng(seed);
    RoundTrip out;
    const auto& prefixes = reasoning_prefixes();
    auto prefix = [&] { return prefixes[rng() % prefixes.size()]; };

    const std::vector<int> classes(kSupportedCwes.begin(), kSupportedCwes.end());
    for (std::size_t i = 0; i < count; ++i) {
        const CweId cwe(classes[rng() % classes.size()]);
        const Decision d = static_cast<Decision>(rng() % 3);
        const std::string raw = prefix() + format_identification_reply(d, cwe);
        ++out.total;
        if (parse_identification(raw, cwe).decision != d) out.failures.push_back(raw);
    }

    for (std::size_t i = 0; i < count; ++i) {
        std::set<CweId> cwes;
        const std::size_t n = rng() % 4;
        while (cwes.size() < n) cwes.insert(CweId(classes[rng() % classes.size()]));
        const std::string raw = prefix() + format_discovery_reply(cwes);
        const auto v = parse_discovery(raw);
        ++out.total;
        const bool ok = v.cwes == cwes && v.declared_safe == cwes.empty() && !v.unparseable;
        if (!ok) out.failures.push_back(raw);
    }

    for (std::size_t i = 0; i < count; ++i) {
        std::vector<LineEdit> edits;
        const std::size_t n = 1 + rng() % 3;
        for (std::size_t k = 0; k < n; ++k) {
            const auto kind = static_cast<LineEdit::Kind>(rng() % 3);
            LineEdit e{kind, random_statement(rng, 10 * i + k), ""};
            if (kind != LineEdit::Kind::Remove) e.new_content = random_statement(rng, 10 * i + k + 5);
            if (kind == LineEdit::Kind::Add && rng() % 4 == 0) e.anchor.clear();
            edits.push_back(std::move(e));
        }
        const std::string raw = prefix() + format_patch_reply(edits);
        const auto v = parse_patch(raw);
        ++out.total;
        if (v.unparseable || v.edits != edits) out.failures.push_back(raw);
    }
    return out;
}

}  // namespace vsp::test

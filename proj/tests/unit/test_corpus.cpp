#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "vsp/corpus.hpp"
#include "vsp/errors.hpp"
#include "vsp/log.hpp"
#include "vsp/prompting.hpp"
#include "vsp/text.hpp"

using namespace vsp;
namespace fs = std::filesystem;

namespace {

struct LogCapture {
    std::vector<std::string> lines;
    LogSink previous;
    LogCapture() {
        previous = set_log_sink([this](std::string_view m) { lines.emplace_back(m); });
    }
    ~LogCapture() { set_log_sink(previous); }
};

void write_case(const fs::path& dir, const std::string& name, const std::string& manifest) {
    write_file(dir / (name + "_bad.c"), "int f(int *p)\n{\n    return *p;\n}\n");
    write_file(dir / (name + "_good.c"), "int f(int *p)\n{\n    return p ? *p : 0;\n}\n");
    write_file(dir / (name + ".manifest"), manifest);
}

}  // namespace

TEST_CASE("sard fixture loads as four pairs") {
    auto samples = load_sard_dataset(test::data_dir() / "sard8");
    REQUIRE(samples.size() == 8);
    CHECK(samples[0].id == "sard-case01_cwe787-vul");
    CHECK(samples[1].id == "sard-case01_cwe787-pat");
    CHECK(samples[0].cwe == CweId(787));
    CHECK(samples[1].cwe == CweId(787));
    CHECK(samples[0].vulnerable_line == 4u);
    CHECK(samples[0].vulnerable_line_text() == "    for (int i = 0; i <= n && i <= 8; i++)");
    CHECK(samples[0].annotated_code.has_value());
    CHECK_FALSE(samples[1].annotated_code.has_value());
    CHECK(samples[0].origin == Origin::Sard);

    auto pairs = make_pairs(samples);
    REQUIRE(pairs.size() == 4);
    CHECK(pairs[2].pair_id == "sard-case03_cwe476");
    CHECK(flatten(pairs).size() == 8);
}

TEST_CASE("sard manifests are validated") {
    test::TempDir dir;
    SUBCASE("missing field") {
        write_case(dir.path(), "c1", "cwe=CWE-476\nbad=c1_bad.c\n");
        CHECK_THROWS_AS(load_sard_dataset(dir.path()), MissingManifestField);
    }
    SUBCASE("flaw line out of range") {
        write_case(dir.path(), "c1", "cwe=CWE-476\nbad=c1_bad.c\ngood=c1_good.c\nflaw_line=9\n");
        CHECK_THROWS_AS(load_sard_dataset(dir.path()), InvalidManifestField);
    }
    SUBCASE("bad cwe value") {
        write_case(dir.path(), "c1", "cwe=pointer\nbad=c1_bad.c\ngood=c1_good.c\n");
        CHECK_THROWS_AS(load_sard_dataset(dir.path()), InvalidManifestField);
    }
    SUBCASE("unreadable source") {
        write_file(dir / "c1.manifest", "cwe=476\nbad=nope.c\ngood=nope2.c\n");
        CHECK_THROWS_AS(load_sard_dataset(dir.path()), UnreadableSource);
    }
    SUBCASE("unsupported cwe is skipped with a warning") {
        LogCapture log;
        write_case(dir.path(), "c1", "cwe=CWE-78\nbad=c1_bad.c\ngood=c1_good.c\n");
        write_case(dir.path(), "c2", "# comment\ncwe = 476\nbad = c2_bad.c\ngood = c2_good.c\n");
        auto samples = load_sard_dataset(dir.path());
        CHECK(samples.size() == 2);
        REQUIRE(log.lines.size() == 1);
        CHECK(log.lines[0].find("CWE-78") != std::string::npos);
    }
}

TEST_CASE("cve csv loads supported, non-duplicate rows") {
    LogCapture log;
    auto samples = load_cve_dataset(test::data_dir() / "cve_small.csv");
    REQUIRE(samples.size() == 10);
    CHECK(samples[0].id == "cve-000001-vul");
    CHECK(samples[0].project == "libpng");
    CHECK(samples[0].cve_id == "CVE-2023-0001");
    CHECK(samples[0].annotated_code.has_value());
    CHECK_FALSE(samples[2].annotated_code.has_value());
    CHECK(samples.back().id == "cve-000007-pat");
    REQUIRE(log.lines.size() == 1);
    CHECK(log.lines[0].find("duplicate") != std::string::npos);
}

TEST_CASE("cve csv errors") {
    test::TempDir dir;
    auto path = dir / "d.csv";
    SUBCASE("missing column") {
        write_file(path, "project,cve_id,func_before,func_after\nx,y,a,b\n");
        CHECK_THROWS_AS(load_cve_dataset(path), MissingColumn);
    }
    SUBCASE("field count") {
        write_file(path, "project,cve_id,cwe_id,func_before,func_after\nx,y,CWE-476,a\n");
        CHECK_THROWS_AS(load_cve_dataset(path), MalformedRow);
    }
    SUBCASE("empty code") {
        write_file(path, "project,cve_id,cwe_id,func_before,func_after\nx,y,CWE-476,  ,b\n");
        CHECK_THROWS_AS(load_cve_dataset(path), EmptyCode);
    }
}

TEST_CASE("make_pairs requires one member of each polarity") {
    auto samples = load_sard_dataset(test::data_dir() / "sard8");
    auto missing = samples;
    missing.pop_back();
    CHECK_THROWS_AS(make_pairs(missing), Error);
    auto doubled = samples;
    doubled.push_back(samples[0]);
    CHECK_THROWS_AS(make_pairs(doubled), Error);
}

namespace {

std::vector<SamplePair> synthetic_pairs(std::size_t n) {
    std::vector<SamplePair> out;
    for (std::size_t i = 0; i < n; ++i) {
        SamplePair p;
        p.pair_id = "p" + std::to_string(1000 + i);
        p.vulnerable.id = p.pair_id + "-vul";
        p.vulnerable.pair_id = p.pair_id;
        p.patched = p.vulnerable;
        p.patched.id = p.pair_id + "-pat";
        p.patched.polarity = Polarity::Patched;
        out.push_back(p);
    }
    return out;
}

std::vector<std::string> ids(const std::vector<SamplePair>& pairs) {
    std::vector<std::string> out;
    for (const auto& p : pairs) out.push_back(p.pair_id);
    return out;
}

}  // namespace

TEST_CASE("select_pairs is seeded, sorted and order-independent") {
    auto pool = synthetic_pairs(40);
    auto a = select_pairs(pool, 10, 3);
    auto b = select_pairs(pool, 10, 3);
    CHECK(ids(a) == ids(b));
    CHECK(std::is_sorted(a.begin(), a.end(), [](auto& x, auto& y) { return x.pair_id < y.pair_id; }));
    const auto picked = ids(a);
    CHECK(std::set<std::string>(picked.begin(), picked.end()).size() == 10);

    auto reversed = pool;
    std::reverse(reversed.begin(), reversed.end());
    CHECK(ids(select_pairs(reversed, 10, 3)) == ids(a));
    CHECK(ids(select_pairs(pool, 10, 4)) != ids(a));
    CHECK(select_pairs(pool, 40, 9).size() == 40);
    CHECK_THROWS_AS(select_pairs(pool, 41, 0), NotEnoughPairs);
}

namespace {

// Independent oracle: strip the common prefix and suffix (trailing blanks
// ignored) and look at what is left on each side.
struct OracleEdit {
    std::size_t old_left, new_left, prefix;
};
OracleEdit trim_oracle(const std::string& a, const std::string& b) {
    auto x = split_lines(a), y = split_lines(b);
    auto eq = [](const std::string& s, const std::string& t) { return rtrim(s) == rtrim(t); };
    std::size_t p = 0;
    while (p < x.size() && p < y.size() && eq(x[p], y[p])) ++p;
    std::size_t s = 0;
    while (s < x.size() - p && s < y.size() - p && eq(x[x.size() - 1 - s], y[y.size() - 1 - s])) ++s;
    return {x.size() - p - s, y.size() - p - s, p};
}

}  // namespace

TEST_CASE("single-line filter keeps exactly the one-line patches") {
    std::mt19937 rng(11);
    std::vector<SamplePair> pairs;
    for (int i = 0; i < 300; ++i) {
        std::vector<std::string> lines;
        const int n = 1 + static_cast<int>(rng() % 8);
        for (int k = 0; k < n; ++k) lines.push_back("s" + std::to_string(rng() % 3) + ";");
        auto changed = lines;
        const int edits = static_cast<int>(rng() % 3) + 1;
        for (int e = 0; e < edits; ++e) {
            const auto pos = rng() % (changed.size() + 1);
            switch (rng() % 3) {
                case 0: changed.insert(changed.begin() + static_cast<long>(pos), "new;"); break;
                case 1: if (pos < changed.size()) changed.erase(changed.begin() + static_cast<long>(pos)); break;
                default: if (pos < changed.size()) changed[pos] = "mod" + std::to_string(rng() % 2) + ";"; break;
            }
        }
        SamplePair p = synthetic_pairs(1)[0];
        p.pair_id = "r" + std::to_string(i);
        p.vulnerable.code = join_lines(lines, true);
        p.patched.code = join_lines(changed, true);
        pairs.push_back(p);
    }
    const auto kept = filter_single_line_patch(pairs);
    std::set<std::string> kept_ids;
    for (const auto& p : kept) kept_ids.insert(p.pair_id);
    for (const auto& p : pairs) {
        const auto o = trim_oracle(p.vulnerable.code, p.patched.code);
        const bool single = (o.old_left == 1 && o.new_left <= 1) || (o.old_left == 0 && o.new_left == 1);
        CHECK_MESSAGE(kept_ids.contains(p.pair_id) == single, p.pair_id);
    }
    for (const auto& p : kept) {
        const auto o = trim_oracle(p.vulnerable.code, p.patched.code);
        if (o.old_left == 1) {
            CHECK(p.vulnerable.vulnerable_line == o.prefix + 1);
        } else {
            CHECK_FALSE(p.vulnerable.vulnerable_line.has_value());
        }
    }
}

TEST_CASE("the cve fixture keeps its three one-line patches") {
    auto pairs = make_pairs(load_cve_dataset(test::data_dir() / "cve_small.csv"));
    auto kept = filter_single_line_patch(pairs);
    CHECK(ids(kept) == std::vector<std::string>{"cve-000001", "cve-000002", "cve-000007"});
    CHECK(kept[0].vulnerable.vulnerable_line_text() == "    for (size_t i = 0; i <= width; i++)");
}

TEST_CASE("bundled exemplar library") {
    const auto lib = load_exemplars(test::exemplar_dir());
    for (int cwe : kSupportedCwes) CHECK(lib.coverage.at(cwe) == kCanonicalPairsPerCwe);

    std::size_t vsp_identification = 0;
    for (const auto& ex : lib.exemplars) {
        if (ex.family == StrategyFamily::VSP && ex.task == Task::Identification && is_supported_cwe(ex.cwe.number())) {
            ++vsp_identification;
        }
        switch (ex.task) {
            case Task::Identification: CHECK(ex.question == identification_question(ex.cwe)); break;
            case Task::Discovery: CHECK(ex.question == discovery_question()); break;
            case Task::Patching: CHECK(ex.question.find(ex.code) != std::string::npos); break;
        }
        CHECK_FALSE(ex.answer.starts_with("A:"));
    }
    // Four pairs for each of five types, both members.
    CHECK(vsp_identification == 40);
}

TEST_CASE("exemplar library validation") {
    test::TempDir dir;
    auto pair = dir / "VSP/identification/476/pair01";
    auto write_pair = [&](const fs::path& d, const std::string& answer) {
        write_file(d / "question.txt", "Q: Does the following code have a CWE-476 vulnerability?\n");
        write_file(d / "vulnerable.c", "int f(int *p) { return *p; }\n");
        write_file(d / "patched.c", "int f(int *p) { return p ? *p : 0; }\n");
        write_file(d / "answer_vulnerable.txt", answer);
        write_file(d / "answer_patched.txt", answer);
    };
    SUBCASE("coverage gap") {
        write_pair(pair, "First step. Second step.\n");
        CHECK_THROWS_AS(load_exemplars(dir.path()), CoverageGap);
    }
    SUBCASE("reasoning answer without reasoning") {
        write_pair(pair, "Yes.\n");
        CHECK_THROWS_AS(load_exemplars(dir.path()), MalformedExemplar);
    }
    SUBCASE("unknown family") {
        write_pair(dir / "Fancy/identification/476/pair01", "One. Two.\n");
        CHECK_THROWS_AS(load_exemplars(dir.path()), MalformedExemplar);
    }
    SUBCASE("unsupported cwe directory") {
        write_pair(dir / "VSP/identification/999/pair01", "One. Two.\n");
        CHECK_THROWS_AS(load_exemplars(dir.path()), MalformedExemplar);
    }
    SUBCASE("naive chain of thought has no patching") {
        write_pair(dir / "NaiveCoT/patching/476/pair01", "One. Two.\n");
        CHECK_THROWS_AS(load_exemplars(dir.path()), MalformedExemplar);
    }
    SUBCASE("few-shot answers hold only the conclusion") {
        write_pair(dir / "StandardFewShot/identification/476/pair01", "Because p. Yes.\n");
        CHECK_THROWS_AS(load_exemplars(dir.path()), MalformedExemplar);
    }
}

#include <algorithm>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "vsp/cwe.hpp"
#include "vsp/errors.hpp"
#include "vsp/line_diff.hpp"
#include "vsp/rng.hpp"
#include "vsp/text.hpp"

using namespace vsp;

TEST_CASE("trim and case helpers") {
    CHECK(trim("  a b \t\n") == "a b");
    CHECK(rtrim("  x  ") == "  x");
    CHECK(trim("") == "");
    CHECK(to_lower("CWE-476 Yes") == "cwe-476 yes");
    CHECK(starts_with_ci("Yes, it is", "yes"));
    CHECK_FALSE(starts_with_ci("No", "not"));
}

TEST_CASE("split_lines drops carriage returns and the final empty line") {
    CHECK(split_lines("a\nb\n") == std::vector<std::string>{"a", "b"});
    CHECK(split_lines("a\r\nb") == std::vector<std::string>{"a", "b"});
    CHECK(split_lines("a\n\nb") == std::vector<std::string>{"a", "", "b"});
    CHECK(split_lines("").empty());
    CHECK(join_lines({"a", "b"}, true) == "a\nb\n");
    CHECK(join_lines({"a", "b"}) == "a\nb");
}

TEST_CASE("utf8_length counts code points") {
    CHECK(utf8_length("abc") == 3);
    CHECK(utf8_length("\xc3\xa9t\xc3\xa9") == 3);
    CHECK(utf8_length("\xe2\x82\xac") == 1);
    CHECK(utf8_length("\xf0\x9f\x98\x80!") == 2);
}

TEST_CASE("replace_all and format_fixed") {
    CHECK(replace_all("a```b```", "```", "~") == "a~b~");
    CHECK(replace_all("aaa", "a", "aa") == "aaaaaa");
    CHECK(format_fixed(0.571428571, 4) == "0.5714");
    CHECK(format_fixed(47.866, 2) == "47.87");
}

TEST_CASE("csv parsing handles quotes and multiline fields") {
    auto recs = parse_csv("a,b,c\n1,\"x, y\",\"he said \"\"hi\"\"\"\n2,\"line1\nline2\",\n");
    REQUIRE(recs.size() == 3);
    CHECK(recs[1].fields == std::vector<std::string>{"1", "x, y", "he said \"hi\""});
    CHECK(recs[2].fields == std::vector<std::string>{"2", "line1\nline2", ""});
    CHECK(recs[2].line == 3);
}

TEST_CASE("csv parsing rejects malformed quoting") {
    CHECK_THROWS_AS(parse_csv("a,b\n\"open,2\n"), MalformedRow);
    CHECK_THROWS_AS(parse_csv("a,b\nx\"y,2\n"), MalformedRow);
    CHECK_THROWS_AS(parse_csv("a,b\n\"x\"y,2\n"), MalformedRow);
}

TEST_CASE("csv round trip") {
    std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", "multi\nline", ""};
    auto recs = parse_csv(csv_line(fields));
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].fields == fields);
}

TEST_CASE("file helpers create parent directories") {
    test::TempDir dir;
    auto p = dir / "a/b/c.txt";
    write_file(p, "one\n");
    append_file(p, "two\n");
    CHECK(read_file(p) == "one\ntwo\n");
    CHECK_THROWS_AS(read_file(dir / "missing.txt"), Error);
}

TEST_CASE("cwe ids") {
    CHECK(CweId(476).label() == "CWE-476");
    CHECK(CweId(416).name() == "use-after-free");
    CHECK(CweId(798).name() == "use of hard-coded credentials");
    CHECK(CweId(9999).name().empty());
    CHECK_THROWS_AS(CweId(0), Error);
    CHECK(parse_cwe_label("cwe-787") == CweId(787));
    CHECK(parse_cwe_label(" CWE-125 ") == CweId(125));
    CHECK_FALSE(parse_cwe_label("CWE-").has_value());
    CHECK_FALSE(parse_cwe_label("787").has_value());
    for (int c : kSupportedCwes) CHECK(is_supported_cwe(c));
    CHECK_FALSE(is_supported_cwe(20));
    CHECK(is_substitute_cwe(369));
}

TEST_CASE("seeded shuffle is a deterministic permutation") {
    std::vector<int> a(50), b;
    for (int i = 0; i < 50; ++i) a[i] = i;
    b = a;
    seeded_shuffle(std::span<int>(a), 7);
    seeded_shuffle(std::span<int>(b), 7);
    CHECK(a == b);
    auto sorted = a;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 50; ++i) CHECK(sorted[i] == i);
    std::vector<int> c(50);
    for (int i = 0; i < 50; ++i) c[i] = i;
    seeded_shuffle(std::span<int>(c), 8);
    CHECK(a != c);
}

TEST_CASE("lcg matches the published constants") {
    Lcg64 rng(0);
    CHECK(rng.next() == 1442695040888963407ULL);
    CHECK(rng.next() == 1442695040888963407ULL * 6364136223846793005ULL + 1442695040888963407ULL);
}

namespace {

// Textbook O(nm) edit distance with insertions and deletions only.
std::size_t dp_distance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            d[i][j] = std::min(d[i - 1][j], d[i][j - 1]) + 1;
            if (a[i - 1] == b[j - 1]) d[i][j] = std::min(d[i][j], d[i - 1][j - 1]);
        }
    }
    return d[a.size()][b.size()];
}

std::vector<std::string> random_lines(std::mt19937& rng, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<int> sym(0, 3);
    std::vector<std::string> out(len(rng));
    for (auto& l : out) l = std::string(1, static_cast<char>('a' + sym(rng)));
    return out;
}

}  // namespace

TEST_CASE("myers distance agrees with dynamic programming") {
    std::mt19937 rng(42);
    for (int iter = 0; iter < 2000; ++iter) {
        auto a = random_lines(rng, 9);
        auto b = random_lines(rng, 9);
        const auto ops = line_diff(a, b);
        CHECK(line_edit_distance(a, b) == dp_distance(a, b));

        // The script must rebuild b from a.
        std::vector<std::string> rebuilt;
        std::size_t edits = 0;
        for (const auto& op : ops) {
            if (op.kind == DiffOp::Kind::Keep) {
                CHECK(a[op.a_index] == b[op.b_index]);
                rebuilt.push_back(a[op.a_index]);
            } else if (op.kind == DiffOp::Kind::Insert) {
                rebuilt.push_back(b[op.b_index]);
                ++edits;
            } else {
                ++edits;
            }
        }
        CHECK(rebuilt == b);
        CHECK(edits == dp_distance(a, b));
    }
}

TEST_CASE("single_line_edit classifies edits") {
    const std::string base = "a\nb\nc\nd\n";
    auto r = single_line_edit(base, "a\nB\nc\nd\n");
    REQUIRE(r);
    CHECK(r->kind == SingleLineEdit::Kind::Replace);
    CHECK(r->old_line == 2);

    r = single_line_edit(base, "a\nb\nd\n");
    REQUIRE(r);
    CHECK(r->kind == SingleLineEdit::Kind::Delete);
    CHECK(r->old_line == 3);

    r = single_line_edit(base, "a\nb\nx\nc\nd\n");
    REQUIRE(r);
    CHECK(r->kind == SingleLineEdit::Kind::Insert);
    CHECK(r->old_line == 2);

    CHECK_FALSE(single_line_edit(base, base));
    CHECK_FALSE(single_line_edit(base, "a\nb   \nc\nd\n"));
    CHECK_FALSE(single_line_edit(base, "A\nb\nc\nD\n"));
    CHECK_FALSE(single_line_edit(base, "b\na\nc\nd\n"));
    CHECK_FALSE(single_line_edit(base, "a\nx\ny\nb\nc\nd\n"));
}

TEST_CASE("unified diff") {
    const std::string old_text = "1\n2\n3\n4\n5\n6\n7\n8\n9\n10\n";
    const std::string new_text = "1\n2\n3\nfour\n5\n6\n7\n8\n9\n10\neleven\n";
    CHECK(unified_diff(old_text, new_text, 1) ==
          "@@ -3,3 +3,3 @@\n 3\n-4\n+four\n 5\n@@ -10,1 +10,2 @@\n 10\n+eleven\n");
    CHECK(unified_diff(old_text, old_text).empty());
    CHECK(unified_diff("a\n", "b\n", 3) == "@@ -1,1 +1,1 @@\n-a\n+b\n");
}

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "vsp/errors.hpp"
#include "vsp/metrics.hpp"
#include "vsp/text.hpp"

using namespace vsp;

namespace {

// Exact fractions; the oracle never touches floating point until the end.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational of(std::int64_t n, std::int64_t d) { return d == 0 ? Rational{0, 1} : reduce(n, d); }
    static Rational reduce(std::int64_t n, std::int64_t d) {
        const auto g = std::gcd(n, d);
        return g == 0 ? Rational{0, 1} : Rational{n / g, d / g};
    }
    Rational operator+(const Rational& o) const { return reduce(num * o.den + o.num * den, den * o.den); }
    Rational operator*(const Rational& o) const { return reduce(num * o.num, den * o.den); }
    Rational operator/(const Rational& o) const { return o.num == 0 ? Rational{0, 1} : reduce(num * o.den, den * o.num); }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct Oracle {
    Rational p, r, f;
};

// F1 from its definition, the harmonic mean of P and R.
Oracle oracle(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
    const auto p = Rational::of(tp, tp + fp);
    const auto r = Rational::of(tp, tp + fn);
    const auto sum = p + r;
    const auto f = sum.num == 0 ? Rational{0, 1} : (Rational{2, 1} * p * r) / sum;
    return {p, r, f};
}

ConfusionCounts random_counts(std::mt19937& rng) {
    std::uniform_int_distribution<int> d(0, 40);
    auto pick = [&] { return static_cast<std::size_t>(rng() % 5 == 0 ? 0 : d(rng)); };
    return {pick(), pick(), pick(), pick()};
}

}  // namespace

TEST_CASE("binary metrics agree with an exact oracle") {
    std::mt19937 rng(5);
    for (int i = 0; i < 5000; ++i) {
        const auto c = random_counts(rng);
        const auto o = oracle(c.tp, c.fp, c.fn);
        CHECK(std::abs(precision(c) - o.p.value()) < 1e-12);
        CHECK(std::abs(recall(c) - o.r.value()) < 1e-12);
        CHECK(std::abs(f1(c) - o.f.value()) < 1e-12);
        CHECK(std::abs(f1_from(precision(c), recall(c)) - f1(c)) < 1e-12);
    }
}

TEST_CASE("multiclass averages agree with an exact oracle") {
    std::mt19937 rng(6);
    for (int i = 0; i < 1000; ++i) {
        std::map<int, ConfusionCounts> table;
        Rational macro_f{0, 1};
        Rational macro_p{0, 1};
        std::int64_t tp = 0, fp = 0, fn = 0;
        for (int cwe : kSupportedCwes) {
            if (rng() % 7 == 0) continue;  // absent classes score zero
            const auto c = random_counts(rng);
            table[cwe] = c;
            const auto o = oracle(c.tp, c.fp, c.fn);
            macro_f = macro_f + o.f;
            macro_p = macro_p + o.p;
            tp += c.tp;
            fp += c.fp;
            fn += c.fn;
        }
        const auto report = multiclass_report(table);
        REQUIRE(report.per_class.size() == 5);
        CHECK(std::abs(report.macro.f1 - (macro_f / Rational{5, 1}).value()) < 1e-12);
        CHECK(std::abs(report.macro.precision - (macro_p / Rational{5, 1}).value()) < 1e-12);
        const auto micro = oracle(tp, fp, fn);
        CHECK(std::abs(report.micro.f1 - micro.f.value()) < 1e-12);
        CHECK(std::abs(report.micro.recall - micro.r.value()) < 1e-12);
        CHECK(report.micro_counts.tp == static_cast<std::size_t>(tp));
    }
}

TEST_CASE("zero denominators") {
    ConfusionCounts none;
    CHECK(precision(none) == 0.0);
    CHECK(recall(none) == 0.0);
    CHECK(f1(none) == 0.0);
    CHECK(f1_from(0.0, 0.0) == 0.0);
    CHECK(macro_average({}) == 0.0);
    const auto report = multiclass_report({});
    CHECK(report.macro.f1 == 0.0);
    CHECK(report.micro.f1 == 0.0);
}

TEST_CASE("published per-class F1 values average to the published macro F1") {
    // GPT-3.5, SARD, standard prompting, discovery.
    const double macro = macro_average({64.08, 69.84, 18.18, 85.71, 1.52});
    CHECK(format_fixed(macro, 2) == "47.87");
}

TEST_CASE("unknown classes are rejected") {
    CHECK_THROWS_AS(multiclass_report({{20, ConfusionCounts{1, 0, 0, 0}}}), UnknownClass);
}

TEST_CASE("identification scoring treats unparseable as negative") {
    const auto c = score_identification(std::vector<std::pair<Decision, Polarity>>{
        {Decision::Positive, Polarity::Vulnerable},
        {Decision::Positive, Polarity::Patched},
        {Decision::Unparseable, Polarity::Vulnerable},
        {Decision::Unparseable, Polarity::Patched},
        {Decision::Negative, Polarity::Patched},
    });
    CHECK(c == ConfusionCounts{1, 1, 1, 2});
}

TEST_CASE("discovery scoring") {
    DiscoveryVerdict both;
    both.cwes = {CweId(787), CweId(125)};
    DiscoveryVerdict safe;
    safe.declared_safe = true;
    const auto counts = score_discovery({{both, CweId(787)}, {both, std::nullopt}, {safe, CweId(476)}});
    REQUIRE(counts.size() == 5);
    CHECK(counts.at(787) == ConfusionCounts{1, 1, 0, 1});
    CHECK(counts.at(125) == ConfusionCounts{0, 2, 0, 1});
    CHECK(counts.at(476) == ConfusionCounts{0, 0, 1, 2});
    CHECK(counts.at(416) == ConfusionCounts{0, 0, 0, 3});
}

TEST_CASE("patch label sheet") {
    PatchLabelSheet sheet;
    sheet.set("b", PatchLabel::Pending, "", "");
    sheet.set("a", PatchLabel::Correct, "ana", "looks right, \"minimal\"");
    sheet.set("c", PatchLabel::Incorrect, "bo", "wrong line\nsecond note line");
    CHECK(sheet.entries.front().sample_id == "a");
    CHECK(sheet.pending() == 1);
    CHECK_THROWS_AS(patch_accuracy(sheet), PendingEntries);

    test::TempDir dir;
    save_label_sheet(dir / "labels.csv", sheet);
    auto loaded = load_label_sheet(dir / "labels.csv");
    REQUIRE(loaded.entries.size() == 3);
    CHECK(loaded.find("a")->notes == "looks right, \"minimal\"");
    CHECK(loaded.find("c")->notes == "wrong line\nsecond note line");
    CHECK(loaded.find("zzz") == nullptr);
    CHECK(serialize_label_sheet(loaded) == serialize_label_sheet(sheet));

    loaded.set("b", PatchLabel::Correct, "ana", "");
    CHECK(loaded.pending() == 0);
    CHECK(std::abs(patch_accuracy(loaded) - 2.0 / 3.0) < 1e-12);
    CHECK(patch_accuracy(PatchLabelSheet{}) == 0.0);

    write_file(dir / "bad.csv", "sample_id,label,annotator,notes\nx,maybe,,\n");
    CHECK_THROWS_AS(load_label_sheet(dir / "bad.csv"), MalformedRow);
}

TEST_CASE("published patching accuracy") {
    // GPT-3.5 with VSP on SARD: 166 of 170 patches correct.
    PatchLabelSheet sheet;
    for (int i = 0; i < 170; ++i) {
        sheet.set("s" + std::to_string(1000 + i), i < 166 ? PatchLabel::Correct : PatchLabel::Incorrect, "x", "");
    }
    CHECK(format_fixed(100.0 * patch_accuracy(sheet), 2) == "97.65");
}

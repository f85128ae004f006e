#include "vsp/cwe.hpp"

#include <algorithm>
#include <charconv>

#include "vsp/errors.hpp"
#include "vsp/text.hpp"

namespace vsp {

namespace {

struct NamedCwe {
    int number;
    std::string_view name;
};

constexpr std::array<NamedCwe, 10> kNames{{
    {787, "out-of-bound write"},
    {125, "out-of-bound read"},
    {476, "NULL-pointer-dereference"},
    {416, "use-after-free"},
    {190, "integer overflow"},
    {20, "improper input validation"},
    {78, "OS command injection"},
    {269, "improper privilege management"},
    {369, "divide by zero"},
    {798, "use of hard-coded credentials"},
}};

}  // namespace

CweId::CweId(int number) : number_(number) {
    if (number <= 0) {
        throw Error("CWE number must be positive, got " + std::to_string(number));
    }
}

std::string_view CweId::name() const {
    for (const auto& entry : kNames) {
        if (entry.number == number_) return entry.name;
    }
    return {};
}

std::string CweId::label() const { return "CWE-" + std::to_string(number_); }

bool is_supported_cwe(int number) {
    return std::find(kSupportedCwes.begin(), kSupportedCwes.end(), number) != kSupportedCwes.end();
}

bool is_substitute_cwe(int number) {
    return std::find(kSubstituteCwes.begin(), kSubstituteCwes.end(), number) != kSubstituteCwes.end();
}

std::optional<CweId> parse_cwe_label(std::string_view text) {
    text = trim(text);
    if (text.size() < 5) return std::nullopt;
    if (to_lower(text.substr(0, 4)) != "cwe-") return std::nullopt;
    auto digits = text.substr(4);
    int value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || value <= 0) return std::nullopt;
    return CweId(value);
}

}  // namespace vsp

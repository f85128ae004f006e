#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace vsp {

// A CWE identifier. Only the number is stored; the short name comes from the
// fixed table below so two ids with the same number always compare equal.
class CweId {
public:
    // Throws vsp::Error when number <= 0.
    explicit CweId(int number);

    int number() const { return number_; }
    // Short description from the name table, or empty for unknown ids.
    std::string_view name() const;
    // "CWE-476"
    std::string label() const;

    friend auto operator<=>(const CweId&, const CweId&) = default;

private:
    int number_;
};

// The five weakness classes that exemplars, datasets and metrics cover,
// in ascending numeric order.
inline constexpr std::array<int, 5> kSupportedCwes{125, 190, 416, 476, 787};

// Weakness classes used by exemplars for the other-type transfer strategy.
inline constexpr std::array<int, 5> kSubstituteCwes{20, 78, 269, 369, 798};

bool is_supported_cwe(int number);
bool is_substitute_cwe(int number);

// Parses "CWE-476" (case-insensitive prefix, surrounding whitespace ignored).
std::optional<CweId> parse_cwe_label(std::string_view text);

}  // namespace vsp

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Line-level diffing. Two lines are equal when they match after stripping
// trailing whitespace.
namespace vsp {

struct DiffOp {
    enum class Kind { Keep, Delete, Insert };
    Kind kind;
    std::size_t a_index;  // index into the old lines (Keep/Delete)
    std::size_t b_index;  // index into the new lines (Keep/Insert)
};

// Shortest edit script (Myers, O((N+M)D)).
std::vector<DiffOp> line_diff(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Length of the shortest edit script, without materializing it.
std::size_t line_edit_distance(const std::vector<std::string>& a, const std::vector<std::string>& b);

struct SingleLineEdit {
    enum class Kind { Replace, Insert, Delete };
    Kind kind;
    // 1-based line in the old text for Replace/Delete; for Insert, the number of
    // old lines that precede the inserted one.
    std::size_t old_line;
};

// Classifies the difference between two texts as one replaced, inserted or
// deleted line. Returns nullopt for identical texts and anything larger.
std::optional<SingleLineEdit> single_line_edit(std::string_view old_text, std::string_view new_text);

// Unified-diff style rendering ("@@ -l,n +l,n @@", " ", "-", "+") with the
// given number of context lines. Empty when the texts are equal.
std::string unified_diff(std::string_view old_text, std::string_view new_text, std::size_t context = 3);

}  // namespace vsp

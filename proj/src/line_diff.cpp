#include "vsp/line_diff.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "vsp/text.hpp"

namespace vsp {

namespace {

using Lines = std::vector<std::string_view>;

Lines stripped(const std::vector<std::string>& lines) {
    Lines out;
    out.reserve(lines.size());
    for (const auto& l : lines) out.push_back(rtrim(l));
    return out;
}

// Forward Myers pass. Returns the edit distance, or max_d + 1 when the
// distance exceeds max_d. When trace is non-null the V array at the start of
// each round is recorded for backtracking.
std::size_t myers_forward(const Lines& a, const Lines& b, std::size_t max_d,
                          std::vector<std::vector<std::int64_t>>* trace) {
    const auto n = static_cast<std::int64_t>(a.size());
    const auto m = static_cast<std::int64_t>(b.size());
    const std::int64_t limit = static_cast<std::int64_t>(std::min<std::size_t>(max_d, a.size() + b.size()));
    const std::int64_t offset = limit + 1;
    std::vector<std::int64_t> v(static_cast<std::size_t>(2 * offset + 1), 0);

    for (std::int64_t d = 0; d <= limit; ++d) {
        if (trace) trace->push_back(v);
        for (std::int64_t k = -d; k <= d; k += 2) {
            auto at = [&](std::int64_t kk) -> std::int64_t& { return v[static_cast<std::size_t>(kk + offset)]; };
            std::int64_t x;
            if (k == -d || (k != d && at(k - 1) < at(k + 1))) {
                x = at(k + 1);
            } else {
                x = at(k - 1) + 1;
            }
            std::int64_t y = x - k;
            while (x < n && y < m && a[static_cast<std::size_t>(x)] == b[static_cast<std::size_t>(y)]) {
                ++x;
                ++y;
            }
            at(k) = x;
            if (x >= n && y >= m) return static_cast<std::size_t>(d);
        }
    }
    return max_d + 1;
}

std::size_t first_difference(const Lines& a, const Lines& b) {
    std::size_t i = 0;
    while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
    return i;
}

}  // namespace

std::vector<DiffOp> line_diff(const std::vector<std::string>& old_lines, const std::vector<std::string>& new_lines) {
    const Lines a = stripped(old_lines);
    const Lines b = stripped(new_lines);
    std::vector<std::vector<std::int64_t>> trace;
    const std::size_t distance =
        myers_forward(a, b, std::numeric_limits<std::size_t>::max() / 4, &trace);

    const std::int64_t offset = static_cast<std::int64_t>(trace.front().size() - 1) / 2;
    std::vector<DiffOp> ops;
    auto x = static_cast<std::int64_t>(a.size());
    auto y = static_cast<std::int64_t>(b.size());
    for (auto d = static_cast<std::int64_t>(distance); d >= 0; --d) {
        const auto& v = trace[static_cast<std::size_t>(d)];
        auto at = [&](std::int64_t kk) { return v[static_cast<std::size_t>(kk + offset)]; };
        const std::int64_t k = x - y;
        std::int64_t prev_k;
        if (k == -d || (k != d && at(k - 1) < at(k + 1))) {
            prev_k = k + 1;
        } else {
            prev_k = k - 1;
        }
        const std::int64_t prev_x = at(prev_k);
        const std::int64_t prev_y = prev_x - prev_k;
        while (x > prev_x && y > prev_y) {
            --x;
            --y;
            ops.push_back({DiffOp::Kind::Keep, static_cast<std::size_t>(x), static_cast<std::size_t>(y)});
        }
        if (d > 0) {
            if (x == prev_x) {
                ops.push_back({DiffOp::Kind::Insert, static_cast<std::size_t>(x), static_cast<std::size_t>(prev_y)});
            } else {
                ops.push_back({DiffOp::Kind::Delete, static_cast<std::size_t>(prev_x), static_cast<std::size_t>(y)});
            }
        }
        x = prev_x;
        y = prev_y;
    }
    std::reverse(ops.begin(), ops.end());
    return ops;
}

std::size_t line_edit_distance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    return myers_forward(stripped(a), stripped(b), std::numeric_limits<std::size_t>::max() / 4, nullptr);
}

std::optional<SingleLineEdit> single_line_edit(std::string_view old_text, std::string_view new_text) {
    const auto old_lines = split_lines(old_text);
    const auto new_lines = split_lines(new_text);
    const Lines a = stripped(old_lines);
    const Lines b = stripped(new_lines);

    const auto size_gap = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
    if (size_gap > 1) return std::nullopt;

    const std::size_t distance = myers_forward(a, b, 2, nullptr);
    const std::size_t first = first_difference(a, b);
    if (distance == 1) {
        if (b.size() > a.size()) return SingleLineEdit{SingleLineEdit::Kind::Insert, first};
        return SingleLineEdit{SingleLineEdit::Kind::Delete, first + 1};
    }
    if (distance == 2 && a.size() == b.size()) {
        std::size_t mismatches = 0;
        for (std::size_t i = 0; i < a.size(); ++i) mismatches += a[i] != b[i] ? 1 : 0;
        if (mismatches == 1) return SingleLineEdit{SingleLineEdit::Kind::Replace, first + 1};
    }
    return std::nullopt;
}

std::string unified_diff(std::string_view old_text, std::string_view new_text, std::size_t context) {
    const auto a = split_lines(old_text);
    const auto b = split_lines(new_text);
    const auto ops = line_diff(a, b);

    // Each changed op claims `context` ops on either side; overlapping claims merge.
    std::vector<std::pair<std::size_t, std::size_t>> hunks;  // [begin, end) into ops
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].kind == DiffOp::Kind::Keep) continue;
        const std::size_t begin = i >= context ? i - context : 0;
        const std::size_t end = std::min(ops.size(), i + 1 + context);
        if (!hunks.empty() && begin <= hunks.back().second) {
            hunks.back().second = std::max(hunks.back().second, end);
        } else {
            hunks.emplace_back(begin, end);
        }
    }

    std::string out;
    for (auto [begin, end] : hunks) {
        std::size_t old_start = 0, new_start = 0, old_count = 0, new_count = 0;
        bool first = true;
        for (std::size_t j = begin; j < end; ++j) {
            const auto& op = ops[j];
            if (first) {
                old_start = op.a_index + 1;
                new_start = op.b_index + 1;
                first = false;
            }
            if (op.kind != DiffOp::Kind::Insert) ++old_count;
            if (op.kind != DiffOp::Kind::Delete) ++new_count;
        }
        if (old_count == 0) --old_start;
        if (new_count == 0) --new_start;
        out += "@@ -" + std::to_string(old_start) + "," + std::to_string(old_count) + " +" +
               std::to_string(new_start) + "," + std::to_string(new_count) + " @@\n";
        for (std::size_t j = begin; j < end; ++j) {
            const auto& op = ops[j];
            switch (op.kind) {
                case DiffOp::Kind::Keep: out += " " + a[op.a_index] + "\n"; break;
                case DiffOp::Kind::Delete: out += "-" + a[op.a_index] + "\n"; break;
                case DiffOp::Kind::Insert: out += "+" + b[op.b_index] + "\n"; break;
            }
        }
    }
    return out;
}

}  // namespace vsp

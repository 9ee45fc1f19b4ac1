#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pindex/error.hpp"
#include "pindex/partition.hpp"

namespace pindex {

/// One publication of the subject author.
struct ArticleRecord {
    std::string article_id;
    std::uint64_t citations = 0;
    unsigned author_count = 1;
    unsigned author_position = 1;  ///< 1-based byline position of the subject author
    std::optional<double> x_override;
    std::optional<double> s_override;
    std::optional<std::vector<double>> explicit_partition;  ///< byline order
    std::optional<unsigned> rank_override;                  ///< 1-based rank in the descending partition

    friend bool operator==(const ArticleRecord&, const ArticleRecord&) = default;
};

/// The field names of an ArticleRecord in their frozen interchange order.
inline constexpr std::string_view record_fields[] = {
    "article_id",     "citations",  "author_count",       "author_position",
    "x_override",     "s_override", "explicit_partition", "rank_override",
};

/// A record constraint violation, tagged with the offending field.
struct RecordViolation {
    std::string_view field;
    std::string message;
};

/// Checks the record-local invariants; returns the first violation found.
inline std::optional<RecordViolation> check_record(const ArticleRecord& r) {
    if (r.article_id.empty()) return RecordViolation{"article_id", "article_id must be nonempty"};
    if (r.author_count == 0) return RecordViolation{"author_count", "author_count must be >= 1"};
    if (r.author_position == 0 || r.author_position > r.author_count) {
        return RecordViolation{"author_position",
                               "author_position " + std::to_string(r.author_position) +
                                   " outside [1, " + std::to_string(r.author_count) + "]"};
    }
    if (r.s_override && !(*r.s_override > 0.0 && std::isfinite(*r.s_override))) {
        return RecordViolation{"s_override", "s_override must be positive and finite"};
    }
    if (r.x_override) {
        const double upper = r.s_override.value_or(INFINITY);
        if (!(*r.x_override >= 0.0 && *r.x_override <= upper) || !std::isfinite(*r.x_override)) {
            return RecordViolation{"x_override", "x_override must lie in [0, s]"};
        }
    }
    if (r.explicit_partition) {
        if (r.x_override || r.s_override) {
            return RecordViolation{"explicit_partition",
                                   "explicit_partition excludes x_override and s_override"};
        }
        try {
            explicit_psequence(r.author_count, *r.explicit_partition);
        } catch (const validation_error& e) {
            return RecordViolation{"explicit_partition", e.what()};
        }
    }
    if (r.rank_override && (*r.rank_override == 0 || *r.rank_override > r.author_count)) {
        return RecordViolation{"rank_override",
                               "rank_override " + std::to_string(*r.rank_override) +
                                   " outside [1, " + std::to_string(r.author_count) + "]"};
    }
    return std::nullopt;
}

} // namespace pindex

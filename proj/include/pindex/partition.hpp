#pragma once

// Turns an author count and a partition policy into a p-sequence: the
// descending list of contribution fractions handed out by byline rank.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pindex/basis.hpp"
#include "pindex/error.hpp"

namespace pindex {

enum class Scheme { bernstein, bernstein_s, uniform, explicit_fractions };

inline constexpr std::string_view scheme_name(Scheme scheme) {
    switch (scheme) {
    case Scheme::bernstein: return "bernstein";
    case Scheme::bernstein_s: return "bernstein_s";
    case Scheme::uniform: return "uniform";
    case Scheme::explicit_fractions: return "explicit";
    }
    return "unknown";
}

inline constexpr std::string_view valid_scheme_names = "bernstein, bernstein_s, uniform, explicit";

inline std::optional<Scheme> scheme_from_name(std::string_view name) {
    for (auto scheme : {Scheme::bernstein, Scheme::bernstein_s, Scheme::uniform,
                        Scheme::explicit_fractions}) {
        if (scheme_name(scheme) == name) return scheme;
    }
    return std::nullopt;
}

/// p-axis for author counts beyond the explicit schedule:
/// min(cap, intercept + slope * (M - 1)).
struct ScheduleExtension {
    double slope = 0.05;
    double intercept = 0.15;
    double cap = 0.5;

    double at(unsigned author_count) const {
        return std::min(cap, intercept + slope * static_cast<double>(author_count - 1));
    }

    friend bool operator==(const ScheduleExtension&, const ScheduleExtension&) = default;
};

struct PartitionPolicy {
    Scheme scheme = Scheme::bernstein;
    double s = 1.0;
    std::map<unsigned, double> schedule;  ///< author count -> p-axis
    std::optional<ScheduleExtension> extension;

    /// Stretching parameter actually used for evaluation.
    double effective_s() const { return scheme == Scheme::bernstein_s ? s : 1.0; }

    std::optional<double> resolve_x(unsigned author_count) const {
        if (auto it = schedule.find(author_count); it != schedule.end()) return it->second;
        if (extension) return extension->at(author_count);
        return std::nullopt;
    }

    /// Throws validation_error on the first violated constraint.
    void validate() const {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw validation_error("policy s must be positive and finite");
        }
        if (scheme == Scheme::bernstein && s != 1.0) {
            throw validation_error("scheme bernstein requires s = 1; use bernstein_s to stretch");
        }
        const double upper = effective_s();
        for (const auto& [count, x] : schedule) {
            if (count == 0) throw validation_error("schedule author count must be >= 1");
            if (!(x >= 0.0 && x <= upper)) {
                throw validation_error("schedule value for M=" + std::to_string(count) + " is " +
                                       std::to_string(x) + ", outside [0, " +
                                       std::to_string(upper) + "]");
            }
        }
        if (extension) {
            const auto& e = *extension;
            if (!std::isfinite(e.slope) || !std::isfinite(e.intercept)) {
                throw validation_error("extension slope and intercept must be finite");
            }
            if (!(e.cap >= 0.0 && e.cap <= upper)) {
                throw validation_error("extension cap outside [0, " + std::to_string(upper) + "]");
            }
            if (e.intercept < 0.0 || e.slope < 0.0) {
                throw validation_error("extension slope and intercept must be non-negative");
            }
        }
    }

    friend bool operator==(const PartitionPolicy&, const PartitionPolicy&) = default;
};

/// Descending contribution fractions for one article.
struct PSequence {
    unsigned author_count = 1;
    double x = 0.0;
    double s = 1.0;
    Scheme scheme = Scheme::bernstein;
    std::vector<double> fractions;          ///< non-increasing, sums to 1
    std::vector<double> raw_contributions;  ///< fractions * author_count
    bool degenerate = false;                ///< some author receives exactly zero
    bool uniform_warning = false;           ///< equal split was requested
};

namespace detail {

inline void finish(PSequence& seq) {
    std::stable_sort(seq.fractions.begin(), seq.fractions.end(), std::greater<>{});
    seq.raw_contributions.resize(seq.fractions.size());
    for (std::size_t i = 0; i < seq.fractions.size(); ++i) {
        seq.raw_contributions[i] = seq.fractions[i] * seq.author_count;
    }
}

inline void check_author_count(unsigned author_count) {
    if (author_count == 0) throw validation_error("author count must be at least 1");
}

} // namespace detail

/// p-sequence of the degree M-1 Bernstein-S basis cut at x (s = 1 gives the
/// plain Bernstein basis).
inline PSequence make_psequence(unsigned author_count, double x, double s = 1.0) {
    detail::check_author_count(author_count);
    PSequence seq;
    seq.author_count = author_count;
    seq.s = s;
    seq.scheme = s == 1.0 ? Scheme::bernstein : Scheme::bernstein_s;
    if (author_count == 1) {
        // Validate even though the single-author result does not depend on x.
        bernstein_s(0, 0, x, s);
        seq.x = x;
        seq.fractions = {1.0};
        detail::finish(seq);
        return seq;
    }
    seq.x = x;
    seq.fractions = basis_values(author_count - 1, x, s);
    seq.degenerate = x == 0.0 || x == s;
    detail::finish(seq);
    return seq;
}

inline PSequence uniform_psequence(unsigned author_count) {
    detail::check_author_count(author_count);
    PSequence seq;
    seq.author_count = author_count;
    seq.scheme = Scheme::uniform;
    seq.fractions.assign(author_count, 1.0 / author_count);
    seq.uniform_warning = author_count > 1;
    detail::finish(seq);
    return seq;
}

/// Steps I-IV of the p-algorithm under `policy`.
inline PSequence make_psequence(unsigned author_count, const PartitionPolicy& policy) {
    detail::check_author_count(author_count);
    if (author_count == 1) {
        PSequence seq;
        seq.scheme = policy.scheme;
        seq.s = policy.effective_s();
        seq.fractions = {1.0};
        detail::finish(seq);
        return seq;
    }
    switch (policy.scheme) {
    case Scheme::uniform: return uniform_psequence(author_count);
    case Scheme::explicit_fractions:
        throw policy_error("scheme explicit needs per-article fractions for M=" +
                           std::to_string(author_count));
    case Scheme::bernstein:
    case Scheme::bernstein_s: break;
    }
    const auto x = policy.resolve_x(author_count);
    if (!x) {
        throw policy_error("policy has no schedule entry or extension rule for M=" +
                           std::to_string(author_count));
    }
    auto seq = make_psequence(author_count, *x, policy.effective_s());
    seq.scheme = policy.scheme;
    return seq;
}

/// Tolerance on the sum of hand-entered fractions.
inline constexpr double explicit_sum_tolerance = 1e-6;

/// Validates caller-stated fractions (any order) and returns them descending.
inline PSequence explicit_psequence(unsigned author_count, std::span<const double> fractions) {
    detail::check_author_count(author_count);
    if (fractions.size() != author_count) {
        throw validation_error("expected " + std::to_string(author_count) + " fractions, got " +
                               std::to_string(fractions.size()));
    }
    double sum = 0.0;
    for (double f : fractions) {
        if (!(f > 0.0 && f <= 1.0)) {
            throw validation_error("fraction " + std::to_string(f) + " outside (0, 1]");
        }
        sum += f;
    }
    if (std::abs(sum - 1.0) > explicit_sum_tolerance) {
        throw validation_error("fractions sum to " + std::to_string(sum) + ", not 1");
    }
    PSequence seq;
    seq.author_count = author_count;
    seq.scheme = Scheme::explicit_fractions;
    seq.fractions.assign(fractions.begin(), fractions.end());
    detail::finish(seq);
    return seq;
}

/// The demonstration schedule: x = 0 for one author, 0.15 + 0.05 (M-1) for
/// two or more, capped at 0.5, with the same rule as extension.
inline PartitionPolicy default_schedule(unsigned max_authors = 7) {
    if (max_authors == 0) throw validation_error("max_authors must be at least 1");
    PartitionPolicy policy;
    policy.extension = ScheduleExtension{};
    policy.schedule[1] = 0.0;
    for (unsigned m = 2; m <= max_authors; ++m) {
        // (m + 2) / 20 is the affine rule without accumulated rounding.
        policy.schedule[m] = std::min(0.5, static_cast<double>(m + 2) / 20.0);
    }
    return policy;
}

/// Maximal runs of consecutive ranks (1-based) whose fractions lie within
/// `tie_tolerance` of each other: shared first, second, ... authorship.
inline std::vector<std::vector<unsigned>> shared_rank_groups(const PSequence& seq,
                                                             double tie_tolerance) {
    if (!(tie_tolerance >= 0.0)) throw validation_error("tie tolerance must be non-negative");
    std::vector<std::vector<unsigned>> groups;
    const auto& f = seq.fractions;
    std::size_t start = 0;
    while (start < f.size()) {
        std::size_t end = start + 1;
        while (end < f.size() && f[start] - f[end] <= tie_tolerance) ++end;
        std::vector<unsigned> group;
        for (std::size_t r = start; r < end; ++r) group.push_back(static_cast<unsigned>(r + 1));
        groups.push_back(std::move(group));
        start = end;
    }
    return groups;
}

} // namespace pindex

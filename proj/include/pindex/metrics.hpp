#pragma once

// Author metrics built from partitioned citation earnings: total personal
// citations C, the average Q, the P-Index, the unpartitioned total C^false,
// and the Hirsch index for comparison.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pindex/error.hpp"
#include "pindex/partition.hpp"
#include "pindex/record.hpp"

namespace pindex {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double value) {
        const double t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value)) {
            compensation_ += (sum_ - t) + value;
        } else {
            compensation_ += (value - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

struct EarningFlags {
    bool degenerate_partition = false;
    bool explicit_partition = false;
    bool uniform_partition = false;

    friend bool operator==(const EarningFlags&, const EarningFlags&) = default;
};

/// The subject author's share of one article.
struct ArticleEarning {
    std::string article_id;
    std::uint64_t citations = 0;
    unsigned author_count = 1;
    unsigned position = 1;  ///< rank in the descending partition
    double fraction = 1.0;
    double earning = 0.0;   ///< fraction * citations
    EarningFlags flags;
};

struct CitationTotals {
    double total = 0.0;          ///< C
    double single_author = 0.0;  ///< C^s, citations of single-author articles
    std::uint64_t single_count = 0;
};

struct PIndexValue {
    double value = 0.0;
    std::uint64_t rounded = 0;
};

struct MetricsReport {
    std::uint64_t article_count = 0;  ///< N, including uncited articles
    std::uint64_t single_author_count = 0;
    double single_author_citations = 0.0;
    double total_citations = 0.0;  ///< C
    std::uint64_t total_citations_rounded = 0;
    double q_value = 0.0;
    double p_index = 0.0;
    std::uint64_t p_index_rounded = 0;
    std::uint64_t false_total = 0;  ///< C^false
    std::uint64_t h_index = 0;
    std::vector<ArticleEarning> earnings;  ///< input order
};

inline CitationTotals total_citations(std::span<const ArticleEarning> earnings) {
    CitationTotals totals;
    CompensatedSum all;
    CompensatedSum single;
    for (const auto& e : earnings) {
        if (e.author_count == 1) {
            const auto c = static_cast<double>(e.citations);
            single.add(c);
            all.add(c);
            ++totals.single_count;
        } else {
            all.add(e.earning);
        }
    }
    totals.total = all.value();
    totals.single_author = single.value();
    return totals;
}

/// Q = C / N; N counts every listed article, cited or not.
inline double q_value(double total, std::uint64_t article_count) {
    if (article_count == 0) throw undefined_metric_error("no articles");
    return total / static_cast<double>(article_count);
}

/// P = min(N, Q), rounded half away from zero.
inline PIndexValue p_index(std::uint64_t article_count, double q) {
    if (!(q >= 0.0)) throw validation_error("Q must be non-negative");
    const double p = std::min(static_cast<double>(article_count), q);
    return {p, static_cast<std::uint64_t>(std::llround(p))};
}

inline std::uint64_t false_total(std::span<const ArticleRecord> records) {
    std::uint64_t total = 0;
    for (const auto& r : records) total += r.citations;
    return total;
}

/// Largest h such that at least h entries are >= h.
inline std::uint64_t h_index(std::span<const std::uint64_t> citations) {
    std::vector<std::uint64_t> sorted(citations.begin(), citations.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>{});
    std::uint64_t h = 0;
    while (h < sorted.size() && sorted[h] >= h + 1) ++h;
    return h;
}

/// Resolves one record to the subject author's fraction under `policy`.
inline ArticleEarning resolve_earning(const ArticleRecord& record, const PartitionPolicy& policy) {
    ArticleEarning out;
    out.article_id = record.article_id;
    out.citations = record.citations;
    out.author_count = record.author_count;
    try {
        if (auto violation = check_record(record)) {
            throw validation_error(std::string(violation->field) + ": " + violation->message);
        }
        const unsigned m = record.author_count;
        if (m == 1) {
            out.position = 1;
            out.fraction = 1.0;
        } else if (record.explicit_partition) {
            const auto& stated = *record.explicit_partition;
            out.flags.explicit_partition = true;
            if (record.rank_override) {
                const auto seq = explicit_psequence(m, stated);
                out.position = *record.rank_override;
                out.fraction = seq.fractions[out.position - 1];
            } else {
                // Stated fractions follow the byline; report the rank they hold.
                out.fraction = stated[record.author_position - 1];
                out.position = 1 + static_cast<unsigned>(std::count_if(
                                       stated.begin(), stated.begin() + record.author_position - 1,
                                       [&](double f) { return f >= out.fraction; })) +
                               static_cast<unsigned>(std::count_if(
                                   stated.begin() + record.author_position, stated.end(),
                                   [&](double f) { return f > out.fraction; }));
            }
        } else {
            PSequence seq;
            if (record.x_override || record.s_override) {
                const double s = record.s_override.value_or(policy.effective_s());
                const auto x = record.x_override ? record.x_override : policy.resolve_x(m);
                if (!x) {
                    throw policy_error("policy has no schedule entry or extension rule for M=" +
                                       std::to_string(m));
                }
                seq = make_psequence(m, *x, s);
            } else {
                seq = make_psequence(m, policy);
            }
            out.position = record.rank_override.value_or(record.author_position);
            out.fraction = seq.fractions[out.position - 1];
            out.flags.degenerate_partition = seq.degenerate;
            out.flags.uniform_partition = seq.uniform_warning;
        }
    } catch (const record_error&) {
        throw;
    } catch (const std::exception& e) {
        throw record_error(record.article_id, e.what());
    }
    out.earning = out.fraction * static_cast<double>(out.citations);
    return out;
}

/// Step V of the p-algorithm: every metric for one subject author.
inline MetricsReport build_report(std::span<const ArticleRecord> records,
                                  const PartitionPolicy& policy) {
    if (records.empty()) throw undefined_metric_error("no articles");
    MetricsReport report;
    report.earnings.reserve(records.size());
    std::vector<std::uint64_t> citations;
    citations.reserve(records.size());
    for (const auto& r : records) {
        report.earnings.push_back(resolve_earning(r, policy));
        citations.push_back(r.citations);
    }
    const auto totals = total_citations(report.earnings);
    report.article_count = records.size();
    report.single_author_count = totals.single_count;
    report.single_author_citations = totals.single_author;
    report.total_citations = totals.total;
    report.total_citations_rounded = static_cast<std::uint64_t>(std::llround(totals.total));
    report.q_value = q_value(totals.total, report.article_count);
    const auto p = p_index(report.article_count, report.q_value);
    report.p_index = p.value;
    report.p_index_rounded = p.rounded;
    report.false_total = false_total(records);
    report.h_index = h_index(citations);
    return report;
}

/// Counts of per-article fractions in ten buckets [0, 0.1), ..., [0.9, 1.0].
inline std::array<std::uint64_t, 10> credit_histogram(std::span<const ArticleEarning> earnings) {
    std::array<std::uint64_t, 10> buckets{};
    for (const auto& e : earnings) {
        const auto bucket = std::min<std::size_t>(9, static_cast<std::size_t>(e.fraction * 10.0));
        ++buckets[bucket];
    }
    return buckets;
}

} // namespace pindex

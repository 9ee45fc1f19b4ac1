#pragma once

// Text renderings of reports, p-sequences and basis curves.
//
// Machine formats (JSON, CSV reports) print reals with 6 decimals and fixed
// key order, so equal inputs give byte-identical output. Tables print 4
// decimals. Plot CSV keeps full round-trip precision so each row still sums
// to one.

#include <array>
#include <charconv>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pindex/basis.hpp"
#include "pindex/ingest.hpp"
#include "pindex/metrics.hpp"
#include "pindex/partition.hpp"

namespace pindex {

enum class OutputFormat { table, json, csv, svg };

inline std::optional<OutputFormat> output_format_from_name(std::string_view name) {
    if (name == "table") return OutputFormat::table;
    if (name == "json") return OutputFormat::json;
    if (name == "csv") return OutputFormat::csv;
    if (name == "svg") return OutputFormat::svg;
    return std::nullopt;
}

namespace detail {

inline std::string fixed(double value, int decimals) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
    std::string out(buf, ptr);
    if (out.starts_with('-') && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
    return out;
}

inline std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

inline std::string flag_list(const EarningFlags& flags, std::string_view sep) {
    std::string out;
    auto add = [&](bool on, std::string_view name) {
        if (!on) return;
        if (!out.empty()) out += sep;
        out += name;
    };
    add(flags.degenerate_partition, "degenerate_partition");
    add(flags.explicit_partition, "explicit_partition");
    add(flags.uniform_partition, "uniform_partition");
    return out;
}

inline std::string pad(std::string s, std::size_t width, bool left = false) {
    if (s.size() >= width) return s;
    const std::string fill(width - s.size(), ' ');
    return left ? s + fill : fill + s;
}

inline std::string bucket_label(std::size_t b) {
    return fixed(b / 10.0, 1) + "-" + fixed((b + 1) / 10.0, 1);
}

} // namespace detail

inline std::string render_report(const MetricsReport& r, OutputFormat format) {
    using detail::fixed;
    std::ostringstream out;
    if (format == OutputFormat::json) {
        out << "{\n"
            << "  \"N\": " << r.article_count << ",\n"
            << "  \"N_s\": " << r.single_author_count << ",\n"
            << "  \"C_single\": " << fixed(r.single_author_citations, 6) << ",\n"
            << "  \"C\": " << fixed(r.total_citations, 6) << ",\n"
            << "  \"C_rounded\": " << r.total_citations_rounded << ",\n"
            << "  \"Q\": " << fixed(r.q_value, 6) << ",\n"
            << "  \"P\": " << fixed(r.p_index, 6) << ",\n"
            << "  \"P_rounded\": " << r.p_index_rounded << ",\n"
            << "  \"C_false\": " << r.false_total << ",\n"
            << "  \"H\": " << r.h_index << ",\n"
            << "  \"earnings\": [";
        for (std::size_t i = 0; i < r.earnings.size(); ++i) {
            const auto& e = r.earnings[i];
            std::string flags = detail::flag_list(e.flags, "\", \"");
            if (!flags.empty()) flags = '"' + flags + '"';
            out << (i == 0 ? "\n" : ",\n") << "    {\"article_id\": " << detail::json_string(e.article_id)
                << ", \"citations\": " << e.citations << ", \"author_count\": " << e.author_count
                << ", \"position\": " << e.position << ", \"fraction\": " << fixed(e.fraction, 6)
                << ", \"earning\": " << fixed(e.earning, 6) << ", \"flags\": [" << flags << "]}";
        }
        out << (r.earnings.empty() ? "]\n" : "\n  ]\n") << "}\n";
        return out.str();
    }
    if (format == OutputFormat::csv) {
        out << "metric,value\n"
            << "N," << r.article_count << '\n'
            << "N_s," << r.single_author_count << '\n'
            << "C_single," << fixed(r.single_author_citations, 6) << '\n'
            << "C," << fixed(r.total_citations, 6) << '\n'
            << "C_rounded," << r.total_citations_rounded << '\n'
            << "Q," << fixed(r.q_value, 6) << '\n'
            << "P," << fixed(r.p_index, 6) << '\n'
            << "P_rounded," << r.p_index_rounded << '\n'
            << "C_false," << r.false_total << '\n'
            << "H," << r.h_index << "\n\n"
            << "article_id,citations,author_count,position,fraction,earning,flags\n";
        for (const auto& e : r.earnings) {
            out << detail::csv_quote(e.article_id) << ',' << e.citations << ',' << e.author_count
                << ',' << e.position << ',' << fixed(e.fraction, 6) << ',' << fixed(e.earning, 6)
                << ',' << detail::flag_list(e.flags, ";") << '\n';
        }
        return out.str();
    }
    out << "Articles (N)              " << r.article_count << '\n'
        << "Single-author (N_s)       " << r.single_author_count << '\n'
        << "Single-author citations   " << fixed(r.single_author_citations, 4) << '\n'
        << "Personal citations (C)    " << fixed(r.total_citations, 4) << " (rounded "
        << r.total_citations_rounded << ")\n"
        << "Q = C / N                 " << fixed(r.q_value, 4) << '\n'
        << "P-Index                   " << fixed(r.p_index, 4) << " (rounded " << r.p_index_rounded
        << ")\n"
        << "False total (C_false)     " << r.false_total << '\n'
        << "H-Index                   " << r.h_index << "\n\n";
    std::size_t id_width = 10;
    for (const auto& e : r.earnings) id_width = std::max(id_width, e.article_id.size());
    out << detail::pad("article", id_width, true) << "  citations  authors  rank  fraction"
        << "     earning  flags\n";
    for (const auto& e : r.earnings) {
        out << detail::pad(e.article_id, id_width, true) << "  "
            << detail::pad(std::to_string(e.citations), 9) << "  "
            << detail::pad(std::to_string(e.author_count), 7) << "  "
            << detail::pad(std::to_string(e.position), 4) << "  "
            << detail::pad(fixed(e.fraction, 4), 8) << "  " << detail::pad(fixed(e.earning, 4), 10)
            << "  " << detail::flag_list(e.flags, ",") << '\n';
    }
    return out.str();
}

inline std::string render_psequence(const PSequence& seq,
                                    const std::vector<std::vector<unsigned>>& groups,
                                    OutputFormat format) {
    using detail::fixed;
    std::ostringstream out;
    std::vector<std::size_t> group_of(seq.fractions.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (unsigned rank : groups[g]) group_of[rank - 1] = g + 1;
    }
    if (format == OutputFormat::json) {
        auto list = [&](const std::vector<double>& values) {
            std::string s = "[";
            for (std::size_t i = 0; i < values.size(); ++i) s += (i ? ", " : "") + fixed(values[i], 6);
            return s + "]";
        };
        std::string grouped = "[";
        for (std::size_t g = 0; g < groups.size(); ++g) {
            grouped += g ? ", [" : "[";
            for (std::size_t k = 0; k < groups[g].size(); ++k) {
                grouped += (k ? ", " : "") + std::to_string(groups[g][k]);
            }
            grouped += "]";
        }
        grouped += "]";
        out << "{\n"
            << "  \"authors\": " << seq.author_count << ",\n"
            << "  \"scheme\": " << detail::json_string(scheme_name(seq.scheme)) << ",\n"
            << "  \"x\": " << fixed(seq.x, 6) << ",\n"
            << "  \"s\": " << fixed(seq.s, 6) << ",\n"
            << "  \"fractions\": " << list(seq.fractions) << ",\n"
            << "  \"raw_contributions\": " << list(seq.raw_contributions) << ",\n"
            << "  \"groups\": " << grouped << ",\n"
            << "  \"degenerate\": " << (seq.degenerate ? "true" : "false") << ",\n"
            << "  \"uniform\": " << (seq.uniform_warning ? "true" : "false") << "\n"
            << "}\n";
        return out.str();
    }
    if (format == OutputFormat::csv) {
        out << "rank,fraction,raw_contribution,group\n";
        for (std::size_t i = 0; i < seq.fractions.size(); ++i) {
            out << i + 1 << ',' << fixed(seq.fractions[i], 6) << ','
                << fixed(seq.raw_contributions[i], 6) << ',' << group_of[i] << '\n';
        }
        return out.str();
    }
    out << "authors " << seq.author_count << ", scheme " << scheme_name(seq.scheme) << ", x "
        << fixed(seq.x, 4) << ", s " << fixed(seq.s, 4) << '\n';
    out << "p-sequence [";
    for (std::size_t i = 0; i < seq.fractions.size(); ++i) {
        out << (i ? ", " : "") << fixed(seq.fractions[i], 4);
    }
    out << "]\n";
    out << "rank  fraction  raw contribution\n";
    for (std::size_t i = 0; i < seq.fractions.size(); ++i) {
        out << detail::pad(std::to_string(i + 1), 4) << "  " << detail::pad(fixed(seq.fractions[i], 4), 8)
            << "  " << detail::pad(fixed(seq.raw_contributions[i], 4), 16) << '\n';
    }
    out << "shared ranks";
    for (const auto& g : groups) {
        out << " {";
        for (std::size_t k = 0; k < g.size(); ++k) out << (k ? "," : "") << g[k];
        out << '}';
    }
    out << '\n';
    if (seq.degenerate) out << "warning: degenerate partition, some authors receive zero credit\n";
    if (seq.uniform_warning) out << "warning: uniform split ignores contribution order\n";
    return out.str();
}

inline std::string render_comparison(const MetricsReport& r, OutputFormat format) {
    using detail::fixed;
    const auto histogram = credit_histogram(r.earnings);
    std::uint64_t uniform = 0;
    for (const auto& e : r.earnings) uniform += e.flags.uniform_partition ? 1 : 0;
    const bool has_ratio = r.false_total > 0;
    const double ratio = has_ratio ? r.total_citations / static_cast<double>(r.false_total) : 0.0;
    std::ostringstream out;
    if (format == OutputFormat::json) {
        out << "{\n"
            << "  \"C\": " << fixed(r.total_citations, 6) << ",\n"
            << "  \"C_false\": " << r.false_total << ",\n"
            << "  \"ratio\": " << (has_ratio ? fixed(ratio, 6) : "null") << ",\n"
            << "  \"P\": " << fixed(r.p_index, 6) << ",\n"
            << "  \"P_rounded\": " << r.p_index_rounded << ",\n"
            << "  \"H\": " << r.h_index << ",\n"
            << "  \"uniform_flagged\": " << uniform << ",\n"
            << "  \"histogram\": [";
        for (std::size_t b = 0; b < histogram.size(); ++b) {
            out << (b ? ",\n" : "\n") << "    {\"bucket\": \"" << detail::bucket_label(b)
                << "\", \"count\": " << histogram[b] << "}";
        }
        out << "\n  ]\n}\n";
        return out.str();
    }
    out << "                    partitioned   conventional\n"
        << "total citations     " << detail::pad(fixed(r.total_citations, 4), 11) << "   "
        << detail::pad(std::to_string(r.false_total), 12) << '\n'
        << "index               " << detail::pad(fixed(r.p_index, 4), 11) << "   "
        << detail::pad(std::to_string(r.h_index), 12) << "   (P vs H)\n"
        << "C / C_false         " << (has_ratio ? fixed(ratio, 4) : std::string("undefined")) << '\n';
    if (uniform > 0) out << "uniform-split articles: " << uniform << '\n';
    out << "\ncredit fraction histogram\n";
    for (std::size_t b = 0; b < histogram.size(); ++b) {
        out << "  " << detail::bucket_label(b) << "  " << detail::pad(std::to_string(histogram[b]), 5)
            << "  " << std::string(histogram[b], '#') << '\n';
    }
    return out.str();
}

/// Header `x,A_0,...,A_j[,envelope]`; envelope cells are empty at the
/// singular boundary rows.
inline std::string render_curves_csv(const BasisCurve& curve) {
    std::string out = "x";
    for (unsigned a = 0; a <= curve.degree; ++a) out += ",A_" + std::to_string(a);
    if (curve.has_envelope) out += ",envelope";
    out += '\n';
    for (const auto& sample : curve.samples) {
        out += detail::format_real(sample.x);
        for (double v : sample.values) out += ',' + detail::format_real(v);
        if (curve.has_envelope) {
            out += ',';
            if (sample.envelope) out += detail::format_real(*sample.envelope);
        }
        out += '\n';
    }
    return out;
}

/// 800x500 SVG with one polyline per basis polynomial and, optionally, the
/// envelope clipped to the unit height.
inline std::string render_curves_svg(const BasisCurve& curve) {
    constexpr double width = 800.0;
    constexpr double height = 500.0;
    constexpr double margin = 50.0;
    constexpr std::array<std::string_view, 8> palette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                      "#9467bd", "#8c564b", "#e377c2", "#17becf"};
    auto px = [&](double x) { return margin + (width - 2 * margin) * (x / curve.s); };
    auto py = [&](double y) { return height - margin - (height - 2 * margin) * y; };
    auto point = [&](double x, double y) {
        return detail::fixed(px(x), 2) + "," + detail::fixed(py(y), 2);
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" width=\"800\" "
           "height=\"500\">\n"
        << "  <rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n"
        << "  <line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n"
        << "  <line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n"
        << "  <text x=\"" << margin << "\" y=\"" << height - margin + 20 << "\">0</text>\n"
        << "  <text x=\"" << width - margin << "\" y=\"" << height - margin + 20 << "\">"
        << detail::format_real(curve.s) << "</text>\n"
        << "  <text x=\"" << margin - 20 << "\" y=\"" << margin + 5 << "\">1</text>\n";
    for (unsigned a = 0; a <= curve.degree; ++a) {
        out << "  <polyline class=\"basis\" fill=\"none\" stroke=\"" << palette[a % palette.size()]
            << "\" points=\"";
        for (std::size_t i = 0; i < curve.samples.size(); ++i) {
            const auto& s = curve.samples[i];
            out << (i ? " " : "") << point(s.x, s.values[a]);
        }
        out << "\"/>\n";
    }
    if (curve.has_envelope) {
        out << "  <polyline class=\"envelope\" fill=\"none\" stroke=\"gray\" "
               "stroke-dasharray=\"6,4\" points=\"";
        bool first = true;
        for (const auto& s : curve.samples) {
            if (!s.envelope || *s.envelope > 1.0) continue;
            out << (first ? "" : " ") << point(s.x, *s.envelope);
            first = false;
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace pindex

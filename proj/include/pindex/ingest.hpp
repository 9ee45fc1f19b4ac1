#pragma once

// Citation-record and policy files.
//
// Records come as CSV with the frozen header
//   article_id,citations,author_count,author_position,x_override,s_override,explicit_partition,rank_override
// or as a JSON array of objects with the same field names. Empty CSV cells
// and JSON nulls mean "absent"; explicit_partition is a ';'-separated list
// in CSV and an array in JSON. Decimal point is always '.'.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "pindex/error.hpp"
#include "pindex/partition.hpp"
#include "pindex/record.hpp"

namespace pindex {

enum class RecordFormat { csv, json };

namespace detail {

inline std::string read_all(std::istream& in) {
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);
    return text;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

template <typename T>
std::optional<T> parse_integer(std::string_view s) {
    T value{};
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end || s.empty()) return std::nullopt;
    return value;
}

inline std::optional<double> parse_real(std::string_view s) {
    double value{};
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value, std::chars_format::general);
    if (ec != std::errc{} || ptr != end || s.empty() || !std::isfinite(value)) return std::nullopt;
    return value;
}

/// Shortest decimal text that reads back to the same double.
inline std::string format_real(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

struct CsvRow {
    std::size_t line;
    std::vector<std::string> fields;
};

/// RFC 4180 style splitter: quoted fields may hold commas and doubled quotes.
inline std::vector<CsvRow> split_csv(std::string_view text) {
    std::vector<CsvRow> rows;
    std::size_t line = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        const std::size_t row_line = line;
        CsvRow row{row_line, {}};
        std::string field;
        bool quoted = false;
        bool field_was_quoted = false;
        for (; i < text.size(); ++i) {
            const char c = text[i];
            if (quoted) {
                if (c == '"') {
                    if (i + 1 < text.size() && text[i + 1] == '"') {
                        field += '"';
                        ++i;
                    } else {
                        quoted = false;
                    }
                } else {
                    if (c == '\n') ++line;
                    field += c;
                }
            } else if (c == '"') {
                if (!trim(field).empty()) {
                    throw parse_error(line, row.fields.size() + 1, "unexpected quote inside field");
                }
                field.clear();
                quoted = true;
                field_was_quoted = true;
            } else if (c == ',') {
                row.fields.push_back(field_was_quoted ? field : std::string(trim(field)));
                field.clear();
                field_was_quoted = false;
            } else if (c == '\n' || c == '\r') {
                break;
            } else {
                field += c;
            }
        }
        if (quoted) throw parse_error(row_line, row.fields.size() + 1, "unterminated quoted field");
        row.fields.push_back(field_was_quoted ? field : std::string(trim(field)));
        // Consume the line terminator (\n, \r\n or \r).
        if (i < text.size() && text[i] == '\r') ++i;
        if (i < text.size() && text[i] == '\n') ++i;
        ++line;
        const bool blank = row.fields.size() == 1 && row.fields[0].empty() && !field_was_quoted;
        if (!blank) rows.push_back(std::move(row));
    }
    return rows;
}

inline std::size_t field_column(std::string_view field) {
    const auto it = std::find(std::begin(record_fields), std::end(record_fields), field);
    return static_cast<std::size_t>(it - std::begin(record_fields)) + 1;
}

/// Line and column (both 1-based) of a byte offset.
inline std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

/// Byte offsets of the elements of a top-level JSON array.
inline std::vector<std::size_t> top_level_element_offsets(std::string_view text) {
    std::vector<std::size_t> offsets;
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    bool expect_element = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
        if (depth == 1 && expect_element && c != ']') {
            offsets.push_back(i);
            expect_element = false;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '[' || c == '{') {
            ++depth;
            if (depth == 1) expect_element = true;
        } else if (c == ']' || c == '}') {
            --depth;
        } else if (c == ',' && depth == 1) {
            expect_element = true;
        }
    }
    return offsets;
}

inline void check_unique_and_valid(std::vector<ArticleRecord>& records,
                                   const std::vector<std::pair<std::size_t, std::size_t>>& where,
                                   bool csv) {
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& r = records[k];
        if (auto v = check_record(r)) {
            const auto column = csv ? field_column(v->field) : where[k].second;
            throw parse_error(where[k].first, column, std::string(v->field) + ": " + v->message);
        }
        auto [it, inserted] = seen.emplace(r.article_id, k);
        if (!inserted) {
            throw parse_error(where[k].first, csv ? 1 : where[k].second,
                              "duplicate article_id '" + r.article_id + "' (first seen on line " +
                                  std::to_string(where[it->second].first) + ", again on line " +
                                  std::to_string(where[k].first) + ")");
        }
    }
}

inline std::vector<ArticleRecord> parse_records_csv(std::string_view text) {
    const auto rows = split_csv(text);
    std::vector<ArticleRecord> records;
    if (rows.empty()) return records;

    const auto& header = rows.front();
    const bool header_ok =
        header.fields.size() == std::size(record_fields) &&
        std::equal(header.fields.begin(), header.fields.end(), std::begin(record_fields));
    if (!header_ok) {
        std::string expected;
        for (auto f : record_fields) expected += (expected.empty() ? "" : ",") + std::string(f);
        throw parse_error(header.line, 0, "header must be exactly '" + expected + "'");
    }

    std::vector<std::pair<std::size_t, std::size_t>> where;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const auto& row = rows[k];
        if (row.fields.size() != std::size(record_fields)) {
            throw parse_error(row.line, 0,
                              "expected " + std::to_string(std::size(record_fields)) +
                                  " fields, found " + std::to_string(row.fields.size()));
        }
        auto fail = [&](std::size_t column, const std::string& what) -> parse_error {
            return parse_error(row.line, column,
                               std::string(record_fields[column - 1]) + ": " + what);
        };
        auto integer = [&](std::size_t column) -> std::uint64_t {
            auto v = parse_integer<std::uint64_t>(row.fields[column - 1]);
            if (!v) throw fail(column, "expected a non-negative integer, got '" +
                                           row.fields[column - 1] + "'");
            return *v;
        };
        auto small_integer = [&](std::size_t column) -> unsigned {
            auto v = parse_integer<unsigned>(row.fields[column - 1]);
            if (!v) throw fail(column, "expected a non-negative integer, got '" +
                                           row.fields[column - 1] + "'");
            return *v;
        };
        auto real = [&](std::size_t column) -> std::optional<double> {
            const auto& f = row.fields[column - 1];
            if (f.empty()) return std::nullopt;
            auto v = parse_real(f);
            if (!v) throw fail(column, "expected a decimal number, got '" + f + "'");
            return v;
        };

        ArticleRecord r;
        r.article_id = row.fields[0];
        r.citations = integer(2);
        r.author_count = small_integer(3);
        r.author_position = small_integer(4);
        r.x_override = real(5);
        r.s_override = real(6);
        if (const auto& f = row.fields[6]; !f.empty()) {
            std::vector<double> parts;
            std::string_view rest = f;
            while (true) {
                const auto cut = rest.find(';');
                const auto piece = trim(rest.substr(0, cut));
                auto v = parse_real(piece);
                if (!v) throw fail(7, "malformed fraction '" + std::string(piece) + "'");
                parts.push_back(*v);
                if (cut == std::string_view::npos) break;
                rest.remove_prefix(cut + 1);
            }
            r.explicit_partition = std::move(parts);
        }
        if (!row.fields[7].empty()) r.rank_override = small_integer(8);
        records.push_back(std::move(r));
        where.emplace_back(row.line, 0);
    }
    check_unique_and_valid(records, where, true);
    return records;
}

inline std::vector<ArticleRecord> parse_records_json(std::string_view text) {
    using nlohmann::json;
    if (trim(text).empty()) return {};
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, column] = locate(text, e.byte == 0 ? 0 : e.byte - 1);
        throw parse_error(line, column, "malformed JSON");
    }
    if (!doc.is_array()) throw parse_error(1, 1, "records JSON must be an array of objects");

    const auto offsets = top_level_element_offsets(text);
    std::vector<ArticleRecord> records;
    std::vector<std::pair<std::size_t, std::size_t>> where;
    for (std::size_t k = 0; k < doc.size(); ++k) {
        const auto [line, column] = locate(text, k < offsets.size() ? offsets[k] : 0);
        const auto& obj = doc[k];
        auto fail = [&](std::string_view field, const std::string& what) -> parse_error {
            return parse_error(line, column,
                               "element " + std::to_string(k) + ", " + std::string(field) + ": " +
                                   what);
        };
        if (!obj.is_object()) throw fail("record", "expected an object");
        for (const auto& [key, value] : obj.items()) {
            if (std::find(std::begin(record_fields), std::end(record_fields), key) ==
                std::end(record_fields)) {
                throw fail(key, "unknown field");
            }
        }
        auto present = [&](std::string_view field) {
            auto it = obj.find(std::string(field));
            return it != obj.end() && !it->is_null();
        };
        auto integer = [&](std::string_view field) -> std::uint64_t {
            if (!present(field)) throw fail(field, "required");
            const auto& v = obj.at(std::string(field));
            if (!v.is_number_unsigned()) throw fail(field, "expected a non-negative integer");
            return v.get<std::uint64_t>();
        };
        auto small_integer = [&](std::string_view field) -> unsigned {
            const auto v = integer(field);
            if (v > std::numeric_limits<unsigned>::max()) throw fail(field, "value too large");
            return static_cast<unsigned>(v);
        };
        auto real = [&](std::string_view field) -> std::optional<double> {
            if (!present(field)) return std::nullopt;
            const auto& v = obj.at(std::string(field));
            if (!v.is_number()) throw fail(field, "expected a number");
            return v.get<double>();
        };

        ArticleRecord r;
        if (!present("article_id") || !obj.at("article_id").is_string()) {
            throw fail("article_id", "expected a string");
        }
        r.article_id = obj.at("article_id").get<std::string>();
        r.citations = integer("citations");
        r.author_count = small_integer("author_count");
        r.author_position = small_integer("author_position");
        r.x_override = real("x_override");
        r.s_override = real("s_override");
        if (present("explicit_partition")) {
            const auto& v = obj.at("explicit_partition");
            if (!v.is_array()) throw fail("explicit_partition", "expected an array of numbers");
            std::vector<double> parts;
            for (const auto& f : v) {
                if (!f.is_number()) throw fail("explicit_partition", "expected an array of numbers");
                parts.push_back(f.get<double>());
            }
            r.explicit_partition = std::move(parts);
        }
        if (present("rank_override")) r.rank_override = small_integer("rank_override");
        records.push_back(std::move(r));
        where.emplace_back(line, column);
    }
    check_unique_and_valid(records, where, false);
    return records;
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r;") == std::string::npos && trim(s) == s) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

} // namespace detail

inline std::vector<ArticleRecord> parse_records(std::istream& in, RecordFormat format) {
    const auto text = detail::read_all(in);
    return format == RecordFormat::csv ? detail::parse_records_csv(text)
                                       : detail::parse_records_json(text);
}

inline std::vector<ArticleRecord> parse_records(std::string_view text, RecordFormat format) {
    std::string owned(text);
    if (owned.starts_with("\xEF\xBB\xBF")) owned.erase(0, 3);
    return format == RecordFormat::csv ? detail::parse_records_csv(owned)
                                       : detail::parse_records_json(owned);
}

inline std::string serialize_records(std::span<const ArticleRecord> records, RecordFormat format) {
    using detail::format_real;
    if (format == RecordFormat::csv) {
        std::string out;
        for (auto f : record_fields) out += (out.empty() ? "" : ",") + std::string(f);
        out += '\n';
        for (const auto& r : records) {
            out += detail::csv_quote(r.article_id) + ',' + std::to_string(r.citations) + ',' +
                   std::to_string(r.author_count) + ',' + std::to_string(r.author_position) + ',';
            if (r.x_override) out += format_real(*r.x_override);
            out += ',';
            if (r.s_override) out += format_real(*r.s_override);
            out += ',';
            if (r.explicit_partition) {
                std::string joined;
                for (double f : *r.explicit_partition) {
                    joined += (joined.empty() ? "" : ";") + format_real(f);
                }
                out += '"' + joined + '"';
            }
            out += ',';
            if (r.rank_override) out += std::to_string(*r.rank_override);
            out += '\n';
        }
        return out;
    }
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        nlohmann::ordered_json obj;
        obj["article_id"] = r.article_id;
        obj["citations"] = r.citations;
        obj["author_count"] = r.author_count;
        obj["author_position"] = r.author_position;
        obj["x_override"] = r.x_override ? nlohmann::ordered_json(*r.x_override) : nlohmann::ordered_json();
        obj["s_override"] = r.s_override ? nlohmann::ordered_json(*r.s_override) : nlohmann::ordered_json();
        obj["explicit_partition"] =
            r.explicit_partition ? nlohmann::ordered_json(*r.explicit_partition) : nlohmann::ordered_json();
        obj["rank_override"] = r.rank_override ? nlohmann::ordered_json(*r.rank_override) : nlohmann::ordered_json();
        doc.push_back(std::move(obj));
    }
    return doc.dump(2) + '\n';
}

/// Reads a policy document:
///   {"scheme": ..., "s": ..., "schedule": {"M": x, ...},
///    "extension": {"slope": ..., "intercept": ..., "cap": ...}}
/// Omitted keys take defaults (bernstein, s = 1, empty schedule, no extension).
inline PartitionPolicy parse_policy(std::string_view text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, column] = detail::locate(text, e.byte == 0 ? 0 : e.byte - 1);
        throw parse_error(line, column, "malformed policy JSON");
    }
    if (!doc.is_object()) throw validation_error("policy must be a JSON object");

    PartitionPolicy policy;
    for (const auto& [key, value] : doc.items()) {
        if (key == "scheme") {
            if (!value.is_string()) throw validation_error("scheme must be a string");
            const auto name = value.get<std::string>();
            auto scheme = scheme_from_name(name);
            if (!scheme) {
                throw validation_error("unknown scheme '" + name + "'; valid schemes: " +
                                       std::string(valid_scheme_names));
            }
            policy.scheme = *scheme;
        } else if (key == "s") {
            if (!value.is_number()) throw validation_error("s must be a number");
            policy.s = value.get<double>();
        } else if (key == "schedule") {
            if (!value.is_object()) throw validation_error("schedule must be an object");
            for (const auto& [count, x] : value.items()) {
                auto m = detail::parse_integer<unsigned>(count);
                if (!m || *m == 0) {
                    throw validation_error("schedule key '" + count +
                                           "' is not a positive author count");
                }
                if (!x.is_number()) {
                    throw validation_error("schedule value for M=" + count + " must be a number");
                }
                policy.schedule[*m] = x.get<double>();
            }
        } else if (key == "extension") {
            if (value.is_null()) continue;
            if (!value.is_object()) throw validation_error("extension must be an object");
            ScheduleExtension ext;
            for (const auto& [field, v] : value.items()) {
                if (!v.is_number()) throw validation_error("extension." + field + " must be a number");
                if (field == "slope") {
                    ext.slope = v.get<double>();
                } else if (field == "intercept") {
                    ext.intercept = v.get<double>();
                } else if (field == "cap") {
                    ext.cap = v.get<double>();
                } else {
                    throw validation_error("unknown extension field '" + field + "'");
                }
            }
            policy.extension = ext;
        } else {
            throw validation_error("unknown policy field '" + key + "'");
        }
    }
    policy.validate();
    return policy;
}

inline PartitionPolicy parse_policy(std::istream& in) { return parse_policy(detail::read_all(in)); }

inline std::string serialize_policy(const PartitionPolicy& policy) {
    nlohmann::ordered_json doc;
    doc["scheme"] = std::string(scheme_name(policy.scheme));
    doc["s"] = policy.s;
    doc["schedule"] = nlohmann::ordered_json::object();
    for (const auto& [count, x] : policy.schedule) doc["schedule"][std::to_string(count)] = x;
    if (policy.extension) {
        doc["extension"] = {{"slope", policy.extension->slope},
                            {"intercept", policy.extension->intercept},
                            {"cap", policy.extension->cap}};
    }
    return doc.dump(2) + '\n';
}

} // namespace pindex

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace pindex {

/// Argument outside the mathematical domain of a basis function.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A partition policy cannot resolve a p-axis for the requested author count.
class policy_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller-supplied values violate a documented constraint.
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A metric is undefined for the given input (e.g. no articles at all).
class undefined_metric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Partition resolution failed for one article.
class record_error : public std::runtime_error {
public:
    record_error(std::string article_id, const std::string& cause)
        : std::runtime_error("article " + article_id + ": " + cause),
          article_id_(std::move(article_id)) {}

    const std::string& article_id() const noexcept { return article_id_; }

private:
    std::string article_id_;
};

/// Malformed input file. `line` is 1-based; `column` is 1-based or 0 when
/// the error concerns a whole line or document.
class parse_error : public std::runtime_error {
public:
    parse_error(std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error(format(line, column, what)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(std::size_t line, std::size_t column, const std::string& what) {
        std::string out = "line " + std::to_string(line);
        if (column != 0) out += ", column " + std::to_string(column);
        return out + ": " + what;
    }

    std::size_t line_;
    std::size_t column_;
};

} // namespace pindex

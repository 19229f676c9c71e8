#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "socnet/types.hpp"

namespace socnet::csv {

// RFC 4180 reader: quoted fields may contain commas, doubled quotes and newlines.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    // Reads the next record. Returns false at end of input.
    bool next(std::vector<std::string>& fields);

    // Physical line on which the last record started (1-based).
    std::size_t line() const noexcept { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
    std::size_t record_line_ = 0;
};

// Header row with case-sensitive column lookup.
class Header {
public:
    Header() = default;
    explicit Header(std::vector<std::string> columns);

    std::optional<std::size_t> find(std::string_view name) const;
    std::size_t require(std::string_view name) const;  // throws ValidationError
    const std::vector<std::string>& columns() const noexcept { return columns_; }

private:
    std::vector<std::string> columns_;
};

std::string escape(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Shortest round-trippable decimal representation.
std::string format_double(double value);

double parse_double(std::string_view text);
long long parse_int(std::string_view text);

enum class TimestampFormat { EpochSeconds, Iso8601 };

TimestampFormat detect_timestamp_format(std::string_view text);
Timestamp parse_timestamp(std::string_view text, TimestampFormat format);

// Enforces one timestamp format per file: the first parsed value fixes it.
class TimestampParser {
public:
    Timestamp operator()(std::string_view text);

private:
    std::optional<TimestampFormat> format_;
};

struct Diagnostic {
    std::size_t line = 0;
    std::string message;
};

}  // namespace socnet::csv

#include "socnet/csv.hpp"

#include <charconv>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <limits>
#include <sstream>

namespace socnet::csv {

bool Reader::next(std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
    int ch;
    record_line_ = line_ + 1;
    while ((ch = in_.get()) != std::char_traits<char>::eof()) {
        any = true;
        const char c = static_cast<char>(ch);
        if (in_quotes) {
            if (c == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line_;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && field.empty()) {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            ++line_;
            if (!field.empty() && field.back() == '\r') field.pop_back();
            fields.push_back(std::move(field));
            return true;
        } else {
            field.push_back(c);
        }
    }
    if (!any) return false;
    if (!field.empty() && field.back() == '\r') field.pop_back();
    fields.push_back(std::move(field));
    ++line_;
    return true;
}

Header::Header(std::vector<std::string> columns) : columns_(std::move(columns)) {
    // Strip a UTF-8 byte-order mark from the first column.
    if (!columns_.empty() && columns_.front().starts_with("\xEF\xBB\xBF")) {
        columns_.front().erase(0, 3);
    }
}

std::optional<std::size_t> Header::find(std::string_view name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i] == name) return i;
    }
    return std::nullopt;
}

std::size_t Header::require(std::string_view name) const {
    if (auto idx = find(name)) return *idx;
    throw ValidationError("missing required column '" + std::string(name) + "'");
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << escape(fields[i]);
    }
    out << '\n';
}

std::string format_double(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

double parse_double(std::string_view text) {
    text = trim(text);
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ValidationError("not a number: '" + std::string(text) + "'");
    }
    return value;
}

long long parse_int(std::string_view text) {
    text = trim(text);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ValidationError("not an integer: '" + std::string(text) + "'");
    }
    return value;
}

TimestampFormat detect_timestamp_format(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.find_first_not_of("0123456789-") == std::string_view::npos &&
        text.find('-', 1) == std::string_view::npos) {
        return TimestampFormat::EpochSeconds;
    }
    return TimestampFormat::Iso8601;
}

Timestamp parse_timestamp(std::string_view text, TimestampFormat format) {
    text = trim(text);
    if (format == TimestampFormat::EpochSeconds) return parse_int(text);

    // YYYY-MM-DD[THH:MM:SS[Z]] (a space separator is accepted too)
    std::string s(text);
    if (!s.empty() && s.back() == 'Z') s.pop_back();
    std::tm tm{};
    std::istringstream in(s);
    if (s.size() <= 10) {
        in >> std::get_time(&tm, "%Y-%m-%d");
    } else {
        if (s[10] == ' ') s[10] = 'T';
        in.str(s);
        in >> std::get_time(&tm, "%Y-%m-%dT%H:%M:%S");
    }
    if (in.fail() || in.peek() != std::char_traits<char>::eof()) {
        throw ValidationError("not an ISO-8601 timestamp: '" + std::string(text) + "'");
    }
    return static_cast<Timestamp>(timegm(&tm));
}

Timestamp TimestampParser::operator()(std::string_view text) {
    const auto detected = detect_timestamp_format(text);
    if (!format_) {
        format_ = detected;
    } else if (*format_ != detected) {
        throw ValidationError("mixed timestamp formats within one file: '" + std::string(trim(text)) + "'");
    }
    return parse_timestamp(text, *format_);
}

}  // namespace socnet::csv

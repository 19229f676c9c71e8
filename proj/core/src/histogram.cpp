#include "socnet/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "socnet/csv.hpp"
#include "socnet/error.hpp"

namespace socnet {

BinSpec BinSpec::linear(double low, double high, std::size_t bins) {
    if (bins == 0 || !(low < high)) throw ValidationError("linear bins need low < high and at least one bin");
    std::vector<double> edges(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) {
        edges[i] = low + (high - low) * static_cast<double>(i) / static_cast<double>(bins);
    }
    edges.back() = high;
    return from_edges(std::move(edges));
}

BinSpec BinSpec::logarithmic(double low, double high, std::size_t bins) {
    if (bins == 0 || !(low > 0.0 && low < high)) {
        throw ValidationError("logarithmic bins need 0 < low < high and at least one bin");
    }
    std::vector<double> edges(bins + 1);
    // Exponents in base 10 keep decade edges exact.
    const double lo = std::log10(low);
    const double step = (std::log10(high) - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i <= bins; ++i) edges[i] = std::pow(10.0, lo + step * static_cast<double>(i));
    edges.front() = low;
    edges.back() = high;
    return from_edges(std::move(edges));
}

BinSpec BinSpec::from_edges(std::vector<double> edges) {
    if (edges.size() < 2) throw ValidationError("a histogram needs at least two bin edges");
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (!(edges[i - 1] < edges[i])) throw ValidationError("histogram bin edges must be strictly ascending");
    }
    BinSpec spec;
    spec.edges_ = std::move(edges);
    return spec;
}

BinSpec BinSpec::parse(std::string_view text) {
    auto split = [](std::string_view s, char sep) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            auto pos = s.find(sep, start);
            parts.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
            if (pos == std::string_view::npos) break;
            start = pos + 1;
        }
        return parts;
    };
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ValidationError("bin spec needs a kind prefix: '" + std::string(text) + "'");
    const auto kind = text.substr(0, colon);
    const auto rest = text.substr(colon + 1);
    if (kind == "edges") {
        std::vector<double> edges;
        for (const auto& p : split(rest, ',')) edges.push_back(csv::parse_double(p));
        return from_edges(std::move(edges));
    }
    const auto parts = split(rest, ':');
    if (parts.size() != 3) throw ValidationError("bin spec '" + std::string(text) + "' needs LOW:HIGH:BINS");
    const double low = csv::parse_double(parts[0]);
    const double high = csv::parse_double(parts[1]);
    const auto bins = csv::parse_int(parts[2]);
    if (bins <= 0) throw ValidationError("bin count must be positive");
    if (kind == "linear") return linear(low, high, static_cast<std::size_t>(bins));
    if (kind == "log") return logarithmic(low, high, static_cast<std::size_t>(bins));
    throw ValidationError("unknown bin kind '" + std::string(kind) + "'");
}

std::size_t Histogram::total() const {
    return std::accumulate(counts.begin(), counts.end(), underflow + overflow);
}

Histogram emit_histogram(std::span<const double> values, const BinSpec& bins) {
    if (values.empty()) throw ValidationError("histogram of an empty value set");
    Histogram h;
    h.edges = bins.edges();
    h.counts.assign(h.edges.size() - 1, 0);
    for (double v : values) {
        if (std::isnan(v)) throw ValidationError("histogram input contains NaN");
        if (v < h.edges.front()) {
            ++h.underflow;
        } else if (v >= h.edges.back()) {
            ++h.overflow;
        } else {
            const auto it = std::upper_bound(h.edges.begin(), h.edges.end(), v);
            ++h.counts[static_cast<std::size_t>(it - h.edges.begin()) - 1];
        }
    }
    return h;
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
    csv::write_row(out, {"bin_low", "bin_high", "count"});
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        csv::write_row(out, {csv::format_double(h.edges[i]), csv::format_double(h.edges[i + 1]), std::to_string(h.counts[i])});
    }
}

}  // namespace socnet

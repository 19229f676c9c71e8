#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

namespace socnet {

// Ascending bin edges; bin i is [edges[i], edges[i+1]).
class BinSpec {
public:
    static BinSpec linear(double low, double high, std::size_t bins);
    static BinSpec logarithmic(double low, double high, std::size_t bins);
    static BinSpec from_edges(std::vector<double> edges);

    // "linear:LOW:HIGH:BINS", "log:LOW:HIGH:BINS" or "edges:E0,E1,...".
    static BinSpec parse(std::string_view text);

    const std::vector<double>& edges() const noexcept { return edges_; }

private:
    std::vector<double> edges_;
};

struct Histogram {
    std::vector<double> edges;
    std::vector<std::size_t> counts;
    std::size_t underflow = 0;  // below the first edge
    std::size_t overflow = 0;   // at or above the last edge

    std::size_t total() const;
};

Histogram emit_histogram(std::span<const double> values, const BinSpec& bins);

// bin_low,bin_high,count
void write_histogram_csv(std::ostream& out, const Histogram& h);

}  // namespace socnet

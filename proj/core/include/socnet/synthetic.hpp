#pragma once

#include <cstddef>
#include <cstdint>

#include "socnet/telecom.hpp"

namespace socnet {

struct SyntheticCdrParams {
    std::size_t entities = 7'757;
    std::size_t interactions = 133'197;
    std::size_t cells = 400;
    Timestamp start = 1'262'304'000;       // 2010-01-01T00:00:00Z
    Timestamp span_seconds = 180 * 86'400;
    double activity_exponent = 1.6;        // Pareto tail of per-entity activity
    double mean_contacts = 6.0;
    double reciprocity = 0.6;
    double sms_fraction = 0.3;
    double mobility = 0.15;                // chance a record uses a non-home cell
    std::uint64_t seed = 1;

    void validate() const;
};

// Heavy-tailed, partly reciprocal call/SMS traffic. Every entity appears in at
// least one record; records are sorted by timestamp. Cells are placed around
// a fixed centre so spatial measures are meaningful.
CdrData generate_cdr(const SyntheticCdrParams& params);

void write_cdr_csv(std::ostream& out, const std::vector<CdrRecord>& records);
void write_cells_csv(std::ostream& out, const CellMap& cells);

}  // namespace socnet

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "socnet/graph.hpp"

namespace socnet {

enum class MeasureId {
    DegreeIn,
    DegreeOut,
    BaryCenter,
    Betweenness,
    Hubness,
    Authoritativeness,
    PageRank,
    MarkovCentrality,
};

inline constexpr std::array<MeasureId, 8> kAllMeasures{
    MeasureId::DegreeIn,  MeasureId::DegreeOut,         MeasureId::BaryCenter, MeasureId::Betweenness,
    MeasureId::Hubness,   MeasureId::Authoritativeness, MeasureId::PageRank,   MeasureId::MarkovCentrality,
};

std::string_view to_string(MeasureId id);

// Accepts canonical names and common spellings ("Page Rank", "Markov", ...),
// ignoring case, spaces, '-' and '_'.
MeasureId parse_measure_id(std::string_view text);

struct SolverParams {
    double damping = 0.85;
    double tolerance = 1e-10;
    std::uint32_t max_iterations = 10'000;

    void validate() const;
};

template <typename T>
struct IterativeResult {
    T values;
    bool converged = true;
    std::uint32_t iterations = 0;
};

struct HitsScores {
    std::vector<double> hubness;
    std::vector<double> authoritativeness;
};

struct BetweennessOptions {
    // Graphs larger than this use pivot sampling unless exact is set.
    std::size_t exact_limit = 20'000;
    std::size_t pivots = 512;
    bool exact = false;
    std::uint64_t seed = 0;
};

std::vector<double> degree_in(const Snapshot& g);
std::vector<double> degree_out(const Snapshot& g);

// Brandes accumulation over unweighted directed shortest paths; ordered pairs,
// unnormalised.
std::vector<double> betweenness(const Snapshot& g, const BetweennessOptions& options = {});

// 1 / sum of out-distances; unreachable targets count as distance n.
std::vector<double> barycenter(const Snapshot& g);

IterativeResult<HitsScores> hits(const Snapshot& g, const SolverParams& params = {});
IterativeResult<std::vector<double>> pagerank(const Snapshot& g, const SolverParams& params = {});

// Inverse mean first-passage time on the largest strongly connected component
// of the weight-proportional random walk; zero elsewhere.
std::vector<double> markov_centrality(const Snapshot& g);

// Largest SCC (ties: the one holding the smallest node index), sorted.
std::vector<NodeIndex> largest_strongly_connected_component(const Snapshot& g);

// 10 * ((mean 1-based rank of ties) - 0.5) / n.
std::vector<double> scale_to_bands(std::span<const double> raw);

class MeasureMatrix {
public:
    MeasureMatrix() = default;
    explicit MeasureMatrix(std::vector<EntityId> entities);

    const std::vector<EntityId>& entities() const noexcept { return entities_; }
    std::size_t size() const noexcept { return entities_.size(); }
    std::optional<std::size_t> row_of(std::string_view entity) const;

    // Sets raw values and recomputes the scaled vector for this measure.
    void set_raw(MeasureId id, std::vector<double> raw, bool converged = true);
    // Stores both vectors as given (used when reading exported matrices).
    void set(MeasureId id, std::vector<double> raw, std::vector<double> scaled, bool converged = true);

    bool has(MeasureId id) const { return raw_.contains(id); }
    std::set<MeasureId> measures() const;
    const std::vector<double>& raw(MeasureId id) const;
    const std::vector<double>& scaled(MeasureId id) const;
    bool converged(MeasureId id) const;

    std::map<MeasureId, double> scaled_row(std::size_t row) const;
    std::map<MeasureId, double> raw_row(std::size_t row) const;

private:
    std::vector<EntityId> entities_;
    std::unordered_map<EntityId, std::size_t> rows_;
    std::map<MeasureId, std::vector<double>> raw_;
    std::map<MeasureId, std::vector<double>> scaled_;
    std::map<MeasureId, bool> converged_;
};

struct MeasureOptions {
    SolverParams solver;
    BetweennessOptions betweenness;
};

MeasureMatrix measure_matrix(const Snapshot& g, std::span<const MeasureId> measures,
                             const MeasureOptions& options = {});

}  // namespace socnet

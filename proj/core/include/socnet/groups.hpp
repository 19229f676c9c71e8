#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "socnet/measures.hpp"

namespace socnet {

enum class Tier { NotRelated = 0, Weak = 1, Circumjacent = 2, Kernel = 3 };

std::string_view to_string(Tier tier);

struct TierThresholds {
    double kernel = 0.50;
    double circumjacent = 0.25;
    double weak = 0.10;

    void validate() const;
};

Tier classify_membership(double f, const TierThresholds& thresholds = {});

struct GroupStrategy {
    std::map<MeasureId, double> measure_summary;
    std::vector<std::string> theme_tags;  // strongest term first
};

struct Group {
    std::string id;
    std::set<EntityId> core;
    std::map<EntityId, double> membership;  // only f > 0 is stored
    std::map<EntityId, Tier> tiers;
    GroupStrategy strategy;

    std::set<EntityId> members_in(Tier tier) const;
    std::set<EntityId> kernel() const { return members_in(Tier::Kernel); }
    Tier tier_of(const EntityId& entity) const;
};

enum class ExtractionMethod { ThresholdComponents, KCoreSeeds };

ExtractionMethod parse_extraction_method(std::string_view text);
std::string_view to_string(ExtractionMethod method);

struct ExtractionParams {
    ExtractionMethod method = ExtractionMethod::ThresholdComponents;
    std::uint32_t weight_threshold = 1;  // tau, ThresholdComponents
    std::uint32_t k = 2;                 // KCoreSeeds
    std::size_t min_size = 3;            // ThresholdComponents
    TierThresholds tiers;

    void validate() const;
};

// Undirected view: w(u, v) = weight(u -> v) + weight(v -> u).
class SymmetricGraph {
public:
    explicit SymmetricGraph(const Snapshot& g);

    struct Arc {
        NodeIndex node;
        std::uint64_t weight;
    };

    std::size_t node_count() const noexcept { return adj_.size(); }
    const std::vector<Arc>& neighbors(NodeIndex v) const { return adj_[v]; }
    std::uint64_t total_weight(NodeIndex v) const { return totals_[v]; }

private:
    std::vector<std::vector<Arc>> adj_;
    std::vector<std::uint64_t> totals_;
};

// W(a, core \ {a}) / W(a, all) on the symmetrised graph; 0 for isolated or absent a.
double membership_strength(const Snapshot& g, const std::set<EntityId>& core, const EntityId& entity);

// Per-entity documents used to derive theme tags.
using ThemeSource = std::map<EntityId, std::vector<std::string>>;

GroupStrategy infer_strategy(const Group& group, const MeasureMatrix* matrix, const ThemeSource* themes);

std::vector<Group> extract_groups(const Snapshot& g, const ExtractionParams& params,
                                  const MeasureMatrix* matrix = nullptr, const ThemeSource* themes = nullptr);

// Distinct symmetrised member pairs over n(n-1)/2.
double link_density(const Snapshot& g, const std::set<EntityId>& members);

struct Cohesion {
    double value = 0.0;  // +inf when isolated
    bool isolated = false;
};

Cohesion group_cohesion(const Snapshot& g, const std::set<EntityId>& members);

// Jaccard index.
double group_stability(const std::set<EntityId>& a, const std::set<EntityId>& b);

enum class TraceStatus { Stable, Emerged, Dissolved };

std::string_view to_string(TraceStatus status);

struct GroupMatch {
    std::optional<std::size_t> previous;  // index into groups_t1
    std::optional<std::size_t> current;   // index into groups_t2
    double stability = 0.0;
    TraceStatus status = TraceStatus::Stable;
};

// Greedy highest-stability pairing of kernel sets.
std::vector<GroupMatch> match_groups_across_windows(const std::vector<Group>& groups_t1,
                                                    const std::vector<Group>& groups_t2, double min_stability);

struct TracePoint {
    std::size_t window = 0;
    std::string group_id;
    double stability = 0.0;  // vs the predecessor; 0 for the first point
};

struct GroupTrace {
    std::string id;
    std::vector<TracePoint> points;
    bool dissolved = false;
};

// Chains window-to-window matches into traces.
std::vector<GroupTrace> build_group_traces(const std::vector<std::vector<Group>>& groups_per_window,
                                           double min_stability);

// Pairwise kernel intersection sizes (i < j) for inclusion/intersection reporting.
struct KernelOverlap {
    std::size_t first = 0;
    std::size_t second = 0;
    std::size_t shared = 0;
};
std::vector<KernelOverlap> kernel_overlaps(const std::vector<Group>& groups);

}  // namespace socnet

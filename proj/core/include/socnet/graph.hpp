#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <tuple>
#include <vector>

#include "socnet/csv.hpp"
#include "socnet/types.hpp"

namespace socnet {

struct IngestReport {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t duplicates_dropped = 0;
    std::vector<csv::Diagnostic> diagnostics;
};

// Directed weighted graph of one time window. Nodes are sorted by id, so
// NodeIndex order equals lexicographic EntityId order. Edge weights count
// interactions; self-interactions contribute a node but no edge.
class Snapshot {
public:
    struct Arc {
        NodeIndex node;
        std::uint32_t weight;
    };
    struct Edge {
        NodeIndex src;
        NodeIndex dst;
        std::uint32_t weight;
    };

    Snapshot() = default;

    // Duplicate (src, dst) pairs are summed; self-loops are dropped.
    static Snapshot from_edges(std::optional<TimeWindow> window, std::vector<EntityId> nodes,
                               std::span<const Edge> edges);

    // Convenience builder over entity names; endpoints become nodes.
    static Snapshot from_named_edges(
        std::span<const std::tuple<EntityId, EntityId, std::uint32_t>> edges,
        std::span<const EntityId> extra_nodes = {});

    const std::optional<TimeWindow>& window() const noexcept { return window_; }

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return out_targets_.size(); }
    std::span<const EntityId> nodes() const noexcept { return nodes_; }
    const EntityId& node(NodeIndex v) const { return nodes_.at(v); }
    std::optional<NodeIndex> index_of(std::string_view id) const;

    std::span<const Arc> out_arcs(NodeIndex v) const {
        return {out_targets_.data() + out_offsets_[v], out_targets_.data() + out_offsets_[v + 1]};
    }
    std::span<const Arc> in_arcs(NodeIndex v) const {
        return {in_sources_.data() + in_offsets_[v], in_sources_.data() + in_offsets_[v + 1]};
    }

    // 0 when the edge is absent.
    std::uint32_t weight(NodeIndex src, NodeIndex dst) const;

    // EN: weight(src, dst) / max over dst' of weight(src, dst'); 0 when absent.
    double strength(NodeIndex src, NodeIndex dst) const;

    // Edges ordered by (src, dst).
    std::vector<Edge> edges() const;

private:
    std::optional<TimeWindow> window_;
    std::vector<EntityId> nodes_;
    std::vector<std::size_t> out_offsets_{0};
    std::vector<Arc> out_targets_;
    std::vector<std::size_t> in_offsets_{0};
    std::vector<Arc> in_sources_;
    std::vector<std::uint32_t> max_out_weight_;
};

// Temporal interaction history. Build with add_interactions, then query;
// queries never mutate the store.
class InteractionStore {
public:
    IngestReport add_interactions(std::span<const Interaction> records, bool dedup = false);

    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }
    std::span<const Interaction> records() const noexcept { return records_; }

    std::optional<Timestamp> min_timestamp() const;
    std::optional<Timestamp> max_timestamp() const;

    // Records with timestamp in the window, in timestamp order.
    std::span<const Interaction> range(const TimeWindow& window) const;

    Snapshot snapshot(const TimeWindow& window) const;

    // Snapshot over every record.
    Snapshot full_snapshot() const;

    // Windows [min + i*step, min + i*step + width) until one ends past the
    // latest timestamp.
    std::vector<TimeWindow> windows(Timestamp width, Timestamp step) const;
    std::vector<Snapshot> window_series(Timestamp width, Timestamp step) const;

private:
    std::vector<Interaction> records_;  // stable-sorted by timestamp
};

// Union of out- and in-neighbours. Out-neighbours carry strength(entity, n);
// pure in-neighbours carry strength(n, entity).
std::map<EntityId, double> neighbors(const Snapshot& snapshot, std::string_view entity);

// Generic interaction CSV: src,dst,timestamp,kind,duration[,meta...].
std::vector<Interaction> read_interactions_csv(std::istream& in, IngestReport& report);
std::vector<Interaction> read_interactions_csv(const std::filesystem::path& path, IngestReport& report);
void write_interactions_csv(std::ostream& out, std::span<const Interaction> records);

}  // namespace socnet

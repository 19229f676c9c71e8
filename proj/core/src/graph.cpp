#include "socnet/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace socnet {

std::string_view to_string(InteractionKind kind) {
    switch (kind) {
        case InteractionKind::Call: return "call";
        case InteractionKind::Sms: return "sms";
        case InteractionKind::Comment: return "comment";
    }
    return "call";
}

InteractionKind parse_interaction_kind(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "call") return InteractionKind::Call;
    if (lower == "sms") return InteractionKind::Sms;
    if (lower == "comment") return InteractionKind::Comment;
    throw ValidationError("unknown interaction kind '" + std::string(text) + "'");
}

void validate(const Interaction& interaction) {
    if (interaction.src.empty()) throw ValidationError("empty src entity id");
    if (interaction.dst.empty()) throw ValidationError("empty dst entity id");
    if (interaction.timestamp < 0) throw ValidationError("negative timestamp");
    if (!(interaction.duration >= 0.0)) throw ValidationError("negative duration");
}

// ---------------------------------------------------------------- Snapshot

Snapshot Snapshot::from_edges(std::optional<TimeWindow> window, std::vector<EntityId> nodes,
                              std::span<const Edge> edges) {
    Snapshot snap;
    snap.window_ = window;

    // Sort nodes and remap edge endpoints to the sorted order.
    std::vector<NodeIndex> order(nodes.size());
    for (NodeIndex i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) { return nodes[a] < nodes[b]; });
    std::vector<NodeIndex> remap(nodes.size());
    snap.nodes_.reserve(nodes.size());
    for (NodeIndex pos = 0; pos < order.size(); ++pos) {
        if (pos > 0 && nodes[order[pos]] == snap.nodes_.back()) {
            throw ValidationError("duplicate node id '" + nodes[order[pos]] + "'");
        }
        remap[order[pos]] = pos;
        snap.nodes_.push_back(std::move(nodes[order[pos]]));
    }

    std::vector<Edge> sorted;
    sorted.reserve(edges.size());
    for (const auto& e : edges) {
        if (e.src >= remap.size() || e.dst >= remap.size()) throw ValidationError("edge endpoint out of range");
        if (e.src == e.dst || e.weight == 0) continue;
        sorted.push_back({remap[e.src], remap[e.dst], e.weight});
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.src, a.dst) < std::tie(b.src, b.dst); });
    std::vector<Edge> merged;
    merged.reserve(sorted.size());
    for (const auto& e : sorted) {
        if (!merged.empty() && merged.back().src == e.src && merged.back().dst == e.dst) {
            merged.back().weight += e.weight;
        } else {
            merged.push_back(e);
        }
    }

    const std::size_t n = snap.nodes_.size();
    snap.out_offsets_.assign(n + 1, 0);
    snap.in_offsets_.assign(n + 1, 0);
    snap.max_out_weight_.assign(n, 0);
    for (const auto& e : merged) {
        ++snap.out_offsets_[e.src + 1];
        ++snap.in_offsets_[e.dst + 1];
        snap.max_out_weight_[e.src] = std::max(snap.max_out_weight_[e.src], e.weight);
    }
    for (std::size_t v = 0; v < n; ++v) {
        snap.out_offsets_[v + 1] += snap.out_offsets_[v];
        snap.in_offsets_[v + 1] += snap.in_offsets_[v];
    }
    snap.out_targets_.resize(merged.size());
    snap.in_sources_.resize(merged.size());
    std::vector<std::size_t> in_fill(snap.in_offsets_.begin(), snap.in_offsets_.end() - 1);
    for (std::size_t i = 0; i < merged.size(); ++i) {
        const auto& e = merged[i];
        snap.out_targets_[i] = {e.dst, e.weight};  // merged is sorted by src, so this is CSR order
        snap.in_sources_[in_fill[e.dst]++] = {e.src, e.weight};
    }
    return snap;
}

Snapshot Snapshot::from_named_edges(std::span<const std::tuple<EntityId, EntityId, std::uint32_t>> edges,
                                    std::span<const EntityId> extra_nodes) {
    std::set<EntityId> names(extra_nodes.begin(), extra_nodes.end());
    for (const auto& [s, d, w] : edges) {
        names.insert(s);
        names.insert(d);
    }
    std::vector<EntityId> nodes(names.begin(), names.end());
    std::vector<Edge> indexed;
    indexed.reserve(edges.size());
    auto idx = [&](const EntityId& id) {
        return static_cast<NodeIndex>(std::lower_bound(nodes.begin(), nodes.end(), id) - nodes.begin());
    };
    for (const auto& [s, d, w] : edges) indexed.push_back({idx(s), idx(d), w});
    return from_edges(std::nullopt, std::move(nodes), indexed);
}

std::optional<NodeIndex> Snapshot::index_of(std::string_view id) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                               [](const EntityId& a, std::string_view b) { return std::string_view(a) < b; });
    if (it == nodes_.end() || *it != id) return std::nullopt;
    return static_cast<NodeIndex>(it - nodes_.begin());
}

std::uint32_t Snapshot::weight(NodeIndex src, NodeIndex dst) const {
    auto arcs = out_arcs(src);
    auto it = std::lower_bound(arcs.begin(), arcs.end(), dst, [](const Arc& a, NodeIndex d) { return a.node < d; });
    return (it != arcs.end() && it->node == dst) ? it->weight : 0;
}

double Snapshot::strength(NodeIndex src, NodeIndex dst) const {
    const auto w = weight(src, dst);
    if (w == 0) return 0.0;
    return static_cast<double>(w) / static_cast<double>(max_out_weight_[src]);
}

std::vector<Snapshot::Edge> Snapshot::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeIndex v = 0; v < node_count(); ++v) {
        for (const auto& a : out_arcs(v)) out.push_back({v, a.node, a.weight});
    }
    return out;
}

// ---------------------------------------------------------- InteractionStore

IngestReport InteractionStore::add_interactions(std::span<const Interaction> records, bool dedup) {
    IngestReport report;
    std::vector<Interaction> accepted;
    accepted.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        try {
            validate(records[i]);
            accepted.push_back(records[i]);
        } catch (const ValidationError& e) {
            ++report.rejected;
            report.diagnostics.push_back({i + 1, e.what()});
        }
    }
    auto by_time = [](const Interaction& a, const Interaction& b) { return a.timestamp < b.timestamp; };
    std::stable_sort(accepted.begin(), accepted.end(), by_time);
    const auto old_size = records_.size();
    records_.insert(records_.end(), std::make_move_iterator(accepted.begin()), std::make_move_iterator(accepted.end()));
    std::inplace_merge(records_.begin(), records_.begin() + static_cast<std::ptrdiff_t>(old_size), records_.end(),
                       by_time);
    report.accepted = accepted.size();

    if (dedup) {
        // Exact duplicates share a timestamp, so scanning each equal-time run suffices.
        std::vector<Interaction> unique;
        unique.reserve(records_.size());
        for (auto run = records_.begin(); run != records_.end();) {
            auto run_end = std::find_if(run, records_.end(), [&](const Interaction& r) { return r.timestamp != run->timestamp; });
            const auto first = unique.size();
            for (auto it = run; it != run_end; ++it) {
                if (std::find(unique.begin() + static_cast<std::ptrdiff_t>(first), unique.end(), *it) == unique.end()) {
                    unique.push_back(std::move(*it));
                } else {
                    ++report.duplicates_dropped;
                }
            }
            run = run_end;
        }
        records_ = std::move(unique);
    }
    return report;
}

std::optional<Timestamp> InteractionStore::min_timestamp() const {
    if (records_.empty()) return std::nullopt;
    return records_.front().timestamp;
}

std::optional<Timestamp> InteractionStore::max_timestamp() const {
    if (records_.empty()) return std::nullopt;
    return records_.back().timestamp;
}

std::span<const Interaction> InteractionStore::range(const TimeWindow& window) const {
    auto lo = std::lower_bound(records_.begin(), records_.end(), window.start(),
                               [](const Interaction& r, Timestamp t) { return r.timestamp < t; });
    auto hi = std::lower_bound(lo, records_.end(), window.end(),
                               [](const Interaction& r, Timestamp t) { return r.timestamp < t; });
    return {records_.data() + (lo - records_.begin()), static_cast<std::size_t>(hi - lo)};
}

namespace {

Snapshot build_snapshot(std::optional<TimeWindow> window, std::span<const Interaction> records) {
    std::vector<EntityId> names;
    names.reserve(records.size() * 2);
    for (const auto& r : records) {
        names.push_back(r.src);
        names.push_back(r.dst);
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    auto idx = [&](const EntityId& id) {
        return static_cast<NodeIndex>(std::lower_bound(names.begin(), names.end(), id) - names.begin());
    };
    std::vector<Snapshot::Edge> edges;
    edges.reserve(records.size());
    for (const auto& r : records) edges.push_back({idx(r.src), idx(r.dst), 1});
    return Snapshot::from_edges(window, std::move(names), edges);
}

}  // namespace

Snapshot InteractionStore::snapshot(const TimeWindow& window) const {
    return build_snapshot(window, range(window));
}

Snapshot InteractionStore::full_snapshot() const {
    if (records_.empty()) return Snapshot{};
    return build_snapshot(TimeWindow(records_.front().timestamp, records_.back().timestamp + 1), records_);
}

std::vector<TimeWindow> InteractionStore::windows(Timestamp width, Timestamp step) const {
    if (width <= 0) throw ValidationError("window width must be positive");
    if (step <= 0) throw ValidationError("window step must be positive");
    std::vector<TimeWindow> out;
    if (records_.empty()) return out;
    const Timestamp lo = records_.front().timestamp;
    const Timestamp hi = records_.back().timestamp;
    for (Timestamp start = lo;; start += step) {
        out.emplace_back(start, start + width);
        if (start + width > hi) break;
    }
    return out;
}

std::vector<Snapshot> InteractionStore::window_series(Timestamp width, Timestamp step) const {
    std::vector<Snapshot> out;
    for (const auto& w : windows(width, step)) out.push_back(snapshot(w));
    return out;
}

std::map<EntityId, double> neighbors(const Snapshot& snapshot, std::string_view entity) {
    std::map<EntityId, double> out;
    const auto v = snapshot.index_of(entity);
    if (!v) return out;
    for (const auto& a : snapshot.out_arcs(*v)) out[snapshot.node(a.node)] = snapshot.strength(*v, a.node);
    for (const auto& a : snapshot.in_arcs(*v)) out.try_emplace(snapshot.node(a.node), snapshot.strength(a.node, *v));
    return out;
}

// --------------------------------------------------------------------- CSV

std::vector<Interaction> read_interactions_csv(std::istream& in, IngestReport& report) {
    csv::Reader reader(in);
    std::vector<std::string> row;
    if (!reader.next(row)) return {};
    const csv::Header header(row);
    const auto c_src = header.require("src");
    const auto c_dst = header.require("dst");
    const auto c_ts = header.require("timestamp");
    const auto c_kind = header.require("kind");
    const auto c_dur = header.require("duration");
    std::vector<std::size_t> meta_cols;
    for (std::size_t i = 0; i < header.columns().size(); ++i) {
        if (i != c_src && i != c_dst && i != c_ts && i != c_kind && i != c_dur) meta_cols.push_back(i);
    }

    csv::TimestampParser parse_ts;
    std::vector<Interaction> out;
    while (reader.next(row)) {
        if (row.size() == 1 && row[0].empty()) continue;
        try {
            if (row.size() != header.columns().size()) {
                throw ValidationError("expected " + std::to_string(header.columns().size()) + " fields, got " +
                                      std::to_string(row.size()));
            }
            Interaction r;
            r.src = row[c_src];
            r.dst = row[c_dst];
            r.timestamp = parse_ts(row[c_ts]);
            r.kind = parse_interaction_kind(row[c_kind]);
            r.duration = row[c_dur].empty() ? 0.0 : csv::parse_double(row[c_dur]);
            for (auto c : meta_cols) {
                if (!row[c].empty()) r.meta.emplace(header.columns()[c], row[c]);
            }
            validate(r);
            out.push_back(std::move(r));
            ++report.accepted;
        } catch (const ValidationError& e) {
            ++report.rejected;
            report.diagnostics.push_back({reader.line(), e.what()});
        }
    }
    return out;
}

std::vector<Interaction> read_interactions_csv(const std::filesystem::path& path, IngestReport& report) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuntimeError("cannot open interactions file " + path.string());
    return read_interactions_csv(in, report);
}

void write_interactions_csv(std::ostream& out, std::span<const Interaction> records) {
    std::set<std::string> meta_keys;
    for (const auto& r : records) {
        for (const auto& [k, v] : r.meta) meta_keys.insert(k);
    }
    std::vector<std::string> header{"src", "dst", "timestamp", "kind", "duration"};
    header.insert(header.end(), meta_keys.begin(), meta_keys.end());
    csv::write_row(out, header);
    std::vector<std::string> fields;
    for (const auto& r : records) {
        fields = {r.src, r.dst, std::to_string(r.timestamp), std::string(to_string(r.kind)),
                  csv::format_double(r.duration)};
        for (const auto& k : meta_keys) {
            auto it = r.meta.find(k);
            fields.push_back(it == r.meta.end() ? std::string() : it->second);
        }
        csv::write_row(out, fields);
    }
}

}  // namespace socnet

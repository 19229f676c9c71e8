#include "socnet/groups.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "socnet/blogs.hpp"

namespace socnet {

std::string_view to_string(Tier tier) {
    switch (tier) {
        case Tier::Kernel: return "Kernel";
        case Tier::Circumjacent: return "Circumjacent";
        case Tier::Weak: return "Weak";
        case Tier::NotRelated: return "NotRelated";
    }
    return "NotRelated";
}

std::string_view to_string(TraceStatus status) {
    switch (status) {
        case TraceStatus::Stable: return "Stable";
        case TraceStatus::Emerged: return "Emerged";
        case TraceStatus::Dissolved: return "Dissolved";
    }
    return "Stable";
}

std::string_view to_string(ExtractionMethod method) {
    return method == ExtractionMethod::ThresholdComponents ? "ThresholdComponents" : "KCoreSeeds";
}

ExtractionMethod parse_extraction_method(std::string_view text) {
    if (text == "ThresholdComponents" || text == "threshold" || text == "threshold-components") {
        return ExtractionMethod::ThresholdComponents;
    }
    if (text == "KCoreSeeds" || text == "kcore" || text == "kcore-seeds") return ExtractionMethod::KCoreSeeds;
    throw ValidationError("unknown group extraction method '" + std::string(text) + "'");
}

void TierThresholds::validate() const {
    if (!(0.0 < weak && weak < circumjacent && circumjacent < kernel && kernel <= 1.0)) {
        throw ValidationError("tier thresholds must satisfy 0 < weak < circumjacent < kernel <= 1");
    }
}

Tier classify_membership(double f, const TierThresholds& t) {
    t.validate();
    if (f >= t.kernel) return Tier::Kernel;
    if (f >= t.circumjacent) return Tier::Circumjacent;
    if (f >= t.weak) return Tier::Weak;
    return Tier::NotRelated;
}

void ExtractionParams::validate() const {
    tiers.validate();
    if (method == ExtractionMethod::ThresholdComponents && weight_threshold < 1) {
        throw ValidationError("weight threshold must be at least 1");
    }
    if (method == ExtractionMethod::KCoreSeeds && k < 2) throw ValidationError("k-core order must be at least 2");
}

std::set<EntityId> Group::members_in(Tier tier) const {
    std::set<EntityId> out;
    for (const auto& [e, t] : tiers) {
        if (t == tier) out.insert(e);
    }
    return out;
}

Tier Group::tier_of(const EntityId& entity) const {
    auto it = tiers.find(entity);
    return it == tiers.end() ? Tier::NotRelated : it->second;
}

// ----------------------------------------------------------- SymmetricGraph

SymmetricGraph::SymmetricGraph(const Snapshot& g) : adj_(g.node_count()), totals_(g.node_count(), 0) {
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
        // Merge the sorted out- and in-arc lists of v.
        auto out = g.out_arcs(v);
        auto in = g.in_arcs(v);
        std::size_t i = 0, j = 0;
        while (i < out.size() || j < in.size()) {
            NodeIndex u;
            std::uint64_t w = 0;
            if (j == in.size() || (i < out.size() && out[i].node < in[j].node)) {
                u = out[i].node;
                w = out[i++].weight;
            } else if (i == out.size() || in[j].node < out[i].node) {
                u = in[j].node;
                w = in[j++].weight;
            } else {
                u = out[i].node;
                w = std::uint64_t{out[i++].weight} + in[j++].weight;
            }
            adj_[v].push_back({u, w});
            totals_[v] += w;
        }
    }
}

namespace {

std::vector<NodeIndex> indices_of(const Snapshot& g, const std::set<EntityId>& members) {
    std::vector<NodeIndex> out;
    for (const auto& m : members) {
        if (auto v = g.index_of(m)) out.push_back(*v);
    }
    return out;
}

double strength_in(const SymmetricGraph& sg, NodeIndex v, const std::vector<char>& in_core) {
    if (sg.total_weight(v) == 0) return 0.0;
    std::uint64_t inside = 0;
    for (const auto& a : sg.neighbors(v)) {
        if (in_core[a.node] && a.node != v) inside += a.weight;
    }
    return static_cast<double>(inside) / static_cast<double>(sg.total_weight(v));
}

// Connected components over the arcs accepted by `keep`, restricted to `alive` nodes.
template <typename Keep>
std::vector<std::vector<NodeIndex>> components(const SymmetricGraph& sg, const std::vector<char>& alive, Keep keep) {
    const std::size_t n = sg.node_count();
    std::vector<char> seen(n, 0);
    std::vector<std::vector<NodeIndex>> out;
    std::vector<NodeIndex> stack;
    for (NodeIndex s = 0; s < n; ++s) {
        if (seen[s] || !alive[s]) continue;
        auto& comp = out.emplace_back();
        seen[s] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            const NodeIndex v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (const auto& a : sg.neighbors(v)) {
                if (!seen[a.node] && alive[a.node] && keep(a)) {
                    seen[a.node] = 1;
                    stack.push_back(a.node);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
    }
    return out;
}

std::vector<char> k_core_mask(const SymmetricGraph& sg, std::uint32_t k) {
    const std::size_t n = sg.node_count();
    std::vector<std::size_t> degree(n);
    std::vector<char> alive(n, 1);
    std::vector<NodeIndex> queue;
    for (NodeIndex v = 0; v < n; ++v) {
        degree[v] = sg.neighbors(v).size();
        if (degree[v] < k) {
            alive[v] = 0;
            queue.push_back(v);
        }
    }
    while (!queue.empty()) {
        const NodeIndex v = queue.back();
        queue.pop_back();
        for (const auto& a : sg.neighbors(v)) {
            if (alive[a.node] && --degree[a.node] < k) {
                alive[a.node] = 0;
                queue.push_back(a.node);
            }
        }
    }
    return alive;
}

}  // namespace

double membership_strength(const Snapshot& g, const std::set<EntityId>& core, const EntityId& entity) {
    if (core.empty()) throw ValidationError("membership strength needs a non-empty core");
    const auto v = g.index_of(entity);
    if (!v) return 0.0;
    const SymmetricGraph sg(g);
    std::vector<char> in_core(g.node_count(), 0);
    for (auto c : indices_of(g, core)) in_core[c] = 1;
    return strength_in(sg, *v, in_core);
}

GroupStrategy infer_strategy(const Group& group, const MeasureMatrix* matrix, const ThemeSource* themes) {
    GroupStrategy s;
    const auto kernel = group.kernel();
    if (matrix) {
        for (MeasureId id : matrix->measures()) {
            const auto& scaled = matrix->scaled(id);
            double total = 0.0;
            std::size_t n = 0;
            for (const auto& e : kernel) {
                if (auto row = matrix->row_of(e)) {
                    total += scaled[*row];
                    ++n;
                }
            }
            if (n > 0) s.measure_summary[id] = total / static_cast<double>(n);
        }
    }
    if (themes && !themes->empty()) {
        std::vector<std::pair<std::string, std::string>> docs;
        std::vector<EntityId> owner;
        for (const auto& [entity, texts] : *themes) {
            for (std::size_t i = 0; i < texts.size(); ++i) {
                docs.emplace_back(entity + "#" + std::to_string(i), texts[i]);
                owner.push_back(entity);
            }
        }
        std::map<std::string, double> totals;
        try {
            const auto index = TfIdfIndex::build(docs);
            for (std::size_t i = 0; i < docs.size(); ++i) {
                if (!kernel.contains(owner[i])) continue;
                for (const auto& [term, w] : index.documents()[i].weights) totals[term] += w;
            }
        } catch (const ValidationError&) {
            // no tokens anywhere: no themes
        }
        std::vector<std::pair<std::string, double>> ranked(totals.begin(), totals.end());
        std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
        for (std::size_t i = 0; i < ranked.size() && i < 10; ++i) s.theme_tags.push_back(ranked[i].first);
    }
    return s;
}

std::vector<Group> extract_groups(const Snapshot& g, const ExtractionParams& params, const MeasureMatrix* matrix,
                                  const ThemeSource* themes) {
    params.validate();
    const SymmetricGraph sg(g);
    const std::size_t n = g.node_count();

    std::vector<std::vector<NodeIndex>> cores;
    if (params.method == ExtractionMethod::ThresholdComponents) {
        std::vector<char> alive(n, 1);
        const std::uint64_t tau = params.weight_threshold;
        for (auto& comp : components(sg, alive, [&](const SymmetricGraph::Arc& a) { return a.weight >= tau; })) {
            if (comp.size() >= std::max<std::size_t>(params.min_size, 2)) cores.push_back(std::move(comp));
        }
    } else {
        const auto alive = k_core_mask(sg, params.k);
        for (auto& comp : components(sg, alive, [](const SymmetricGraph::Arc&) { return true; })) {
            cores.push_back(std::move(comp));
        }
    }
    std::sort(cores.begin(), cores.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });

    std::vector<Group> groups;
    std::vector<char> in_core(n, 0);
    for (std::size_t gi = 0; gi < cores.size(); ++gi) {
        Group grp;
        grp.id = "g" + std::to_string(gi);
        for (auto v : cores[gi]) {
            grp.core.insert(g.node(v));
            in_core[v] = 1;
        }
        // Candidates: core members and their direct neighbours.
        std::vector<NodeIndex> candidates(cores[gi]);
        for (auto v : cores[gi]) {
            for (const auto& a : sg.neighbors(v)) candidates.push_back(a.node);
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        for (auto v : candidates) {
            const double f = strength_in(sg, v, in_core);
            if (f > 0.0) {
                grp.membership[g.node(v)] = f;
                grp.tiers[g.node(v)] = classify_membership(f, params.tiers);
            }
        }
        for (auto v : cores[gi]) in_core[v] = 0;
        grp.strategy = infer_strategy(grp, matrix, themes);
        groups.push_back(std::move(grp));
    }
    return groups;
}

double link_density(const Snapshot& g, const std::set<EntityId>& members) {
    if (members.size() < 2) throw ValidationError("link density needs at least two members");
    const SymmetricGraph sg(g);
    std::vector<char> in_set(g.node_count(), 0);
    const auto idx = indices_of(g, members);
    for (auto v : idx) in_set[v] = 1;
    std::size_t pairs = 0;
    for (auto v : idx) {
        for (const auto& a : sg.neighbors(v)) {
            if (in_set[a.node] && a.node > v) ++pairs;
        }
    }
    const double n = static_cast<double>(members.size());
    return static_cast<double>(pairs) / (n * (n - 1.0) / 2.0);
}

Cohesion group_cohesion(const Snapshot& g, const std::set<EntityId>& members) {
    if (members.size() < 2) throw ValidationError("group cohesion needs at least two members");
    const auto idx = indices_of(g, members);
    if (g.node_count() <= idx.size()) throw ValidationError("group cohesion needs at least one non-member");
    const SymmetricGraph sg(g);
    std::vector<char> in_set(g.node_count(), 0);
    for (auto v : idx) in_set[v] = 1;
    std::size_t internal = 0, external = 0;
    for (auto v : idx) {
        for (const auto& a : sg.neighbors(v)) (in_set[a.node] ? internal : external) += 1;
    }
    // Both means share the member count as denominator.
    if (external == 0) return {std::numeric_limits<double>::infinity(), true};
    return {static_cast<double>(internal) / static_cast<double>(external), false};
}

double group_stability(const std::set<EntityId>& a, const std::set<EntityId>& b) {
    if (a.empty() && b.empty()) throw ValidationError("group stability of two empty sets is undefined");
    std::size_t shared = 0;
    for (const auto& x : a) shared += b.contains(x) ? 1 : 0;
    return static_cast<double>(shared) / static_cast<double>(a.size() + b.size() - shared);
}

std::vector<GroupMatch> match_groups_across_windows(const std::vector<Group>& groups_t1,
                                                    const std::vector<Group>& groups_t2, double min_stability) {
    if (!(min_stability > 0.0 && min_stability <= 1.0)) throw ValidationError("min_stability must lie in (0, 1]");
    struct Candidate {
        std::size_t i, j;
        double stability;
    };
    std::vector<std::set<EntityId>> k1, k2;
    for (const auto& g : groups_t1) k1.push_back(g.kernel());
    for (const auto& g : groups_t2) k2.push_back(g.kernel());
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < k1.size(); ++i) {
        for (std::size_t j = 0; j < k2.size(); ++j) {
            if (k1[i].empty() && k2[j].empty()) continue;
            const double s = group_stability(k1[i], k2[j]);
            if (s >= min_stability) candidates.push_back({i, j, s});
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.stability > b.stability; });
    std::vector<char> used1(k1.size(), 0), used2(k2.size(), 0);
    std::vector<GroupMatch> matches;
    for (const auto& c : candidates) {
        if (used1[c.i] || used2[c.j]) continue;
        used1[c.i] = used2[c.j] = 1;
        matches.push_back({c.i, c.j, c.stability, TraceStatus::Stable});
    }
    std::sort(matches.begin(), matches.end(), [](const GroupMatch& a, const GroupMatch& b) { return a.current < b.current; });
    for (std::size_t j = 0; j < k2.size(); ++j) {
        if (!used2[j]) matches.push_back({std::nullopt, j, 0.0, TraceStatus::Emerged});
    }
    for (std::size_t i = 0; i < k1.size(); ++i) {
        if (!used1[i]) matches.push_back({i, std::nullopt, 0.0, TraceStatus::Dissolved});
    }
    return matches;
}

std::vector<GroupTrace> build_group_traces(const std::vector<std::vector<Group>>& groups_per_window,
                                           double min_stability) {
    std::vector<GroupTrace> traces;
    std::vector<std::size_t> open;  // trace index per group of the previous window
    for (std::size_t w = 0; w < groups_per_window.size(); ++w) {
        const auto& current = groups_per_window[w];
        std::vector<std::size_t> next(current.size(), 0);
        if (w == 0) {
            for (std::size_t j = 0; j < current.size(); ++j) {
                next[j] = traces.size();
                traces.push_back({"t" + std::to_string(traces.size()), {{w, current[j].id, 0.0}}, false});
            }
        } else {
            for (const auto& m : match_groups_across_windows(groups_per_window[w - 1], current, min_stability)) {
                if (m.status == TraceStatus::Stable) {
                    const auto t = open[*m.previous];
                    traces[t].points.push_back({w, current[*m.current].id, m.stability});
                    next[*m.current] = t;
                } else if (m.status == TraceStatus::Emerged) {
                    next[*m.current] = traces.size();
                    traces.push_back({"t" + std::to_string(traces.size()), {{w, current[*m.current].id, 0.0}}, false});
                } else {
                    traces[open[*m.previous]].dissolved = true;
                }
            }
        }
        open = std::move(next);
    }
    return traces;
}

std::vector<KernelOverlap> kernel_overlaps(const std::vector<Group>& groups) {
    std::vector<std::set<EntityId>> kernels;
    for (const auto& g : groups) kernels.push_back(g.kernel());
    std::vector<KernelOverlap> out;
    for (std::size_t i = 0; i < kernels.size(); ++i) {
        for (std::size_t j = i + 1; j < kernels.size(); ++j) {
            std::size_t shared = 0;
            for (const auto& e : kernels[i]) shared += kernels[j].contains(e) ? 1 : 0;
            if (shared > 0) out.push_back({i, j, shared});
        }
    }
    return out;
}

}  // namespace socnet

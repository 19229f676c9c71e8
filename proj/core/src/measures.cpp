#include "socnet/measures.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>
#include <stack>

namespace socnet {

std::string_view to_string(MeasureId id) {
    switch (id) {
        case MeasureId::DegreeIn: return "DegreeIn";
        case MeasureId::DegreeOut: return "DegreeOut";
        case MeasureId::BaryCenter: return "BaryCenter";
        case MeasureId::Betweenness: return "Betweenness";
        case MeasureId::Hubness: return "Hubness";
        case MeasureId::Authoritativeness: return "Authoritativeness";
        case MeasureId::PageRank: return "PageRank";
        case MeasureId::MarkovCentrality: return "MarkovCentrality";
    }
    return "?";
}

MeasureId parse_measure_id(std::string_view text) {
    std::string key;
    for (unsigned char c : text) {
        if (c == ' ' || c == '-' || c == '_') continue;
        key.push_back(static_cast<char>(std::tolower(c)));
    }
    if (key.ends_with("centrality") && key != "markovcentrality") key.resize(key.size() - 10);
    if (key == "degreein" || key == "indegree") return MeasureId::DegreeIn;
    if (key == "degreeout" || key == "outdegree") return MeasureId::DegreeOut;
    if (key == "barycenter" || key == "barycentre") return MeasureId::BaryCenter;
    if (key == "betweenness") return MeasureId::Betweenness;
    if (key == "hubness" || key == "hub") return MeasureId::Hubness;
    if (key == "authoritativeness" || key == "authority") return MeasureId::Authoritativeness;
    if (key == "pagerank") return MeasureId::PageRank;
    if (key == "markovcentrality" || key == "markov") return MeasureId::MarkovCentrality;
    throw ValidationError("unknown measure '" + std::string(text) + "'");
}

void SolverParams::validate() const {
    if (!(damping > 0.0 && damping < 1.0)) throw ValidationError("damping must lie in (0, 1)");
    if (!(tolerance > 0.0)) throw ValidationError("tolerance must be positive");
    if (max_iterations == 0) throw ValidationError("max_iterations must be positive");
}

// ------------------------------------------------------------------ degrees

std::vector<double> degree_in(const Snapshot& g) {
    std::vector<double> out(g.node_count());
    for (NodeIndex v = 0; v < g.node_count(); ++v) out[v] = static_cast<double>(g.in_arcs(v).size());
    return out;
}

std::vector<double> degree_out(const Snapshot& g) {
    std::vector<double> out(g.node_count());
    for (NodeIndex v = 0; v < g.node_count(); ++v) out[v] = static_cast<double>(g.out_arcs(v).size());
    return out;
}

// ------------------------------------------------------ betweenness (Brandes)

namespace {

// Single-source dependency accumulation, added into `centrality`.
class BrandesSweep {
public:
    explicit BrandesSweep(std::size_t n) : dist_(n), sigma_(n), delta_(n) { order_.reserve(n); }

    void run(const Snapshot& g, NodeIndex source, std::vector<double>& centrality, double scale) {
        std::fill(dist_.begin(), dist_.end(), -1);
        std::fill(sigma_.begin(), sigma_.end(), 0.0);
        std::fill(delta_.begin(), delta_.end(), 0.0);
        order_.clear();

        dist_[source] = 0;
        sigma_[source] = 1.0;
        order_.push_back(source);
        for (std::size_t head = 0; head < order_.size(); ++head) {
            const NodeIndex v = order_[head];
            for (const auto& a : g.out_arcs(v)) {
                const NodeIndex w = a.node;
                if (dist_[w] < 0) {
                    dist_[w] = dist_[v] + 1;
                    order_.push_back(w);
                }
                if (dist_[w] == dist_[v] + 1) sigma_[w] += sigma_[v];
            }
        }
        // Predecessors are recovered from in-arcs, so no per-node lists are kept.
        for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
            const NodeIndex w = *it;
            for (const auto& a : g.in_arcs(w)) {
                const NodeIndex v = a.node;
                if (dist_[v] >= 0 && dist_[v] + 1 == dist_[w]) {
                    delta_[v] += sigma_[v] / sigma_[w] * (1.0 + delta_[w]);
                }
            }
            if (w != source) centrality[w] += scale * delta_[w];
        }
    }

private:
    std::vector<long> dist_;
    std::vector<double> sigma_;
    std::vector<double> delta_;
    std::vector<NodeIndex> order_;
};

}  // namespace

std::vector<double> betweenness(const Snapshot& g, const BetweennessOptions& options) {
    const std::size_t n = g.node_count();
    std::vector<double> c(n, 0.0);
    if (n < 3) return c;
    BrandesSweep sweep(n);
    if (options.exact || n <= options.exact_limit || options.pivots >= n) {
        for (NodeIndex s = 0; s < n; ++s) sweep.run(g, s, c, 1.0);
        return c;
    }
    std::vector<NodeIndex> all(n);
    std::iota(all.begin(), all.end(), NodeIndex{0});
    std::vector<NodeIndex> pivots;
    std::mt19937_64 rng(options.seed);
    std::sample(all.begin(), all.end(), std::back_inserter(pivots), options.pivots, rng);
    const double scale = static_cast<double>(n) / static_cast<double>(pivots.size());
    for (NodeIndex s : pivots) sweep.run(g, s, c, scale);
    return c;
}

// --------------------------------------------------------------- barycenter

std::vector<double> barycenter(const Snapshot& g) {
    const std::size_t n = g.node_count();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    std::vector<long> dist(n);
    std::vector<NodeIndex> queue;
    queue.reserve(n);
    for (NodeIndex s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        queue.clear();
        dist[s] = 0;
        queue.push_back(s);
        double total = 0.0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const NodeIndex v = queue[head];
            total += static_cast<double>(dist[v]);
            for (const auto& a : g.out_arcs(v)) {
                if (dist[a.node] < 0) {
                    dist[a.node] = dist[v] + 1;
                    queue.push_back(a.node);
                }
            }
        }
        const auto unreachable = static_cast<double>(n - queue.size());
        total += unreachable * static_cast<double>(n);
        out[s] = 1.0 / total;
    }
    return out;
}

// --------------------------------------------------------------------- HITS

namespace {

double normalize_l2(std::vector<double>& v) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
        for (double& x : v) x /= norm;
    }
    return norm;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

IterativeResult<HitsScores> hits(const Snapshot& g, const SolverParams& params) {
    params.validate();
    const std::size_t n = g.node_count();
    IterativeResult<HitsScores> result;
    auto& hub = result.values.hubness;
    auto& auth = result.values.authoritativeness;
    hub.assign(n, 0.0);
    auth.assign(n, 0.0);
    if (g.edge_count() == 0) return result;

    hub.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> next_auth(n), next_hub(n);
    result.converged = false;
    for (std::uint32_t iter = 1; iter <= params.max_iterations; ++iter) {
        for (NodeIndex v = 0; v < n; ++v) {
            double s = 0.0;
            for (const auto& a : g.in_arcs(v)) s += hub[a.node];
            next_auth[v] = s;
        }
        normalize_l2(next_auth);
        for (NodeIndex v = 0; v < n; ++v) {
            double s = 0.0;
            for (const auto& a : g.out_arcs(v)) s += next_auth[a.node];
            next_hub[v] = s;
        }
        normalize_l2(next_hub);
        const double change = std::max(max_abs_diff(next_auth, auth), max_abs_diff(next_hub, hub));
        auth.swap(next_auth);
        hub.swap(next_hub);
        result.iterations = iter;
        if (change < params.tolerance) {
            result.converged = true;
            break;
        }
    }
    return result;
}

// ----------------------------------------------------------------- PageRank

IterativeResult<std::vector<double>> pagerank(const Snapshot& g, const SolverParams& params) {
    params.validate();
    const std::size_t n = g.node_count();
    IterativeResult<std::vector<double>> result;
    auto& rank = result.values;
    if (n == 0) return result;

    const double inv_n = 1.0 / static_cast<double>(n);
    const double d = params.damping;
    rank.assign(n, inv_n);
    std::vector<double> next(n);
    std::vector<double> inv_out(n, 0.0);
    for (NodeIndex v = 0; v < n; ++v) {
        if (auto deg = g.out_arcs(v).size()) inv_out[v] = 1.0 / static_cast<double>(deg);
    }
    result.converged = false;
    for (std::uint32_t iter = 1; iter <= params.max_iterations; ++iter) {
        double dangling = 0.0;
        for (NodeIndex v = 0; v < n; ++v) {
            if (inv_out[v] == 0.0) dangling += rank[v];
        }
        const double base = (1.0 - d) * inv_n + d * dangling * inv_n;
        for (NodeIndex v = 0; v < n; ++v) {
            double s = 0.0;
            for (const auto& a : g.in_arcs(v)) s += rank[a.node] * inv_out[a.node];
            next[v] = base + d * s;
        }
        const double total = std::accumulate(next.begin(), next.end(), 0.0);
        for (double& x : next) x /= total;
        const double change = max_abs_diff(next, rank);
        rank.swap(next);
        result.iterations = iter;
        if (change < params.tolerance) {
            result.converged = true;
            break;
        }
    }
    return result;
}

// ------------------------------------------------------- Markov centrality

std::vector<NodeIndex> largest_strongly_connected_component(const Snapshot& g) {
    // Iterative Tarjan.
    const std::size_t n = g.node_count();
    constexpr long kUnvisited = -1;
    std::vector<long> index(n, kUnvisited), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<NodeIndex> stack;
    std::vector<std::pair<NodeIndex, std::size_t>> call;  // (node, next arc position)
    std::vector<NodeIndex> best;
    long counter = 0;

    for (NodeIndex root = 0; root < n; ++root) {
        if (index[root] != kUnvisited) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            const auto arcs = g.out_arcs(v);
            if (pos < arcs.size()) {
                const NodeIndex w = arcs[pos++].node;
                if (index[w] == kUnvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const NodeIndex done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
            if (low[done] == index[done]) {
                std::vector<NodeIndex> comp;
                NodeIndex w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp.push_back(w);
                } while (w != done);
                std::sort(comp.begin(), comp.end());
                if (comp.size() > best.size() || (comp.size() == best.size() && comp.front() < best.front())) {
                    best = std::move(comp);
                }
            }
        }
    }
    return best;
}

std::vector<double> markov_centrality(const Snapshot& g) {
    const std::size_t n = g.node_count();
    std::vector<double> out(n, 0.0);
    const auto comp = largest_strongly_connected_component(g);
    const auto c = static_cast<Eigen::Index>(comp.size());
    if (c < 2) return out;

    std::vector<long> local(n, -1);
    for (Eigen::Index i = 0; i < c; ++i) local[comp[static_cast<std::size_t>(i)]] = i;

    // Transition matrix of the walk restricted to the component.
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(c, c);
    for (Eigen::Index i = 0; i < c; ++i) {
        double total = 0.0;
        for (const auto& a : g.out_arcs(comp[static_cast<std::size_t>(i)])) {
            if (local[a.node] >= 0) {
                P(i, local[a.node]) += a.weight;
                total += a.weight;
            }
        }
        P.row(i) /= total;
    }

    // Stationary distribution: (I - P^T) pi = 0 with the last equation replaced by sum(pi) = 1.
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(c, c) - P.transpose();
    A.row(c - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(c);
    rhs(c - 1) = 1.0;
    const Eigen::VectorXd pi = A.partialPivLu().solve(rhs);
    A.resize(0, 0);

    // Fundamental matrix Z = (I - P + 1 pi^T)^-1; mfpt(u -> v) = (z_vv - z_uv) / pi_v.
    P = -P;
    P.diagonal().array() += 1.0;
    P.rowwise() += pi.transpose();
    const Eigen::MatrixXd Z = P.partialPivLu().inverse();
    P.resize(0, 0);
    const Eigen::VectorXd colsum = Z.colwise().sum().transpose();
    for (Eigen::Index v = 0; v < c; ++v) {
        const double total_passage = (static_cast<double>(c) * Z(v, v) - colsum(v)) / pi(v);
        out[comp[static_cast<std::size_t>(v)]] = static_cast<double>(c) / total_passage;
    }
    return out;
}

// ----------------------------------------------------------------- scaling

std::vector<double> scale_to_bands(std::span<const double> raw) {
    const std::size_t n = raw.size();
    std::vector<double> out(n);
    if (n == 0) return out;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return raw[a] < raw[b]; });
    for (std::size_t lo = 0; lo < n;) {
        std::size_t hi = lo;
        while (hi + 1 < n && raw[order[hi + 1]] == raw[order[lo]]) ++hi;
        // 1-based ranks lo+1 .. hi+1 share their mean.
        const double mean_rank = (static_cast<double>(lo + 1) + static_cast<double>(hi + 1)) / 2.0;
        const double value = 10.0 * (mean_rank - 0.5) / static_cast<double>(n);
        for (std::size_t k = lo; k <= hi; ++k) out[order[k]] = value;
        lo = hi + 1;
    }
    return out;
}

// ----------------------------------------------------------- measure matrix

MeasureMatrix::MeasureMatrix(std::vector<EntityId> entities) : entities_(std::move(entities)) {
    for (std::size_t i = 0; i < entities_.size(); ++i) {
        if (!rows_.emplace(entities_[i], i).second) {
            throw ValidationError("duplicate entity '" + entities_[i] + "' in measure matrix");
        }
    }
}

std::optional<std::size_t> MeasureMatrix::row_of(std::string_view entity) const {
    auto it = rows_.find(EntityId(entity));
    if (it == rows_.end()) return std::nullopt;
    return it->second;
}

void MeasureMatrix::set_raw(MeasureId id, std::vector<double> raw, bool converged) {
    auto scaled = scale_to_bands(raw);
    set(id, std::move(raw), std::move(scaled), converged);
}

void MeasureMatrix::set(MeasureId id, std::vector<double> raw, std::vector<double> scaled, bool converged) {
    if (raw.size() != entities_.size() || scaled.size() != entities_.size()) {
        throw ValidationError("measure vector length does not match entity count for " + std::string(to_string(id)));
    }
    raw_[id] = std::move(raw);
    scaled_[id] = std::move(scaled);
    converged_[id] = converged;
}

std::set<MeasureId> MeasureMatrix::measures() const {
    std::set<MeasureId> out;
    for (const auto& [id, v] : raw_) out.insert(id);
    return out;
}

const std::vector<double>& MeasureMatrix::raw(MeasureId id) const {
    auto it = raw_.find(id);
    if (it == raw_.end()) throw NotFoundError("measure " + std::string(to_string(id)) + " not in matrix");
    return it->second;
}

const std::vector<double>& MeasureMatrix::scaled(MeasureId id) const {
    auto it = scaled_.find(id);
    if (it == scaled_.end()) throw NotFoundError("measure " + std::string(to_string(id)) + " not in matrix");
    return it->second;
}

bool MeasureMatrix::converged(MeasureId id) const {
    auto it = converged_.find(id);
    return it == converged_.end() || it->second;
}

std::map<MeasureId, double> MeasureMatrix::scaled_row(std::size_t row) const {
    std::map<MeasureId, double> out;
    for (const auto& [id, v] : scaled_) out[id] = v.at(row);
    return out;
}

std::map<MeasureId, double> MeasureMatrix::raw_row(std::size_t row) const {
    std::map<MeasureId, double> out;
    for (const auto& [id, v] : raw_) out[id] = v.at(row);
    return out;
}

MeasureMatrix measure_matrix(const Snapshot& g, std::span<const MeasureId> measures, const MeasureOptions& options) {
    options.solver.validate();
    MeasureMatrix m(std::vector<EntityId>(g.nodes().begin(), g.nodes().end()));
    const std::set<MeasureId> wanted(measures.begin(), measures.end());
    if (wanted.contains(MeasureId::DegreeIn)) m.set_raw(MeasureId::DegreeIn, degree_in(g));
    if (wanted.contains(MeasureId::DegreeOut)) m.set_raw(MeasureId::DegreeOut, degree_out(g));
    if (wanted.contains(MeasureId::BaryCenter)) m.set_raw(MeasureId::BaryCenter, barycenter(g));
    if (wanted.contains(MeasureId::Betweenness)) m.set_raw(MeasureId::Betweenness, betweenness(g, options.betweenness));
    if (wanted.contains(MeasureId::Hubness) || wanted.contains(MeasureId::Authoritativeness)) {
        auto h = hits(g, options.solver);
        if (wanted.contains(MeasureId::Hubness)) m.set_raw(MeasureId::Hubness, std::move(h.values.hubness), h.converged);
        if (wanted.contains(MeasureId::Authoritativeness)) {
            m.set_raw(MeasureId::Authoritativeness, std::move(h.values.authoritativeness), h.converged);
        }
    }
    if (wanted.contains(MeasureId::PageRank)) {
        auto pr = pagerank(g, options.solver);
        m.set_raw(MeasureId::PageRank, std::move(pr.values), pr.converged);
    }
    if (wanted.contains(MeasureId::MarkovCentrality)) m.set_raw(MeasureId::MarkovCentrality, markov_centrality(g));
    return m;
}

}  // namespace socnet

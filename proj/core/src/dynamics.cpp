#include "socnet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

namespace socnet {

std::size_t MeasureSeries::observed() const {
    return static_cast<std::size_t>(
        std::count_if(points.begin(), points.end(), [](const SeriesPoint& p) { return p.value.has_value(); }));
}

Baseline estimate_baseline(const std::vector<SeriesPoint>& points, std::size_t count) {
    std::vector<double> values;
    for (const auto& p : points) {
        if (values.size() == count) break;
        if (p.value) values.push_back(*p.value);
    }
    Baseline b{0.0, kSigmaFloor};
    if (values.empty()) return b;
    b.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - b.mean) * (v - b.mean);
        b.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    b.stddev = std::max(b.stddev, kSigmaFloor);
    return b;
}

MeasureSeries measure_series(const std::vector<MeasureMatrix>& matrices, const EntityId& subject, MeasureId measure,
                             std::size_t baseline_windows) {
    MeasureSeries s;
    s.subject = subject;
    s.measure = std::string(to_string(measure));
    bool seen = false;
    for (std::size_t w = 0; w < matrices.size(); ++w) {
        SeriesPoint p{w, std::nullopt};
        if (auto row = matrices[w].row_of(subject)) {
            p.value = matrices[w].raw(measure)[*row];
            seen = true;
        }
        s.points.push_back(p);
    }
    if (!seen) throw NotFoundError("entity '" + subject + "' appears in no window");
    s.baseline = estimate_baseline(s.points, baseline_windows);
    return s;
}

MeasureSeries make_series(std::string subject, std::string measure, const std::vector<double>& values,
                          std::size_t baseline_windows) {
    MeasureSeries s{std::move(subject), std::move(measure), {}, {}};
    for (std::size_t i = 0; i < values.size(); ++i) s.points.push_back({i, values[i]});
    s.baseline = estimate_baseline(s.points, baseline_windows);
    return s;
}

void CusumParams::validate() const {
    if (!(k >= 0.0)) throw ValidationError("CUSUM reference k must be non-negative");
    if (!(h > 0.0)) throw ValidationError("CUSUM decision interval h must be positive");
    if (baseline_windows == 0) throw ValidationError("CUSUM baseline_windows must be positive");
    if (baseline && !(baseline->stddev > 0.0)) throw ValidationError("supplied CUSUM baseline needs stddev > 0");
}

std::string_view to_string(Direction d) { return d == Direction::Up ? "Up" : "Down"; }

CusumTrace cusum_trace(const MeasureSeries& series, const CusumParams& params) {
    params.validate();
    if (series.observed() <= params.baseline_windows) {
        throw ValidationError("series '" + series.subject + "/" + series.measure + "' has " +
                              std::to_string(series.observed()) + " observed points; CUSUM needs more than " +
                              std::to_string(params.baseline_windows));
    }
    const Baseline base = params.baseline.value_or(series.baseline);
    const double sigma = std::max(base.stddev, kSigmaFloor);

    CusumTrace t;
    const auto n = series.points.size();
    t.upper.assign(n, std::nullopt);
    t.lower.assign(n, std::nullopt);
    t.alarm.assign(n, false);
    double up = 0.0, down = 0.0;
    std::size_t observed = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = series.points[i];
        if (!p.value) continue;
        if (observed++ < params.baseline_windows) continue;
        const double z = (*p.value - base.mean) / sigma;
        up = std::max(0.0, up + z - params.k);
        down = params.two_sided ? std::max(0.0, down - z - params.k) : 0.0;
        t.upper[i] = up;
        t.lower[i] = down;
        if (up >= params.h) {
            t.change_points.push_back({p.window, Direction::Up, up});
            t.alarm[i] = true;
            up = 0.0;
        }
        if (down >= params.h) {
            t.change_points.push_back({p.window, Direction::Down, down});
            t.alarm[i] = true;
            down = 0.0;
        }
    }
    return t;
}

std::vector<ChangePoint> cusum_detect(const MeasureSeries& series, const CusumParams& params) {
    return cusum_trace(series, params).change_points;
}

// ------------------------------------------------------------------ society

DistributionSummary summarize(std::vector<double> values) {
    DistributionSummary s;
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    const auto n = values.size();
    s.min = values.front();
    s.max = values.back();
    s.median = n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    return s;
}

SocietyReport society_report(const std::vector<Snapshot>& windows, const std::vector<MeasureMatrix>& matrices) {
    if (windows.size() < 2) throw ValidationError("society report needs at least two windows");
    if (windows.size() != matrices.size()) throw ValidationError("one measure matrix per window is required");
    SocietyReport r;
    for (std::size_t w = 0; w < windows.size(); ++w) {
        SocietyWindow sw{w, windows[w].node_count(), windows[w].edge_count(), {}, {}};
        const auto& m = matrices[w];
        for (MeasureId id : m.measures()) {
            const auto& raw = m.raw(id);
            sw.measures[id] = summarize(raw);
            std::vector<std::size_t> order(raw.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            const auto keep = std::min<std::size_t>(10, order.size());
            std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                              [&](std::size_t a, std::size_t b) {
                                  return raw[a] != raw[b] ? raw[a] > raw[b] : m.entities()[a] < m.entities()[b];
                              });
            auto& top = sw.top[id];
            for (std::size_t i = 0; i < keep; ++i) top.push_back({m.entities()[order[i]], raw[order[i]]});
        }
        r.windows.push_back(std::move(sw));
    }
    for (std::size_t w = 1; w < r.windows.size(); ++w) {
        const auto& a = r.windows[w - 1];
        const auto& b = r.windows[w];
        SocietyDelta d{w - 1, w, static_cast<long long>(b.nodes) - static_cast<long long>(a.nodes),
                       static_cast<long long>(b.edges) - static_cast<long long>(a.edges), {}};
        for (const auto& [id, sb] : b.measures) {
            auto it = a.measures.find(id);
            if (it == a.measures.end()) continue;
            const auto& sa = it->second;
            d.measures[id] = {sb.min - sa.min, sb.median - sa.median, sb.max - sa.max, sb.mean - sa.mean};
        }
        r.deltas.push_back(std::move(d));
    }
    return r;
}

// -------------------------------------------------------------------- agent

namespace {

std::optional<double> jaccard_of_keys(const std::map<EntityId, double>& a, const std::map<EntityId, double>& b) {
    if (a.empty() && b.empty()) return std::nullopt;
    std::size_t shared = 0;
    for (const auto& [k, v] : a) shared += b.contains(k) ? 1 : 0;
    return static_cast<double>(shared) / static_cast<double>(a.size() + b.size() - shared);
}

}  // namespace

AgentReport agent_report(const EntityId& entity, const std::vector<Snapshot>& windows,
                         const std::vector<MeasureMatrix>& matrices,
                         const std::vector<std::vector<RoleAssignment>>& assignments, const CusumParams& cusum) {
    if (windows.size() != matrices.size()) throw ValidationError("one measure matrix per window is required");
    AgentReport r;
    r.entity = entity;
    bool seen = false;
    for (std::size_t w = 0; w < windows.size(); ++w) {
        AgentWindow aw;
        aw.window = w;
        if (auto row = matrices[w].row_of(entity)) {
            aw.present = true;
            seen = true;
            aw.raw = matrices[w].raw_row(*row);
            aw.scaled = matrices[w].scaled_row(*row);
            if (w < assignments.size()) {
                for (const auto& a : assignments[w]) {
                    if (a.entity == entity) {
                        aw.role = a.role;
                        aw.role_score = a.score;
                        break;
                    }
                }
            }
            aw.neighbors = neighbors(windows[w], entity);
        }
        r.windows.push_back(std::move(aw));
    }
    if (!seen) throw NotFoundError("entity '" + entity + "' appears in no window");

    for (std::size_t w = 1; w < r.windows.size(); ++w) {
        r.neighbor_changes.push_back({w - 1, w, jaccard_of_keys(r.windows[w - 1].neighbors, r.windows[w].neighbors)});
    }
    const AgentWindow* last = nullptr;
    for (const auto& aw : r.windows) {
        if (!aw.present || !aw.role) continue;
        if (last && *last->role != *aw.role) r.role_transitions.push_back({last->window, aw.window, *last->role, *aw.role});
        last = &aw;
    }
    for (MeasureId id : matrices.front().measures()) {
        MeasureAlarms ma;
        ma.measure = id;
        const auto series = measure_series(matrices, entity, id, cusum.baseline_windows);
        if (series.observed() > cusum.baseline_windows) {
            ma.evaluated = true;
            ma.change_points = cusum_detect(series, cusum);
        }
        r.alarms.push_back(std::move(ma));
    }
    return r;
}

// -------------------------------------------------------------------- group

std::size_t TierChurn::total() const {
    std::size_t n = 0;
    for (const auto& [t, v] : entered) n += v.size();
    for (const auto& [t, v] : left) n += v.size();
    return n;
}

TierChurn tier_churn(const Group& before, const Group& after) {
    TierChurn c;
    for (Tier tier : {Tier::Kernel, Tier::Circumjacent, Tier::Weak}) {
        const auto a = before.members_in(tier);
        const auto b = after.members_in(tier);
        std::vector<EntityId> in, out;
        std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(in));
        std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        if (!in.empty()) c.entered[tier] = std::move(in);
        if (!out.empty()) c.left[tier] = std::move(out);
    }
    return c;
}

double strategy_drift(const GroupStrategy& before, const GroupStrategy& after) {
    double d = 0.0;
    for (const auto& [id, v] : after.measure_summary) {
        auto it = before.measure_summary.find(id);
        if (it != before.measure_summary.end()) d += std::abs(v - it->second);
    }
    return d;
}

GroupReport group_report(const GroupTrace& trace, const std::vector<Snapshot>& windows,
                         const std::vector<std::vector<Group>>& groups_per_window) {
    if (trace.points.empty()) throw ValidationError("group trace is empty");
    GroupReport r;
    r.trace_id = trace.id;
    r.dissolved = trace.dissolved;
    std::vector<const Group*> groups;
    for (const auto& p : trace.points) {
        const auto& candidates = groups_per_window.at(p.window);
        auto it = std::find_if(candidates.begin(), candidates.end(), [&](const Group& g) { return g.id == p.group_id; });
        if (it == candidates.end()) throw NotFoundError("group '" + p.group_id + "' missing from its window");
        const Group& g = *it;
        groups.push_back(&g);
        GroupWindowState s;
        s.window = p.window;
        s.group_id = g.id;
        const auto& snap = windows.at(p.window);
        s.density = g.core.size() >= 2 ? link_density(snap, g.core) : 0.0;
        if (g.core.size() >= 2 && snap.node_count() > g.core.size()) s.cohesion = group_cohesion(snap, g.core);
        for (const auto& [e, t] : g.tiers) ++s.tier_counts[t];
        s.strategy = g.strategy.measure_summary;
        s.theme_tags = g.strategy.theme_tags;
        r.windows.push_back(std::move(s));
    }
    for (std::size_t i = 1; i < groups.size(); ++i) {
        r.transitions.push_back({trace.points[i - 1].window, trace.points[i].window, trace.points[i].stability,
                                 tier_churn(*groups[i - 1], *groups[i]),
                                 strategy_drift(groups[i - 1]->strategy, groups[i]->strategy)});
    }
    return r;
}

// --------------------------------------------------------------------- JSON

namespace {

nlohmann::json measure_map(const std::map<MeasureId, double>& m) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [id, v] : m) j[std::string(to_string(id))] = v;
    return j;
}

nlohmann::json summary_json(const DistributionSummary& s) {
    return {{"min", s.min}, {"median", s.median}, {"max", s.max}, {"mean", s.mean}};
}

nlohmann::json change_points_json(const std::vector<ChangePoint>& cps) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& cp : cps) {
        j.push_back({{"window", cp.window}, {"direction", to_string(cp.direction)}, {"statistic", cp.statistic}});
    }
    return j;
}

}  // namespace

nlohmann::json to_json(const SocietyReport& r) {
    nlohmann::json j;
    auto& ws = j["windows"] = nlohmann::json::array();
    for (const auto& w : r.windows) {
        nlohmann::json jw{{"window", w.window}, {"nodes", w.nodes}, {"edges", w.edges}};
        auto& jm = jw["measures"] = nlohmann::json::object();
        for (const auto& [id, s] : w.measures) {
            nlohmann::json top = nlohmann::json::array();
            for (const auto& e : w.top.at(id)) top.push_back({{"entity", e.entity}, {"value", e.value}});
            jm[std::string(to_string(id))] = {{"summary", summary_json(s)}, {"top", std::move(top)}};
        }
        ws.push_back(std::move(jw));
    }
    auto& ds = j["deltas"] = nlohmann::json::array();
    for (const auto& d : r.deltas) {
        nlohmann::json jd{{"from", d.from}, {"to", d.to}, {"nodes", d.nodes}, {"edges", d.edges}};
        auto& jm = jd["measures"] = nlohmann::json::object();
        for (const auto& [id, s] : d.measures) jm[std::string(to_string(id))] = summary_json(s);
        ds.push_back(std::move(jd));
    }
    return j;
}

nlohmann::json to_json(const AgentReport& r) {
    nlohmann::json j{{"entity", r.entity}};
    auto& ws = j["windows"] = nlohmann::json::array();
    for (const auto& w : r.windows) {
        nlohmann::json jw{{"window", w.window}, {"present", w.present}};
        if (w.present) {
            jw["raw"] = measure_map(w.raw);
            jw["scaled"] = measure_map(w.scaled);
            jw["role"] = w.role ? nlohmann::json(*w.role) : nlohmann::json();
            jw["role_score"] = w.role_score;
            jw["neighbors"] = w.neighbors;
        }
        ws.push_back(std::move(jw));
    }
    auto& nc = j["neighbor_changes"] = nlohmann::json::array();
    for (const auto& c : r.neighbor_changes) {
        nc.push_back({{"from", c.from}, {"to", c.to}, {"jaccard", c.jaccard ? nlohmann::json(*c.jaccard) : nlohmann::json()}});
    }
    auto& rt = j["role_transitions"] = nlohmann::json::array();
    for (const auto& t : r.role_transitions) {
        rt.push_back({{"from", t.from}, {"to", t.to}, {"from_role", t.from_role}, {"to_role", t.to_role}});
    }
    auto& al = j["change_points"] = nlohmann::json::object();
    for (const auto& a : r.alarms) {
        al[std::string(to_string(a.measure))] = {{"evaluated", a.evaluated}, {"alarms", change_points_json(a.change_points)}};
    }
    return j;
}

nlohmann::json to_json(const GroupReport& r) {
    nlohmann::json j{{"trace", r.trace_id}, {"dissolved", r.dissolved}};
    auto& ws = j["windows"] = nlohmann::json::array();
    for (const auto& w : r.windows) {
        nlohmann::json tiers = nlohmann::json::object();
        for (const auto& [t, n] : w.tier_counts) tiers[std::string(to_string(t))] = n;
        nlohmann::json cohesion;
        if (w.cohesion) {
            cohesion = {{"value", w.cohesion->isolated ? nlohmann::json() : nlohmann::json(w.cohesion->value)},
                        {"isolated", w.cohesion->isolated}};
        }
        ws.push_back({{"window", w.window},
                      {"group_id", w.group_id},
                      {"density", w.density},
                      {"cohesion", std::move(cohesion)},
                      {"tier_counts", std::move(tiers)},
                      {"strategy", measure_map(w.strategy)},
                      {"theme_tags", w.theme_tags}});
    }
    auto& ts = j["transitions"] = nlohmann::json::array();
    for (const auto& t : r.transitions) {
        nlohmann::json entered = nlohmann::json::object(), left = nlohmann::json::object();
        for (const auto& [tier, v] : t.churn.entered) entered[std::string(to_string(tier))] = v;
        for (const auto& [tier, v] : t.churn.left) left[std::string(to_string(tier))] = v;
        ts.push_back({{"from", t.from},
                      {"to", t.to},
                      {"stability", t.stability},
                      {"churn", {{"entered", std::move(entered)}, {"left", std::move(left)}, {"total", t.churn.total()}}},
                      {"strategy_drift", t.strategy_drift}});
    }
    return j;
}

}  // namespace socnet

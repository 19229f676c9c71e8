#include "socnet/artifacts.hpp"

#include <cmath>

#include "socnet/csv.hpp"
#include "socnet/error.hpp"

namespace socnet {

void write_measure_matrix_csv(std::ostream& out, const MeasureMatrix& m) {
    const auto ids = m.measures();
    csv::write_row(out, {"entity", "measure", "raw", "scaled"});
    for (std::size_t r = 0; r < m.size(); ++r) {
        for (MeasureId id : ids) {
            csv::write_row(out, {m.entities()[r], std::string(to_string(id)), csv::format_double(m.raw(id)[r]),
                                 csv::format_double(m.scaled(id)[r])});
        }
    }
}

MeasureMatrix read_measure_matrix_csv(std::istream& in) {
    csv::Reader reader(in);
    std::vector<std::string> row;
    if (!reader.next(row)) throw ValidationError("measure matrix file is empty");
    const csv::Header header(row);
    const auto c_entity = header.require("entity");
    const auto c_measure = header.require("measure");
    const auto c_raw = header.require("raw");
    const auto c_scaled = header.require("scaled");

    std::vector<EntityId> entities;
    std::map<EntityId, std::size_t> rows;
    std::map<MeasureId, std::map<std::size_t, std::pair<double, double>>> values;
    while (reader.next(row)) {
        if (row.size() == 1 && row[0].empty()) continue;
        if (row.size() != header.columns().size()) {
            throw ValidationError("line " + std::to_string(reader.line()) + ": wrong field count");
        }
        auto [it, inserted] = rows.emplace(row[c_entity], entities.size());
        if (inserted) entities.push_back(row[c_entity]);
        const auto id = parse_measure_id(row[c_measure]);
        values[id][it->second] = {csv::parse_double(row[c_raw]), csv::parse_double(row[c_scaled])};
    }
    const std::size_t n = entities.size();
    MeasureMatrix m(std::move(entities));
    for (auto& [id, column] : values) {
        if (column.size() != n) {
            throw ValidationError("measure " + std::string(to_string(id)) + " is missing for some entities");
        }
        std::vector<double> raw(n), scaled(n);
        for (const auto& [r, v] : column) {
            raw[r] = v.first;
            scaled[r] = v.second;
        }
        m.set(id, std::move(raw), std::move(scaled));
    }
    return m;
}

nlohmann::json measure_report_json(const MeasureMatrix& m) {
    nlohmann::json converged = nlohmann::json::object();
    for (MeasureId id : m.measures()) converged[std::string(to_string(id))] = m.converged(id);
    return {{"entities", m.size()}, {"converged", std::move(converged)}};
}

void write_roles_csv(std::ostream& out, const std::vector<RoleAssignment>& roles) {
    csv::write_row(out, {"entity", "role", "score"});
    for (const auto& a : roles) csv::write_row(out, {a.entity, a.role, csv::format_double(a.score)});
}

std::map<EntityId, std::string> read_roles_csv(std::istream& in) {
    csv::Reader reader(in);
    std::vector<std::string> row;
    std::map<EntityId, std::string> out;
    if (!reader.next(row)) return out;
    const csv::Header header(row);
    const auto c_entity = header.require("entity");
    const auto c_role = header.require("role");
    while (reader.next(row)) {
        if (row.size() == 1 && row[0].empty()) continue;
        out[row.at(c_entity)] = row.at(c_role);
    }
    return out;
}

nlohmann::json roles_to_json(const std::vector<RoleAssignment>& roles) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& a : roles) {
        nlohmann::json detail = nlohmann::json::object();
        for (const auto& [id, v] : a.per_measure) detail[std::string(to_string(id))] = v;
        arr.push_back({{"entity", a.entity}, {"role", a.role}, {"score", a.score}, {"per_measure", std::move(detail)}});
    }
    return arr;
}

nlohmann::json to_json(const Group& g, const Snapshot& snapshot) {
    nlohmann::json j;
    j["id"] = g.id;
    j["core"] = g.core;
    nlohmann::json members = nlohmann::json::object();
    for (const auto& [entity, f] : g.membership) {
        members[entity] = {{"strength", f}, {"tier", std::string(to_string(g.tier_of(entity)))}};
    }
    j["members"] = std::move(members);
    j["density"] = link_density(snapshot, g.core);
    if (g.core.size() < snapshot.node_count()) {
        const auto c = group_cohesion(snapshot, g.core);
        j["cohesion"] = c.isolated ? nlohmann::json(nullptr) : nlohmann::json(c.value);
        j["isolated"] = c.isolated;
    }
    nlohmann::json strategy = nlohmann::json::object();
    for (const auto& [id, v] : g.strategy.measure_summary) strategy[std::string(to_string(id))] = v;
    j["strategy"] = {{"measures", std::move(strategy)}, {"themes", g.strategy.theme_tags}};
    return j;
}

nlohmann::json groups_to_json(const std::vector<Group>& groups, const Snapshot& snapshot) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& g : groups) arr.push_back(to_json(g, snapshot));
    return arr;
}

void write_traces_csv(std::ostream& out, const std::vector<GroupTrace>& traces) {
    csv::write_row(out, {"window", "group_id", "matched_prev", "stability", "status"});
    for (const auto& t : traces) {
        for (std::size_t i = 0; i < t.points.size(); ++i) {
            const auto& p = t.points[i];
            const auto status = i == 0 ? TraceStatus::Emerged : TraceStatus::Stable;
            csv::write_row(out, {std::to_string(p.window), p.group_id, i == 0 ? "" : t.points[i - 1].group_id,
                                 csv::format_double(p.stability), std::string(to_string(status))});
        }
        if (t.dissolved && !t.points.empty()) {
            csv::write_row(out, {std::to_string(t.points.back().window + 1), "", t.points.back().group_id, "0",
                                 std::string(to_string(TraceStatus::Dissolved))});
        }
    }
}

void write_series_csv_header(std::ostream& out) {
    csv::write_row(out, {"subject", "measure", "window", "value", "cusum_up", "cusum_down", "alarm"});
}

void write_series_csv(std::ostream& out, const MeasureSeries& series, const CusumTrace* trace) {
    auto opt = [](const std::optional<double>& v) { return v ? csv::format_double(*v) : std::string(); };
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        const auto& p = series.points[i];
        csv::write_row(out, {series.subject, series.measure, std::to_string(p.window), opt(p.value),
                             trace ? opt(trace->upper[i]) : "", trace ? opt(trace->lower[i]) : "",
                             trace && trace->alarm[i] ? "1" : "0"});
    }
}

}  // namespace socnet

#include "socnet/telecom.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace socnet {

namespace {

constexpr double kEarthRadiusKm = 6371.0;
constexpr double kSecondsPerDay = 86'400.0;

CellMap parse_cells(std::istream& in, CdrData& data) {
    CellMap cells;
    csv::Reader reader(in);
    std::vector<std::string> row;
    if (!reader.next(row)) return cells;
    const csv::Header header(row);
    const auto c_id = header.require("cell_id");
    const auto c_lat = header.require("lat");
    const auto c_lon = header.require("lon");
    while (reader.next(row)) {
        if (row.size() == 1 && row[0].empty()) continue;
        try {
            if (row.size() != header.columns().size()) throw ValidationError("wrong field count in cells file");
            CellSite site{row[c_id], csv::parse_double(row[c_lat]), csv::parse_double(row[c_lon])};
            if (site.cell_id.empty()) throw ValidationError("empty cell_id");
            if (site.latitude < -90.0 || site.latitude > 90.0) throw ValidationError("latitude out of range");
            if (site.longitude < -180.0 || site.longitude > 180.0) throw ValidationError("longitude out of range");
            cells[site.cell_id] = site;
        } catch (const ValidationError& e) {
            ++data.rejected;
            data.diagnostics.push_back({reader.line(), std::string("cells: ") + e.what()});
        }
    }
    return cells;
}

}  // namespace

CdrData parse_cdr(std::istream& cdr, std::istream* cells_in) {
    CdrData data;
    if (cells_in) data.cells = parse_cells(*cells_in, data);

    csv::Reader reader(cdr);
    std::vector<std::string> row;
    if (!reader.next(row)) return data;
    const csv::Header header(row);
    const auto c_caller = header.require("caller");
    const auto c_callee = header.require("callee");
    const auto c_ts = header.require("timestamp");
    const auto c_kind = header.require("kind");
    const auto c_dur = header.require("duration");
    const auto c_cell = header.require("cell_id");
    const auto c_callee_cell = header.find("callee_cell_id");
    csv::TimestampParser parse_ts;
    while (reader.next(row)) {
        if (row.size() == 1 && row[0].empty()) continue;
        try {
            if (row.size() != header.columns().size()) {
                throw ValidationError("expected " + std::to_string(header.columns().size()) + " fields, got " +
                                      std::to_string(row.size()));
            }
            CdrRecord r;
            r.caller = row[c_caller];
            r.callee = row[c_callee];
            if (r.caller.empty() || r.callee.empty()) throw ValidationError("empty caller or callee");
            r.timestamp = parse_ts(row[c_ts]);
            if (r.timestamp < 0) throw ValidationError("negative timestamp");
            r.kind = parse_interaction_kind(row[c_kind]);
            if (r.kind == InteractionKind::Comment) throw ValidationError("CDR kind must be call or sms");
            r.duration = row[c_dur].empty() ? 0.0 : csv::parse_double(row[c_dur]);
            if (!(r.duration >= 0.0)) throw ValidationError("negative duration");
            if (!row[c_cell].empty()) r.cell_id = row[c_cell];
            if (c_callee_cell && !row[*c_callee_cell].empty()) r.callee_cell_id = row[*c_callee_cell];
            for (const auto& cell : {r.cell_id, r.callee_cell_id}) {
                if (cell && !data.cells.contains(*cell)) r.geometry_known = false;
            }
            if (!r.geometry_known) ++data.geometry_unknown;
            data.records.push_back(std::move(r));
        } catch (const ValidationError& e) {
            ++data.rejected;
            data.diagnostics.push_back({reader.line(), e.what()});
        }
    }
    return data;
}

CdrData parse_cdr(const std::filesystem::path& cdr, const std::optional<std::filesystem::path>& cells) {
    std::ifstream in(cdr, std::ios::binary);
    if (!in) throw RuntimeError("cannot open CDR file " + cdr.string());
    if (!cells) return parse_cdr(in, nullptr);
    std::ifstream cin(*cells, std::ios::binary);
    if (!cin) throw RuntimeError("cannot open cells file " + cells->string());
    return parse_cdr(in, &cin);
}

double great_circle_km(double lat1, double lon1, double lat2, double lon2) {
    constexpr double rad = std::numbers::pi / 180.0;
    const double dlat = (lat2 - lat1) * rad;
    const double dlon = (lon2 - lon1) * rad;
    const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                     std::cos(lat1 * rad) * std::cos(lat2 * rad) * std::sin(dlon / 2) * std::sin(dlon / 2);
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

namespace {

// Location of each party for one record. The callee's cell comes from the
// explicit column, otherwise from the callee's own outgoing record closest in
// time (latest at or before, else earliest after).
class CellResolver {
public:
    explicit CellResolver(const std::vector<CdrRecord>& records) {
        for (const auto& r : records) {
            if (r.cell_id) by_caller_[r.caller].push_back({r.timestamp, &*r.cell_id});
        }
        for (auto& [e, v] : by_caller_) {
            std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        }
    }

    const std::string* callee_cell(const CdrRecord& r) const {
        if (r.callee_cell_id) return &*r.callee_cell_id;
        auto it = by_caller_.find(r.callee);
        if (it == by_caller_.end()) return nullptr;
        const auto& v = it->second;
        auto pos = std::upper_bound(v.begin(), v.end(), r.timestamp,
                                    [](Timestamp t, const auto& e) { return t < e.first; });
        if (pos != v.begin()) return std::prev(pos)->second;
        return v.front().second;
    }

private:
    std::unordered_map<EntityId, std::vector<std::pair<Timestamp, const std::string*>>> by_caller_;
};

std::optional<double> endpoint_distance(const CdrRecord& r, const CellResolver& resolver, const CellMap& cells) {
    if (!r.cell_id) return std::nullopt;
    const auto* callee = resolver.callee_cell(r);
    if (!callee) return std::nullopt;
    auto a = cells.find(*r.cell_id);
    auto b = cells.find(*callee);
    if (a == cells.end() || b == cells.end()) return std::nullopt;
    return great_circle_km(a->second.latitude, a->second.longitude, b->second.latitude, b->second.longitude);
}

TelecomProfile build_profile(const std::vector<const CdrRecord*>& mine, const EntityId& entity,
                             const CellResolver& resolver, const CellMap& cells) {
    TelecomProfile p;
    p.entity = entity;
    p.observed_records = mine.size();
    p.first_activity = std::numeric_limits<Timestamp>::max();
    p.last_activity = std::numeric_limits<Timestamp>::min();
    std::set<std::string> used_cells;
    std::set<EntityId> in_peers, out_peers;
    std::size_t out_calls = 0, in_calls = 0, out_sms = 0, in_sms = 0, calls = 0;
    double call_seconds = 0.0;
    for (const CdrRecord* r : mine) {
        p.first_activity = std::min(p.first_activity, r->timestamp);
        p.last_activity = std::max(p.last_activity, r->timestamp);
        const bool outgoing = r->caller == entity;
        const bool incoming = r->callee == entity;
        const bool is_call = r->kind == InteractionKind::Call;
        if (outgoing) {
            if (r->cell_id) used_cells.insert(*r->cell_id);
            if (r->callee != entity) out_peers.insert(r->callee);
            (is_call ? out_calls : out_sms) += 1;
        }
        if (incoming) {
            if (r->callee_cell_id) used_cells.insert(*r->callee_cell_id);
            if (r->caller != entity) in_peers.insert(r->caller);
            (is_call ? in_calls : in_sms) += 1;
        }
        if (is_call) {
            ++calls;
            call_seconds += r->duration;
            if (auto d = endpoint_distance(*r, resolver, cells)) {
                if (outgoing) p.spatial_range_out_km = std::max(p.spatial_range_out_km.value_or(0.0), *d);
                if (incoming) p.spatial_range_in_km = std::max(p.spatial_range_in_km.value_or(0.0), *d);
            }
        }
    }
    p.mobility = used_cells.size();
    p.distinct_in_interlocutors = in_peers.size();
    p.distinct_out_interlocutors = out_peers.size();
    if (calls > 0) p.mean_call_length = call_seconds / static_cast<double>(calls);
    const double span_days =
        std::max(1.0, std::ceil(static_cast<double>(p.last_activity - p.first_activity) / kSecondsPerDay));
    p.avg_out_calls_per_day = static_cast<double>(out_calls) / span_days;
    p.avg_in_calls_per_day = static_cast<double>(in_calls) / span_days;
    p.avg_out_sms_per_day = static_cast<double>(out_sms) / span_days;
    p.avg_in_sms_per_day = static_cast<double>(in_sms) / span_days;
    // A self-call counts once toward the totals.
    std::size_t total_calls = 0, total_sms = 0;
    for (const CdrRecord* r : mine) (r->kind == InteractionKind::Call ? total_calls : total_sms) += 1;
    p.calls_sms_ratio = total_sms == 0 ? std::numeric_limits<double>::infinity()
                                       : static_cast<double>(total_calls) / static_cast<double>(total_sms);
    return p;
}

}  // namespace

TelecomProfile telecom_profile(const std::vector<CdrRecord>& records, const CellMap& cells, const EntityId& entity) {
    std::vector<const CdrRecord*> mine;
    for (const auto& r : records) {
        if (r.caller == entity || r.callee == entity) mine.push_back(&r);
    }
    if (mine.empty()) throw NotFoundError("entity '" + entity + "' appears in no CDR record");
    return build_profile(mine, entity, CellResolver(records), cells);
}

std::vector<TelecomProfile> telecom_profiles(const std::vector<CdrRecord>& records, const CellMap& cells) {
    std::map<EntityId, std::vector<const CdrRecord*>> by_entity;
    for (const auto& r : records) {
        by_entity[r.caller].push_back(&r);
        if (r.callee != r.caller) by_entity[r.callee].push_back(&r);
    }
    const CellResolver resolver(records);
    std::vector<TelecomProfile> out;
    out.reserve(by_entity.size());
    for (const auto& [entity, mine] : by_entity) out.push_back(build_profile(mine, entity, resolver, cells));
    return out;
}

std::vector<Interaction> to_interactions(const std::vector<CdrRecord>& records) {
    std::vector<Interaction> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        Interaction i{r.caller, r.callee, r.timestamp, r.kind, r.kind == InteractionKind::Sms ? 0.0 : r.duration, {}};
        if (r.cell_id) i.meta["cell_id"] = *r.cell_id;
        if (r.callee_cell_id) i.meta["callee_cell_id"] = *r.callee_cell_id;
        out.push_back(std::move(i));
    }
    return out;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? csv::format_double(*v) : std::string(); }

}  // namespace

void write_profiles_csv(std::ostream& out, const std::vector<TelecomProfile>& profiles) {
    csv::write_row(out, {"entity", "observed_records", "mobility", "spatial_range_out_km", "spatial_range_in_km",
                         "mean_call_length", "avg_out_calls_per_day", "avg_in_calls_per_day", "avg_out_sms_per_day",
                         "avg_in_sms_per_day", "distinct_in_interlocutors", "distinct_out_interlocutors",
                         "calls_sms_ratio", "first_activity", "last_activity"});
    for (const auto& p : profiles) {
        csv::write_row(out, {p.entity, std::to_string(p.observed_records), std::to_string(p.mobility),
                             opt(p.spatial_range_out_km), opt(p.spatial_range_in_km), opt(p.mean_call_length),
                             csv::format_double(p.avg_out_calls_per_day), csv::format_double(p.avg_in_calls_per_day),
                             csv::format_double(p.avg_out_sms_per_day), csv::format_double(p.avg_in_sms_per_day),
                             std::to_string(p.distinct_in_interlocutors), std::to_string(p.distinct_out_interlocutors),
                             csv::format_double(p.calls_sms_ratio), std::to_string(p.first_activity),
                             std::to_string(p.last_activity)});
    }
}

nlohmann::json to_json(const TelecomProfile& p) {
    auto optj = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
    return {{"entity", p.entity},
            {"observed_records", p.observed_records},
            {"mobility", p.mobility},
            {"spatial_range_out_km", optj(p.spatial_range_out_km)},
            {"spatial_range_in_km", optj(p.spatial_range_in_km)},
            {"mean_call_length", optj(p.mean_call_length)},
            {"avg_out_calls_per_day", p.avg_out_calls_per_day},
            {"avg_in_calls_per_day", p.avg_in_calls_per_day},
            {"avg_out_sms_per_day", p.avg_out_sms_per_day},
            {"avg_in_sms_per_day", p.avg_in_sms_per_day},
            {"distinct_in_interlocutors", p.distinct_in_interlocutors},
            {"distinct_out_interlocutors", p.distinct_out_interlocutors},
            {"calls_sms_ratio", std::isinf(p.calls_sms_ratio) ? nlohmann::json("inf") : nlohmann::json(p.calls_sms_ratio)},
            {"activity_period", {p.first_activity, p.last_activity}}};
}

}  // namespace socnet

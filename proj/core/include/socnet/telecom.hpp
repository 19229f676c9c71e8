#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "socnet/csv.hpp"
#include "socnet/graph.hpp"

namespace socnet {

struct CdrRecord {
    EntityId caller;
    EntityId callee;
    Timestamp timestamp = 0;
    InteractionKind kind = InteractionKind::Call;  // Call or Sms
    double duration = 0.0;
    std::optional<std::string> cell_id;         // caller's serving cell
    std::optional<std::string> callee_cell_id;  // optional extra column
    bool geometry_known = true;                 // false when a referenced cell has no coordinates
};

struct CellSite {
    std::string cell_id;
    double latitude = 0.0;
    double longitude = 0.0;
};

using CellMap = std::map<std::string, CellSite>;

struct CdrData {
    std::vector<CdrRecord> records;
    CellMap cells;
    std::size_t rejected = 0;
    std::size_t geometry_unknown = 0;
    std::vector<csv::Diagnostic> diagnostics;
};

// CDR CSV: caller,callee,timestamp,kind,duration,cell_id[,callee_cell_id].
// Cells CSV: cell_id,lat,lon.
CdrData parse_cdr(std::istream& cdr, std::istream* cells = nullptr);
CdrData parse_cdr(const std::filesystem::path& cdr, const std::optional<std::filesystem::path>& cells = std::nullopt);

// Haversine on a 6371 km sphere.
double great_circle_km(double lat1, double lon1, double lat2, double lon2);

struct TelecomProfile {
    EntityId entity;
    std::size_t observed_records = 0;
    std::size_t mobility = 0;  // distinct cells used
    std::optional<double> spatial_range_out_km;
    std::optional<double> spatial_range_in_km;
    std::optional<double> mean_call_length;
    double avg_out_calls_per_day = 0.0;
    double avg_in_calls_per_day = 0.0;
    double avg_out_sms_per_day = 0.0;
    double avg_in_sms_per_day = 0.0;
    std::size_t distinct_in_interlocutors = 0;
    std::size_t distinct_out_interlocutors = 0;
    double calls_sms_ratio = 0.0;  // +inf when there are no SMS
    Timestamp first_activity = 0;
    Timestamp last_activity = 0;
};

TelecomProfile telecom_profile(const std::vector<CdrRecord>& records, const CellMap& cells, const EntityId& entity);

// Profiles for every entity appearing in the records, sorted by entity.
std::vector<TelecomProfile> telecom_profiles(const std::vector<CdrRecord>& records, const CellMap& cells);

std::vector<Interaction> to_interactions(const std::vector<CdrRecord>& records);

void write_profiles_csv(std::ostream& out, const std::vector<TelecomProfile>& profiles);
nlohmann::json to_json(const TelecomProfile& p);

}  // namespace socnet

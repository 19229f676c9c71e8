#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "socnet/dynamics.hpp"
#include "socnet/groups.hpp"
#include "socnet/measures.hpp"
#include "socnet/roles.hpp"

// File formats shared by the pipeline and the CLI subcommands.
namespace socnet {

// Long format entity,measure,raw,scaled; rows by entity, then measure order.
void write_measure_matrix_csv(std::ostream& out, const MeasureMatrix& m);
MeasureMatrix read_measure_matrix_csv(std::istream& in);
// Convergence flags and entity count.
nlohmann::json measure_report_json(const MeasureMatrix& m);

// entity,role,score
void write_roles_csv(std::ostream& out, const std::vector<RoleAssignment>& roles);
std::map<EntityId, std::string> read_roles_csv(std::istream& in);
nlohmann::json roles_to_json(const std::vector<RoleAssignment>& roles);

nlohmann::json to_json(const Group& g, const Snapshot& snapshot);
nlohmann::json groups_to_json(const std::vector<Group>& groups, const Snapshot& snapshot);

// window,group_id,matched_prev,stability,status. A dissolved trace gets a
// final row with an empty group_id in the window after its last point.
void write_traces_csv(std::ostream& out, const std::vector<GroupTrace>& traces);

// subject,measure,window,value,cusum_up,cusum_down,alarm; empty cells for gaps.
void write_series_csv_header(std::ostream& out);
void write_series_csv(std::ostream& out, const MeasureSeries& series, const CusumTrace* trace);

}  // namespace socnet

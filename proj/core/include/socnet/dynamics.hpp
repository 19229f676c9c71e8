#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "socnet/groups.hpp"
#include "socnet/measures.hpp"
#include "socnet/roles.hpp"

namespace socnet {

struct Baseline {
    double mean = 0.0;
    double stddev = 1.0;
};

inline constexpr double kSigmaFloor = 1e-9;

struct SeriesPoint {
    std::size_t window = 0;
    std::optional<double> value;  // nullopt: subject absent from the window
};

struct MeasureSeries {
    std::string subject;
    std::string measure;
    std::vector<SeriesPoint> points;
    Baseline baseline;  // stddev already floored

    std::size_t observed() const;
};

// Mean and sample standard deviation of the first `count` observed points,
// with the standard deviation floored at kSigmaFloor.
Baseline estimate_baseline(const std::vector<SeriesPoint>& points, std::size_t count);

// One point per window; raw measure values.
MeasureSeries measure_series(const std::vector<MeasureMatrix>& matrices, const EntityId& subject, MeasureId measure,
                             std::size_t baseline_windows = 10);

MeasureSeries make_series(std::string subject, std::string measure, const std::vector<double>& values,
                          std::size_t baseline_windows = 10);

struct CusumParams {
    double k = 0.5;                     // reference value, sigma units
    double h = 5.0;                     // decision interval, sigma units
    std::size_t baseline_windows = 10;  // observed points reserved for the reference segment
    bool two_sided = true;
    std::optional<Baseline> baseline;   // overrides the series' estimate when set

    void validate() const;
};

enum class Direction { Up, Down };
std::string_view to_string(Direction d);

struct ChangePoint {
    std::size_t window = 0;
    Direction direction = Direction::Up;
    double statistic = 0.0;
};

// Per-point statistics for export; nullopt before monitoring starts and at gaps.
struct CusumTrace {
    std::vector<ChangePoint> change_points;
    std::vector<std::optional<double>> upper;
    std::vector<std::optional<double>> lower;
    std::vector<bool> alarm;
};

// Tabular CUSUM over the points after the first baseline_windows observed ones.
// A statistic is reset to zero after each alarm.
CusumTrace cusum_trace(const MeasureSeries& series, const CusumParams& params);
std::vector<ChangePoint> cusum_detect(const MeasureSeries& series, const CusumParams& params);

// ------------------------------------------------------------- reports

struct DistributionSummary {
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

DistributionSummary summarize(std::vector<double> values);

struct RankedEntity {
    EntityId entity;
    double value = 0.0;
};

struct SocietyWindow {
    std::size_t window = 0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::map<MeasureId, DistributionSummary> measures;
    std::map<MeasureId, std::vector<RankedEntity>> top;  // at most 10, highest raw first
};

struct SocietyDelta {
    std::size_t from = 0;
    std::size_t to = 0;
    long long nodes = 0;
    long long edges = 0;
    std::map<MeasureId, DistributionSummary> measures;  // to - from, field by field
};

struct SocietyReport {
    std::vector<SocietyWindow> windows;
    std::vector<SocietyDelta> deltas;
};

SocietyReport society_report(const std::vector<Snapshot>& windows, const std::vector<MeasureMatrix>& matrices);

struct AgentWindow {
    std::size_t window = 0;
    bool present = false;
    std::map<MeasureId, double> raw;
    std::map<MeasureId, double> scaled;
    std::optional<std::string> role;
    double role_score = 0.0;
    std::map<EntityId, double> neighbors;
};

struct NeighborChange {
    std::size_t from = 0;
    std::size_t to = 0;
    std::optional<double> jaccard;  // undefined when both sets are empty
};

struct RoleTransition {
    std::size_t from = 0;
    std::size_t to = 0;
    std::string from_role;
    std::string to_role;
};

struct MeasureAlarms {
    MeasureId measure = MeasureId::DegreeIn;
    bool evaluated = false;  // false when the series is too short
    std::vector<ChangePoint> change_points;
};

struct AgentReport {
    EntityId entity;
    std::vector<AgentWindow> windows;
    std::vector<NeighborChange> neighbor_changes;
    std::vector<RoleTransition> role_transitions;
    std::vector<MeasureAlarms> alarms;
};

AgentReport agent_report(const EntityId& entity, const std::vector<Snapshot>& windows,
                         const std::vector<MeasureMatrix>& matrices,
                         const std::vector<std::vector<RoleAssignment>>& assignments, const CusumParams& cusum);

struct TierChurn {
    std::map<Tier, std::vector<EntityId>> entered;
    std::map<Tier, std::vector<EntityId>> left;
    std::size_t total() const;
};

struct GroupWindowState {
    std::size_t window = 0;
    std::string group_id;
    double density = 0.0;
    std::optional<Cohesion> cohesion;  // absent when the group covers every node
    std::map<Tier, std::size_t> tier_counts;
    std::map<MeasureId, double> strategy;
    std::vector<std::string> theme_tags;
};

struct GroupTransition {
    std::size_t from = 0;
    std::size_t to = 0;
    double stability = 0.0;
    TierChurn churn;
    double strategy_drift = 0.0;  // L1 over measures summarised in both windows
};

struct GroupReport {
    std::string trace_id;
    bool dissolved = false;
    std::vector<GroupWindowState> windows;
    std::vector<GroupTransition> transitions;
};

TierChurn tier_churn(const Group& before, const Group& after);
double strategy_drift(const GroupStrategy& before, const GroupStrategy& after);

GroupReport group_report(const GroupTrace& trace, const std::vector<Snapshot>& windows,
                         const std::vector<std::vector<Group>>& groups_per_window);

nlohmann::json to_json(const SocietyReport& r);
nlohmann::json to_json(const AgentReport& r);
nlohmann::json to_json(const GroupReport& r);

}  // namespace socnet

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "socnet/dynamics.hpp"
#include "socnet/export.hpp"
#include "socnet/groups.hpp"
#include "socnet/measures.hpp"
#include "socnet/roles.hpp"

namespace socnet {

enum class InputType { Generic, Telecom, Blog };
enum class BetweennessMode { Auto, Exact, Sampled };
enum class MonitorScope { All, Agents, None };

// INI sections: run, input, window, measures, roles, groups, dynamics, export.
struct PipelineConfig {
    InputType input_type = InputType::Generic;
    std::filesystem::path input;                 // interactions, CDR or posts
    std::optional<std::filesystem::path> cells;  // telecom
    std::optional<std::filesystem::path> comments;  // blog
    bool dedup = false;

    std::size_t window_count = 10;               // used when width is unset
    std::optional<Timestamp> window_width;
    std::optional<Timestamp> window_step;        // defaults to the width

    std::vector<MeasureId> measures{kAllMeasures.begin(), kAllMeasures.end()};
    SolverParams solver;
    BetweennessMode betweenness = BetweennessMode::Auto;
    std::size_t pivots = 512;

    std::string role_templates = "table1";
    RoleOptions roles;

    ExtractionParams groups;
    double min_stability = 0.3;

    CusumParams cusum;
    MonitorScope monitor = MonitorScope::All;
    std::vector<EntityId> agents;  // reported alongside every Organiser and Receiver

    GraphFormat graph_format = GraphFormat::GraphML;
    std::string degree_bins = "auto";
    std::string m3_bins = "auto";

    std::filesystem::path output_dir = "socnet-out";
    std::optional<std::uint64_t> seed;

    void validate() const;
};

// Paths in the file are resolved against `base_dir`.
PipelineConfig parse_pipeline_config(std::istream& in, const std::filesystem::path& base_dir = {});
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

// "section.key=value", as on the command line.
void apply_override(PipelineConfig& config, std::string_view assignment);

// Normalised "section.key" -> value; output_dir is left out so the echo does
// not depend on where a run is written.
std::map<std::string, std::string> config_entries(const PipelineConfig& config);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int validation = 1;
inline constexpr int runtime = 2;
inline constexpr int partial = 3;
}  // namespace exit_code

struct Artifact {
    std::string path;  // relative to the output directory
    std::string sha256;
    std::size_t bytes = 0;
};

struct RunResult {
    int exit_code = exit_code::ok;
    std::string status = "ok";
    std::optional<std::string> failed_stage;
    std::string error;
    std::vector<Artifact> artifacts;  // manifest.json excluded
};

// Runs every stage and writes artifacts plus manifest.json. Errors are
// reported through the result; the manifest records the failing stage.
RunResult run_pipeline(const PipelineConfig& config);

// Equal-width windows covering the store: `count` windows when width is unset.
std::vector<TimeWindow> pipeline_windows(const InteractionStore& store, const PipelineConfig& config);

std::string library_version();

}  // namespace socnet

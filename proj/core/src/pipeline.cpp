#include "socnet/pipeline.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <boost/version.hpp>
#include <Eigen/Core>
#include <nlohmann/json.hpp>
#include <openssl/opensslv.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "socnet/artifacts.hpp"
#include "socnet/blogs.hpp"
#include "socnet/csv.hpp"
#include "socnet/error.hpp"
#include "socnet/histogram.hpp"
#include "socnet/io.hpp"
#include "socnet/telecom.hpp"

#ifndef SOCNET_VERSION
#define SOCNET_VERSION "0.0.0"
#endif

namespace socnet {

std::string library_version() { return SOCNET_VERSION; }

namespace {

bool parse_bool(std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ValidationError("expected a boolean, got '" + std::string(v) + "'");
}

std::size_t parse_count(std::string_view v) {
    const auto n = csv::parse_int(v);
    if (n < 0) throw ValidationError("expected a non-negative integer, got '" + std::string(v) + "'");
    return static_cast<std::size_t>(n);
}

std::vector<std::string> split_list(std::string_view v) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : v) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ' && c != '\t') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    std::erase_if(out, [](const std::string& s) { return s.empty(); });
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view v) {
    std::filesystem::path p{std::string(v)};
    if (p.is_relative() && !base.empty()) p = base / p;
    return p.lexically_normal();
}

std::string_view to_string(InputType t) {
    switch (t) {
        case InputType::Generic: return "generic";
        case InputType::Telecom: return "telecom";
        case InputType::Blog: return "blog";
    }
    return "generic";
}

std::string_view to_string(BetweennessMode m) {
    switch (m) {
        case BetweennessMode::Auto: return "auto";
        case BetweennessMode::Exact: return "exact";
        case BetweennessMode::Sampled: return "sampled";
    }
    return "auto";
}

std::string_view to_string(MonitorScope m) {
    switch (m) {
        case MonitorScope::All: return "all";
        case MonitorScope::Agents: return "agents";
        case MonitorScope::None: return "none";
    }
    return "all";
}

std::string_view graph_format_name(GraphFormat f) {
    switch (f) {
        case GraphFormat::GraphML: return "graphml";
        case GraphFormat::Dot: return "dot";
        case GraphFormat::EdgeCsv: return "csv";
    }
    return "graphml";
}

void set_entry(PipelineConfig& c, const std::string& section, const std::string& key, const std::string& v,
               const std::filesystem::path& base) {
    const std::string name = section + "." + key;
    try {
        if (section == "run") {
            if (key == "seed") {
                const auto s = csv::parse_int(v);
                if (s < 0) throw ValidationError("seed must be non-negative");
                c.seed = static_cast<std::uint64_t>(s);
                return;
            }
            if (key == "output_dir") return void(c.output_dir = resolve(base, v));
        } else if (section == "input") {
            if (key == "type") {
                if (v == "generic") return void(c.input_type = InputType::Generic);
                if (v == "telecom") return void(c.input_type = InputType::Telecom);
                if (v == "blog") return void(c.input_type = InputType::Blog);
                throw ValidationError("expected generic, telecom or blog");
            }
            if (key == "path") return void(c.input = resolve(base, v));
            if (key == "cells") return void(c.cells = v.empty() ? std::nullopt : std::optional(resolve(base, v)));
            if (key == "comments") {
                return void(c.comments = v.empty() ? std::nullopt : std::optional(resolve(base, v)));
            }
            if (key == "dedup") return void(c.dedup = parse_bool(v));
        } else if (section == "window") {
            if (key == "count") return void(c.window_count = parse_count(v));
            if (key == "width") {
                return void(c.window_width = v.empty() ? std::nullopt : std::optional<Timestamp>(csv::parse_int(v)));
            }
            if (key == "step") {
                return void(c.window_step = v.empty() ? std::nullopt : std::optional<Timestamp>(csv::parse_int(v)));
            }
        } else if (section == "measures") {
            if (key == "list") {
                c.measures.clear();
                if (v == "all") {
                    c.measures.assign(kAllMeasures.begin(), kAllMeasures.end());
                } else {
                    for (const auto& m : split_list(v)) c.measures.push_back(parse_measure_id(m));
                }
                return;
            }
            if (key == "damping") return void(c.solver.damping = csv::parse_double(v));
            if (key == "tolerance") return void(c.solver.tolerance = csv::parse_double(v));
            if (key == "max_iterations") return void(c.solver.max_iterations = static_cast<std::uint32_t>(parse_count(v)));
            if (key == "betweenness") {
                if (v == "auto") return void(c.betweenness = BetweennessMode::Auto);
                if (v == "exact") return void(c.betweenness = BetweennessMode::Exact);
                if (v == "sampled") return void(c.betweenness = BetweennessMode::Sampled);
                throw ValidationError("expected auto, exact or sampled");
            }
            if (key == "pivots") return void(c.pivots = parse_count(v));
        } else if (section == "roles") {
            if (key == "templates") return void(c.role_templates = v == "table1" ? v : resolve(base, v).string());
            if (key == "threshold") return void(c.roles.threshold = csv::parse_double(v));
            if (key == "rule") {
                if (v == "linear") return void(c.roles.rule = MatchRule::Linear);
                if (v == "strict") return void(c.roles.rule = MatchRule::Strict);
                throw ValidationError("expected linear or strict");
            }
        } else if (section == "groups") {
            if (key == "method") return void(c.groups.method = parse_extraction_method(v));
            if (key == "weight_threshold") {
                return void(c.groups.weight_threshold = static_cast<std::uint32_t>(parse_count(v)));
            }
            if (key == "k") return void(c.groups.k = static_cast<std::uint32_t>(parse_count(v)));
            if (key == "min_size") return void(c.groups.min_size = parse_count(v));
            if (key == "kernel") return void(c.groups.tiers.kernel = csv::parse_double(v));
            if (key == "circumjacent") return void(c.groups.tiers.circumjacent = csv::parse_double(v));
            if (key == "weak") return void(c.groups.tiers.weak = csv::parse_double(v));
            if (key == "min_stability") return void(c.min_stability = csv::parse_double(v));
        } else if (section == "dynamics") {
            if (key == "k") return void(c.cusum.k = csv::parse_double(v));
            if (key == "h") return void(c.cusum.h = csv::parse_double(v));
            if (key == "baseline_windows") return void(c.cusum.baseline_windows = parse_count(v));
            if (key == "two_sided") return void(c.cusum.two_sided = parse_bool(v));
            if (key == "baseline_mean" || key == "baseline_stddev") {
                if (v.empty()) return void(c.cusum.baseline.reset());
                auto b = c.cusum.baseline.value_or(Baseline{});
                (key == "baseline_mean" ? b.mean : b.stddev) = csv::parse_double(v);
                return void(c.cusum.baseline = b);
            }
            if (key == "monitor") {
                if (v == "all") return void(c.monitor = MonitorScope::All);
                if (v == "agents") return void(c.monitor = MonitorScope::Agents);
                if (v == "none") return void(c.monitor = MonitorScope::None);
                throw ValidationError("expected all, agents or none");
            }
            if (key == "agents") return void(c.agents = split_list(v));
        } else if (section == "export") {
            if (key == "graph_format") return void(c.graph_format = parse_graph_format(v));
            if (key == "degree_bins") return void(c.degree_bins = v);
            if (key == "m3_bins") return void(c.m3_bins = v);
        }
    } catch (const ValidationError& e) {
        throw ValidationError(name + ": " + e.what());
    }
    throw ValidationError("unknown configuration key '" + name + "'");
}

}  // namespace

void PipelineConfig::validate() const {
    if (!seed) throw ValidationError("run.seed is required");
    if (input.empty()) throw ValidationError("input.path is required");
    if (input_type == InputType::Blog && !comments) throw ValidationError("blog input needs input.comments");
    if (window_width) {
        if (*window_width <= 0) throw ValidationError("window.width must be positive");
        if (window_step && *window_step <= 0) throw ValidationError("window.step must be positive");
    } else if (window_count == 0) {
        throw ValidationError("window.count must be positive");
    }
    if (measures.empty()) throw ValidationError("measures.list must name at least one measure");
    solver.validate();
    if (pivots == 0) throw ValidationError("measures.pivots must be positive");
    if (!(roles.threshold >= 0.0 && roles.threshold <= 1.0)) throw ValidationError("roles.threshold must lie in [0, 1]");
    (void)load_role_templates_source(role_templates);
    groups.validate();
    if (!(min_stability >= 0.0 && min_stability <= 1.0)) {
        throw ValidationError("groups.min_stability must lie in [0, 1]");
    }
    cusum.validate();
    if (degree_bins != "auto") (void)BinSpec::parse(degree_bins);
    if (m3_bins != "auto") (void)BinSpec::parse(m3_bins);
}

PipelineConfig parse_pipeline_config(std::istream& in, const std::filesystem::path& base_dir) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ValidationError(std::string("malformed config: ") + e.what());
    }
    PipelineConfig c;
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ValidationError("config key '" + section + "' is outside a section");
        for (const auto& [key, value] : body) set_entry(c, section, key, value.data(), base_dir);
    }
    return c;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config " + path.string());
    return parse_pipeline_config(in, path.parent_path());
}

void apply_override(PipelineConfig& config, std::string_view assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
        throw ValidationError("override must look like section.key=value: '" + std::string(assignment) + "'");
    }
    set_entry(config, std::string(assignment.substr(0, dot)), std::string(assignment.substr(dot + 1, eq - dot - 1)),
              std::string(assignment.substr(eq + 1)), std::filesystem::current_path());
}

std::map<std::string, std::string> config_entries(const PipelineConfig& c) {
    auto d = [](double v) { return csv::format_double(v); };
    std::map<std::string, std::string> e;
    e["run.seed"] = c.seed ? std::to_string(*c.seed) : "";
    e["input.type"] = to_string(c.input_type);
    e["input.path"] = c.input.string();
    e["input.cells"] = c.cells ? c.cells->string() : "";
    e["input.comments"] = c.comments ? c.comments->string() : "";
    e["input.dedup"] = c.dedup ? "true" : "false";
    e["window.count"] = std::to_string(c.window_count);
    e["window.width"] = c.window_width ? std::to_string(*c.window_width) : "";
    e["window.step"] = c.window_step ? std::to_string(*c.window_step) : "";
    std::string list;
    for (MeasureId id : c.measures) list += (list.empty() ? "" : ",") + std::string(to_string(id));
    e["measures.list"] = list;
    e["measures.damping"] = d(c.solver.damping);
    e["measures.tolerance"] = d(c.solver.tolerance);
    e["measures.max_iterations"] = std::to_string(c.solver.max_iterations);
    e["measures.betweenness"] = to_string(c.betweenness);
    e["measures.pivots"] = std::to_string(c.pivots);
    e["roles.templates"] = c.role_templates;
    e["roles.threshold"] = d(c.roles.threshold);
    e["roles.rule"] = c.roles.rule == MatchRule::Linear ? "linear" : "strict";
    e["groups.method"] = to_string(c.groups.method);
    e["groups.weight_threshold"] = std::to_string(c.groups.weight_threshold);
    e["groups.k"] = std::to_string(c.groups.k);
    e["groups.min_size"] = std::to_string(c.groups.min_size);
    e["groups.kernel"] = d(c.groups.tiers.kernel);
    e["groups.circumjacent"] = d(c.groups.tiers.circumjacent);
    e["groups.weak"] = d(c.groups.tiers.weak);
    e["groups.min_stability"] = d(c.min_stability);
    e["dynamics.k"] = d(c.cusum.k);
    e["dynamics.h"] = d(c.cusum.h);
    e["dynamics.baseline_windows"] = std::to_string(c.cusum.baseline_windows);
    e["dynamics.two_sided"] = c.cusum.two_sided ? "true" : "false";
    e["dynamics.baseline_mean"] = c.cusum.baseline ? d(c.cusum.baseline->mean) : "";
    e["dynamics.baseline_stddev"] = c.cusum.baseline ? d(c.cusum.baseline->stddev) : "";
    e["dynamics.monitor"] = to_string(c.monitor);
    std::string agents;
    for (const auto& a : c.agents) agents += (agents.empty() ? "" : ",") + a;
    e["dynamics.agents"] = agents;
    e["export.graph_format"] = graph_format_name(c.graph_format);
    e["export.degree_bins"] = c.degree_bins;
    e["export.m3_bins"] = c.m3_bins;
    return e;
}

std::vector<TimeWindow> pipeline_windows(const InteractionStore& store, const PipelineConfig& config) {
    if (store.empty()) return {};
    if (config.window_width) return store.windows(*config.window_width, config.window_step.value_or(*config.window_width));
    const Timestamp lo = *store.min_timestamp();
    const Timestamp span = *store.max_timestamp() - lo + 1;
    const auto n = static_cast<Timestamp>(config.window_count);
    const Timestamp width = (span + n - 1) / n;
    std::vector<TimeWindow> out;
    for (Timestamp i = 0; i < n; ++i) out.emplace_back(lo + i * width, lo + (i + 1) * width);
    return out;
}

namespace {

std::string window_name(std::size_t w, std::size_t total) {
    const int digits = std::max<int>(2, static_cast<int>(std::to_string(total > 0 ? total - 1 : 0).size()));
    char buf[32];
    std::snprintf(buf, sizeof buf, "w%0*zu", digits, w);
    return buf;
}

BinSpec degree_bins_for(const std::vector<double>& values) {
    const double max = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
    const auto bins = static_cast<std::size_t>(max) + 1;
    return BinSpec::linear(0.0, static_cast<double>(bins), bins);
}

// One bin per decade from 1 upwards; values below 1 land in the underflow.
BinSpec m3_bins_for(const std::vector<double>& values) {
    const double max = values.empty() ? 1.0 : *std::max_element(values.begin(), values.end());
    const auto decades = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::log10(std::max(max, 1.0)))) + 1);
    return BinSpec::logarithmic(1.0, std::pow(10.0, static_cast<double>(decades)), decades);
}

std::string histogram_csv(const std::vector<double>& values, const BinSpec& bins) {
    const auto h = emit_histogram(values, bins);
    if (h.total() != values.size()) throw RuntimeError("histogram lost values");
    std::ostringstream out;
    write_histogram_csv(out, h);
    return out.str();
}

class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path root) : root_(std::move(root)) {}

    void write(const std::string& rel, const std::string& content) {
        io::atomic_write(root_ / rel, content);
        artifacts_.push_back({rel, io::sha256_hex(content), content.size()});
    }
    void write_json(const std::string& rel, const nlohmann::json& j) { write(rel, j.dump(2) + "\n"); }

    const std::filesystem::path& root() const { return root_; }
    std::vector<Artifact>& artifacts() { return artifacts_; }

private:
    std::filesystem::path root_;
    std::vector<Artifact> artifacts_;
};

nlohmann::json diagnostics_json(const std::vector<csv::Diagnostic>& diags) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& d : diags) arr.push_back({{"line", d.line}, {"message", d.message}});
    return arr;
}

void write_manifest(const PipelineConfig& config, const RunResult& result, const std::vector<std::string>& stages,
                    const nlohmann::json& inputs, const nlohmann::json& notes) {
    nlohmann::json m;
    m["tool"] = "socnet";
    m["version"] = library_version();
    m["libraries"] = {
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"boost", std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000) + "." +
                      std::to_string(BOOST_VERSION % 100)},
        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
        {"openssl", OPENSSL_VERSION_TEXT},
    };
    m["status"] = result.status;
    m["exit_code"] = result.exit_code;
    m["failed_stage"] = result.failed_stage ? nlohmann::json(*result.failed_stage) : nlohmann::json(nullptr);
    if (!result.error.empty()) m["error"] = result.error;
    m["config"] = config_entries(config);
    m["inputs"] = inputs;
    m["stages_completed"] = stages;
    m["notes"] = notes;
    nlohmann::json arts = nlohmann::json::array();
    for (const auto& a : result.artifacts) arts.push_back({{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}});
    m["artifacts"] = std::move(arts);
    io::atomic_write(config.output_dir / "manifest.json", m.dump(2) + "\n");
}

}  // namespace

RunResult run_pipeline(const PipelineConfig& config) {
    RunResult result;
    std::vector<std::string> stages;
    nlohmann::json inputs = nlohmann::json::array();
    nlohmann::json notes = nlohmann::json::array();
    std::string stage = "validate";
    ArtifactWriter out(config.output_dir);

    try {
        config.validate();
        stages.push_back(stage);

        // ---- ingest
        stage = "ingest";
        auto hash_input = [&](const std::filesystem::path& p, std::string_view role) {
            inputs.push_back({{"role", role}, {"path", p.string()}, {"sha256", io::sha256_file(p)}});
        };
        std::vector<Interaction> interactions;
        IngestReport report;
        std::optional<ThemeSource> themes;
        std::optional<std::vector<CdrRecord>> cdr_records;
        std::optional<CellMap> cells;
        nlohmann::json ingest;
        switch (config.input_type) {
            case InputType::Generic: {
                hash_input(config.input, "interactions");
                interactions = read_interactions_csv(config.input, report);
                break;
            }
            case InputType::Telecom: {
                hash_input(config.input, "cdr");
                if (config.cells) hash_input(*config.cells, "cells");
                auto data = parse_cdr(config.input, config.cells);
                report.rejected = data.rejected;
                report.diagnostics = data.diagnostics;
                ingest["geometry_unknown"] = data.geometry_unknown;
                interactions = to_interactions(data.records);
                cdr_records = std::move(data.records);
                cells = std::move(data.cells);
                break;
            }
            case InputType::Blog: {
                hash_input(config.input, "posts");
                hash_input(*config.comments, "comments");
                auto dump = parse_blog_dump(config.input, *config.comments);
                report.rejected = dump.rejected;
                report.diagnostics = dump.diagnostics;
                ingest["dangling_comments"] = dump.dangling_comments;
                interactions = derive_interactions(dump.posts, dump.comments);
                themes = author_documents(dump);
                const auto docs = blog_documents(dump);
                if (!docs.empty()) {
                    try {
                        out.write_json("blogs/index.json", TfIdfIndex::build(docs).to_json());
                    } catch (const ValidationError& e) {
                        notes.push_back(std::string("blog index skipped: ") + e.what());
                    }
                }
                break;
            }
        }
        InteractionStore store;
        const auto added = store.add_interactions(interactions, config.dedup);
        report.accepted = added.accepted;
        report.rejected += added.rejected;
        report.duplicates_dropped = added.duplicates_dropped;
        report.diagnostics.insert(report.diagnostics.end(), added.diagnostics.begin(), added.diagnostics.end());
        ingest["accepted"] = report.accepted;
        ingest["rejected"] = report.rejected;
        ingest["duplicates_dropped"] = report.duplicates_dropped;
        ingest["diagnostics"] = diagnostics_json(report.diagnostics);
        out.write_json("ingest.json", ingest);
        {
            std::ostringstream s;
            write_interactions_csv(s, store.records());
            out.write("interactions.csv", s.str());
        }
        if (cdr_records) {
            const auto profiles = telecom_profiles(*cdr_records, *cells);
            std::ostringstream s;
            write_profiles_csv(s, profiles);
            out.write("profiles.csv", s.str());
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& p : profiles) arr.push_back(to_json(p));
            out.write_json("profiles.json", arr);
        }
        if (store.empty()) throw RuntimeError("no valid interactions in the input");
        stages.push_back(stage);

        // ---- window
        stage = "window";
        const auto windows = pipeline_windows(store, config);
        std::vector<Snapshot> snapshots;
        snapshots.reserve(windows.size());
        {
            std::ostringstream s;
            csv::write_row(s, {"window", "start", "end", "nodes", "edges"});
            for (std::size_t w = 0; w < windows.size(); ++w) {
                snapshots.push_back(store.snapshot(windows[w]));
                csv::write_row(s, {std::to_string(w), std::to_string(windows[w].start()),
                                   std::to_string(windows[w].end()), std::to_string(snapshots[w].node_count()),
                                   std::to_string(snapshots[w].edge_count())});
            }
            out.write("windows.csv", s.str());
        }
        const std::size_t nw = snapshots.size();
        stages.push_back(stage);

        // ---- measures
        stage = "measures";
        std::vector<MeasureMatrix> matrices;
        matrices.reserve(nw);
        for (std::size_t w = 0; w < nw; ++w) {
            MeasureOptions opts;
            opts.solver = config.solver;
            opts.betweenness.pivots = config.pivots;
            opts.betweenness.exact = config.betweenness == BetweennessMode::Exact;
            if (config.betweenness == BetweennessMode::Sampled) opts.betweenness.exact_limit = 0;
            opts.betweenness.seed = *config.seed + w;
            matrices.push_back(measure_matrix(snapshots[w], config.measures, opts));
            std::ostringstream s;
            write_measure_matrix_csv(s, matrices.back());
            const auto name = window_name(w, nw);
            out.write("measures/" + name + ".csv", s.str());
            out.write_json("measures/" + name + ".json", measure_report_json(matrices.back()));
        }
        stages.push_back(stage);

        // ---- roles
        stage = "roles";
        const auto role_set = load_role_templates_source(config.role_templates);
        std::vector<std::vector<RoleAssignment>> assignments;
        std::vector<std::map<EntityId, std::string>> role_maps(nw);
        for (std::size_t w = 0; w < nw; ++w) {
            assignments.push_back(assign_roles(matrices[w], role_set, config.roles));
            for (const auto& a : assignments.back()) role_maps[w][a.entity] = a.role;
            std::ostringstream s;
            write_roles_csv(s, assignments.back());
            const auto name = window_name(w, nw);
            out.write("roles/" + name + ".csv", s.str());
            out.write_json("roles/" + name + ".json", roles_to_json(assignments.back()));
        }
        stages.push_back(stage);

        // ---- groups
        stage = "groups";
        std::vector<std::vector<Group>> groups;
        for (std::size_t w = 0; w < nw; ++w) {
            groups.push_back(extract_groups(snapshots[w], config.groups, &matrices[w], themes ? &*themes : nullptr));
            out.write_json("groups/" + window_name(w, nw) + ".json", groups_to_json(groups.back(), snapshots[w]));
        }
        const auto traces = build_group_traces(groups, config.min_stability);
        {
            std::ostringstream s;
            write_traces_csv(s, traces);
            out.write("traces.csv", s.str());
        }
        stages.push_back(stage);

        // ---- dynamics
        stage = "dynamics";
        if (nw >= 2) {
            out.write_json("reports/society.json", to_json(society_report(snapshots, matrices)));
        } else {
            notes.push_back("society report skipped: fewer than two windows");
        }
        {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& t : traces) arr.push_back(to_json(group_report(t, snapshots, groups)));
            out.write_json("reports/groups.json", arr);
        }
        std::set<EntityId> agents(config.agents.begin(), config.agents.end());
        for (const auto& per_window : assignments) {
            for (const auto& a : per_window) {
                if (a.role == "Organiser" || a.role == "Receiver") agents.insert(a.entity);
            }
        }
        {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& a : agents) {
                try {
                    arr.push_back(to_json(agent_report(a, snapshots, matrices, assignments, config.cusum)));
                } catch (const NotFoundError&) {
                    notes.push_back("agent '" + a + "' appears in no window");
                }
            }
            out.write_json("reports/agents.json", arr);
        }
        if (config.monitor != MonitorScope::None) {
            std::set<EntityId> subjects;
            if (config.monitor == MonitorScope::All) {
                for (const auto& m : matrices) subjects.insert(m.entities().begin(), m.entities().end());
            } else {
                subjects = agents;
            }
            std::ostringstream s;
            write_series_csv_header(s);
            std::size_t alarms = 0;
            for (const auto& subject : subjects) {
                bool present = false;
                for (const auto& m : matrices) present = present || m.row_of(subject).has_value();
                if (!present) continue;
                for (MeasureId id : config.measures) {
                    auto series = measure_series(matrices, subject, id, config.cusum.baseline_windows);
                    if (series.observed() > config.cusum.baseline_windows) {
                        const auto trace = cusum_trace(series, config.cusum);
                        alarms += trace.change_points.size();
                        write_series_csv(s, series, &trace);
                    } else {
                        write_series_csv(s, series, nullptr);
                    }
                }
            }
            out.write("series.csv", s.str());
            notes.push_back("cusum alarms: " + std::to_string(alarms));
        }
        stages.push_back(stage);

        // ---- exports
        stage = "exports";
        for (std::size_t w = 0; w < nw; ++w) {
            std::ostringstream s;
            export_graph(s, snapshots[w], config.graph_format, NodeAttributes{&role_maps[w], &matrices[w]});
            out.write("graphs/" + window_name(w, nw) + std::string(file_extension(config.graph_format)), s.str());
        }
        {
            const auto full = store.full_snapshot();
            const auto din = degree_in(full);
            const auto dout = degree_out(full);
            std::vector<double> m3v(din.size());
            for (std::size_t i = 0; i < din.size(); ++i) m3v[i] = m3(din[i], dout[i]);
            if (!din.empty()) {
                const auto dbins = [&](const std::vector<double>& v) {
                    return config.degree_bins == "auto" ? degree_bins_for(v) : BinSpec::parse(config.degree_bins);
                };
                out.write("histograms/degree_in.csv", histogram_csv(din, dbins(din)));
                out.write("histograms/degree_out.csv", histogram_csv(dout, dbins(dout)));
                out.write("histograms/m3.csv",
                          histogram_csv(m3v, config.m3_bins == "auto" ? m3_bins_for(m3v) : BinSpec::parse(config.m3_bins)));
            }
        }
        stages.push_back(stage);
    } catch (const std::exception& e) {
        result.error = e.what();
        result.failed_stage = stage;
        result.status = "failed";
        const bool validation = stage == "validate" && dynamic_cast<const ValidationError*>(&e) != nullptr;
        if (validation) {
            result.exit_code = exit_code::validation;
        } else {
            result.exit_code = out.artifacts().empty() ? exit_code::runtime : exit_code::partial;
            if (result.exit_code == exit_code::partial) result.status = "partial";
        }
    }
    result.artifacts = out.artifacts();
    try {
        write_manifest(config, result, stages, inputs, notes);
    } catch (const std::exception& e) {
        if (result.exit_code == exit_code::ok) {
            result.exit_code = exit_code::runtime;
            result.status = "failed";
            result.failed_stage = "manifest";
        }
        result.error += (result.error.empty() ? "" : "; ") + std::string("manifest: ") + e.what();
    }
    return result;
}

}  // namespace socnet

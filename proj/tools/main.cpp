#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "socnet/artifacts.hpp"
#include "socnet/blogs.hpp"
#include "socnet/csv.hpp"
#include "socnet/error.hpp"
#include "socnet/export.hpp"
#include "socnet/histogram.hpp"
#include "socnet/io.hpp"
#include "socnet/pipeline.hpp"
#include "socnet/synthetic.hpp"
#include "socnet/telecom.hpp"

using namespace socnet;
namespace fs = std::filesystem;

namespace {

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
    } else {
        io::atomic_write(path, content);
    }
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuntimeError("cannot open " + path.string());
    return in;
}

void print_diagnostics(const std::vector<csv::Diagnostic>& diags) {
    for (const auto& d : diags) std::cerr << "line " << d.line << ": " << d.message << "\n";
}

InteractionStore load_store(const fs::path& path) {
    IngestReport report;
    auto records = read_interactions_csv(path, report);
    print_diagnostics(report.diagnostics);
    InteractionStore store;
    store.add_interactions(records);
    return store;
}

// Full span unless both bounds are given.
Snapshot load_snapshot(const fs::path& path, std::optional<Timestamp> from, std::optional<Timestamp> to) {
    const auto store = load_store(path);
    if (from && to) return store.snapshot(TimeWindow(*from, *to));
    if (from || to) throw ValidationError("--from and --to must be given together");
    return store.full_snapshot();
}

std::vector<MeasureId> parse_measure_list(const std::vector<std::string>& names) {
    std::vector<MeasureId> out;
    for (const auto& n : names) out.push_back(parse_measure_id(n));
    if (out.empty()) out.assign(kAllMeasures.begin(), kAllMeasures.end());
    return out;
}

MeasureMatrix read_matrix(const fs::path& path) {
    auto in = open_input(path);
    return read_measure_matrix_csv(in);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Social network analysis toolkit: centrality, roles, groups and their dynamics"};
    app.set_version_flag("--version", library_version());
    app.require_subcommand(1);

    // ---- ingest
    auto* ingest = app.add_subcommand("ingest", "Validate and normalise raw input into an interaction CSV");
    std::string ingest_type = "generic";
    fs::path ingest_input, ingest_cells, ingest_comments;
    std::string ingest_out = "-", ingest_profiles;
    bool ingest_dedup = false;
    ingest->add_option("--type", ingest_type, "Input kind")->check(CLI::IsMember({"generic", "telecom", "blog"}));
    ingest->add_option("-i,--input", ingest_input, "Interactions, CDR or posts file")->required();
    ingest->add_option("--cells", ingest_cells, "Cell coordinates (telecom)");
    ingest->add_option("--comments", ingest_comments, "Comments file (blog)");
    ingest->add_flag("--dedup", ingest_dedup, "Drop exact duplicate records");
    ingest->add_option("-o,--output", ingest_out, "Interaction CSV ('-' for stdout)");
    ingest->add_option("--profiles", ingest_profiles, "Telecom profile CSV");

    // ---- measure
    auto* measure = app.add_subcommand("measure", "Compute the measure matrix of one window");
    fs::path measure_input;
    std::optional<Timestamp> measure_from, measure_to;
    std::vector<std::string> measure_names;
    std::string measure_out = "-", measure_report;
    SolverParams solver;
    BetweennessOptions bopts;
    measure->add_option("-i,--input", measure_input, "Interaction CSV")->required();
    measure->add_option("--from", measure_from, "Window start (epoch seconds)");
    measure->add_option("--to", measure_to, "Window end, exclusive");
    measure->add_option("-m,--measures", measure_names, "Measures (default: all)")->delimiter(',');
    measure->add_option("--damping", solver.damping);
    measure->add_option("--tolerance", solver.tolerance);
    measure->add_option("--max-iterations", solver.max_iterations);
    measure->add_flag("--exact", bopts.exact, "Exact betweenness at any size");
    measure->add_option("--pivots", bopts.pivots, "Betweenness pivots above the exact limit");
    measure->add_option("--seed", bopts.seed, "Seed for pivot sampling");
    measure->add_option("-o,--output", measure_out, "Matrix CSV");
    measure->add_option("--report", measure_report, "Convergence report JSON");

    // ---- roles
    auto* roles = app.add_subcommand("roles", "Assign role templates to a measure matrix");
    fs::path roles_matrix;
    std::string roles_templates = "table1", roles_out = "-", roles_json, roles_rule = "linear";
    RoleOptions role_opts;
    roles->add_option("--matrix", roles_matrix, "Measure matrix CSV")->required();
    roles->add_option("-t,--templates", roles_templates, "Template file or 'table1'");
    roles->add_option("--threshold", role_opts.threshold);
    roles->add_option("--rule", roles_rule)->check(CLI::IsMember({"linear", "strict"}));
    roles->add_option("-o,--output", roles_out, "Assignment CSV");
    roles->add_option("--json", roles_json, "Assignment JSON with per-measure detail");

    // ---- groups
    auto* groups = app.add_subcommand("groups", "Extract groups with tiered membership");
    fs::path groups_input, groups_matrix;
    std::optional<Timestamp> groups_from, groups_to;
    std::string groups_method = "threshold-components", groups_out = "-";
    ExtractionParams gparams;
    std::vector<double> tiers;
    groups->add_option("-i,--input", groups_input, "Interaction CSV")->required();
    groups->add_option("--from", groups_from);
    groups->add_option("--to", groups_to);
    groups->add_option("--matrix", groups_matrix, "Measure matrix CSV for strategy summaries");
    groups->add_option("--method", groups_method, "threshold-components or kcore-seeds");
    groups->add_option("--tau", gparams.weight_threshold, "Edge weight threshold");
    groups->add_option("--k", gparams.k, "Core order for kcore-seeds");
    groups->add_option("--min-size", gparams.min_size);
    groups->add_option("--tiers", tiers, "kernel,circumjacent,weak")->delimiter(',')->expected(3);
    groups->add_option("-o,--output", groups_out, "Groups JSON");

    // ---- dynamics
    auto* dynamics = app.add_subcommand("dynamics", "Window the history and report society, group and agent change");
    fs::path dyn_input, dyn_dir = ".";
    std::size_t dyn_count = 10;
    std::optional<Timestamp> dyn_width, dyn_step;
    std::vector<std::string> dyn_entities, dyn_measures;
    std::uint64_t dyn_seed = 0;
    CusumParams cusum;
    double dyn_min_stability = 0.3;
    dynamics->add_option("-i,--input", dyn_input, "Interaction CSV")->required();
    dynamics->add_option("--windows", dyn_count, "Number of equal windows");
    dynamics->add_option("--width", dyn_width, "Window width in seconds");
    dynamics->add_option("--step", dyn_step, "Window step in seconds");
    dynamics->add_option("-e,--entity", dyn_entities, "Entities to report on");
    dynamics->add_option("-m,--measures", dyn_measures)->delimiter(',');
    dynamics->add_option("--cusum-k", cusum.k, "CUSUM reference value (sigma units)");
    dynamics->add_option("--cusum-h", cusum.h, "CUSUM decision interval (sigma units)");
    dynamics->add_option("--baseline-windows", cusum.baseline_windows);
    dynamics->add_option("--min-stability", dyn_min_stability);
    dynamics->add_option("--seed", dyn_seed);
    dynamics->add_option("-o,--output-dir", dyn_dir);

    // ---- blogs
    auto* blogs = app.add_subcommand("blogs", "Blog corpus indexing and similarity");
    blogs->require_subcommand(1);
    auto* blogs_index = blogs->add_subcommand("index", "Build a TF-IDF index");
    fs::path posts_path, comments_path;
    std::string index_out = "-";
    blogs_index->add_option("--posts", posts_path)->required();
    blogs_index->add_option("--comments", comments_path)->required();
    blogs_index->add_option("-o,--output", index_out, "Index JSON");
    auto* blogs_similar = blogs->add_subcommand("similar", "Rank documents by cosine similarity");
    fs::path index_path;
    std::string query_doc;
    std::size_t top_k = 10;
    blogs_similar->add_option("--index", index_path)->required();
    blogs_similar->add_option("--doc", query_doc, "Document id, e.g. post/17")->required();
    blogs_similar->add_option("-k,--top", top_k);

    // ---- export
    auto* exp = app.add_subcommand("export", "Export a snapshot as GraphML, DOT or edge CSV");
    fs::path exp_input, exp_roles, exp_matrix;
    std::optional<Timestamp> exp_from, exp_to;
    std::string exp_format = "graphml", exp_out = "-";
    exp->add_option("-i,--input", exp_input, "Interaction CSV")->required();
    exp->add_option("--from", exp_from);
    exp->add_option("--to", exp_to);
    exp->add_option("--roles", exp_roles, "Role assignment CSV");
    exp->add_option("--matrix", exp_matrix, "Measure matrix CSV");
    exp->add_option("-f,--format", exp_format)->check(CLI::IsMember({"graphml", "dot", "csv"}));
    exp->add_option("-o,--output", exp_out);

    // ---- hist
    auto* hist = app.add_subcommand("hist", "Histogram of a column or of per-node degree/m3");
    fs::path hist_values, hist_graph;
    std::string hist_column, hist_quantity = "m3", hist_bins, hist_out = "-";
    hist->add_option("--values", hist_values, "CSV holding the values");
    hist->add_option("--column", hist_column, "Column in --values");
    hist->add_option("--graph", hist_graph, "Interaction CSV");
    hist->add_option("--quantity", hist_quantity)->check(CLI::IsMember({"degree_in", "degree_out", "m3"}));
    hist->add_option("--bins", hist_bins, "linear:LO:HI:N, log:LO:HI:N or edges:E0,E1,...")->required();
    hist->add_option("-o,--output", hist_out);

    // ---- synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic CDR data set");
    SyntheticCdrParams sparams;
    std::string synth_out = "-", synth_cells;
    synth->add_option("--entities", sparams.entities);
    synth->add_option("--interactions", sparams.interactions);
    synth->add_option("--cells-count", sparams.cells, "Number of cell sites");
    synth->add_option("--days", [&sparams](const std::vector<std::string>& v) {
        sparams.span_seconds = csv::parse_int(v.at(0)) * 86'400;
        return true;
    }, "Time span in days");
    synth->add_option("--reciprocity", sparams.reciprocity);
    synth->add_option("--seed", sparams.seed);
    synth->add_option("-o,--output", synth_out, "CDR CSV");
    synth->add_option("--cells", synth_cells, "Cells CSV");

    // ---- run
    auto* run = app.add_subcommand("run", "Run the whole pipeline from a config file");
    fs::path run_config;
    std::vector<std::string> overrides;
    std::string run_output_dir;
    run->add_option("-c,--config", run_config, "INI config")->required()->check(CLI::ExistingFile);
    run->add_option("--set", overrides, "Override, section.key=value");
    run->add_option("-o,--output-dir", run_output_dir, "Overrides SOCNET_OUTPUT_DIR and the config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_code::ok : exit_code::validation;
    }

    try {
        if (*ingest) {
            InteractionStore store;
            IngestReport report;
            std::vector<Interaction> records;
            if (ingest_type == "generic") {
                records = read_interactions_csv(ingest_input, report);
            } else if (ingest_type == "telecom") {
                auto data = parse_cdr(ingest_input, ingest_cells.empty() ? std::nullopt : std::optional(ingest_cells));
                report.rejected = data.rejected;
                report.diagnostics = data.diagnostics;
                records = to_interactions(data.records);
                if (!ingest_profiles.empty()) {
                    std::ostringstream s;
                    write_profiles_csv(s, telecom_profiles(data.records, data.cells));
                    emit(ingest_profiles, s.str());
                }
                if (data.geometry_unknown) std::cerr << data.geometry_unknown << " records with unknown cell geometry\n";
            } else {
                if (ingest_comments.empty()) throw ValidationError("--comments is required for blog input");
                auto dump = parse_blog_dump(ingest_input, ingest_comments);
                report.rejected = dump.rejected;
                report.diagnostics = dump.diagnostics;
                records = derive_interactions(dump.posts, dump.comments);
                if (dump.dangling_comments) std::cerr << dump.dangling_comments << " comments on unknown posts skipped\n";
            }
            const auto added = store.add_interactions(records, ingest_dedup);
            print_diagnostics(report.diagnostics);
            print_diagnostics(added.diagnostics);
            std::cerr << "accepted " << added.accepted << ", rejected " << report.rejected + added.rejected
                      << ", duplicates dropped " << added.duplicates_dropped << "\n";
            std::ostringstream s;
            write_interactions_csv(s, store.records());
            emit(ingest_out, s.str());
        } else if (*measure) {
            solver.validate();
            const auto g = load_snapshot(measure_input, measure_from, measure_to);
            const auto ids = parse_measure_list(measure_names);
            const auto m = measure_matrix(g, ids, MeasureOptions{solver, bopts});
            std::ostringstream s;
            write_measure_matrix_csv(s, m);
            emit(measure_out, s.str());
            if (!measure_report.empty()) emit(measure_report, measure_report_json(m).dump(2) + "\n");
            for (MeasureId id : m.measures()) {
                if (!m.converged(id)) std::cerr << "warning: " << to_string(id) << " did not converge\n";
            }
        } else if (*roles) {
            role_opts.rule = roles_rule == "strict" ? MatchRule::Strict : MatchRule::Linear;
            const auto set = load_role_templates_source(roles_templates);
            const auto result = assign_roles(read_matrix(roles_matrix), set, role_opts);
            std::ostringstream s;
            write_roles_csv(s, result);
            emit(roles_out, s.str());
            if (!roles_json.empty()) emit(roles_json, roles_to_json(result).dump(2) + "\n");
        } else if (*groups) {
            gparams.method = parse_extraction_method(groups_method);
            if (!tiers.empty()) gparams.tiers = TierThresholds{tiers[0], tiers[1], tiers[2]};
            gparams.validate();
            const auto g = load_snapshot(groups_input, groups_from, groups_to);
            std::optional<MeasureMatrix> matrix;
            if (!groups_matrix.empty()) matrix = read_matrix(groups_matrix);
            const auto found = extract_groups(g, gparams, matrix ? &*matrix : nullptr);
            emit(groups_out, groups_to_json(found, g).dump(2) + "\n");
        } else if (*dynamics) {
            cusum.validate();
            PipelineConfig cfg;
            cfg.window_count = dyn_count;
            cfg.window_width = dyn_width;
            cfg.window_step = dyn_step;
            const auto store = load_store(dyn_input);
            const auto windows = pipeline_windows(store, cfg);
            if (windows.size() < 2) throw ValidationError("dynamics needs at least two windows");
            const auto ids = parse_measure_list(dyn_measures);
            std::vector<Snapshot> snaps;
            std::vector<MeasureMatrix> matrices;
            std::vector<std::vector<RoleAssignment>> assignments;
            std::vector<std::vector<Group>> found;
            const auto table = RoleSet::table1();
            for (std::size_t w = 0; w < windows.size(); ++w) {
                snaps.push_back(store.snapshot(windows[w]));
                BetweennessOptions b;
                b.seed = dyn_seed + w;
                matrices.push_back(measure_matrix(snaps.back(), ids, MeasureOptions{SolverParams{}, b}));
                assignments.push_back(assign_roles(matrices.back(), table));
                found.push_back(extract_groups(snaps.back(), ExtractionParams{}, &matrices.back()));
            }
            const auto traces = build_group_traces(found, dyn_min_stability);
            io::atomic_write(dyn_dir / "society.json", to_json(society_report(snaps, matrices)).dump(2) + "\n");
            nlohmann::json garr = nlohmann::json::array();
            for (const auto& t : traces) garr.push_back(to_json(group_report(t, snaps, found)));
            io::atomic_write(dyn_dir / "groups.json", garr.dump(2) + "\n");
            {
                std::ostringstream s;
                write_traces_csv(s, traces);
                io::atomic_write(dyn_dir / "traces.csv", s.str());
            }
            nlohmann::json aarr = nlohmann::json::array();
            std::ostringstream series_csv;
            write_series_csv_header(series_csv);
            for (const auto& e : dyn_entities) {
                aarr.push_back(to_json(agent_report(e, snaps, matrices, assignments, cusum)));
                for (MeasureId id : ids) {
                    const auto series = measure_series(matrices, e, id, cusum.baseline_windows);
                    if (series.observed() > cusum.baseline_windows) {
                        const auto trace = cusum_trace(series, cusum);
                        write_series_csv(series_csv, series, &trace);
                    } else {
                        write_series_csv(series_csv, series, nullptr);
                    }
                }
            }
            io::atomic_write(dyn_dir / "agents.json", aarr.dump(2) + "\n");
            io::atomic_write(dyn_dir / "series.csv", series_csv.str());
        } else if (*blogs_index) {
            const auto dump = parse_blog_dump(posts_path, comments_path);
            print_diagnostics(dump.diagnostics);
            emit(index_out, TfIdfIndex::build(blog_documents(dump)).to_json().dump() + "\n");
        } else if (*blogs_similar) {
            const auto index = TfIdfIndex::from_json(nlohmann::json::parse(io::read_file(index_path)));
            std::ostringstream s;
            csv::write_row(s, {"doc_id", "similarity"});
            for (const auto& d : index.similar(query_doc, top_k)) {
                csv::write_row(s, {d.doc_id, csv::format_double(d.similarity)});
            }
            std::cout << s.str();
        } else if (*exp) {
            const auto g = load_snapshot(exp_input, exp_from, exp_to);
            std::optional<std::map<EntityId, std::string>> role_map;
            std::optional<MeasureMatrix> matrix;
            if (!exp_roles.empty()) {
                auto in = open_input(exp_roles);
                role_map = read_roles_csv(in);
            }
            if (!exp_matrix.empty()) matrix = read_matrix(exp_matrix);
            std::ostringstream s;
            export_graph(s, g, parse_graph_format(exp_format),
                         NodeAttributes{role_map ? &*role_map : nullptr, matrix ? &*matrix : nullptr});
            emit(exp_out, s.str());
        } else if (*hist) {
            const auto bins = BinSpec::parse(hist_bins);
            std::vector<double> values;
            if (!hist_values.empty()) {
                if (hist_column.empty()) throw ValidationError("--column is required with --values");
                auto in = open_input(hist_values);
                csv::Reader reader(in);
                std::vector<std::string> row;
                if (!reader.next(row)) throw ValidationError("values file is empty");
                const auto col = csv::Header(row).require(hist_column);
                while (reader.next(row)) {
                    if (row.size() == 1 && row[0].empty()) continue;
                    values.push_back(csv::parse_double(row.at(col)));
                }
            } else if (!hist_graph.empty()) {
                const auto g = load_store(hist_graph).full_snapshot();
                const auto din = degree_in(g);
                const auto dout = degree_out(g);
                for (std::size_t i = 0; i < din.size(); ++i) {
                    values.push_back(hist_quantity == "degree_in"    ? din[i]
                                     : hist_quantity == "degree_out" ? dout[i]
                                                                     : m3(din[i], dout[i]));
                }
            } else {
                throw ValidationError("give --values with --column, or --graph");
            }
            const auto h = emit_histogram(values, bins);
            std::ostringstream s;
            write_histogram_csv(s, h);
            emit(hist_out, s.str());
            std::cerr << "underflow " << h.underflow << ", overflow " << h.overflow << ", total " << h.total() << "\n";
        } else if (*synth) {
            const auto data = generate_cdr(sparams);
            std::ostringstream s;
            write_cdr_csv(s, data.records);
            emit(synth_out, s.str());
            if (!synth_cells.empty()) {
                std::ostringstream c;
                write_cells_csv(c, data.cells);
                emit(synth_cells, c.str());
            }
        } else if (*run) {
            auto cfg = load_pipeline_config(run_config);
            for (const auto& o : overrides) apply_override(cfg, o);
            if (!run_output_dir.empty()) {
                cfg.output_dir = run_output_dir;
            } else if (const char* env = std::getenv("SOCNET_OUTPUT_DIR"); env && *env) {
                cfg.output_dir = env;
            }
            const auto result = run_pipeline(cfg);
            if (result.exit_code != exit_code::ok) {
                std::cerr << "socnet: " << result.status << " at stage " << result.failed_stage.value_or("?") << ": "
                          << result.error << "\n";
            } else {
                std::cerr << "wrote " << result.artifacts.size() << " artifacts to " << cfg.output_dir.string() << "\n";
            }
            return result.exit_code;
        }
    } catch (const ValidationError& e) {
        std::cerr << "socnet: " << e.what() << "\n";
        return exit_code::validation;
    } catch (const NotFoundError& e) {
        std::cerr << "socnet: " << e.what() << "\n";
        return exit_code::validation;
    } catch (const std::exception& e) {
        std::cerr << "socnet: " << e.what() << "\n";
        return exit_code::runtime;
    }
    return exit_code::ok;
}

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "socnet/export.hpp"
#include "socnet/histogram.hpp"
#include "socnet/io.hpp"
#include "socnet/pipeline.hpp"

using namespace socnet;
namespace fs = std::filesystem;

namespace {

const fs::path kData = SOCNET_TEST_DATA_DIR;

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("socnet-test-" + name);
    fs::remove_all(dir);
    return dir;
}

PipelineConfig toy_config(const fs::path& out) {
    auto c = load_pipeline_config(kData / "toy.ini");
    c.output_dir = out;
    return c;
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(io::read_file(p)); }

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SOCNET_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Histogram, Examples) {
    const std::vector<double> v{1, 2, 3};
    auto h = emit_histogram(v, BinSpec::from_edges({0, 2, 4}));
    EXPECT_EQ(h.counts, (std::vector<std::size_t>{1, 2}));
    EXPECT_EQ(h.total(), 3u);

    std::ostringstream csv;
    write_histogram_csv(csv, h);
    EXPECT_EQ(csv.str(), "bin_low,bin_high,count\n0,2,1\n2,4,2\n");

    const std::vector<double> edge{2.0};
    EXPECT_EQ(emit_histogram(edge, BinSpec::from_edges({0, 2, 4})).counts, (std::vector<std::size_t>{0, 1}));
    const std::vector<double> outside{-1, 4, 9};
    auto o = emit_histogram(outside, BinSpec::from_edges({0, 2, 4}));
    EXPECT_EQ(o.underflow, 1u);
    EXPECT_EQ(o.overflow, 2u);
    EXPECT_THROW(emit_histogram(std::vector<double>{}, BinSpec::linear(0, 1, 2)), ValidationError);
}

TEST(Histogram, LogBinsConserve) {
    auto bins = BinSpec::logarithmic(1, 1e5, 10);
    for (std::size_t i = 1; i < bins.edges().size(); ++i) EXPECT_GT(bins.edges()[i], bins.edges()[i - 1]);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> exponent(0.0, 5.0);
    std::vector<double> values(5000);
    for (auto& x : values) x = std::pow(10.0, exponent(rng));
    EXPECT_EQ(emit_histogram(values, bins).total(), values.size());
}

TEST(Histogram, ParseSpec) {
    EXPECT_EQ(BinSpec::parse("linear:0:10:5").edges().size(), 6u);
    EXPECT_EQ(BinSpec::parse("edges:0,1,5").edges(), (std::vector<double>{0, 1, 5}));
    EXPECT_NEAR(BinSpec::parse("log:1:1000:3").edges()[1], 10.0, 1e-9);
    EXPECT_THROW(BinSpec::parse("cubic:0:1:2"), ValidationError);
    EXPECT_THROW(BinSpec::from_edges({0, 0, 1}), ValidationError);
}

TEST(Export, DotHasOneStatementPerNode) {
    auto g = Snapshot::from_named_edges(std::vector<std::tuple<EntityId, EntityId, std::uint32_t>>{
        {"a", "b", 2}, {"b", "c", 1}});
    std::ostringstream out;
    export_graph(out, g, GraphFormat::Dot);
    const auto text = out.str();
    std::size_t statements = 0;
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);) {
        if (line.find("->") == std::string::npos && line.find(";") != std::string::npos &&
            line.find('"') != std::string::npos)
            ++statements;
    }
    EXPECT_EQ(statements, 3u);
    EXPECT_NE(text.find("label=\"2\""), std::string::npos);
}

TEST(Export, GraphMLRoundTrip) {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> node(0, 14), weight(1, 9);
    std::vector<std::tuple<EntityId, EntityId, std::uint32_t>> edges;
    for (int i = 0; i < 40; ++i) {
        edges.emplace_back("v" + std::to_string(node(rng)), "v" + std::to_string(node(rng)),
                           static_cast<std::uint32_t>(weight(rng)));
    }
    auto g = Snapshot::from_named_edges(edges);
    auto m = measure_matrix(g, kAllMeasures);
    std::map<EntityId, std::string> roles{{"v1", "Organiser"}};
    std::stringstream doc;
    export_graph(doc, g, GraphFormat::GraphML, {&roles, &m});
    auto back = import_graphml(doc);
    EXPECT_EQ(back.node_count(), g.node_count());
    auto key = [](const Snapshot& s) {
        std::multiset<std::tuple<EntityId, EntityId, std::uint32_t>> out;
        for (const auto& e : s.edges()) out.emplace(s.node(e.src), s.node(e.dst), e.weight);
        return out;
    };
    EXPECT_EQ(key(back), key(g));

    std::stringstream csv;
    export_graph(csv, g, GraphFormat::EdgeCsv);
    EXPECT_EQ(key(import_edge_csv(csv)), key(g));
}

TEST(Export, EmptyAndUnknown) {
    Snapshot empty;
    std::stringstream doc;
    export_graph(doc, empty, GraphFormat::GraphML);
    EXPECT_EQ(import_graphml(doc).node_count(), 0u);
    EXPECT_THROW(parse_graph_format("svg"), ValidationError);
    EXPECT_EQ(parse_graph_format("dot"), GraphFormat::Dot);
}

TEST(Pipeline, ToySmoke) {
    const auto out = scratch("smoke");
    auto r = run_pipeline(toy_config(out));
    ASSERT_EQ(r.exit_code, exit_code::ok) << r.error;
    EXPECT_EQ(r.status, "ok");
    auto manifest = read_json(out / "manifest.json");
    EXPECT_EQ(manifest["status"], "ok");
    ASSERT_FALSE(manifest["artifacts"].empty());
    for (const auto& a : manifest["artifacts"]) {
        const fs::path p = out / a["path"].get<std::string>();
        ASSERT_TRUE(fs::exists(p)) << p;
        EXPECT_EQ(io::sha256_file(p), a["sha256"].get<std::string>()) << p;
    }
    for (const char* name : {"measures/w00.csv", "roles/w00.csv", "groups/w00.json", "traces.csv", "series.csv",
                             "reports/society.json", "histograms/m3.csv", "profiles.csv"}) {
        EXPECT_TRUE(fs::exists(out / name)) << name;
    }
    EXPECT_EQ(manifest["inputs"].size(), 2u);
}

TEST(Pipeline, InvertedTiersFailValidation) {
    const auto out = scratch("inverted");
    auto c = toy_config(out);
    c.groups.tiers.kernel = 0.1;
    c.groups.tiers.weak = 0.5;
    auto r = run_pipeline(c);
    EXPECT_EQ(r.exit_code, exit_code::validation);
    EXPECT_EQ(r.failed_stage, "validate");
    EXPECT_TRUE(r.artifacts.empty());
    EXPECT_FALSE(fs::exists(out / "measures"));
    EXPECT_EQ(read_json(out / "manifest.json")["status"], "failed");
}

TEST(Pipeline, MissingSeedIsRejected) {
    auto c = toy_config(scratch("noseed"));
    c.seed.reset();
    EXPECT_THROW(c.validate(), ValidationError);
}

TEST(Pipeline, Deterministic) {
    const auto da = scratch("det-a");
    const auto db = scratch("det-b");
    auto a = run_pipeline(toy_config(da));
    auto b = run_pipeline(toy_config(db));
    ASSERT_EQ(a.artifacts.size(), b.artifacts.size());
    for (std::size_t i = 0; i < a.artifacts.size(); ++i) {
        EXPECT_EQ(a.artifacts[i].path, b.artifacts[i].path);
        EXPECT_EQ(a.artifacts[i].sha256, b.artifacts[i].sha256) << a.artifacts[i].path;
    }
    EXPECT_EQ(io::read_file(da / "manifest.json"), io::read_file(db / "manifest.json"));
}

TEST(Config, OverridesAndUnknownKeys) {
    auto c = toy_config("x");
    apply_override(c, "window.count=5");
    apply_override(c, "dynamics.h=4.5");
    EXPECT_EQ(c.window_count, 5u);
    EXPECT_DOUBLE_EQ(c.cusum.h, 4.5);
    EXPECT_THROW(apply_override(c, "window.colour=red"), ValidationError);
    EXPECT_THROW(apply_override(c, "no-equals-sign"), ValidationError);
    std::istringstream bad("[run]\nseed = 1\nspeed = 3\n");
    try {
        parse_pipeline_config(bad);
        FAIL() << "unknown key accepted";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("speed"), std::string::npos);
    }
    EXPECT_FALSE(config_entries(c).contains("run.output_dir"));
}

TEST(Cli, ExitCodes) {
    const auto out = scratch("cli");
    EXPECT_EQ(run_cli("run -c " + (kData / "toy.ini").string() + " -o " + out.string()), 0);
    EXPECT_TRUE(fs::exists(out / "manifest.json"));
    EXPECT_EQ(run_cli("run -c " + (kData / "toy.ini").string() + " --set groups.kernel=0.01 -o " + out.string()), 1);
    EXPECT_EQ(run_cli("run -c /nonexistent.ini"), 1);
    EXPECT_EQ(run_cli("frobnicate"), 1);
    EXPECT_EQ(run_cli("hist --values " + (kData / "toy_cells.csv").string() + " --column lat --bins linear:49:51:4 -o " +
                      (out / "h.csv").string()),
              0);
    EXPECT_EQ(io::read_file(out / "h.csv").substr(0, 22), "bin_low,bin_high,count");
}

TEST(Cli, OutputDirFromEnvironment) {
    const auto out = scratch("env");
    ::setenv("SOCNET_OUTPUT_DIR", out.c_str(), 1);
    const int code = run_cli("run -c " + (kData / "toy.ini").string());
    ::unsetenv("SOCNET_OUTPUT_DIR");
    EXPECT_EQ(code, 0);
    EXPECT_TRUE(fs::exists(out / "manifest.json"));
}

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "socnet/measures.hpp"

using namespace socnet;

namespace {

using Edges = std::vector<std::tuple<EntityId, EntityId, std::uint32_t>>;

Snapshot graph(const Edges& edges, std::vector<EntityId> extra = {}) { return Snapshot::from_named_edges(edges, extra); }

double at(const Snapshot& g, const std::vector<double>& v, const char* id) { return v.at(*g.index_of(id)); }

}  // namespace

TEST(Degree, StarCountsDistinctNeighbours) {
    auto g = graph({{"b", "a", 1}, {"c", "a", 1}, {"d", "a", 1}});
    EXPECT_EQ(at(g, degree_in(g), "a"), 3.0);
    EXPECT_EQ(at(g, degree_out(g), "a"), 0.0);
    auto heavy = graph({{"a", "b", 5}});
    EXPECT_EQ(at(heavy, degree_out(heavy), "a"), 1.0);
    EXPECT_TRUE(degree_in(Snapshot{}).empty());
}

TEST(Betweenness, PathAndCycle) {
    auto path = graph({{"a", "b", 1}, {"b", "c", 1}});
    EXPECT_DOUBLE_EQ(at(path, betweenness(path), "b"), 1.0);
    EXPECT_DOUBLE_EQ(at(path, betweenness(path), "a"), 0.0);
    auto cycle = graph({{"a", "b", 1}, {"b", "c", 1}, {"c", "d", 1}, {"d", "a", 1}});
    // Each node is interior to one 2-hop and two 3-hop shortest paths.
    for (double v : betweenness(cycle)) EXPECT_DOUBLE_EQ(v, 3.0);
}

TEST(Betweenness, MatchesEnumerationOracle) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        auto d = oracle::random_digraph(2 + rng() % 6, 0.35, 3, rng);
        auto expect = oracle::betweenness_by_enumeration(d);
        auto got = betweenness(oracle::to_snapshot(d));
        for (std::size_t v = 0; v < d.n; ++v) EXPECT_NEAR(got[v], expect[v], 1e-9);
    }
}

TEST(Betweenness, PivotSamplingIsSeededAndUnbiased) {
    Edges edges;
    const int n = 40;
    for (int i = 0; i < n; ++i) edges.emplace_back("v" + std::to_string(100 + i), "v" + std::to_string(100 + (i + 1) % n), 1);
    auto g = graph(edges);
    BetweennessOptions opts;
    opts.exact_limit = 10;
    opts.pivots = 8;
    opts.seed = 5;
    EXPECT_EQ(betweenness(g, opts), betweenness(g, opts));

    std::vector<double> mean(n, 0.0);
    const int seeds = 400;
    for (int s = 0; s < seeds; ++s) {
        opts.seed = static_cast<std::uint64_t>(s);
        auto est = betweenness(g, opts);
        for (int v = 0; v < n; ++v) mean[v] += est[v] / seeds;
    }
    const double exact = (n - 1.0) * (n - 2.0) / 2.0;
    for (double v : betweenness(g)) EXPECT_DOUBLE_EQ(v, exact);
    for (double m : mean) EXPECT_NEAR(m, exact, 0.06 * exact);

    opts.pivots = n;
    EXPECT_EQ(betweenness(g, opts), betweenness(g));
}

TEST(Barycenter, PathConventions) {
    auto g = graph({{"a", "b", 1}, {"b", "c", 1}});
    auto bc = barycenter(g);
    EXPECT_DOUBLE_EQ(at(g, bc, "a"), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(at(g, bc, "c"), 1.0 / 6.0);
    auto single = graph({}, {"x"});
    EXPECT_EQ(barycenter(single).at(0), 0.0);
}

TEST(Hits, EdgelessIsZeroAndConverged) {
    auto g = graph({}, {"a", "b", "c"});
    auto r = hits(g);
    EXPECT_TRUE(r.converged);
    for (double v : r.values.hubness) EXPECT_EQ(v, 0.0);
    for (double v : r.values.authoritativeness) EXPECT_EQ(v, 0.0);
}

TEST(Hits, CompleteBipartiteClosedForm) {
    auto g = graph({{"b1", "a1", 1}, {"b2", "a1", 1}});
    auto r = hits(g);
    ASSERT_TRUE(r.converged);
    EXPECT_NEAR(at(g, r.values.authoritativeness, "a1"), 1.0, 1e-9);
    EXPECT_NEAR(at(g, r.values.hubness, "b1"), 1.0 / std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(at(g, r.values.hubness, "b2"), 1.0 / std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(at(g, r.values.hubness, "a1"), 0.0, 1e-12);
}

TEST(Hits, NonConvergenceIsFlagged) {
    // Two components with equal dominant eigenvalue make the limit depend on the start.
    auto g = graph({{"a", "b", 1}, {"b", "c", 1}, {"c", "a", 1}, {"x", "y", 1}, {"y", "z", 1}, {"z", "x", 1}, {"a", "x", 1}});
    SolverParams p;
    p.max_iterations = 1;
    auto r = hits(g, p);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.iterations, 1u);
}

TEST(PageRank, RegularCycleIsUniform) {
    auto g = graph({{"a", "b", 1}, {"b", "c", 1}, {"c", "d", 1}, {"d", "e", 1}, {"e", "a", 1}});
    auto r = pagerank(g);
    for (double v : r.values) EXPECT_NEAR(v, 0.2, 1e-10);
}

TEST(PageRank, TwoNodesAndIsolated) {
    auto g = graph({{"a", "b", 1}});
    auto r = pagerank(g);
    EXPECT_GT(at(g, r.values, "b"), at(g, r.values, "a"));
    oracle::Digraph d(2);
    d.w[0][1] = 1;
    auto expect = oracle::pagerank_dense(d, 0.85);
    EXPECT_NEAR(r.values[0], expect[0], 1e-8);
    EXPECT_NEAR(r.values[1], expect[1], 1e-8);

    auto iso = graph({}, {"a", "b", "c", "d"});
    for (double v : pagerank(iso).values) EXPECT_NEAR(v, 0.25, 1e-12);
}

TEST(PageRank, MatchesDenseOracleAndSumsToOne) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 60; ++trial) {
        auto d = oracle::random_digraph(1 + rng() % 7, 0.3, 4, rng);
        auto got = pagerank(oracle::to_snapshot(d));
        auto expect = oracle::pagerank_dense(d, 0.85);
        EXPECT_NEAR(std::accumulate(got.values.begin(), got.values.end(), 0.0), 1.0, 1e-9);
        for (std::size_t v = 0; v < d.n; ++v) EXPECT_NEAR(got.values[v], expect[v], 1e-8);
    }
}

TEST(SolverParams, Validation) {
    SolverParams p;
    p.damping = 1.0;
    EXPECT_THROW(p.validate(), ValidationError);
    p = {};
    p.tolerance = 0;
    EXPECT_THROW(p.validate(), ValidationError);
    p = {};
    p.max_iterations = 0;
    EXPECT_THROW(p.validate(), ValidationError);
}

TEST(Markov, TwoAndThreeCycles) {
    auto two = graph({{"a", "b", 1}, {"b", "a", 1}});
    for (double v : markov_centrality(two)) EXPECT_NEAR(v, 2.0, 1e-12);
    auto three = graph({{"a", "b", 1}, {"b", "c", 1}, {"c", "a", 1}});
    for (double v : markov_centrality(three)) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Markov, OutsideLargestComponentIsZero) {
    auto g = graph({{"a", "b", 1}, {"b", "a", 1}, {"b", "c", 1}, {"x", "y", 1}});
    auto mc = markov_centrality(g);
    EXPECT_GT(at(g, mc, "a"), 0.0);
    EXPECT_EQ(at(g, mc, "c"), 0.0);
    EXPECT_EQ(at(g, mc, "x"), 0.0);
    auto dag = graph({{"a", "b", 1}, {"b", "c", 1}});
    for (double v : markov_centrality(dag)) EXPECT_EQ(v, 0.0);
}

TEST(Markov, MatchesLinearSolveOracle) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        auto d = oracle::random_digraph(2 + rng() % 6, 0.4, 5, rng);
        auto got = markov_centrality(oracle::to_snapshot(d));
        auto expect = oracle::markov_by_linear_solve(d);
        for (std::size_t v = 0; v < d.n; ++v) EXPECT_NEAR(got[v], expect[v], 1e-8);
    }
}

TEST(Markov, LargestComponentMatchesClosureOracle) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 100; ++trial) {
        auto d = oracle::random_digraph(1 + rng() % 8, 0.25, 1, rng);
        auto got = largest_strongly_connected_component(oracle::to_snapshot(d));
        auto expect = oracle::largest_scc_by_closure(d);
        ASSERT_EQ(got.size(), expect.size());
        for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i], expect[i]);
    }
}

TEST(ScaleToBands, Examples) {
    auto s = scale_to_bands(std::vector<double>{1, 2, 3, 4});
    EXPECT_DOUBLE_EQ(s[0], 1.25);
    EXPECT_DOUBLE_EQ(s[3], 8.75);
    for (double v : scale_to_bands(std::vector<double>{7, 7, 7})) EXPECT_DOUBLE_EQ(v, 5.0);
    auto t = scale_to_bands(std::vector<double>{5, 5, 9});
    EXPECT_NEAR(t[0], 10.0 / 3.0, 1e-12);
    EXPECT_NEAR(t[2], 25.0 / 3.0, 1e-12);
}

TEST(ScaleToBands, MonotoneAndInvariantUnderIncreasingTransform) {
    std::mt19937_64 rng(15);
    std::uniform_int_distribution<int> value(0, 20);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> raw(1 + rng() % 40);
        for (auto& x : raw) x = value(rng);
        auto s = scale_to_bands(raw);
        std::vector<double> warped(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) warped[i] = std::exp(raw[i] / 3.0) + 7.0;
        EXPECT_EQ(scale_to_bands(warped), s);
        for (std::size_t i = 0; i < raw.size(); ++i) {
            EXPECT_GE(s[i], 0.0);
            EXPECT_LT(s[i], 10.0);
            for (std::size_t j = 0; j < raw.size(); ++j) {
                if (raw[i] < raw[j]) {
                    EXPECT_LT(s[i], s[j]);
                } else if (raw[i] == raw[j]) {
                    EXPECT_EQ(s[i], s[j]);
                }
            }
        }
    }
}

TEST(MeasureMatrix, StarDegreeInOnly) {
    auto g = graph({{"b", "a", 1}, {"c", "a", 1}, {"d", "a", 1}});
    std::vector<MeasureId> ids{MeasureId::DegreeIn};
    auto m = measure_matrix(g, ids);
    EXPECT_EQ(m.measures().size(), 1u);
    EXPECT_EQ(m.raw(MeasureId::DegreeIn), (std::vector<double>{3, 0, 0, 0}));
    EXPECT_THROW(m.raw(MeasureId::PageRank), NotFoundError);
}

TEST(MeasureMatrix, AllMeasuresOnEmptyGraph) {
    auto m = measure_matrix(Snapshot{}, kAllMeasures);
    EXPECT_EQ(m.measures().size(), 8u);
    for (MeasureId id : kAllMeasures) EXPECT_TRUE(m.raw(id).empty());
}

TEST(MeasureMatrix, PermutationEquivariance) {
    std::mt19937_64 rng(16);
    auto d = oracle::random_strongly_connected(7, 0.3, 3, rng);
    // Relabel by reversing names: node i becomes 6 - i.
    oracle::Digraph r(d.n);
    for (std::size_t u = 0; u < d.n; ++u) {
        for (std::size_t v = 0; v < d.n; ++v) r.w[d.n - 1 - u][d.n - 1 - v] = d.w[u][v];
    }
    auto m1 = measure_matrix(oracle::to_snapshot(d), kAllMeasures);
    auto m2 = measure_matrix(oracle::to_snapshot(r), kAllMeasures);
    for (MeasureId id : kAllMeasures) {
        for (std::size_t v = 0; v < d.n; ++v) {
            EXPECT_NEAR(m1.raw(id)[v], m2.raw(id)[d.n - 1 - v], 1e-9) << to_string(id);
            EXPECT_EQ(m1.scaled(id)[v], m2.scaled(id)[d.n - 1 - v]) << to_string(id);
        }
    }
}

TEST(MeasureId, ParsesNamesAndRejectsUnknown) {
    EXPECT_EQ(parse_measure_id("PageRank"), MeasureId::PageRank);
    EXPECT_EQ(parse_measure_id("markov"), MeasureId::MarkovCentrality);
    EXPECT_THROW(parse_measure_id("closeness"), ValidationError);
    for (MeasureId id : kAllMeasures) EXPECT_EQ(parse_measure_id(to_string(id)), id);
}

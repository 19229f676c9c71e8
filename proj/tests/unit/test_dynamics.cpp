#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "socnet/dynamics.hpp"

using namespace socnet;

namespace {

using Edges = std::vector<std::tuple<EntityId, EntityId, std::uint32_t>>;

const MeasureId kDegrees[] = {MeasureId::DegreeIn, MeasureId::DegreeOut};

MeasureMatrix degree_matrix(const Snapshot& g) { return measure_matrix(g, kDegrees); }

CusumParams known_baseline(std::size_t baseline_windows = 1) {
    CusumParams p;
    p.baseline_windows = baseline_windows;
    p.baseline = Baseline{0.0, 1.0};
    return p;
}

Group make_group(std::string id, std::set<EntityId> kernel, std::map<MeasureId, double> summary = {}) {
    Group g;
    g.id = std::move(id);
    g.core = kernel;
    for (const auto& e : kernel) {
        g.membership[e] = 1.0;
        g.tiers[e] = Tier::Kernel;
    }
    g.strategy.measure_summary = std::move(summary);
    return g;
}

}  // namespace

TEST(MeasureSeries, ConstantBaselineIsFloored) {
    auto s = make_series("x", "DegreeIn", {2, 2, 2, 2, 2}, 5);
    EXPECT_EQ(s.points.size(), 5u);
    EXPECT_DOUBLE_EQ(s.baseline.mean, 2.0);
    EXPECT_DOUBLE_EQ(s.baseline.stddev, kSigmaFloor);
}

TEST(MeasureSeries, AbsentWindowIsAGap) {
    Edges with_x{{"x", "y", 1}};
    Edges without_x{{"y", "z", 1}};
    std::vector<MeasureMatrix> ms;
    for (int w = 0; w < 5; ++w) ms.push_back(degree_matrix(Snapshot::from_named_edges(w == 3 ? without_x : with_x)));
    auto s = measure_series(ms, "x", MeasureId::DegreeOut, 2);
    ASSERT_EQ(s.points.size(), 5u);
    EXPECT_FALSE(s.points[3].value.has_value());
    EXPECT_EQ(s.observed(), 4u);
    EXPECT_DOUBLE_EQ(*s.points[4].value, 1.0);
    EXPECT_THROW(measure_series(ms, "nobody", MeasureId::DegreeOut), NotFoundError);
}

TEST(Cusum, ConstantSeriesNeverAlarms) {
    auto s = make_series("x", "m", std::vector<double>(30, 4.0), 10);
    CusumParams p;
    EXPECT_TRUE(cusum_detect(s, p).empty());
}

TEST(Cusum, TooShortSeriesThrows) {
    auto s = make_series("x", "m", std::vector<double>(10, 1.0), 10);
    EXPECT_THROW(cusum_detect(s, CusumParams{}), ValidationError);
}

TEST(Cusum, ParamsValidation) {
    CusumParams p;
    p.h = 0;
    EXPECT_THROW(p.validate(), ValidationError);
    p = {};
    p.k = -1;
    EXPECT_THROW(p.validate(), ValidationError);
    p = {};
    p.baseline_windows = 0;
    EXPECT_THROW(p.validate(), ValidationError);
}

TEST(Cusum, StatisticsNonNegativeAndSilentForLargeK) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> v(80);
    for (auto& x : v) x = noise(rng);
    auto s = make_series("x", "m", v, 1);
    auto p = known_baseline();
    auto t = cusum_trace(s, p);
    for (std::size_t i = 1; i < v.size(); ++i) {
        EXPECT_GE(*t.upper[i], 0.0);
        EXPECT_GE(*t.lower[i], 0.0);
    }
    double max_z = 0.0;
    for (double x : v) max_z = std::max(max_z, std::abs(x));
    p.k = max_z;
    t = cusum_trace(s, p);
    EXPECT_TRUE(t.change_points.empty());
    for (std::size_t i = 1; i < v.size(); ++i) {
        EXPECT_EQ(*t.upper[i], 0.0);
        EXPECT_EQ(*t.lower[i], 0.0);
    }
}

TEST(Cusum, RecursionByHand) {
    // z = 3, 3, 3 with k = 0.5: S+ = 2.5, 5.0 (alarm, then reset), 2.5.
    // The trace keeps the value that fired.
    auto s = make_series("x", "m", {0, 3, 3, 3}, 1);
    auto p = known_baseline();
    auto t = cusum_trace(s, p);
    EXPECT_FALSE(t.upper[0].has_value());
    EXPECT_DOUBLE_EQ(*t.upper[1], 2.5);
    EXPECT_DOUBLE_EQ(*t.upper[2], 5.0);
    EXPECT_DOUBLE_EQ(*t.upper[3], 2.5);
    ASSERT_EQ(t.change_points.size(), 1u);
    EXPECT_EQ(t.change_points[0].window, 2u);
    EXPECT_EQ(t.change_points[0].direction, Direction::Up);
    EXPECT_DOUBLE_EQ(t.change_points[0].statistic, 5.0);

    auto down = cusum_detect(make_series("x", "m", {0, -3, -3}, 1), p);
    ASSERT_EQ(down.size(), 1u);
    EXPECT_EQ(down[0].direction, Direction::Down);
    p.two_sided = false;
    EXPECT_TRUE(cusum_detect(make_series("x", "m", {0, -3, -3}, 1), p).empty());
}

TEST(Cusum, GapChangesNoStatistic) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0.5, 1.0);
    std::vector<double> v(40);
    for (auto& x : v) x = noise(rng);
    auto plain = make_series("x", "m", v, 1);
    auto gapped = plain;
    gapped.points.insert(gapped.points.begin() + 20, SeriesPoint{20, std::nullopt});
    for (std::size_t i = 21; i < gapped.points.size(); ++i) gapped.points[i].window = i;

    auto p = known_baseline();
    auto a = cusum_trace(plain, p);
    auto b = cusum_trace(gapped, p);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::size_t j = i < 20 ? i : i + 1;
        EXPECT_EQ(a.upper[i], b.upper[j]);
        EXPECT_EQ(a.lower[i], b.lower[j]);
    }
    EXPECT_FALSE(b.upper[20].has_value());
    ASSERT_EQ(a.change_points.size(), b.change_points.size());
    for (std::size_t i = 0; i < a.change_points.size(); ++i) {
        const auto w = a.change_points[i].window;
        EXPECT_EQ(b.change_points[i].window, w < 20 ? w : w + 1);
    }
}

TEST(Cusum, DetectionDelayNearTheory) {
    // Shift of 2 sigma from the first monitored point; h / (delta - k) = 10 / 3.
    const double expected = 5.0 / 1.5;
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> noise(0.0, 1.0);
    const int trials = 600;
    double total = 0.0;
    int detected = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> v(1, 0.0);
        for (int i = 0; i < 40; ++i) v.push_back(2.0 + noise(rng));
        auto cps = cusum_detect(make_series("x", "m", v, 1), known_baseline());
        auto up = std::find_if(cps.begin(), cps.end(), [](const ChangePoint& c) { return c.direction == Direction::Up; });
        if (up == cps.end()) continue;
        ++detected;
        total += static_cast<double>(up->window);
    }
    ASSERT_EQ(detected, trials);
    const double mean = total / trials;
    EXPECT_GT(mean, 0.5 * expected);
    EXPECT_LT(mean, 1.5 * expected);
}

TEST(SocietyReport, IdenticalWindowsHaveZeroDeltas) {
    auto g = Snapshot::from_named_edges(Edges{{"a", "b", 1}, {"b", "c", 2}});
    auto m = degree_matrix(g);
    auto r = society_report({g, g}, {m, m});
    ASSERT_EQ(r.deltas.size(), 1u);
    EXPECT_EQ(r.deltas[0].nodes, 0);
    EXPECT_EQ(r.deltas[0].edges, 0);
    for (const auto& [id, s] : r.deltas[0].measures) {
        EXPECT_EQ(s.min, 0.0);
        EXPECT_EQ(s.median, 0.0);
        EXPECT_EQ(s.max, 0.0);
        EXPECT_EQ(s.mean, 0.0);
    }
}

TEST(SocietyReport, NodeDeltaAndTopLength) {
    Edges star;
    for (int i = 0; i < 15; ++i) star.emplace_back("hub", "leaf" + std::to_string(i), 1);
    auto g1 = Snapshot::from_named_edges(star);
    auto g2 = Snapshot::from_named_edges(star, std::vector<EntityId>{"loner"});
    auto r = society_report({g1, g2}, {degree_matrix(g1), degree_matrix(g2)});
    EXPECT_EQ(r.deltas[0].nodes, 1);
    for (const auto& w : r.windows) {
        for (const auto& [id, top] : w.top) EXPECT_LE(top.size(), 10u);
    }
    EXPECT_EQ(r.windows[0].top.at(MeasureId::DegreeOut).front().entity, "hub");
    EXPECT_THROW(society_report({g1}, {degree_matrix(g1)}), ValidationError);
}

TEST(AgentReport, StaticEntity) {
    auto g = Snapshot::from_named_edges(Edges{{"a", "b", 1}, {"c", "a", 1}});
    std::vector<Snapshot> ws(4, g);
    std::vector<MeasureMatrix> ms(4, degree_matrix(g));
    std::vector<std::vector<RoleAssignment>> roles(4, {RoleAssignment{"a", "Soldier", 1.0, {}}});
    auto r = agent_report("a", ws, ms, roles, known_baseline());
    ASSERT_EQ(r.neighbor_changes.size(), 3u);
    for (const auto& c : r.neighbor_changes) EXPECT_DOUBLE_EQ(*c.jaccard, 1.0);
    EXPECT_TRUE(r.role_transitions.empty());
    EXPECT_THROW(agent_report("zed", ws, ms, roles, known_baseline()), NotFoundError);
}

TEST(AgentReport, RoleFlipAndNeighbourJaccard) {
    auto g1 = Snapshot::from_named_edges(Edges{{"x", "a", 1}, {"x", "b", 1}});
    auto g2 = Snapshot::from_named_edges(Edges{{"x", "b", 1}, {"c", "x", 1}});
    std::vector<Snapshot> ws{g1, g1, g1, g1, g2, g2};
    std::vector<MeasureMatrix> ms;
    std::vector<std::vector<RoleAssignment>> roles;
    for (std::size_t w = 0; w < ws.size(); ++w) {
        ms.push_back(degree_matrix(ws[w]));
        roles.push_back({RoleAssignment{"x", w < 4 ? "Soldier" : "Organiser", 1.0, {}}});
    }
    auto r = agent_report("x", ws, ms, roles, known_baseline());
    ASSERT_EQ(r.role_transitions.size(), 1u);
    EXPECT_EQ(r.role_transitions[0].from, 3u);
    EXPECT_EQ(r.role_transitions[0].to, 4u);
    EXPECT_EQ(r.role_transitions[0].from_role, "Soldier");
    EXPECT_EQ(r.role_transitions[0].to_role, "Organiser");
    EXPECT_DOUBLE_EQ(*r.neighbor_changes[3].jaccard, 1.0 / 3.0);
    EXPECT_EQ(r.alarms.size(), 2u);
    EXPECT_TRUE(r.alarms[0].evaluated);
}

TEST(GroupReport, UnchangedGroup) {
    auto g = Snapshot::from_named_edges(Edges{{"a", "b", 1}, {"b", "c", 1}, {"c", "a", 1}, {"c", "d", 1}});
    auto grp = make_group("g0", {"a", "b", "c"}, {{MeasureId::DegreeIn, 4}});
    GroupTrace trace{"t0", {{0, "g0", 1.0}, {1, "g0", 1.0}}, false};
    auto r = group_report(trace, {g, g}, {{grp}, {grp}});
    ASSERT_EQ(r.transitions.size(), 1u);
    EXPECT_DOUBLE_EQ(r.transitions[0].stability, 1.0);
    EXPECT_EQ(r.transitions[0].churn.total(), 0u);
    EXPECT_DOUBLE_EQ(r.transitions[0].strategy_drift, 0.0);
    EXPECT_DOUBLE_EQ(r.windows[0].density, 1.0);
    ASSERT_TRUE(r.windows[0].cohesion.has_value());
}

TEST(GroupReport, KernelShiftAndDrift) {
    auto a = make_group("g0", {"a", "b", "c"}, {{MeasureId::DegreeIn, 4}, {MeasureId::PageRank, 6}});
    auto b = make_group("g0", {"b", "c", "d"}, {{MeasureId::DegreeIn, 5}, {MeasureId::PageRank, 6}});
    EXPECT_DOUBLE_EQ(group_stability(a.core, b.core), 0.5);
    auto churn = tier_churn(a, b);
    EXPECT_EQ(churn.entered.at(Tier::Kernel), (std::vector<EntityId>{"d"}));
    EXPECT_EQ(churn.left.at(Tier::Kernel), (std::vector<EntityId>{"a"}));
    EXPECT_EQ(churn.total(), 2u);
    EXPECT_DOUBLE_EQ(strategy_drift(a.strategy, b.strategy), 1.0);
    EXPECT_THROW(group_report(GroupTrace{}, {}, {}), ValidationError);
}

TEST(Reports, JsonIsDeterministic) {
    auto g = Snapshot::from_named_edges(Edges{{"a", "b", 1}, {"b", "c", 2}});
    auto m = degree_matrix(g);
    EXPECT_EQ(to_json(society_report({g, g}, {m, m})).dump(), to_json(society_report({g, g}, {m, m})).dump());
}

#include <gtest/gtest.h>

#include <random>

#include "socnet/groups.hpp"

using namespace socnet;

namespace {

using Edges = std::vector<std::tuple<EntityId, EntityId, std::uint32_t>>;

Snapshot graph(const Edges& edges, std::vector<EntityId> extra = {}) { return Snapshot::from_named_edges(edges, extra); }

Edges triangle(const std::string& a, const std::string& b, const std::string& c, std::uint32_t w) {
    return {{a, b, w}, {b, c, w}, {c, a, w}};
}

}  // namespace

TEST(ExtractGroups, TriangleWithPendant) {
    auto edges = triangle("a", "b", "c", 5);
    edges.emplace_back("d", "a", 1);
    ExtractionParams p;
    p.weight_threshold = 2;
    auto groups = extract_groups(graph(edges), p);
    ASSERT_EQ(groups.size(), 1u);
    EXPECT_EQ(groups[0].core, (std::set<EntityId>{"a", "b", "c"}));
    // d's only edge goes into the core.
    EXPECT_DOUBLE_EQ(groups[0].membership.at("d"), 1.0);
    // a: 5 to b, 5 from c, 1 from d.
    EXPECT_DOUBLE_EQ(groups[0].membership.at("a"), 10.0 / 11.0);
    EXPECT_EQ(groups[0].tier_of("d"), Tier::Kernel);
}

TEST(ExtractGroups, EdgelessAndTwoTriangles) {
    EXPECT_TRUE(extract_groups(graph({}, {"a", "b"}), ExtractionParams{}).empty());
    auto edges = triangle("a", "b", "c", 1);
    auto more = triangle("x", "y", "z", 1);
    edges.insert(edges.end(), more.begin(), more.end());
    auto groups = extract_groups(graph(edges), ExtractionParams{});
    ASSERT_EQ(groups.size(), 2u);
    for (const auto& e : groups[0].core) EXPECT_FALSE(groups[1].core.contains(e));
}

TEST(ExtractGroups, KCoreSeeds) {
    auto edges = triangle("a", "b", "c", 1);
    edges.emplace_back("c", "d", 1);
    ExtractionParams p;
    p.method = ExtractionMethod::KCoreSeeds;
    p.k = 2;
    auto groups = extract_groups(graph(edges), p);
    ASSERT_EQ(groups.size(), 1u);
    EXPECT_EQ(groups[0].core, (std::set<EntityId>{"a", "b", "c"}));
    EXPECT_DOUBLE_EQ(groups[0].membership.at("d"), 1.0);
    p.k = 3;
    EXPECT_TRUE(extract_groups(graph(edges), p).empty());
}

TEST(ExtractGroups, TiersDeriveFromStrengthNotCore) {
    // c sits in the thresholded core but most of its weight leaves the group.
    Edges edges{{"a", "b", 3}, {"b", "c", 3}, {"c", "a", 1}, {"c", "x", 20}};
    ExtractionParams p;
    p.weight_threshold = 1;
    auto g = graph(edges);
    auto groups = extract_groups(g, p);
    ASSERT_EQ(groups.size(), 1u);
    for (const auto& [e, f] : groups[0].membership) {
        EXPECT_GT(f, 0.0);
        EXPECT_EQ(groups[0].tier_of(e), classify_membership(f, p.tiers)) << e;
    }
}

TEST(MembershipStrength, Examples) {
    auto edges = triangle("a", "b", "c", 1);
    edges.emplace_back("d", "a", 1);
    edges.emplace_back("d", "z", 3);
    auto g = graph(edges, {"iso"});
    std::set<EntityId> core{"a", "b", "c"};
    EXPECT_DOUBLE_EQ(membership_strength(g, core, "b"), 1.0);
    EXPECT_DOUBLE_EQ(membership_strength(g, core, "d"), 0.25);
    EXPECT_DOUBLE_EQ(membership_strength(g, core, "iso"), 0.0);
    EXPECT_DOUBLE_EQ(membership_strength(g, core, "missing"), 0.0);
    EXPECT_THROW(membership_strength(g, {}, "a"), ValidationError);
}

TEST(MembershipStrength, InvariantUnderUniformWeightScaling) {
    std::mt19937_64 rng(2);
    Edges e1, e2;
    for (int i = 0; i < 60; ++i) {
        auto u = "n" + std::to_string(rng() % 12), v = "n" + std::to_string(rng() % 12);
        const std::uint32_t w = 1 + rng() % 4;
        e1.emplace_back(u, v, w);
        e2.emplace_back(u, v, 2 * w);
    }
    auto g1 = graph(e1), g2 = graph(e2);
    std::set<EntityId> core{"n1", "n2", "n3", "n4"};
    for (int i = 0; i < 12; ++i) {
        auto id = "n" + std::to_string(i);
        EXPECT_DOUBLE_EQ(membership_strength(g1, core, id), membership_strength(g2, core, id));
    }
    EXPECT_DOUBLE_EQ(link_density(g1, core), link_density(g2, core));
}

TEST(ClassifyMembership, BoundariesAndValidation) {
    EXPECT_EQ(classify_membership(1.0), Tier::Kernel);
    EXPECT_EQ(classify_membership(0.5), Tier::Kernel);
    EXPECT_EQ(classify_membership(0.25), Tier::Circumjacent);
    EXPECT_EQ(classify_membership(0.10), Tier::Weak);
    EXPECT_EQ(classify_membership(0.0999), Tier::NotRelated);
    EXPECT_EQ(classify_membership(0.0), Tier::NotRelated);
    EXPECT_THROW(classify_membership(0.3, TierThresholds{0.2, 0.25, 0.1}), ValidationError);
    EXPECT_THROW(classify_membership(0.3, TierThresholds{0.5, 0.25, 0.0}), ValidationError);
}

TEST(ClassifyMembership, Monotone) {
    for (double f = 0.0; f <= 1.0; f += 0.001) {
        EXPECT_LE(static_cast<int>(classify_membership(f)), static_cast<int>(classify_membership(std::min(1.0, f + 0.01))));
    }
}

TEST(LinkDensity, Examples) {
    EXPECT_DOUBLE_EQ(link_density(graph(triangle("a", "b", "c", 1)), {"a", "b", "c"}), 1.0);
    EXPECT_DOUBLE_EQ(link_density(graph({{"a", "b", 1}, {"c", "b", 4}}), {"a", "b", "c"}), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(link_density(graph({{"a", "x", 1}}, {"b", "c", "d"}), {"a", "b", "c", "d"}), 0.0);
    EXPECT_THROW(link_density(graph({{"a", "b", 1}}), {"a"}), ValidationError);
}

TEST(Cohesion, WorkedExamples) {
    auto isolated = graph(triangle("a", "b", "c", 1), {"d", "e"});
    auto c = group_cohesion(isolated, {"a", "b", "c"});
    EXPECT_TRUE(c.isolated);
    EXPECT_TRUE(std::isinf(c.value));

    auto edges = triangle("a", "b", "c", 1);
    edges.emplace_back("a", "d", 1);
    c = group_cohesion(graph(edges, {"e"}), {"a", "b", "c"});
    EXPECT_FALSE(c.isolated);
    EXPECT_NEAR(c.value, 6.0, 1e-12);

    c = group_cohesion(graph({{"a", "x", 1}, {"y", "b", 1}, {"c", "z", 1}}), {"a", "b", "c"});
    EXPECT_NEAR(c.value, 0.0, 1e-12);

    EXPECT_THROW(group_cohesion(graph(triangle("a", "b", "c", 1)), {"a", "b", "c"}), ValidationError);
    EXPECT_THROW(group_cohesion(isolated, {"a"}), ValidationError);
}

TEST(Stability, JaccardExamples) {
    EXPECT_DOUBLE_EQ(group_stability({"a", "b", "c"}, {"b", "c", "d"}), 0.5);
    EXPECT_DOUBLE_EQ(group_stability({"a", "b"}, {"a", "b"}), 1.0);
    EXPECT_DOUBLE_EQ(group_stability({"a"}, {"b"}), 0.0);
    EXPECT_DOUBLE_EQ(group_stability({}, {"b"}), 0.0);
    EXPECT_THROW(group_stability({}, {}), ValidationError);
}

TEST(MatchGroups, Examples) {
    auto make = [](std::string id, std::set<EntityId> kernel) {
        Group g;
        g.id = std::move(id);
        g.core = kernel;
        for (const auto& e : kernel) {
            g.membership[e] = 1.0;
            g.tiers[e] = Tier::Kernel;
        }
        return g;
    };
    std::vector<Group> t1{make("g0", {"a", "b", "c"}), make("g1", {"x", "y", "z"})};
    auto same = match_groups_across_windows(t1, t1, 0.5);
    ASSERT_EQ(same.size(), 2u);
    for (const auto& m : same) {
        EXPECT_EQ(m.status, TraceStatus::Stable);
        EXPECT_DOUBLE_EQ(m.stability, 1.0);
    }

    auto gone = match_groups_across_windows(t1, {}, 0.5);
    ASSERT_EQ(gone.size(), 2u);
    for (const auto& m : gone) EXPECT_EQ(m.status, TraceStatus::Dissolved);

    std::vector<Group> t2{make("g0", {"a", "b", "d"})};
    auto partial = match_groups_across_windows(t1, t2, 0.4);
    ASSERT_EQ(partial.size(), 2u);
    EXPECT_EQ(*partial[0].previous, 0u);
    EXPECT_EQ(*partial[0].current, 0u);
    EXPECT_DOUBLE_EQ(partial[0].stability, 0.5);
    EXPECT_EQ(partial[1].status, TraceStatus::Dissolved);
    EXPECT_EQ(*partial[1].previous, 1u);

    std::vector<Group> t3{make("g0", {"q", "r", "s"})};
    auto emerged = match_groups_across_windows({}, t3, 0.4);
    ASSERT_EQ(emerged.size(), 1u);
    EXPECT_EQ(emerged[0].status, TraceStatus::Emerged);
}

TEST(GroupTraces, ChainAcrossWindows) {
    auto g1 = graph(triangle("a", "b", "c", 2));
    auto g2 = graph(triangle("a", "b", "c", 3));
    auto e3 = triangle("x", "y", "z", 1);
    auto g3 = graph(e3);
    ExtractionParams p;
    std::vector<std::vector<Group>> per{extract_groups(g1, p), extract_groups(g2, p), extract_groups(g3, p)};
    auto traces = build_group_traces(per, 0.3);
    ASSERT_EQ(traces.size(), 2u);
    EXPECT_EQ(traces[0].points.size(), 2u);
    EXPECT_TRUE(traces[0].dissolved);
    EXPECT_DOUBLE_EQ(traces[0].points[1].stability, 1.0);
    EXPECT_EQ(traces[1].points.front().window, 2u);
}

TEST(Strategy, MeanScaledOverKernelAndThemes) {
    auto edges = triangle("a", "b", "c", 1);
    auto g = graph(edges);
    MeasureMatrix m(std::vector<EntityId>{"a", "b", "c"});
    m.set(MeasureId::DegreeIn, {1, 1, 1}, {4, 6, 5});
    Group grp;
    grp.core = {"a", "b"};
    grp.membership = {{"a", 1.0}, {"b", 1.0}, {"c", 0.2}};
    grp.tiers = {{"a", Tier::Kernel}, {"b", Tier::Kernel}, {"c", Tier::Weak}};
    auto s = infer_strategy(grp, &m, nullptr);
    EXPECT_DOUBLE_EQ(s.measure_summary.at(MeasureId::DegreeIn), 5.0);
    EXPECT_TRUE(s.theme_tags.empty());

    ThemeSource themes{{"a", {"politics election vote"}}, {"b", {"politics tax"}}, {"c", {"football match"}}, {"d", {"cooking pasta"}}};
    s = infer_strategy(grp, &m, &themes);
    EXPECT_NE(std::find(s.theme_tags.begin(), s.theme_tags.end(), "politics"), s.theme_tags.end());
    EXPECT_LE(s.theme_tags.size(), 10u);
}

TEST(KernelOverlaps, CountsSharedKernelMembers) {
    Group a, b;
    a.tiers = {{"x", Tier::Kernel}, {"y", Tier::Kernel}};
    b.tiers = {{"y", Tier::Kernel}, {"z", Tier::Kernel}, {"x", Tier::Weak}};
    auto o = kernel_overlaps({a, b});
    ASSERT_EQ(o.size(), 1u);
    EXPECT_EQ(o[0].shared, 1u);
}

TEST(ExtractionParams, Validation) {
    ExtractionParams p;
    p.weight_threshold = 0;
    EXPECT_THROW(p.validate(), ValidationError);
    p = {};
    p.method = ExtractionMethod::KCoreSeeds;
    p.k = 1;
    EXPECT_THROW(p.validate(), ValidationError);
    EXPECT_THROW(parse_extraction_method("louvain"), ValidationError);
}

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "socnet/roles.hpp"

using namespace socnet;

namespace {

std::map<MeasureId, double> midpoints(const RoleTemplate& t) {
    std::map<MeasureId, double> row;
    for (const auto& [id, band] : t.bands) row[id] = (band.low() + band.high()) / 2.0;
    return row;
}

MeasureMatrix matrix_of(const std::vector<EntityId>& ids, const std::vector<std::map<MeasureId, double>>& rows) {
    MeasureMatrix m(ids);
    for (MeasureId id : kAllMeasures) {
        std::vector<double> v;
        for (const auto& r : rows) v.push_back(r.at(id));
        m.set(id, v, v);
    }
    return m;
}

}  // namespace

TEST(RoleTemplates, BuiltInTable) {
    auto set = RoleSet::table1();
    ASSERT_EQ(set.size(), 4u);
    EXPECT_EQ(set.templates()[0].name, "Organiser");
    EXPECT_EQ(set.at("Organiser").bands.at(MeasureId::Authoritativeness), Band(8, 10));
    EXPECT_EQ(set.at("Receiver").bands.at(MeasureId::DegreeIn), Band(8, 10));
    EXPECT_EQ(set.at("Soldier").bands.at(MeasureId::DegreeIn), Band(2, 6));
    for (MeasureId id : kAllMeasures) {
        EXPECT_EQ(set.at("Outsider").bands.at(id), Band(0, 2));
        for (const auto& t : set.templates()) EXPECT_TRUE(t.bands.contains(id)) << t.name;
    }
}

TEST(RoleTemplates, DocumentRoundTrip) {
    std::ostringstream out;
    write_role_templates(out, RoleSet::table1());
    auto back = load_role_templates(std::string_view(out.str()));
    ASSERT_EQ(back.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(back.templates()[i].name, RoleSet::table1().templates()[i].name);
        EXPECT_EQ(back.templates()[i].bands, RoleSet::table1().templates()[i].bands);
    }
}

TEST(RoleTemplates, ParsesCommentsAndSpellings) {
    auto set = load_role_templates(std::string_view(
        "# custom\n"
        "[Broker]\n"
        "Betweenness: 8..10   # very high\n"
        "pagerank = 4-6\n"));
    ASSERT_EQ(set.size(), 1u);
    EXPECT_EQ(set.at("Broker").bands.at(MeasureId::PageRank), Band(4, 6));
}

TEST(RoleTemplates, EmptyDocumentIsEmptySet) {
    EXPECT_TRUE(load_role_templates(std::string_view("")).empty());
}

TEST(RoleTemplates, ErrorsNameTheTemplate) {
    try {
        load_role_templates(std::string_view("[Bad]\nDegreeIn: 6..4\n"));
        FAIL() << "inverted band accepted";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("Bad"), std::string::npos) << e.what();
    }
    EXPECT_THROW(load_role_templates(std::string_view("[A]\nDegreeIn: 0..2\n[A]\nDegreeOut: 0..2\n")), ValidationError);
    EXPECT_THROW(load_role_templates(std::string_view("[A]\nDegreeIn: 0..12\n")), ValidationError);
    EXPECT_THROW(load_role_templates(std::string_view("[A]\n")), ValidationError);
    EXPECT_THROW(load_role_templates_source("/nonexistent/roles.txt"), ValidationError);
}

TEST(ScoreRole, MidBandAndOneMiss) {
    const auto set = RoleSet::table1();
    const auto& org = set.at("Organiser");
    auto row = midpoints(org);
    EXPECT_DOUBLE_EQ(score_role(row, org).score, 1.0);
    row[MeasureId::PageRank] = 5.0;  // band 2..4, one unit above
    auto s = score_role(row, org);
    EXPECT_DOUBLE_EQ(s.score, 0.9375);
    EXPECT_DOUBLE_EQ(s.per_measure.at(MeasureId::PageRank), 0.5);
    EXPECT_DOUBLE_EQ(score_role(row, org, MatchRule::Strict).score, 7.0 / 8.0);
}

TEST(ScoreRole, ZeroRowIsOutsider) {
    std::map<MeasureId, double> zero;
    for (MeasureId id : kAllMeasures) zero[id] = 0.0;
    EXPECT_DOUBLE_EQ(score_role(zero, RoleSet::table1().at("Outsider")).score, 1.0);
}

TEST(ScoreRole, MissingMeasureIsNamed) {
    std::map<MeasureId, double> row{{MeasureId::DegreeIn, 5}};
    try {
        score_role(row, RoleSet::table1().at("Organiser"));
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("DegreeOut"), std::string::npos) << e.what();
    }
}

TEST(ScoreRole, RangeAndMonotoneInDistance) {
    const auto set = RoleSet::table1();
    const auto& rec = set.at("Receiver");
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 10);
    for (int i = 0; i < 500; ++i) {
        std::map<MeasureId, double> row;
        for (MeasureId id : kAllMeasures) row[id] = u(rng);
        const double s = score_role(row, rec).score;
        EXPECT_GE(s, 0.0);
        EXPECT_LE(s, 1.0);
        // Moving DegreeIn (band 8..10) further down never raises the score.
        auto lower = row;
        lower[MeasureId::DegreeIn] = std::max(0.0, row[MeasureId::DegreeIn] - 0.7);
        EXPECT_LE(score_role(lower, rec).score, s + 1e-15);
    }
}

TEST(AssignRoles, PerfectReceiverAndUnclassified) {
    const auto set = RoleSet::table1();
    auto rec = midpoints(set.at("Receiver"));
    std::map<MeasureId, double> middling;
    for (MeasureId id : kAllMeasures) middling[id] = 5.0;
    auto m = matrix_of({"r", "x"}, {rec, middling});
    auto out = assign_roles(m, set);
    EXPECT_EQ(out[0].role, "Receiver");
    EXPECT_DOUBLE_EQ(out[0].score, 1.0);
    EXPECT_EQ(out[1].role, kUnclassified);
    EXPECT_LT(out[1].score, 0.75);
}

TEST(AssignRoles, BelowThresholdOnEveryRoleIsUnclassified) {
    RoleSet set({RoleTemplate{"A", {{MeasureId::DegreeIn, Band(0, 2)}}}, RoleTemplate{"B", {{MeasureId::DegreeIn, Band(8, 10)}}}});
    std::map<MeasureId, double> row;
    for (MeasureId id : kAllMeasures) row[id] = 0;
    row[MeasureId::DegreeIn] = 2.8;  // 0.6 on A, 0 on B
    auto out = assign_roles(matrix_of({"e"}, {row}), set);
    EXPECT_EQ(out[0].role, kUnclassified);
    EXPECT_DOUBLE_EQ(out[0].score, 0.6);
}

TEST(AssignRoles, TiesGoToDeclarationOrder) {
    RoleSet set({RoleTemplate{"First", {{MeasureId::DegreeIn, Band(0, 4)}}}, RoleTemplate{"Second", {{MeasureId::DegreeIn, Band(2, 6)}}}});
    std::map<MeasureId, double> row;
    for (MeasureId id : kAllMeasures) row[id] = 3;
    EXPECT_EQ(assign_roles(matrix_of({"e"}, {row}), set)[0].role, "First");
}

TEST(AssignRoles, EmptySetGivesUnclassified) {
    std::map<MeasureId, double> row;
    for (MeasureId id : kAllMeasures) row[id] = 1;
    EXPECT_EQ(assign_roles(matrix_of({"e"}, {row}), RoleSet{})[0].role, kUnclassified);
}

TEST(AssignRoles, InvariantUnderMonotoneRawTransform) {
    std::mt19937_64 rng(8);
    std::gamma_distribution<double> gamma(0.7, 3.0);
    const std::size_t n = 300;
    std::vector<EntityId> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("e" + std::to_string(1000 + i));
    MeasureMatrix a(ids), b(ids);
    for (MeasureId id : kAllMeasures) {
        std::vector<double> raw(n), warped(n);
        for (std::size_t i = 0; i < n; ++i) {
            raw[i] = std::floor(gamma(rng));
            warped[i] = std::log1p(raw[i]) * 17.0 - 4.0;
        }
        a.set_raw(id, raw);
        b.set_raw(id, warped);
    }
    auto ra = assign_roles(a, RoleSet::table1());
    auto rb = assign_roles(b, RoleSet::table1());
    for (std::size_t i = 0; i < n; ++i) {
        EXPECT_EQ(ra[i].role, rb[i].role);
        EXPECT_DOUBLE_EQ(ra[i].score, rb[i].score);
    }
}

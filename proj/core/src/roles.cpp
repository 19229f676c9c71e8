#include "socnet/roles.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "socnet/csv.hpp"

namespace socnet {

Band::Band(double low, double high) : low_(low), high_(high) {
    if (!(low >= 0.0 && low < high && high <= 10.0)) {
        throw ValidationError("band requires 0 <= low < high <= 10 (got " + csv::format_double(low) + ".." +
                              csv::format_double(high) + ")");
    }
}

double Band::distance(double v) const noexcept {
    if (v < low_) return low_ - v;
    if (v > high_) return v - high_;
    return 0.0;
}

RoleSet::RoleSet(std::vector<RoleTemplate> templates) : templates_(std::move(templates)) {
    std::set<std::string> names;
    for (const auto& t : templates_) {
        if (t.name.empty()) throw ValidationError("role template with empty name");
        if (t.bands.empty()) throw ValidationError("role template '" + t.name + "' has no bands");
        if (!names.insert(t.name).second) throw ValidationError("duplicate role template '" + t.name + "'");
    }
}

const RoleTemplate& RoleSet::at(std::string_view name) const {
    for (const auto& t : templates_) {
        if (t.name == name) return t;
    }
    throw NotFoundError("no role template named '" + std::string(name) + "'");
}

RoleSet RoleSet::table1() {
    using M = MeasureId;
    auto role = [](std::string name, std::initializer_list<std::pair<M, Band>> bands) {
        return RoleTemplate{std::move(name), std::map<M, Band>(bands.begin(), bands.end())};
    };
    return RoleSet({
        role("Organiser", {{M::BaryCenter, {2, 4}}, {M::DegreeIn, {4, 6}}, {M::DegreeOut, {0, 2}},
                           {M::Hubness, {0, 2}}, {M::Authoritativeness, {8, 10}}, {M::PageRank, {2, 4}},
                           {M::Betweenness, {4, 6}}, {M::MarkovCentrality, {6, 8}}}),
        role("Receiver", {{M::BaryCenter, {2, 4}}, {M::DegreeIn, {8, 10}}, {M::DegreeOut, {2, 4}},
                          {M::Hubness, {0, 2}}, {M::Authoritativeness, {0, 2}}, {M::PageRank, {6, 8}},
                          {M::Betweenness, {2, 4}}, {M::MarkovCentrality, {6, 8}}}),
        role("Soldier", {{M::BaryCenter, {2, 4}}, {M::DegreeIn, {2, 6}}, {M::DegreeOut, {2, 4}},
                         {M::Hubness, {0, 2}}, {M::Authoritativeness, {0, 2}}, {M::PageRank, {0, 2}},
                         {M::Betweenness, {0, 2}}, {M::MarkovCentrality, {0, 2}}}),
        role("Outsider", {{M::BaryCenter, {0, 2}}, {M::DegreeIn, {0, 2}}, {M::DegreeOut, {0, 2}},
                          {M::Hubness, {0, 2}}, {M::Authoritativeness, {0, 2}}, {M::PageRank, {0, 2}},
                          {M::Betweenness, {0, 2}}, {M::MarkovCentrality, {0, 2}}}),
    });
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

RoleSet load_role_templates(std::istream& in) {
    std::vector<RoleTemplate> templates;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& msg) -> ValidationError {
        const std::string where = templates.empty() ? "" : " in template '" + templates.back().name + "'";
        return ValidationError("role templates line " + std::to_string(lineno) + where + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view text(line);
        if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
        text = trim(text);
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']') throw fail("unterminated role header");
            auto name = trim(text.substr(1, text.size() - 2));
            if (name.empty()) throw fail("empty role name");
            templates.push_back({std::string(name), {}});
            continue;
        }
        if (templates.empty()) throw fail("band line before any [Role] header");
        const auto sep = text.find_first_of(":=");
        if (sep == std::string_view::npos) throw fail("expected 'Measure: low..high'");
        const auto measure_text = trim(text.substr(0, sep));
        const auto range = trim(text.substr(sep + 1));
        auto dots = range.find("..");
        std::size_t dots_len = 2;
        if (dots == std::string_view::npos) {
            dots = range.find('-', 1);
            dots_len = 1;
        }
        if (dots == std::string_view::npos) throw fail("expected a range 'low..high'");
        try {
            const auto id = parse_measure_id(measure_text);
            Band band(csv::parse_double(trim(range.substr(0, dots))), csv::parse_double(trim(range.substr(dots + dots_len))));
            if (!templates.back().bands.emplace(id, band).second) {
                throw ValidationError("measure " + std::string(to_string(id)) + " banded twice");
            }
        } catch (const ValidationError& e) {
            throw fail(e.what());
        }
    }
    return RoleSet(std::move(templates));
}

RoleSet load_role_templates(std::string_view text) {
    std::istringstream in{std::string(text)};
    return load_role_templates(in);
}

RoleSet load_role_templates_source(const std::string& source) {
    if (source == "table1") return RoleSet::table1();
    std::ifstream in(source);
    if (!in) throw ValidationError("cannot open role template file " + source);
    return load_role_templates(in);
}

void write_role_templates(std::ostream& out, const RoleSet& roles) {
    for (const auto& t : roles.templates()) {
        out << '[' << t.name << "]\n";
        for (const auto& [id, band] : t.bands) {
            out << to_string(id) << ": " << csv::format_double(band.low()) << ".." << csv::format_double(band.high())
                << '\n';
        }
        out << '\n';
    }
}

RoleScore score_role(const std::map<MeasureId, double>& scaled_row, const RoleTemplate& role, MatchRule rule) {
    RoleScore result;
    double total = 0.0;
    for (const auto& [id, band] : role.bands) {
        auto it = scaled_row.find(id);
        if (it == scaled_row.end()) {
            throw ValidationError("measure " + std::string(to_string(id)) + " required by role '" + role.name +
                                  "' is missing from the row");
        }
        const double dist = band.distance(it->second);
        double match;
        if (dist == 0.0) {
            match = 1.0;
        } else if (rule == MatchRule::Strict) {
            match = 0.0;
        } else {
            match = std::max(0.0, 1.0 - dist / 2.0);
        }
        result.per_measure[id] = match;
        total += match;
    }
    result.score = role.bands.empty() ? 0.0 : total / static_cast<double>(role.bands.size());
    return result;
}

std::vector<RoleAssignment> assign_roles(const MeasureMatrix& matrix, const RoleSet& roles,
                                         const RoleOptions& options) {
    if (!(options.threshold >= 0.0 && options.threshold <= 1.0)) {
        throw ValidationError("role threshold must lie in [0, 1]");
    }
    for (const auto& t : roles.templates()) {
        for (const auto& [id, band] : t.bands) {
            if (!matrix.has(id)) {
                throw ValidationError("role '" + t.name + "' needs measure " + std::string(to_string(id)) +
                                      " which the matrix lacks");
            }
        }
    }
    std::vector<RoleAssignment> out;
    out.reserve(matrix.size());
    for (std::size_t row = 0; row < matrix.size(); ++row) {
        const auto scaled = matrix.scaled_row(row);
        RoleAssignment a{matrix.entities()[row], std::string(kUnclassified), 0.0, {}};
        const RoleTemplate* best = nullptr;
        for (const auto& t : roles.templates()) {
            auto s = score_role(scaled, t, options.rule);
            if (!best || s.score > a.score) {
                best = &t;
                a.score = s.score;
                a.per_measure = std::move(s.per_measure);
            }
        }
        if (best && a.score >= options.threshold) a.role = best->name;
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace socnet

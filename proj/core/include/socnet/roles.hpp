#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "socnet/measures.hpp"

namespace socnet {

// Closed interval on the 0-10 band scale.
class Band {
public:
    Band(double low, double high);

    double low() const noexcept { return low_; }
    double high() const noexcept { return high_; }
    bool contains(double v) const noexcept { return v >= low_ && v <= high_; }
    double distance(double v) const noexcept;

    friend bool operator==(const Band&, const Band&) = default;

private:
    double low_;
    double high_;
};

struct RoleTemplate {
    std::string name;
    std::map<MeasureId, Band> bands;
};

// Templates in declaration order; earlier templates win score ties.
class RoleSet {
public:
    RoleSet() = default;
    explicit RoleSet(std::vector<RoleTemplate> templates);

    const std::vector<RoleTemplate>& templates() const noexcept { return templates_; }
    const RoleTemplate& at(std::string_view name) const;
    std::size_t size() const noexcept { return templates_.size(); }
    bool empty() const noexcept { return templates_.empty(); }

    // Organiser, Receiver, Soldier and Outsider band definitions.
    static RoleSet table1();

private:
    std::vector<RoleTemplate> templates_;
};

// Text format, one block per role:
//
//   [Organiser]
//   BaryCenter: 2..4
//   DegreeIn:   4..6
//
// '#' starts a comment. Measure names accept the spellings parse_measure_id does.
RoleSet load_role_templates(std::istream& in);
RoleSet load_role_templates(std::string_view text);
// A path, or the keyword "table1" for the built-in set.
RoleSet load_role_templates_source(const std::string& source);
void write_role_templates(std::ostream& out, const RoleSet& roles);

enum class MatchRule {
    Linear,  // 1 inside the band, falling linearly to 0 two units outside
    Strict,  // 1 inside, 0 outside
};

struct RoleScore {
    double score = 0.0;
    std::map<MeasureId, double> per_measure;
};

RoleScore score_role(const std::map<MeasureId, double>& scaled_row, const RoleTemplate& role,
                     MatchRule rule = MatchRule::Linear);

inline constexpr std::string_view kUnclassified = "Unclassified";

struct RoleAssignment {
    EntityId entity;
    std::string role;  // template name or kUnclassified
    double score = 0.0;
    std::map<MeasureId, double> per_measure;  // detail for the best-scoring template
};

struct RoleOptions {
    double threshold = 0.75;
    MatchRule rule = MatchRule::Linear;
};

std::vector<RoleAssignment> assign_roles(const MeasureMatrix& matrix, const RoleSet& roles,
                                         const RoleOptions& options = {});

}  // namespace socnet

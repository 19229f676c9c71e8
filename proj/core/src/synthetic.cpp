#include "socnet/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "socnet/error.hpp"

namespace socnet {

void SyntheticCdrParams::validate() const {
    if (entities < 2) throw ValidationError("synthetic data needs at least two entities");
    if (interactions < entities) throw ValidationError("synthetic interactions must be at least the entity count");
    if (cells == 0) throw ValidationError("synthetic data needs at least one cell");
    if (span_seconds <= 0) throw ValidationError("synthetic span must be positive");
    if (!(activity_exponent > 0.0)) throw ValidationError("activity exponent must be positive");
    if (!(mean_contacts >= 1.0)) throw ValidationError("mean contacts must be at least 1");
    for (double p : {reciprocity, sms_fraction, mobility}) {
        if (p < 0.0 || p > 1.0) throw ValidationError("synthetic probabilities must lie in [0, 1]");
    }
}

namespace {

std::string entity_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "p%06zu", i);
    return buf;
}

std::string cell_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "c%04zu", i);
    return buf;
}

}  // namespace

CdrData generate_cdr(const SyntheticCdrParams& params) {
    params.validate();
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = params.entities;

    auto pareto = [&] { return std::pow(1.0 - unit(rng), -1.0 / params.activity_exponent); };
    std::vector<double> activity(n), popularity(n);
    for (std::size_t i = 0; i < n; ++i) {
        activity[i] = pareto();
        popularity[i] = pareto();
    }

    // Contact lists: popular entities are picked more often, some ties are mirrored.
    std::discrete_distribution<std::size_t> pick_popular(popularity.begin(), popularity.end());
    std::poisson_distribution<int> extra_contacts(params.mean_contacts - 1.0);
    std::vector<std::vector<std::size_t>> contacts(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int want = 1 + extra_contacts(rng);
        for (int c = 0; c < want; ++c) {
            std::size_t j = pick_popular(rng);
            if (j == i) j = (i + 1) % n;
            if (std::find(contacts[i].begin(), contacts[i].end(), j) != contacts[i].end()) continue;
            contacts[i].push_back(j);
            if (unit(rng) < params.reciprocity &&
                std::find(contacts[j].begin(), contacts[j].end(), i) == contacts[j].end()) {
                contacts[j].push_back(i);
            }
        }
    }

    CdrData data;
    std::normal_distribution<double> spread(0.0, 0.08);
    for (std::size_t c = 0; c < params.cells; ++c) {
        data.cells.emplace(cell_name(c), CellSite{cell_name(c), 50.06 + spread(rng), 19.94 + spread(rng) * 1.5});
    }
    std::uniform_int_distribution<std::size_t> any_cell(0, params.cells - 1);
    std::vector<std::size_t> home(n);
    for (auto& h : home) h = any_cell(rng);

    std::discrete_distribution<std::size_t> pick_caller(activity.begin(), activity.end());
    std::uniform_int_distribution<Timestamp> when(0, params.span_seconds - 1);
    std::lognormal_distribution<double> call_length(4.2, 0.9);

    auto cell_for = [&](std::size_t entity) {
        return cell_name(unit(rng) < params.mobility ? any_cell(rng) : home[entity]);
    };

    data.records.reserve(params.interactions);
    for (std::size_t r = 0; r < params.interactions; ++r) {
        const std::size_t caller = r < n ? r : pick_caller(rng);
        const auto& list = contacts[caller];
        // Earlier contacts are favoured (1/rank).
        double total = 0.0;
        for (std::size_t k = 0; k < list.size(); ++k) total += 1.0 / static_cast<double>(k + 1);
        double u = unit(rng) * total;
        std::size_t pick = list.size() - 1;
        for (std::size_t k = 0; k < list.size(); ++k) {
            u -= 1.0 / static_cast<double>(k + 1);
            if (u <= 0.0) {
                pick = k;
                break;
            }
        }
        const std::size_t callee = list[pick];

        CdrRecord rec;
        rec.caller = entity_name(caller);
        rec.callee = entity_name(callee);
        rec.timestamp = params.start + when(rng);
        rec.kind = unit(rng) < params.sms_fraction ? InteractionKind::Sms : InteractionKind::Call;
        rec.duration = rec.kind == InteractionKind::Call ? std::round(call_length(rng)) : 0.0;
        rec.cell_id = cell_for(caller);
        rec.callee_cell_id = cell_for(callee);
        data.records.push_back(std::move(rec));
    }
    std::stable_sort(data.records.begin(), data.records.end(),
                     [](const CdrRecord& a, const CdrRecord& b) { return a.timestamp < b.timestamp; });
    return data;
}

void write_cdr_csv(std::ostream& out, const std::vector<CdrRecord>& records) {
    const bool callee_cells =
        std::any_of(records.begin(), records.end(), [](const CdrRecord& r) { return r.callee_cell_id.has_value(); });
    std::vector<std::string> header{"caller", "callee", "timestamp", "kind", "duration", "cell_id"};
    if (callee_cells) header.emplace_back("callee_cell_id");
    csv::write_row(out, header);
    for (const auto& r : records) {
        std::vector<std::string> row{r.caller, r.callee, std::to_string(r.timestamp), std::string(to_string(r.kind)),
                                     csv::format_double(r.duration), r.cell_id.value_or("")};
        if (callee_cells) row.push_back(r.callee_cell_id.value_or(""));
        csv::write_row(out, row);
    }
}

void write_cells_csv(std::ostream& out, const CellMap& cells) {
    csv::write_row(out, {"cell_id", "lat", "lon"});
    for (const auto& [id, site] : cells) {
        csv::write_row(out, {id, csv::format_double(site.latitude), csv::format_double(site.longitude)});
    }
}

}  // namespace socnet

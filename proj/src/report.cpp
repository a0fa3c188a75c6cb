#include "aoicontract/report.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "aoicontract/errors.hpp"

namespace aoicontract {

std::string format_number(double v) { return fmt::format("{:.12g}", v); }

namespace {

std::string opt_number(const std::optional<SolveResult>& r, double (*pick)(const SolveResult&)) {
    return r ? format_number(pick(*r)) : std::string();
}

double us_of(const SolveResult& r) { return r.provider_utility; }
double mean_uw_of(const SolveResult& r) {
    const auto& u = r.worker_utilities;
    return std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(u.size());
}

nlohmann::ordered_json groups_json(const std::vector<IronedGroup>& groups) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& g : groups) arr.push_back({g.first, g.last});
    return arr;
}

}  // namespace

void write_choice_matrix_csv(std::ostream& os, const std::vector<std::vector<double>>& matrix) {
    os << "worker_type,item_index,utility\n";
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        for (std::size_t j = 0; j < matrix[i].size(); ++j) {
            os << i + 1 << ',' << j + 1 << ',' << format_number(matrix[i][j]) << '\n';
        }
    }
}

void write_sweep_a_csv(std::ostream& os, const SweepResult& sweep) {
    os << "a,us_ca,us_cc,us_cs,mean_uw_ca,mean_uw_cc,mean_uw_cs\n";
    for (const auto& p : sweep.points) {
        os << format_number(p.axis_value) << ',' << opt_number(p.ca, us_of) << ',' << opt_number(p.cc, us_of) << ','
           << opt_number(p.cs, us_of) << ',' << opt_number(p.ca, mean_uw_of) << ','
           << opt_number(p.cc, mean_uw_of) << ',' << opt_number(p.cs, mean_uw_of) << '\n';
    }
}

void write_sweep_alpha_csv(std::ostream& os, const SweepResult& sweep) {
    os << "alpha,type,f_star,cycles_raw,cycles_rounded,reward,worker_utility,provider_utility\n";
    for (const auto& p : sweep.points) {
        if (!p.ca) {
            os << format_number(p.axis_value) << ",,,,,,,\n";
            continue;
        }
        const auto& r = *p.ca;
        for (std::size_t n = 0; n < r.f_star.size(); ++n) {
            const double cycles = implied_cycles(r.f_star[n], p.timing);
            os << format_number(p.axis_value) << ',' << n + 1 << ',' << format_number(r.f_star[n]) << ','
               << format_number(cycles) << ',' << format_number(std::round(cycles)) << ','
               << format_number(r.r_star[n]) << ',' << format_number(r.worker_utilities[n]) << ','
               << format_number(r.provider_utility) << '\n';
        }
    }
}

void write_compare_csv(std::ostream& os, std::span<const ComparisonRow> rows) {
    os << "mechanism,solved,feasible,provider_utility,social_welfare,mean_worker_utility,min_worker_utility,"
          "max_worker_utility\n";
    for (const auto& r : rows) {
        os << to_string(r.mechanism) << ',' << (r.solved ? "true" : "false") << ','
           << (r.feasible ? "true" : "false") << ',';
        if (r.solved) {
            os << format_number(r.provider_utility) << ',' << format_number(r.social_welfare) << ','
               << format_number(r.mean_worker_utility) << ',' << format_number(r.min_worker_utility) << ','
               << format_number(r.max_worker_utility);
        } else {
            os << ",,,,";
        }
        os << '\n';
    }
}

nlohmann::ordered_json to_json(const ContractMenu& menu) {
    nlohmann::ordered_json j;
    auto items = nlohmann::ordered_json::array();
    for (const auto& it : menu.items) items.push_back({{"f", it.f}, {"r", it.r}});
    j["items"] = items;
    j["feasible"] = menu.feasible;
    auto viol = nlohmann::ordered_json::array();
    for (const auto& v : menu.violations) {
        viol.push_back({{"kind", to_string(v.kind)}, {"type", v.type}, {"item", v.item}, {"slack", v.slack}});
    }
    j["violations"] = viol;
    return j;
}

nlohmann::ordered_json to_json(const Lemma1Report& rep) {
    return {{"ir_lowest", rep.ir_lowest}, {"monotone", rep.monotone}, {"ldic", rep.ldic}, {"luic", rep.luic}};
}

nlohmann::ordered_json to_json(const SolveResult& r, const TimingParams& timing) {
    nlohmann::ordered_json j;
    j["mechanism"] = to_string(r.mechanism);
    j["menu"] = to_json(r.menu);
    j["f_star"] = r.f_star;
    j["r_star"] = r.r_star;
    std::vector<double> raw, rounded;
    for (double f : r.f_star) {
        raw.push_back(implied_cycles(f, timing));
        rounded.push_back(std::round(raw.back()));
    }
    j["cycles_raw"] = raw;
    j["cycles_rounded"] = rounded;
    j["provider_utility"] = r.provider_utility;
    j["worker_utilities"] = r.worker_utilities;
    j["social_welfare"] = r.social_welfare;
    j["ironed_groups"] = groups_json(r.ironed_groups);
    j["grid_points"] = r.grid_points;
    return j;
}

nlohmann::ordered_json to_json(const SweepResult& sweep) {
    nlohmann::ordered_json j;
    j["axis"] = sweep.axis;
    auto pts = nlohmann::ordered_json::array();
    for (const auto& p : sweep.points) {
        nlohmann::ordered_json pj;
        pj["value"] = p.axis_value;
        pj["CA"] = p.ca ? to_json(*p.ca, p.timing) : nlohmann::ordered_json();
        if (sweep.axis == "a") {
            pj["CC"] = p.cc ? to_json(*p.cc, p.timing) : nlohmann::ordered_json();
            pj["CS"] = p.cs ? to_json(*p.cs, p.timing) : nlohmann::ordered_json();
        }
        if (!p.error.empty()) pj["error"] = p.error;
        pts.push_back(pj);
    }
    j["points"] = pts;
    return j;
}

nlohmann::ordered_json comparison_timing_json(std::span<const ComparisonRow> rows) {
    nlohmann::ordered_json j;
    for (const auto& r : rows) j[to_string(r.mechanism)] = r.wall_time_s;
    return j;
}

ContractMenu menu_from_json(const nlohmann::json& j) {
    ContractMenu menu;
    try {
        const auto& items = j.at("menu").at("items");
        for (const auto& it : items) menu.items.push_back({it.at("f").get<double>(), it.at("r").get<double>()});
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("menu: ") + e.what());
    }
    if (menu.items.empty()) throw ConfigError("menu.items: must not be empty");
    return menu;
}

}  // namespace aoicontract

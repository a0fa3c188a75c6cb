#include "aoicontract/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "aoicontract/errors.hpp"

namespace aoicontract {

void ScenarioConfig::validate() const {
    auto wrap = [](const char* section, auto&& fn) {
        try {
            fn();
        } catch (const DomainError& e) {
            throw ConfigError(std::string(section) + ": " + e.what());
        }
    };
    wrap("timing", [&] { timing.validate(); });
    wrap("provider", [&] { provider.validate(); });
    if (population.N < 1) throw ConfigError("population.N must be >= 1");
    if (!(population.gamma_min > 0.0) || !(population.gamma_max >= population.gamma_min)) {
        throw ConfigError("population.gamma_min/gamma_max: need 0 < gamma_min <= gamma_max");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("provider.alpha must lie in [0, 1]");
    if (!alpha_per_type.empty()) {
        if (static_cast<int>(alpha_per_type.size()) != population.N) {
            throw ConfigError("provider.alpha_per_type must have population.N entries");
        }
        for (double a : alpha_per_type) {
            if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("provider.alpha_per_type entries must lie in [0, 1]");
        }
    }
    wrap("solver", [&] { solver.validate(timing); });
    for (int a : a_values) {
        if (a < 1) throw ConfigError("sweep.a_values entries must be >= 1");
    }
    for (double a : alpha_values) {
        if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("sweep.alpha_values entries must lie in [0, 1]");
    }
    workflow.validate();
}

std::vector<WorkerType> build_population(const ScenarioConfig& config) {
    const auto& pop = config.population;
    if (pop.N < 1) throw ConfigError("population.N must be >= 1");
    if (!(pop.gamma_min > 0.0) || !(pop.gamma_max >= pop.gamma_min)) {
        throw ConfigError("population.gamma_min/gamma_max: need 0 < gamma_min <= gamma_max");
    }
    std::vector<double> gammas(static_cast<std::size_t>(pop.N));
    if (pop.distribution == TypeDistribution::Grid) {
        if (pop.N == 1) {
            gammas[0] = 0.5 * (pop.gamma_min + pop.gamma_max);
        } else {
            const double step = (pop.gamma_max - pop.gamma_min) / (pop.N - 1);
            for (int n = 0; n < pop.N; ++n) gammas[n] = pop.gamma_min + n * step;
            gammas.back() = pop.gamma_max;
        }
    } else {
        std::mt19937_64 rng(config.seed);
        std::uniform_real_distribution<double> dist(pop.gamma_min, pop.gamma_max);
        for (auto& g : gammas) g = dist(rng);
        std::sort(gammas.begin(), gammas.end());
    }
    std::vector<WorkerType> types;
    types.reserve(gammas.size());
    for (int n = 0; n < pop.N; ++n) {
        const double alpha = config.alpha_per_type.empty() ? config.alpha : config.alpha_per_type[n];
        types.push_back({n + 1, gammas[n], 1.0 / pop.N, alpha});
    }
    return types;
}

SolveResult solve_scenario(const ScenarioConfig& config, Mechanism mechanism) {
    const auto types = build_population(config);
    return solve(mechanism, types, config.provider, config.timing, config.solver);
}

std::vector<std::vector<double>> choice_matrix(const ScenarioConfig& config) {
    const auto types = build_population(config);
    const auto res = solve_ca(types, config.provider, config.timing, config.solver);
    std::vector<std::vector<double>> table(types.size(), std::vector<double>(types.size()));
    for (std::size_t i = 0; i < types.size(); ++i) {
        for (std::size_t j = 0; j < types.size(); ++j) table[i][j] = worker_utility(res.menu.items[j], types[i]);
    }
    return table;
}

double implied_cycles(double f, const TimingParams& timing) { return 1.0 / (f * timing.t) - timing.a; }

namespace {

std::optional<SolveResult> try_solve(Mechanism m, std::span<const WorkerType> types, const ScenarioConfig& cfg,
                                     std::string& error) {
    try {
        return solve(m, types, cfg.provider, cfg.timing, cfg.solver);
    } catch (const Infeasible& e) {
        if (!error.empty()) error += "; ";
        error += std::string(to_string(m)) + ": " + e.what();
        return std::nullopt;
    }
}

}  // namespace

SweepResult sweep_duration(const ScenarioConfig& config, std::span<const int> a_values) {
    SweepResult out;
    out.axis = "a";
    for (int a : a_values) {
        ScenarioConfig cfg = config;
        cfg.timing.a = a;
        cfg.solver.f_max.reset();
        cfg.validate();
        const auto types = build_population(cfg);
        SweepPoint pt;
        pt.axis_value = a;
        pt.timing = cfg.timing;
        pt.ca = try_solve(Mechanism::CA, types, cfg, pt.error);
        pt.cc = try_solve(Mechanism::CC, types, cfg, pt.error);
        pt.cs = try_solve(Mechanism::CS, types, cfg, pt.error);
        out.points.push_back(std::move(pt));
    }
    return out;
}

SweepResult sweep_alpha(const ScenarioConfig& config, std::span<const double> alpha_values) {
    SweepResult out;
    out.axis = "alpha";
    for (double alpha : alpha_values) {
        ScenarioConfig cfg = config;
        cfg.alpha = alpha;
        cfg.alpha_per_type.clear();
        cfg.validate();
        const auto types = build_population(cfg);
        SweepPoint pt;
        pt.axis_value = alpha;
        pt.timing = cfg.timing;
        pt.ca = try_solve(Mechanism::CA, types, cfg, pt.error);
        out.points.push_back(std::move(pt));
    }
    return out;
}

std::vector<ComparisonRow> compare_mechanisms(const ScenarioConfig& config) {
    const auto types = build_population(config);
    std::vector<ComparisonRow> rows;
    for (Mechanism m : {Mechanism::CA, Mechanism::CC, Mechanism::CS}) {
        ComparisonRow row;
        row.mechanism = m;
        const auto start = std::chrono::steady_clock::now();
        try {
            const auto res = solve(m, types, config.provider, config.timing, config.solver);
            row.solved = true;
            row.feasible = res.menu.feasible;
            row.provider_utility = res.provider_utility;
            row.social_welfare = res.social_welfare;
            const auto& u = res.worker_utilities;
            row.mean_worker_utility = std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(u.size());
            const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
            row.min_worker_utility = *lo;
            row.max_worker_utility = *hi;
        } catch (const Infeasible& e) {
            row.error = e.what();
        }
        row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace aoicontract

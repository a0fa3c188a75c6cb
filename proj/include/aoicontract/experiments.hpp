#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aoicontract/economics.hpp"
#include "aoicontract/flsim.hpp"
#include "aoicontract/freshness.hpp"
#include "aoicontract/solver.hpp"

namespace aoicontract {

enum class TypeDistribution { Grid, Sampled };

struct PopulationConfig {
    int N = 10;
    double gamma_min = 0.001;
    double gamma_max = 0.01;
    TypeDistribution distribution = TypeDistribution::Grid;
};

/// Full experiment description. Defaults reproduce the reference scenario:
/// t = 2 s, a = 2, beta = 20, K = 200 s, H = 50 s, M = 20 workers and
/// N = 10 types on gamma in [0.001, 0.01].
struct ScenarioConfig {
    TimingParams timing;
    PopulationConfig population;
    ProviderEconomics provider;
    double alpha = 0.5;
    std::vector<double> alpha_per_type;  // overrides alpha when non-empty
    SolverParams solver;
    Mechanism mechanism = Mechanism::CA;
    std::uint64_t seed = 0;
    std::vector<int> a_values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
    std::vector<double> alpha_values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    flsim::WorkflowConfig workflow;

    /// Throws ConfigError naming the offending key.
    void validate() const;
};

std::vector<WorkerType> build_population(const ScenarioConfig& config);

SolveResult solve_scenario(const ScenarioConfig& config, Mechanism mechanism);

/// Entry (i, j) is the utility of a type-(i+1) worker taking item j+1 of the
/// CA menu.
std::vector<std::vector<double>> choice_matrix(const ScenarioConfig& config);

/// c = 1/(f t) - a, the collection-period count implied by a frequency.
double implied_cycles(double f, const TimingParams& timing);

struct SweepPoint {
    double axis_value = 0.0;
    TimingParams timing;
    std::optional<SolveResult> ca;
    std::optional<SolveResult> cc;
    std::optional<SolveResult> cs;
    std::string error;  // set when a mechanism could not be solved

    bool all_infeasible() const { return !ca && !cc && !cs; }
};

struct SweepResult {
    std::string axis;
    std::vector<SweepPoint> points;
};

/// Solves CA, CC and CS for every a. f_max follows the default bound for
/// each a. Infeasible mechanisms are recorded as empty entries.
SweepResult sweep_duration(const ScenarioConfig& config, std::span<const int> a_values);

/// Solves CA for every shared alpha.
SweepResult sweep_alpha(const ScenarioConfig& config, std::span<const double> alpha_values);

struct ComparisonRow {
    Mechanism mechanism = Mechanism::CA;
    bool solved = false;
    bool feasible = false;
    double provider_utility = 0.0;
    double social_welfare = 0.0;
    double mean_worker_utility = 0.0;
    double min_worker_utility = 0.0;
    double max_worker_utility = 0.0;
    double wall_time_s = 0.0;
    std::string error;
};

std::vector<ComparisonRow> compare_mechanisms(const ScenarioConfig& config);

}  // namespace aoicontract

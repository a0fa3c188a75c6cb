#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aoicontract/economics.hpp"
#include "aoicontract/freshness.hpp"

namespace aoicontract {

enum class Mechanism { CA, CC, CS };

const char* to_string(Mechanism m);
Mechanism parse_mechanism(const std::string& name);

struct SolverParams {
    double f_min = 1e-5;
    std::optional<double> f_max;  // defaults to 1/((c_min + a) t)
    double phi = 1e-6;
    FreshnessVariant variant = FreshnessVariant::PaperForm;

    double resolved_f_max(const TimingParams& timing) const;
    void validate(const TimingParams& timing) const;
};

/// Points f_min + z*phi for z = 0..count-1, all within [f_min, f_max].
struct FrequencyGrid {
    double f_min = 0.0;
    double phi = 0.0;
    std::size_t count = 0;

    double at(std::size_t z) const { return f_min + static_cast<double>(z) * phi; }
    std::size_t nearest(double f) const;
};

FrequencyGrid make_grid(const TimingParams& timing, const SolverParams& params);

/// Per-type objective values M (Q_n G_n(f) - w_n f) tabulated over a grid.
/// Entries where the performance g(f) <= 0 hold -infinity.
class ObjectiveTable {
public:
    ObjectiveTable(std::span<const WorkerType> types, std::span<const double> cost_weights,
                   const ProviderEconomics& econ, const TimingParams& timing,
                   const SolverParams& params);

    const FrequencyGrid& grid() const { return grid_; }
    std::size_t types() const { return values_.size(); }
    double value(std::size_t n, std::size_t z) const { return values_[n][z]; }

    /// Sum of rows [first, last] (0-based, inclusive) at grid index z.
    double pooled(std::size_t first, std::size_t last, std::size_t z) const;

    /// Smallest grid index maximizing the pooled rows. Throws Infeasible if
    /// every grid point has g <= 0.
    std::size_t pooled_argmax(std::size_t first, std::size_t last) const;
    std::size_t argmax(std::size_t n) const { return pooled_argmax(n, n); }

private:
    FrequencyGrid grid_;
    std::vector<std::vector<double>> values_;
};

/// Inclusive range of 1-based type indices sharing one contract item.
struct IronedGroup {
    int first = 0;
    int last = 0;
    bool operator==(const IronedGroup&) const = default;
};

struct IroningResult {
    std::vector<std::size_t> grid_index;
    std::vector<double> f;
    std::vector<IronedGroup> groups;  // only pools with more than one type
};

/// Grid argmax of the reduced per-type objective M (Q_n G_n(f) - b_n f) for
/// type `n` (1-based). Ties resolve to the smaller frequency.
double per_type_grid_argmax(int n, std::span<const WorkerType> types, const ProviderEconomics& econ,
                            const TimingParams& timing, const SolverParams& params);

/// Pool-adjacent-violators ironing on the table's rows. Each pooled block is
/// assigned the grid frequency maximizing the block's summed objective.
IroningResult iron_monotone(const ObjectiveTable& table, std::span<const std::size_t> raw_index);

/// Irons raw frequencies against the reduced objective (coefficients b_n).
IroningResult iron_monotone(std::span<const double> f_raw, std::span<const WorkerType> types,
                            const ProviderEconomics& econ, const TimingParams& timing,
                            const SolverParams& params);

/// R_1 = f_1/gamma_1, R_n = R_{n-1} + (f_n - f_{n-1}) / gamma_n.
std::vector<double> optimal_rewards(std::span<const double> f, std::span<const WorkerType> types);

struct SolveResult {
    Mechanism mechanism = Mechanism::CA;
    ContractMenu menu;
    std::vector<double> f_star;
    std::vector<double> r_star;
    double provider_utility = 0.0;
    std::vector<double> worker_utilities;
    std::vector<IronedGroup> ironed_groups;
    double social_welfare = 0.0;
    std::size_t grid_points = 0;
};

SolveResult solve_ca(std::span<const WorkerType> types, const ProviderEconomics& econ,
                     const TimingParams& timing, const SolverParams& params);
SolveResult solve_cc(std::span<const WorkerType> types, const ProviderEconomics& econ,
                     const TimingParams& timing, const SolverParams& params);
SolveResult solve_cs(std::span<const WorkerType> types, const ProviderEconomics& econ,
                     const TimingParams& timing, const SolverParams& params);
SolveResult solve(Mechanism mechanism, std::span<const WorkerType> types, const ProviderEconomics& econ,
                  const TimingParams& timing, const SolverParams& params);

/// U_s + sum_n M Q_n U_n. Rewards cancel, so this only depends on f.
double social_welfare(const ContractMenu& menu, std::span<const WorkerType> types,
                      const ProviderEconomics& econ, const TimingParams& timing,
                      FreshnessVariant variant);

struct ComplexityReport {
    std::size_t grid_points_per_type = 0;
    std::size_t total_evaluations = 0;
    /// N log2((f_max - f_min)/phi), the logarithmic bound quoted for the
    /// greedy search. The linear scan above is what actually runs.
    double claimed_log_evaluations = 0.0;
};

ComplexityReport complexity_report(const TimingParams& timing, const SolverParams& params, std::size_t types);

}  // namespace aoicontract

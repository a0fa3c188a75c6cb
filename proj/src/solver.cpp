#include "aoicontract/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aoicontract/errors.hpp"

namespace aoicontract {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

SolveResult finish(Mechanism mechanism, std::span<const WorkerType> types, const ProviderEconomics& econ,
                   const TimingParams& timing, const SolverParams& params, std::vector<double> f,
                   std::vector<double> r, std::vector<IronedGroup> groups, std::size_t grid_points) {
    SolveResult out;
    out.mechanism = mechanism;
    out.f_star = std::move(f);
    out.r_star = std::move(r);
    out.ironed_groups = std::move(groups);
    out.grid_points = grid_points;
    out.menu.items.reserve(types.size());
    for (std::size_t n = 0; n < types.size(); ++n) out.menu.items.push_back({out.f_star[n], out.r_star[n]});
    out.menu = verify_ic_ir(std::move(out.menu), types);
    out.provider_utility = provider_utility(out.menu, types, econ, timing, params.variant);
    for (std::size_t n = 0; n < types.size(); ++n) {
        out.worker_utilities.push_back(worker_utility(out.menu.items[n], types[n]));
    }
    out.social_welfare = social_welfare(out.menu, types, econ, timing, params.variant);
    return out;
}

std::vector<double> complete_info_weights(std::span<const WorkerType> types) {
    std::vector<double> w;
    w.reserve(types.size());
    for (const auto& ty : types) w.push_back(ty.q / ty.gamma);
    return w;
}

void check_inputs(std::span<const WorkerType> types, const ProviderEconomics& econ,
                  const TimingParams& timing, const SolverParams& params) {
    timing.validate();
    econ.validate();
    validate_population(types);
    params.validate(timing);
}

}  // namespace

const char* to_string(Mechanism m) {
    switch (m) {
        case Mechanism::CA: return "CA";
        case Mechanism::CC: return "CC";
        case Mechanism::CS: return "CS";
    }
    return "?";
}

Mechanism parse_mechanism(const std::string& name) {
    if (name == "CA") return Mechanism::CA;
    if (name == "CC") return Mechanism::CC;
    if (name == "CS") return Mechanism::CS;
    throw DomainError("unknown mechanism '" + name + "' (expected CA|CC|CS)");
}

double SolverParams::resolved_f_max(const TimingParams& timing) const {
    return f_max.value_or(1.0 / ((timing.c_min + timing.a) * timing.t));
}

void SolverParams::validate(const TimingParams& timing) const {
    const double hi = resolved_f_max(timing);
    if (!(f_min > 0.0)) throw DomainError("solver.f_min must be > 0");
    if (!(f_min <= hi)) throw DomainError("solver.f_min must not exceed solver.f_max");
    if (!(phi > 0.0)) throw DomainError("solver.phi must be > 0");
    if (!(hi < 1.0 / (timing.a * timing.t))) throw DomainError("solver.f_max must be below 1/(a t)");
}

std::size_t FrequencyGrid::nearest(double f) const {
    const double z = std::round((f - f_min) / phi);
    if (z <= 0.0) return 0;
    return std::min(static_cast<std::size_t>(z), count - 1);
}

FrequencyGrid make_grid(const TimingParams& timing, const SolverParams& params) {
    params.validate(timing);
    const double hi = params.resolved_f_max(timing);
    FrequencyGrid g;
    g.f_min = params.f_min;
    g.phi = params.phi;
    g.count = static_cast<std::size_t>(std::floor((hi - params.f_min) / params.phi + 1e-9)) + 1;
    // keep theta = 1/f strictly above a*t
    while (g.count > 1 && !(1.0 / g.at(g.count - 1) > timing.a * timing.t)) --g.count;
    return g;
}

ObjectiveTable::ObjectiveTable(std::span<const WorkerType> types, std::span<const double> cost_weights,
                               const ProviderEconomics& econ, const TimingParams& timing,
                               const SolverParams& params)
    : grid_(make_grid(timing, params)), values_(types.size()) {
    if (cost_weights.size() != types.size()) throw DomainError("one cost weight per type is required");
    for (std::size_t n = 0; n < types.size(); ++n) {
        auto& row = values_[n];
        row.resize(grid_.count);
        for (std::size_t z = 0; z < grid_.count; ++z) {
            const double f = grid_.at(z);
            const double g = performance(f, types[n], econ, timing, params.variant);
            row[z] = g > 0.0 ? econ.M * (types[n].q * econ.beta * std::log(g) - cost_weights[n] * f) : kNegInf;
        }
    }
}

double ObjectiveTable::pooled(std::size_t first, std::size_t last, std::size_t z) const {
    double s = 0.0;
    for (std::size_t n = first; n <= last; ++n) s += values_[n][z];
    return s;
}

std::size_t ObjectiveTable::pooled_argmax(std::size_t first, std::size_t last) const {
    std::size_t best = grid_.count;
    double best_val = kNegInf;
    for (std::size_t z = 0; z < grid_.count; ++z) {
        const double v = pooled(first, last, z);
        if (v > best_val) {
            best_val = v;
            best = z;
        }
    }
    if (best == grid_.count) {
        throw Infeasible("no grid frequency gives positive performance for types " + std::to_string(first + 1) +
                         ".." + std::to_string(last + 1));
    }
    return best;
}

double per_type_grid_argmax(int n, std::span<const WorkerType> types, const ProviderEconomics& econ,
                            const TimingParams& timing, const SolverParams& params) {
    if (n < 1 || n > static_cast<int>(types.size())) throw DomainError("type index out of range");
    const auto b = reduced_coefficients(types);
    const std::size_t k = static_cast<std::size_t>(n - 1);
    const ObjectiveTable table(types.subspan(k, 1), std::span<const double>(&b[k], 1), econ, timing, params);
    return table.grid().at(table.argmax(0));
}

IroningResult iron_monotone(const ObjectiveTable& table, std::span<const std::size_t> raw_index) {
    if (raw_index.size() != table.types()) throw DomainError("raw allocation length must equal the number of types");
    struct Block {
        std::size_t first, last, z;
    };
    std::vector<Block> blocks;
    for (std::size_t n = 0; n < raw_index.size(); ++n) {
        blocks.push_back({n, n, raw_index[n]});
        while (blocks.size() > 1 && blocks.back().z < blocks[blocks.size() - 2].z) {
            const Block top = blocks.back();
            blocks.pop_back();
            Block& prev = blocks.back();
            prev.last = top.last;
            prev.z = table.pooled_argmax(prev.first, prev.last);
        }
    }
    IroningResult out;
    for (const auto& blk : blocks) {
        for (std::size_t n = blk.first; n <= blk.last; ++n) {
            out.grid_index.push_back(blk.z);
            out.f.push_back(table.grid().at(blk.z));
        }
        if (blk.last > blk.first) {
            out.groups.push_back({static_cast<int>(blk.first) + 1, static_cast<int>(blk.last) + 1});
        }
    }
    return out;
}

IroningResult iron_monotone(std::span<const double> f_raw, std::span<const WorkerType> types,
                            const ProviderEconomics& econ, const TimingParams& timing,
                            const SolverParams& params) {
    const auto b = reduced_coefficients(types);
    const ObjectiveTable table(types, b, econ, timing, params);
    std::vector<std::size_t> idx;
    idx.reserve(f_raw.size());
    for (double f : f_raw) idx.push_back(table.grid().nearest(f));
    return iron_monotone(table, idx);
}

std::vector<double> optimal_rewards(std::span<const double> f, std::span<const WorkerType> types) {
    if (f.size() != types.size() || f.empty()) throw DomainError("frequency vector length must equal the number of types");
    std::vector<double> r(f.size());
    r[0] = f[0] / types[0].gamma;
    for (std::size_t n = 1; n < f.size(); ++n) r[n] = r[n - 1] + (f[n] - f[n - 1]) / types[n].gamma;
    return r;
}

double social_welfare(const ContractMenu& menu, std::span<const WorkerType> types,
                      const ProviderEconomics& econ, const TimingParams& timing,
                      FreshnessVariant variant) {
    double w = provider_utility(menu, types, econ, timing, variant);
    for (std::size_t n = 0; n < types.size(); ++n) {
        w += econ.M * types[n].q * worker_utility(menu.items[n], types[n]);
    }
    return w;
}

SolveResult solve_ca(std::span<const WorkerType> types, const ProviderEconomics& econ,
                     const TimingParams& timing, const SolverParams& params) {
    check_inputs(types, econ, timing, params);
    const auto b = reduced_coefficients(types);
    const ObjectiveTable table(types, b, econ, timing, params);
    std::vector<std::size_t> raw(types.size());
    for (std::size_t n = 0; n < types.size(); ++n) raw[n] = table.argmax(n);
    auto ironed = iron_monotone(table, raw);
    auto r = optimal_rewards(ironed.f, types);
    return finish(Mechanism::CA, types, econ, timing, params, std::move(ironed.f), std::move(r),
                  std::move(ironed.groups), table.grid().count);
}

SolveResult solve_cc(std::span<const WorkerType> types, const ProviderEconomics& econ,
                     const TimingParams& timing, const SolverParams& params) {
    check_inputs(types, econ, timing, params);
    const auto w = complete_info_weights(types);
    const ObjectiveTable table(types, w, econ, timing, params);
    std::vector<double> f(types.size()), r(types.size());
    for (std::size_t n = 0; n < types.size(); ++n) {
        f[n] = table.grid().at(table.argmax(n));
        r[n] = f[n] / types[n].gamma;
    }
    return finish(Mechanism::CC, types, econ, timing, params, std::move(f), std::move(r), {}, table.grid().count);
}

SolveResult solve_cs(std::span<const WorkerType> types, const ProviderEconomics& econ,
                     const TimingParams& timing, const SolverParams& params) {
    check_inputs(types, econ, timing, params);
    const auto w = complete_info_weights(types);
    const ObjectiveTable table(types, w, econ, timing, params);
    std::vector<std::size_t> raw(types.size());
    for (std::size_t n = 0; n < types.size(); ++n) raw[n] = table.argmax(n);
    auto ironed = iron_monotone(table, raw);
    auto r = optimal_rewards(ironed.f, types);
    return finish(Mechanism::CS, types, econ, timing, params, std::move(ironed.f), std::move(r),
                  std::move(ironed.groups), table.grid().count);
}

SolveResult solve(Mechanism mechanism, std::span<const WorkerType> types, const ProviderEconomics& econ,
                  const TimingParams& timing, const SolverParams& params) {
    switch (mechanism) {
        case Mechanism::CA: return solve_ca(types, econ, timing, params);
        case Mechanism::CC: return solve_cc(types, econ, timing, params);
        case Mechanism::CS: return solve_cs(types, econ, timing, params);
    }
    throw DomainError("unknown mechanism");
}

ComplexityReport complexity_report(const TimingParams& timing, const SolverParams& params, std::size_t types) {
    if (!(params.phi > 0.0)) throw DomainError("solver.phi must be > 0");
    const double span = (params.resolved_f_max(timing) - params.f_min) / params.phi;
    if (span < 0.0) throw DomainError("solver.f_min must not exceed solver.f_max");
    ComplexityReport rep;
    rep.grid_points_per_type = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    rep.total_evaluations = rep.grid_points_per_type * types;
    rep.claimed_log_evaluations = span > 1.0 ? static_cast<double>(types) * std::log2(span) : 0.0;
    return rep;
}

}  // namespace aoicontract

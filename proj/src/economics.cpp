#include "aoicontract/economics.hpp"

#include <cmath>
#include <string>

#include "aoicontract/errors.hpp"

namespace aoicontract {

void ProviderEconomics::validate() const {
    if (!(beta > 0.0)) throw DomainError("provider.beta must be > 0");
    if (!(K > 0.0)) throw DomainError("provider.K must be > 0");
    if (!(H > 0.0)) throw DomainError("provider.H must be > 0");
    if (M < 1) throw DomainError("population.M must be >= 1");
}

void validate_population(std::span<const WorkerType> types) {
    if (types.empty()) throw DomainError("population must contain at least one type");
    double total = 0.0;
    for (std::size_t n = 0; n < types.size(); ++n) {
        const auto& w = types[n];
        if (!(w.gamma > 0.0)) throw DomainError("type " + std::to_string(n + 1) + ": gamma must be > 0");
        if (!(w.q > 0.0 && w.q <= 1.0)) throw DomainError("type " + std::to_string(n + 1) + ": q must lie in (0, 1]");
        if (!(w.alpha >= 0.0 && w.alpha <= 1.0)) {
            throw DomainError("type " + std::to_string(n + 1) + ": alpha must lie in [0, 1]");
        }
        if (n > 0 && w.gamma < types[n - 1].gamma) throw DomainError("types must be sorted by nondecreasing gamma");
        total += w.q;
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("type probabilities must sum to 1");
}

double worker_utility(const ContractItem& item, const WorkerType& type) {
    return item.r - item.f / type.gamma;
}

double performance(double f, const WorkerType& type, const ProviderEconomics& econ,
                   const TimingParams& timing, FreshnessVariant variant) {
    if (!(f > 0.0)) throw DomainError("update frequency must be > 0");
    const double theta = 1.0 / f;
    const double aoi = avg_aoi_theta(theta, timing.a, timing.t, variant);
    const double latency = avg_latency_theta(theta, timing.a, timing.t, variant);
    return type.alpha * (econ.K - aoi) + (1.0 - type.alpha) * (econ.H - latency);
}

double satisfaction(double f, const WorkerType& type, const ProviderEconomics& econ,
                    const TimingParams& timing, FreshnessVariant variant) {
    const double g = performance(f, type, econ, timing, variant);
    if (!(g > 0.0)) {
        throw NonpositivePerformance("performance g=" + std::to_string(g) + " at f=" + std::to_string(f) +
                                     " for type " + std::to_string(type.index));
    }
    return econ.beta * std::log(g);
}

double provider_utility(const ContractMenu& menu, std::span<const WorkerType> types,
                        const ProviderEconomics& econ, const TimingParams& timing,
                        FreshnessVariant variant) {
    if (menu.items.size() != types.size()) throw DomainError("menu length must equal the number of types");
    double total = 0.0;
    for (std::size_t n = 0; n < types.size(); ++n) {
        const double G = satisfaction(menu.items[n].f, types[n], econ, timing, variant);
        total += econ.M * types[n].q * (G - menu.items[n].r);
    }
    return total;
}

ContractMenu verify_ic_ir(ContractMenu menu, std::span<const WorkerType> types) {
    if (menu.items.empty() || menu.items.size() != types.size()) {
        throw DomainError("menu length must equal the number of types (>= 1)");
    }
    menu.violations.clear();
    const int n_types = static_cast<int>(types.size());
    for (int n = 0; n < n_types; ++n) {
        const double own = worker_utility(menu.items[n], types[n]);
        if (own < -kConstraintTol) menu.violations.push_back({ConstraintKind::IR, n + 1, n + 1, own});
        for (int i = 0; i < n_types; ++i) {
            if (i == n) continue;
            const double slack = own - worker_utility(menu.items[i], types[n]);
            if (slack < -kConstraintTol) menu.violations.push_back({ConstraintKind::IC, n + 1, i + 1, slack});
        }
    }
    menu.feasible = menu.violations.empty();
    return menu;
}

Lemma1Report check_lemma1(const ContractMenu& menu, std::span<const WorkerType> types) {
    if (menu.items.size() != types.size() || types.empty()) {
        throw DomainError("menu length must equal the number of types (>= 1)");
    }
    const auto& it = menu.items;
    Lemma1Report rep;
    rep.ir_lowest = worker_utility(it[0], types[0]) >= -kConstraintTol;
    rep.monotone = rep.ldic = rep.luic = true;
    for (std::size_t n = 1; n < it.size(); ++n) {
        if (it[n].r < it[n - 1].r - kConstraintTol || it[n].f < it[n - 1].f - kConstraintTol) rep.monotone = false;
        if (worker_utility(it[n], types[n]) < worker_utility(it[n - 1], types[n]) - kConstraintTol) rep.ldic = false;
        if (worker_utility(it[n - 1], types[n - 1]) < worker_utility(it[n], types[n - 1]) - kConstraintTol) {
            rep.luic = false;
        }
    }
    return rep;
}

std::vector<double> reduced_coefficients(std::span<const WorkerType> types) {
    const std::size_t n_types = types.size();
    std::vector<double> b(n_types);
    double tail = 0.0;  // sum_{j>n} Q_j
    for (std::size_t k = n_types; k-- > 0;) {
        b[k] = types[k].q / types[k].gamma;
        if (k + 1 < n_types) b[k] += (1.0 / types[k].gamma - 1.0 / types[k + 1].gamma) * tail;
        tail += types[k].q;
    }
    return b;
}

double reduced_provider_utility(std::span<const double> f, std::span<const WorkerType> types,
                                const ProviderEconomics& econ, const TimingParams& timing,
                                FreshnessVariant variant) {
    if (f.size() != types.size()) throw DomainError("frequency vector length must equal the number of types");
    const auto b = reduced_coefficients(types);
    double total = 0.0;
    for (std::size_t n = 0; n < types.size(); ++n) {
        total += econ.M * (types[n].q * satisfaction(f[n], types[n], econ, timing, variant) - b[n] * f[n]);
    }
    return total;
}

std::string to_string(ConstraintKind kind) {
    return kind == ConstraintKind::IC ? "IC" : "IR";
}

}  // namespace aoicontract

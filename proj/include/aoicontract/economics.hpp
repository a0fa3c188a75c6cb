#pragma once

#include <span>
#include <string>
#include <vector>

#include "aoicontract/freshness.hpp"

namespace aoicontract {

/// Constraint tolerance for IC/IR and Lemma-style checks.
inline constexpr double kConstraintTol = 1e-9;

/// A screening type. `gamma` is the inverse unit update cost; larger is cheaper.
struct WorkerType {
    int index = 1;  // 1-based
    double gamma = 0.0;
    double q = 0.0;
    double alpha = 0.5;
};

/// One menu entry: update frequency f = 1/theta and reward r.
struct ContractItem {
    double f = 0.0;
    double r = 0.0;
};

enum class ConstraintKind { IC, IR };

struct Violation {
    ConstraintKind kind = ConstraintKind::IR;
    int type = 0;  // worker whose constraint fails (1-based)
    int item = 0;  // item it would rather take (== type for IR)
    double slack = 0.0;
};

struct ContractMenu {
    std::vector<ContractItem> items;
    bool feasible = false;
    std::vector<Violation> violations;
};

struct ProviderEconomics {
    double beta = 20.0;
    double K = 200.0;
    double H = 50.0;
    int M = 20;

    void validate() const;
};

/// Checks gamma > 0, q in (0, 1], alpha in [0, 1], sorted gamma and sum q == 1.
void validate_population(std::span<const WorkerType> types);

/// U_n = r - f / gamma
double worker_utility(const ContractItem& item, const WorkerType& type);

/// g = alpha (K - AoI(theta)) + (1 - alpha) (H - latency(theta)) at theta = 1/f.
double performance(double f, const WorkerType& type, const ProviderEconomics& econ,
                   const TimingParams& timing, FreshnessVariant variant);

/// G = beta ln g. Throws NonpositivePerformance when g <= 0.
double satisfaction(double f, const WorkerType& type, const ProviderEconomics& econ,
                    const TimingParams& timing, FreshnessVariant variant);

/// sum_n M Q_n (G_n - R_n)
double provider_utility(const ContractMenu& menu, std::span<const WorkerType> types,
                        const ProviderEconomics& econ, const TimingParams& timing,
                        FreshnessVariant variant);

/// Checks all N(N-1) IC and N IR inequalities and fills the certificate.
ContractMenu verify_ic_ir(ContractMenu menu, std::span<const WorkerType> types);

struct Lemma1Report {
    bool ir_lowest = false;  // (a.1)
    bool monotone = false;   // (a.2)
    bool ldic = false;       // (a.3)
    bool luic = false;       // (a.4)

    bool all() const { return ir_lowest && monotone && ldic && luic; }
};

/// Evaluates the four reduced feasibility conditions: IR of the lowest type,
/// monotone f and R, local downward IC and local upward IC.
Lemma1Report check_lemma1(const ContractMenu& menu, std::span<const WorkerType> types);

/// Coefficients b_n of the reduced provider objective sum_n M (Q_n G_n - b_n f_n)
/// obtained by substituting the rent-minimizing rewards.
std::vector<double> reduced_coefficients(std::span<const WorkerType> types);

double reduced_provider_utility(std::span<const double> f, std::span<const WorkerType> types,
                                const ProviderEconomics& econ, const TimingParams& timing,
                                FreshnessVariant variant);

std::string to_string(ConstraintKind kind);

}  // namespace aoicontract

#include "aoicontract/freshness.hpp"

#include <cstring>
#include <string>

#include "aoicontract/errors.hpp"

namespace aoicontract {

namespace {

void require_ca(int c, int a, double t) {
    if (c < 1) throw DomainError("collection periods c must be >= 1, got " + std::to_string(c));
    if (a < 1) throw DomainError("idle periods a must be >= 1, got " + std::to_string(a));
    if (!(t > 0.0)) throw DomainError("period length t must be > 0");
}

void require_theta(double theta, int a, double t) {
    if (a < 1) throw DomainError("idle periods a must be >= 1, got " + std::to_string(a));
    if (!(t > 0.0)) throw DomainError("period length t must be > 0");
    if (!(theta > a * t)) {
        throw DomainError("update cycle theta=" + std::to_string(theta) +
                          " must exceed a*t=" + std::to_string(a * t));
    }
}

}  // namespace

void TimingParams::validate() const {
    if (!(t > 0.0)) throw DomainError("timing.t must be > 0");
    if (a < 1) throw DomainError("timing.a must be >= 1");
    if (c_min < 1 || c_min > c_max) throw DomainError("timing requires 1 <= c_min <= c_max");
}

const char* to_string(FreshnessVariant v) {
    return v == FreshnessVariant::PaperForm ? "paper" : "oracle";
}

FreshnessVariant parse_variant(const char* name) {
    if (std::strcmp(name, "paper") == 0) return FreshnessVariant::PaperForm;
    if (std::strcmp(name, "oracle") == 0) return FreshnessVariant::OracleForm;
    throw DomainError(std::string("unknown freshness variant '") + name + "' (expected paper|oracle)");
}

double update_cycle(int c, int a, double t) {
    require_ca(c, a, t);
    return (c + a) * t;
}

double avg_latency_ca(int c, int a, double t, FreshnessVariant variant) {
    require_ca(c, a, t);
    const double cd = c, ad = a;
    if (variant == FreshnessVariant::PaperForm) {
        return (cd / (cd + ad)) * (cd * t / 2.0) * (cd + 3.0) + ad * t / (cd + ad);
    }
    return (cd * t * (cd + 3.0) / 2.0 + ad * t) / (cd + ad);
}

double avg_aoi_ca(int c, int a, double t, FreshnessVariant /*variant*/) {
    require_ca(c, a, t);
    const double cd = c, ad = a;
    return (t / (cd + ad)) * (cd + 1.0 + (ad - 1.0) * (ad + 2.0) / 2.0);
}

double avg_latency_theta(double theta, int a, double t, FreshnessVariant variant) {
    require_theta(theta, a, t);
    const double x = theta - a * t;  // collection time c*t
    if (variant == FreshnessVariant::PaperForm) {
        return x * x * x / (2.0 * t * theta) + 3.0 * x * x / (2.0 * theta) + a * t * t / theta;
    }
    return (x * (x + 3.0 * t) / 2.0 + a * t * t) / theta;
}

double avg_aoi_theta(double theta, int a, double t, FreshnessVariant variant) {
    require_theta(theta, a, t);
    const double ad = a;
    const double idle_term = (ad * ad - ad) / 2.0;
    if (variant == FreshnessVariant::PaperForm) {
        const double x = theta - a * t;
        return t * theta / x + (t * t / x) * idle_term;
    }
    return t + t * t * idle_term / theta;
}

CycleMetrics oracle_metrics(int c, int a, double t) {
    require_ca(c, a, t);
    long long latency_periods = 0;
    long long aoi_periods = 0;
    const int periods = c + a;
    for (int l = 1; l <= periods; ++l) {
        // request raised in collection period z = l waits for the rest of the
        // collection phase plus one iteration
        latency_periods += (l <= c) ? (c + 1 - (l - 1)) : 1;
        aoi_periods += (l <= c + 1) ? 1 : (l - c);
    }
    CycleMetrics m;
    m.avg_latency = static_cast<double>(latency_periods) * t / periods;
    m.avg_aoi = static_cast<double>(aoi_periods) * t / periods;
    m.theta = periods * t;
    return m;
}

bool is_convex_on_grid(int a, double t, FreshnessVariant variant,
                       std::span<const double> theta_grid, bool aoi) {
    if (theta_grid.size() < 3) throw DomainError("convexity grid needs at least 3 points");
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
        if (!(theta_grid[i] > a * t)) throw DomainError("convexity grid point must exceed a*t");
        if (i > 0 && !(theta_grid[i] > theta_grid[i - 1])) {
            throw DomainError("convexity grid must be strictly increasing");
        }
    }
    auto curve = [&](double th) {
        return aoi ? avg_aoi_theta(th, a, t, variant) : avg_latency_theta(th, a, t, variant);
    };
    for (std::size_t i = 1; i + 1 < theta_grid.size(); ++i) {
        const double x0 = theta_grid[i - 1], x1 = theta_grid[i], x2 = theta_grid[i + 1];
        const double left = (curve(x1) - curve(x0)) / (x1 - x0);
        const double right = (curve(x2) - curve(x1)) / (x2 - x1);
        if (right - left < -1e-9) return false;
    }
    return true;
}

bool convexity_probe(int a, double t, FreshnessVariant variant,
                     std::span<const double> theta_grid) {
    return is_convex_on_grid(a, t, variant, theta_grid, false) &&
           is_convex_on_grid(a, t, variant, theta_grid, true);
}

}  // namespace aoicontract

#pragma once

#include <span>

namespace aoicontract {

/// Slot timing shared by every worker.
///
/// `t` is the length of one global iteration plus consensus (t = t_u + t_c),
/// `a` the number of idle periods after collection, and `[c_min, c_max]` the
/// admissible number of collection periods.
struct TimingParams {
    double t = 2.0;
    int a = 2;
    int c_min = 1;
    int c_max = 15;

    void validate() const;
};

/// Which closed forms to evaluate.
///
/// `PaperForm` keeps the published latency/AoI expressions verbatim. They
/// disagree with the period-enumeration model for c >= 2 (latency) and in the
/// theta-parameterized AoI. `OracleForm` uses the enumeration-consistent
/// expressions.
enum class FreshnessVariant { PaperForm, OracleForm };

const char* to_string(FreshnessVariant v);
FreshnessVariant parse_variant(const char* name);

struct CycleMetrics {
    double avg_latency = 0.0;
    double avg_aoi = 0.0;
    double theta = 0.0;
};

/// theta = (c + a) * t
double update_cycle(int c, int a, double t);

double avg_latency_ca(int c, int a, double t, FreshnessVariant variant);
double avg_aoi_ca(int c, int a, double t, FreshnessVariant variant);

/// Latency with c = theta/t - a treated as continuous. Requires theta > a*t.
double avg_latency_theta(double theta, int a, double t, FreshnessVariant variant);
/// AoI with c = theta/t - a treated as continuous. Requires theta > a*t.
double avg_aoi_theta(double theta, int a, double t, FreshnessVariant variant);

/// Exhaustive enumeration over the c + a equiprobable request-arrival periods
/// of one update cycle. Sums are accumulated in integer period units and
/// divided once, so the result is exact up to the final rounding.
CycleMetrics oracle_metrics(int c, int a, double t);

/// True iff the second divided differences of both avg_latency_theta and
/// avg_aoi_theta are >= -1e-9 on the grid.
bool convexity_probe(int a, double t, FreshnessVariant variant,
                     std::span<const double> theta_grid);

/// Same test for a single curve: AoI when `aoi` is set, latency otherwise.
bool is_convex_on_grid(int a, double t, FreshnessVariant variant,
                       std::span<const double> theta_grid, bool aoi);

}  // namespace aoicontract

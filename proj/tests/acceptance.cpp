// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and runtime
// budgets are fixed here; the exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "aoicontract/cli.hpp"
#include "aoicontract/economics.hpp"
#include "aoicontract/errors.hpp"
#include "aoicontract/experiments.hpp"
#include "aoicontract/flsim.hpp"
#include "aoicontract/freshness.hpp"
#include "aoicontract/solver.hpp"

namespace fs = std::filesystem;
using namespace aoicontract;
using V = FreshnessVariant;

namespace {

constexpr double kExactTol = 1e-12;
constexpr double kTol = 1e-9;

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Records the first few failures and counts the rest.
class Checker {
public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (ok) return;
        ++failures_;
        if (failures_ <= 3) first_.push_back(what);
    }
    bool ok() const { return failures_ == 0; }
    std::string summary() const {
        std::string s = fmt::format("{} checks", checks_);
        if (failures_ > 0) {
            s += fmt::format(", {} failed", failures_);
            for (const auto& f : first_) s += "; " + f;
        }
        return s;
    }

private:
    long checks_ = 0;
    long failures_ = 0;
    std::vector<std::string> first_;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s;  // wall-clock budget on one core
    std::function<Outcome()> body;
};

// ---------------------------------------------------------------------------
// 1. Freshness closed forms against a timestamp enumeration.

struct Enumerated {
    double latency;
    double aoi;
};

// One cycle of c collection and a idle periods of length t. A request raised
// at the start of period l waits for the cache refresh at c t when l <= c,
// then takes one period to serve. Integer sums, one division.
Enumerated enumerate_cycle(int c, int a, double t) {
    long long lat = 0, aoi = 0;
    for (int l = 1; l <= c + a; ++l) {
        const long long request = l - 1;
        const long long done = std::max<long long>(request, c) + 1;
        lat += done - request;
        aoi += done - c;
    }
    return {static_cast<double>(lat) * t / (c + a), static_cast<double>(aoi) * t / (c + a)};
}

Outcome criterion_oracle() {
    Checker ck;
    for (double t : {1.0, 2.0}) {
        for (int c = 1; c <= 15; ++c) {
            for (int a = 1; a <= 15; ++a) {
                const auto e = enumerate_cycle(c, a, t);
                const double theta = (c + a) * t;
                const std::string at = fmt::format("c={} a={} t={}", c, a, t);
                ck.expect(std::abs(avg_latency_ca(c, a, t, V::OracleForm) - e.latency) <= kExactTol,
                          "oracle latency " + at);
                ck.expect(std::abs(avg_latency_theta(theta, a, t, V::OracleForm) - e.latency) <= kExactTol,
                          "oracle theta latency " + at);
                ck.expect(std::abs(avg_aoi_ca(c, a, t, V::OracleForm) - e.aoi) <= kExactTol, "oracle AoI " + at);
                ck.expect(std::abs(avg_aoi_theta(theta, a, t, V::OracleForm) - e.aoi) <= kExactTol,
                          "oracle theta AoI " + at);
                const double printed = avg_latency_ca(c, a, t, V::PaperForm);
                ck.expect(std::abs(avg_latency_theta(theta, a, t, V::PaperForm) - printed) <= kTol,
                          "theta form vs (c,a) form " + at);
                const double gap = (c - 1.0) * c * t * (c + 3.0) / (2.0 * (c + a));
                ck.expect(std::abs((printed - e.latency) - gap) <= kTol, "latency gap " + at);
            }
        }
    }
    return {ck.ok(), ck.summary()};
}

// ---------------------------------------------------------------------------
// 2. Feasibility of CA menus.

ScenarioConfig random_scenario(std::mt19937_64& rng, double phi) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ScenarioConfig cfg;
    cfg.population.N = 1 + static_cast<int>(u(rng) * 10);
    cfg.population.gamma_min = 0.0005 + 0.004 * u(rng);
    cfg.population.gamma_max = cfg.population.gamma_min * (1.5 + 9.0 * u(rng));
    cfg.population.distribution = u(rng) < 0.5 ? TypeDistribution::Grid : TypeDistribution::Sampled;
    cfg.seed = rng();
    cfg.provider.beta = 5.0 + 45.0 * u(rng);
    cfg.provider.K = 150.0 + 150.0 * u(rng);
    cfg.provider.H = 30.0 + 70.0 * u(rng);
    cfg.provider.M = 1 + static_cast<int>(u(rng) * 50);
    cfg.alpha = 0.05 + 0.9 * u(rng);
    cfg.timing.t = u(rng) < 0.5 ? 1.0 : 2.0;
    cfg.timing.a = 1 + static_cast<int>(u(rng) * 6);
    cfg.solver.phi = phi;
    cfg.solver.variant = u(rng) < 0.5 ? V::PaperForm : V::OracleForm;
    return cfg;
}

void check_feasible_menu(Checker& ck, const ScenarioConfig& cfg, const std::string& label) {
    const auto types = build_population(cfg);
    const auto res = solve_scenario(cfg, Mechanism::CA);
    const auto& items = res.menu.items;
    const auto n = types.size();

    // every IC/IR constraint, recomputed here
    bool all = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double own = worker_utility(items[i], types[i]);
        if (own < -kTol) all = false;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && worker_utility(items[j], types[i]) > own + kTol) all = false;
        }
    }
    ck.expect(all && res.menu.feasible, label + ": IC/IR");

    const auto matrix = choice_matrix(cfg);
    bool diagonal = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double best = *std::max_element(matrix[i].begin(), matrix[i].end());
        if (matrix[i][i] < best - kTol) diagonal = false;
    }
    ck.expect(diagonal, label + ": choice matrix");

    const auto& uw = res.worker_utilities;
    bool nonneg = std::all_of(uw.begin(), uw.end(), [](double x) { return x >= -kTol; });
    bool nondecreasing = true;
    for (std::size_t i = 1; i < n; ++i) nondecreasing = nondecreasing && uw[i] >= uw[i - 1] - kTol;
    ck.expect(nonneg && nondecreasing, label + ": worker utilities");

    bool ldic = true;
    for (std::size_t i = 1; i < n; ++i) {
        const double gap = worker_utility(items[i], types[i]) - worker_utility(items[i - 1], types[i]);
        if (std::abs(gap) > kTol) ldic = false;
    }
    ck.expect(ldic, label + ": LDIC binding");
}

Outcome criterion_feasibility() {
    Checker ck;
    check_feasible_menu(ck, ScenarioConfig{}, "default");
    std::mt19937_64 rng(20240601);
    int infeasible = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto cfg = random_scenario(rng, 1e-4);
        try {
            check_feasible_menu(ck, cfg, fmt::format("scenario {}", trial));
        } catch (const Infeasible&) {
            ++infeasible;
        }
    }
    ck.expect(infeasible == 0, fmt::format("{} random scenarios had no solution", infeasible));
    return {ck.ok(), ck.summary() + " (default + 1000 random)"};
}

// ---------------------------------------------------------------------------
// 3. Provider utility with optimal rewards equals the reduced objective.

Outcome criterion_reduction() {
    Checker ck;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        auto cfg = random_scenario(rng, 1e-4);
        const auto types = build_population(cfg);
        // shorter cycles keep g > 0, where the objective is defined
        const double lo = 1.0 / ((6.0 + cfg.timing.a) * cfg.timing.t);
        const double hi = cfg.solver.resolved_f_max(cfg.timing);
        std::vector<double> f(types.size());
        for (auto& x : f) x = lo + (hi - lo) * u(rng);
        std::sort(f.begin(), f.end());

        const auto r = optimal_rewards(f, types);
        ContractMenu menu;
        for (std::size_t i = 0; i < f.size(); ++i) menu.items.push_back({f[i], r[i]});
        try {
            const double full = provider_utility(menu, types, cfg.provider, cfg.timing, cfg.solver.variant);
            const double reduced = reduced_provider_utility(f, types, cfg.provider, cfg.timing, cfg.solver.variant);
            ck.expect(std::abs(full - reduced) <= kTol * std::max(1.0, std::abs(full)),
                      fmt::format("trial {}: {} vs {}", trial, full, reduced));
        } catch (const NonpositivePerformance&) {
            ck.expect(false, fmt::format("trial {}: g <= 0", trial));
        }
        const auto b = reduced_coefficients(types);
        double paid = 0.0, weighted = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            paid += types[i].q * r[i];
            weighted += b[i] * f[i];
        }
        ck.expect(std::abs(paid - weighted) <= kTol * std::max(1.0, std::abs(paid)),
                  fmt::format("trial {}: sum Q R", trial));
    }
    return {ck.ok(), ck.summary()};
}

// ---------------------------------------------------------------------------
// 4. Mechanism ordering across the idle-period count.

Outcome criterion_ordering() {
    Checker ck;
    const ScenarioConfig cfg;
    const auto types = build_population(cfg);
    const auto b = reduced_coefficients(types);
    const double slack = 2.0 * cfg.solver.phi * cfg.provider.M * *std::max_element(b.begin(), b.end());

    const auto sweep = sweep_duration(cfg, cfg.a_values);
    std::vector<double> us_ca;
    for (const auto& p : sweep.points) {
        const std::string at = fmt::format("a={}", p.axis_value);
        if (!p.ca || !p.cc || !p.cs) {
            ck.expect(false, at + ": unsolved");
            continue;
        }
        us_ca.push_back(p.ca->provider_utility);
        ck.expect(p.cc->provider_utility >= p.ca->provider_utility - slack, at + ": Us CC >= CA");
        ck.expect(p.ca->provider_utility >= p.cs->provider_utility - slack, at + ": Us CA >= CS");
        for (std::size_t i = 0; i < types.size(); ++i) {
            ck.expect(p.cs->worker_utilities[i] >= p.ca->worker_utilities[i] - slack,
                      fmt::format("{} type {}: Uw CS >= CA", at, i + 1));
            ck.expect(p.ca->worker_utilities[i] >= p.cc->worker_utilities[i] - slack,
                      fmt::format("{} type {}: Uw CA >= CC", at, i + 1));
            ck.expect(std::abs(p.cc->worker_utilities[i]) <= slack,
                      fmt::format("{} type {}: Uw CC = 0", at, i + 1));
        }
    }
    std::string shape;
    if (!us_ca.empty()) {
        const auto best = static_cast<std::size_t>(std::max_element(us_ca.begin(), us_ca.end()) - us_ca.begin());
        const bool interior = best > 0 && best + 1 < us_ca.size();
        shape = fmt::format("; Us(CA) peaks at a={} ({:.6g} vs {:.6g} at a={} and {:.6g} at a={})",
                            sweep.points[best].axis_value, us_ca[best], us_ca.front(),
                            sweep.points.front().axis_value, us_ca.back(), sweep.points.back().axis_value);
        ck.expect(interior, "Us(CA) maximum is not interior");
    }
    return {ck.ok(), ck.summary() + shape};
}

// ---------------------------------------------------------------------------
// 5. Preference-factor sweep.

Outcome criterion_alpha() {
    Checker ck;
    ScenarioConfig cfg;
    const auto sweep = sweep_alpha(cfg, cfg.alpha_values);
    const auto variant = cfg.solver.variant;
    const auto& timing = cfg.timing;

    bool condition = true;  // K - A > H - D at every solved point
    for (const auto& p : sweep.points) {
        if (!p.ca) {
            ck.expect(false, fmt::format("alpha={}: unsolved", p.axis_value));
            continue;
        }
        for (double f : p.ca->f_star) {
            const double theta = 1.0 / f;
            const double A = avg_aoi_theta(theta, timing.a, timing.t, variant);
            const double D = avg_latency_theta(theta, timing.a, timing.t, variant);
            condition = condition && (cfg.provider.K - A > cfg.provider.H - D);
        }
    }

    int reward_drops = 0, cycle_drops = 0;
    if (condition) {
        for (std::size_t k = 1; k < sweep.points.size(); ++k) {
            const auto& prev = sweep.points[k - 1].ca;
            const auto& cur = sweep.points[k].ca;
            if (!prev || !cur) continue;
            for (std::size_t i = 0; i < cur->f_star.size(); ++i) {
                if (cur->r_star[i] < prev->r_star[i] - kTol) ++reward_drops;
                if (implied_cycles(cur->f_star[i], timing) < implied_cycles(prev->f_star[i], timing) - kTol)
                    ++cycle_drops;
            }
        }
        ck.expect(cycle_drops == 0, fmt::format("implied cycles decrease in alpha {} times", cycle_drops));
        ck.expect(reward_drops == 0, fmt::format("R* decreases in alpha {} times", reward_drops));
    }

    // g is affine in alpha with slope (K - A) - (H - D) at fixed f
    const auto types = build_population(cfg);
    const double h = 1e-3;
    for (double f : {0.05, 0.08, 0.11, 0.14, 0.16}) {
        const double theta = 1.0 / f;
        const double A = avg_aoi_theta(theta, timing.a, timing.t, variant);
        const double D = avg_latency_theta(theta, timing.a, timing.t, variant);
        const double slope = (cfg.provider.K - A) - (cfg.provider.H - D);
        for (double alpha : cfg.alpha_values) {
            WorkerType w = types.front();
            w.alpha = alpha;
            const double g0 = performance(f, w, cfg.provider, timing, variant);
            w.alpha = alpha + h;
            const double g1 = performance(f, w, cfg.provider, timing, variant);
            ck.expect(std::abs((g1 - g0) / h - slope) <= kTol * std::max(1.0, std::abs(slope)),
                      fmt::format("g slope at f={} alpha={}", f, alpha));
        }
    }
    std::string note = condition ? "" : "; K-A > H-D does not hold on the path, monotonicity not required";
    return {ck.ok(), ck.summary() + note};
}

// ---------------------------------------------------------------------------
// 6. Ironing against exhaustive search.

double best_nondecreasing(const ObjectiveTable& table, std::size_t n) {
    const std::size_t z = table.grid().count;
    double best = -std::numeric_limits<double>::infinity();
    if (n == 1) {
        for (std::size_t i = 0; i < z; ++i) best = std::max(best, table.value(0, i));
    } else if (n == 2) {
        for (std::size_t i = 0; i < z; ++i)
            for (std::size_t j = i; j < z; ++j) best = std::max(best, table.value(0, i) + table.value(1, j));
    } else {
        for (std::size_t i = 0; i < z; ++i)
            for (std::size_t j = i; j < z; ++j)
                for (std::size_t k = j; k < z; ++k)
                    best = std::max(best, table.value(0, i) + table.value(1, j) + table.value(2, k));
    }
    return best;
}

Outcome criterion_ironing() {
    Checker ck;
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int instances = 0, pooled = 0;
    for (int trial = 0; trial < 600; ++trial) {
        const int n = 1 + trial % 3;
        TimingParams timing;
        timing.t = u(rng) < 0.5 ? 1.0 : 2.0;
        timing.a = 1 + static_cast<int>(u(rng) * 5);
        ProviderEconomics econ;
        SolverParams params;
        params.variant = u(rng) < 0.5 ? V::PaperForm : V::OracleForm;
        params.phi = (params.resolved_f_max(timing) - params.f_min) / 49.0;

        // unequal shares and alphas make the raw allocation non-monotone
        std::vector<double> gamma(n), share(n);
        for (auto& g : gamma) g = 0.001 + 0.009 * u(rng);
        std::sort(gamma.begin(), gamma.end());
        double total = 0.0;
        for (auto& s : share) total += (s = 0.05 + u(rng));
        std::vector<WorkerType> types;
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double q = i + 1 == n ? 1.0 - acc : share[i] / total;
            acc += q;
            types.push_back({i + 1, gamma[i], q, u(rng)});
        }
        const auto b = reduced_coefficients(types);
        const ObjectiveTable table(types, b, econ, timing, params);
        ck.expect(table.grid().count == 50, fmt::format("trial {}: grid has {} points", trial, table.grid().count));

        std::vector<std::size_t> raw(n);
        try {
            for (int i = 0; i < n; ++i) raw[i] = table.argmax(i);
        } catch (const Infeasible&) {
            continue;
        }
        ++instances;
        const auto res = iron_monotone(table, raw);
        if (!res.groups.empty()) ++pooled;
        double got = 0.0;
        for (int i = 0; i < n; ++i) got += table.value(i, res.grid_index[i]);
        const double best = best_nondecreasing(table, n);
        ck.expect(got >= best - kTol * std::max(1.0, std::abs(best)),
                  fmt::format("trial {}: {} < optimum {}", trial, got, best));
        ck.expect(std::is_sorted(res.grid_index.begin(), res.grid_index.end()), fmt::format("trial {}: order", trial));
    }
    ck.expect(pooled > 0, "no instance exercised pooling");
    return {ck.ok(), ck.summary() + fmt::format(" ({} instances, {} pooled)", instances, pooled)};
}

// ---------------------------------------------------------------------------
// 7. Convexity of the freshness curves in theta.

Outcome criterion_convexity() {
    Checker ck;
    for (double t : {1.0, 2.0}) {
        for (int a = 1; a <= 15; ++a) {
            const double lo = a * t;
            if (lo >= 60.0) continue;
            std::vector<double> grid;
            for (int k = 1; k <= 400; ++k) grid.push_back(lo + (60.0 - lo) * k / 400.0);
            const std::string at = fmt::format("a={} t={}", a, t);
            for (V v : {V::PaperForm, V::OracleForm}) {
                ck.expect(is_convex_on_grid(a, t, v, grid, false), fmt::format("latency {} {}", to_string(v), at));
                if (v == V::OracleForm || a > 1)
                    ck.expect(is_convex_on_grid(a, t, v, grid, true), fmt::format("AoI {} {}", to_string(v), at));
            }
        }
    }
    return {ck.ok(), ck.summary()};
}

// ---------------------------------------------------------------------------
// 8. Round-timing simulator.

Outcome criterion_timing() {
    Checker ck;
    const flsim::WorkflowConfig fixed;
    const auto r = flsim::simulate_round(fixed, 0);
    ck.expect(r.t_u == 1.2 && r.t_c == 0.8 && r.t == 2.0, fmt::format("t_u={} t_c={} t={}", r.t_u, r.t_c, r.t));
    ck.expect(flsim::causal_order_holds(flsim::emit_trace(fixed)), "deterministic trace order");

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.01, 2.0);
    for (int seed = 0; seed < 1000; ++seed) {
        flsim::WorkflowConfig c;
        for (auto* s : {&c.publish, &c.relay_verify, &c.dispatch, &c.train, &c.upload, &c.relay_check,
                        &c.relay_transfer, &c.aggregate, &c.distribute}) {
            const double x = u(rng), y = u(rng);
            *s = {std::min(x, y), std::max(x, y)};
        }
        c.physical_workers = 1 + seed % 7;
        c.virtual_workers = 1 + seed % 5;
        c.seed = static_cast<std::uint64_t>(seed);
        ck.expect(flsim::causal_order_holds(flsim::emit_trace(c, seed)), fmt::format("seed {}", seed));
    }
    return {ck.ok(), ck.summary()};
}

// ---------------------------------------------------------------------------
// 9. Byte-identical outputs across runs.

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

Outcome criterion_determinism() {
    Checker ck;
    const fs::path root = fs::temp_directory_path() / "aoicontract_acceptance";
    fs::remove_all(root);
    const std::vector<std::string> common = {
        "--seed", "11", "--set", "solver.phi=1e-5", "--set", "population.distribution=\"sampled\"",
        "--set", "workflow.train={\"lo\":0.5,\"hi\":1.5}", "--set", "workflow.epochs=20"};
    const std::vector<std::string> commands = {"solve",   "verify",      "choice-matrix",  "sweep-a",
                                               "sweep-alpha", "compare", "simulate-timing"};
    int files = 0;
    for (const auto& cmd : commands) {
        for (const char* run : {"a", "b"}) {
            std::vector<std::string> args{cmd, "--out", (root / run / cmd).string()};
            args.insert(args.end(), common.begin(), common.end());
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            ck.expect(code == cli::kExitOk, fmt::format("{} run {} exited {}: {}", cmd, run, code, err.str()));
        }
        for (const auto& entry : fs::directory_iterator(root / "a" / cmd)) {
            const auto name = entry.path().filename();
            if (name == "compare_timing.json") continue;  // wall-clock measurements
            ++files;
            ck.expect(slurp(entry.path()) == slurp(root / "b" / cmd / name),
                      fmt::format("{}/{} differs", cmd, name.string()));
        }
    }
    fs::remove_all(root);
    return {ck.ok(), ck.summary() + fmt::format(" ({} files compared)", files)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "oracle equivalence of freshness closed forms", 1.0, criterion_oracle},
        {2, "CA menus are feasible", 10.0, criterion_feasibility},
        {3, "reward/reduction identity", 1.0, criterion_reduction},
        {4, "mechanism ordering over a", 20.0, criterion_ordering},
        {5, "preference-factor behaviour", 10.0, criterion_alpha},
        {6, "ironing matches exhaustive search", 5.0, criterion_ironing},
        {7, "convexity of latency and AoI", 1.0, criterion_convexity},
        {8, "round-timing simulator", 2.0, criterion_timing},
        {9, "deterministic outputs", 60.0, criterion_determinism},
    };
    int failed = 0;
    double total = 0.0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        total += secs;
        const bool in_budget = secs <= c.budget_s;
        const bool pass = o.pass && in_budget;
        if (!pass) ++failed;
        std::cout << fmt::format("[{}] criterion {}: {} ({:.2f}s / {:.0f}s budget){} - {}\n", pass ? "PASS" : "FAIL",
                                 c.id, c.name, secs, c.budget_s, in_budget ? "" : " over budget", o.detail);
        std::cout.flush();
    }
    std::cout << fmt::format("{} of {} criteria passed in {:.2f}s\n", criteria.size() - failed, criteria.size(), total);
    return failed == 0 ? 0 : 1;
}

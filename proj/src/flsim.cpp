#include "aoicontract/flsim.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <set>

#include <json.hpp>

#include "aoicontract/errors.hpp"

namespace aoicontract::flsim {

namespace {

constexpr std::array<const char*, 9> kStages = {"publish",     "relay-verify",   "dispatch",  "train",     "upload",
                                                "relay-check", "relay-transfer", "aggregate", "distribute"};
constexpr std::array<const char*, 7> kConsensus = {"publish",     "relay-verify", "dispatch",  "relay-check",
                                                   "relay-transfer", "aggregate", "distribute"};

struct Sampler {
    std::mt19937_64 rng;
    bool fixed_consensus;

    double draw(const StageDelay& d) {
        if (d.deterministic()) return d.lo;
        return std::uniform_real_distribution<double>(d.lo, d.hi)(rng);
    }
    double consensus(const StageDelay& d) { return fixed_consensus ? d.mean() : draw(d); }
};

Sampler make_sampler(const WorkflowConfig& config, std::uint64_t epoch_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(epoch_index), static_cast<std::uint32_t>(epoch_index >> 32)};
    return Sampler{std::mt19937_64(seq), config.fixed_consensus};
}

std::string worker_name(const WorkflowConfig& config, int w) {
    return w < config.physical_workers ? "worker-P" + std::to_string(w + 1)
                                       : "worker-V" + std::to_string(w - config.physical_workers + 1);
}

// One round's sampled delays. Sampling order is fixed so that the timing and
// the trace of the same epoch agree.
struct RoundSample {
    double publish, relay_verify, dispatch;
    std::vector<double> train, upload;
    double relay_check, relay_transfer, aggregate, distribute;
    std::size_t critical = 0;

    double t_u() const { return train[critical] + upload[critical]; }
    double t_c() const {
        return publish + relay_verify + dispatch + relay_check + relay_transfer + aggregate + distribute;
    }
};

RoundSample sample_round(const WorkflowConfig& config, std::uint64_t epoch_index) {
    config.validate();
    auto s = make_sampler(config, epoch_index);
    RoundSample r;
    r.publish = s.consensus(config.publish);
    r.relay_verify = s.consensus(config.relay_verify);
    r.dispatch = s.consensus(config.dispatch);
    const int n = config.workers();
    for (int w = 0; w < n; ++w) {
        const auto& train = config.train_overrides.empty() ? config.train : config.train_overrides[w];
        r.train.push_back(s.draw(train));
        r.upload.push_back(s.draw(config.upload));
    }
    r.relay_check = s.consensus(config.relay_check);
    r.relay_transfer = s.consensus(config.relay_transfer);
    r.aggregate = s.consensus(config.aggregate);
    r.distribute = s.consensus(config.distribute);
    double best = -1.0;
    for (int w = 0; w < n; ++w) {
        const double total = r.train[w] + r.upload[w];
        if (total > best) {
            best = total;
            r.critical = static_cast<std::size_t>(w);
        }
    }
    return r;
}

void check_delay(const StageDelay& d, const char* name) {
    if (!(d.lo >= 0.0) || !(d.hi >= d.lo)) {
        throw ConfigError(std::string("workflow.") + name + ": delays need 0 <= lo <= hi");
    }
}

}  // namespace

void WorkflowConfig::validate() const {
    check_delay(publish, "publish");
    check_delay(relay_verify, "relay_verify");
    check_delay(dispatch, "dispatch");
    check_delay(train, "train");
    check_delay(upload, "upload");
    check_delay(relay_check, "relay_check");
    check_delay(relay_transfer, "relay_transfer");
    check_delay(aggregate, "aggregate");
    check_delay(distribute, "distribute");
    for (const auto& d : train_overrides) check_delay(d, "train_overrides");
    if (physical_workers < 1 || virtual_workers < 1) throw ConfigError("workflow: worker counts must be >= 1");
    if (!train_overrides.empty() && static_cast<int>(train_overrides.size()) != workers()) {
        throw ConfigError("workflow.train_overrides: need one entry per worker");
    }
    if (epochs < 1) throw ConfigError("workflow.epochs must be >= 1");
}

std::span<const char* const> stage_names() { return kStages; }
std::span<const char* const> consensus_stage_names() { return kConsensus; }

RoundTiming simulate_round(const WorkflowConfig& config, std::uint64_t epoch_index) {
    const auto r = sample_round(config, epoch_index);
    RoundTiming out;
    out.t_u = r.t_u();
    out.t_c = r.t_c();
    out.t = out.t_u + out.t_c;
    out.stages = {{"publish", r.publish},
                  {"relay-verify", r.relay_verify},
                  {"dispatch", r.dispatch},
                  {"train", r.train[r.critical]},
                  {"upload", r.upload[r.critical]},
                  {"relay-check", r.relay_check},
                  {"relay-transfer", r.relay_transfer},
                  {"aggregate", r.aggregate},
                  {"distribute", r.distribute}};
    return out;
}

RoundTiming average_round_timing(const WorkflowConfig& config) {
    config.validate();
    RoundTiming acc;
    for (int e = 0; e < config.epochs; ++e) {
        const auto r = simulate_round(config, static_cast<std::uint64_t>(e));
        if (acc.stages.empty()) {
            acc.stages = r.stages;
            for (auto& s : acc.stages) s.seconds = 0.0;
        }
        acc.t_u += r.t_u;
        acc.t_c += r.t_c;
        acc.t += r.t;
        for (std::size_t i = 0; i < r.stages.size(); ++i) acc.stages[i].seconds += r.stages[i].seconds;
    }
    const double n = config.epochs;
    acc.t_u /= n;
    acc.t_c /= n;
    acc.t /= n;
    for (auto& s : acc.stages) s.seconds /= n;
    return acc;
}

double average_round_time(const WorkflowConfig& config) { return average_round_timing(config).t; }

std::vector<TraceEvent> emit_trace(const WorkflowConfig& config, std::uint64_t epoch_index) {
    const auto r = sample_round(config, epoch_index);
    std::vector<TraceEvent> ev;
    double now = r.publish;
    ev.push_back({now, "main-chain", "publish"});
    now += r.relay_verify;
    ev.push_back({now, "relay-chain", "relay-verify"});
    now += r.dispatch;
    ev.push_back({now, "subchain-V", "dispatch"});
    ev.push_back({now, "subchain-P", "dispatch"});
    const double start = now;
    for (int w = 0; w < config.workers(); ++w) {
        const auto name = worker_name(config, w);
        ev.push_back({start + r.train[w], name, "train"});
        ev.push_back({start + r.train[w] + r.upload[w], name, "upload"});
    }
    now = start + r.t_u();
    now += r.relay_check;
    ev.push_back({now, "relay-chain", "relay-check"});
    now += r.relay_transfer;
    ev.push_back({now, "main-chain", "relay-transfer"});
    now += r.aggregate;
    ev.push_back({now, "main-chain", "aggregate"});
    now += r.distribute;
    ev.push_back({now, "subchain-V", "distribute"});
    ev.push_back({now, "subchain-P", "distribute"});
    std::stable_sort(ev.begin(), ev.end(),
                     [](const TraceEvent& x, const TraceEvent& y) { return x.timestamp < y.timestamp; });
    return ev;
}

bool causal_order_holds(std::span<const TraceEvent> trace) {
    // barrier stages: everything in an earlier phase happens no later than
    // anything in a later one
    const std::map<std::string, int> phase = {{"publish", 0},     {"relay-verify", 1},   {"dispatch", 2},
                                              {"train", 3},       {"upload", 3},         {"relay-check", 4},
                                              {"relay-transfer", 5}, {"aggregate", 6},   {"distribute", 7}};
    std::array<double, 8> lo, hi;
    lo.fill(std::numeric_limits<double>::infinity());
    hi.fill(-std::numeric_limits<double>::infinity());
    std::map<std::string, double> trained;
    std::set<std::string> dispatched, distributed;
    for (const auto& e : trace) {
        const auto it = phase.find(e.stage);
        if (it == phase.end()) return false;
        lo[it->second] = std::min(lo[it->second], e.timestamp);
        hi[it->second] = std::max(hi[it->second], e.timestamp);
        if (e.stage == "train") trained[e.entity] = e.timestamp;
        if (e.stage == "dispatch") dispatched.insert(e.entity);
        if (e.stage == "distribute") distributed.insert(e.entity);
    }
    for (std::size_t p = 0; p < lo.size(); ++p) {
        if (lo[p] > hi[p]) return false;  // phase missing
        if (p > 0 && lo[p] < hi[p - 1]) return false;
    }
    for (const auto& e : trace) {
        if (e.stage != "upload") continue;
        const auto t = trained.find(e.entity);
        if (t == trained.end() || e.timestamp < t->second) return false;
    }
    const std::set<std::string> chains = {"subchain-P", "subchain-V"};
    return dispatched == chains && distributed == chains;
}

void write_trace_jsonl(std::ostream& os, std::span<const TraceEvent> trace, std::uint64_t epoch_index) {
    for (const auto& e : trace) {
        nlohmann::ordered_json j;
        j["epoch"] = epoch_index;
        j["timestamp"] = e.timestamp;
        j["entity"] = e.entity;
        j["stage"] = e.stage;
        os << j.dump() << '\n';
    }
}

std::string summary_json(const RoundTiming& timing, int epochs) {
    nlohmann::ordered_json j;
    j["epochs"] = epochs;
    j["t_u"] = timing.t_u;
    j["t_c"] = timing.t_c;
    j["t"] = timing.t;
    nlohmann::ordered_json stages;
    for (const auto& s : timing.stages) stages[s.stage] = s.seconds;
    j["stages"] = stages;
    return j.dump(2);
}

}  // namespace aoicontract::flsim

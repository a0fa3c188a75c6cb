#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace aoicontract::flsim {

/// A stage delay in seconds, uniform on [lo, hi]; deterministic when lo == hi.
struct StageDelay {
    double lo = 0.0;
    double hi = 0.0;

    static StageDelay fixed(double seconds) { return {seconds, seconds}; }
    static StageDelay uniform(double lo, double hi) { return {lo, hi}; }
    double mean() const { return 0.5 * (lo + hi); }
    bool deterministic() const { return lo == hi; }
};

/// Delays of one cross-chain FL round. The defaults give t_u = 1.2 s and
/// t_c = 0.8 s, i.e. a 2 s period.
struct WorkflowConfig {
    StageDelay publish = StageDelay::fixed(0.125);        // publisher -> main chain
    StageDelay relay_verify = StageDelay::fixed(0.125);   // main -> relay, task verification
    StageDelay dispatch = StageDelay::fixed(0.125);       // relay -> subchains V and P
    StageDelay train = StageDelay::fixed(1.0);            // per-worker local training
    StageDelay upload = StageDelay::fixed(0.2);           // worker -> subchain upload + verify
    StageDelay relay_check = StageDelay::fixed(0.125);    // subchain -> relay check
    StageDelay relay_transfer = StageDelay::fixed(0.125); // relay -> main chain
    StageDelay aggregate = StageDelay::fixed(0.125);      // main-chain aggregation
    StageDelay distribute = StageDelay::fixed(0.05);      // global model back to subchains

    int physical_workers = 5;
    int virtual_workers = 5;
    /// Optional per-worker training delays, physical workers first. Empty or
    /// one entry per worker.
    std::vector<StageDelay> train_overrides;
    /// Use stage means for the consensus stages so t_c is the same every round.
    bool fixed_consensus = false;
    int epochs = 1;
    std::uint64_t seed = 0;

    int workers() const { return physical_workers + virtual_workers; }
    void validate() const;
};

struct StageTime {
    std::string stage;
    double seconds = 0.0;
};

struct RoundTiming {
    double t_u = 0.0;
    double t_c = 0.0;
    double t = 0.0;
    std::vector<StageTime> stages;
};

struct TraceEvent {
    double timestamp = 0.0;
    std::string entity;
    std::string stage;
};

/// Stage names in workflow order.
std::span<const char* const> stage_names();
std::span<const char* const> consensus_stage_names();

RoundTiming simulate_round(const WorkflowConfig& config, std::uint64_t epoch_index);

/// Per-field mean over config.epochs rounds.
RoundTiming average_round_timing(const WorkflowConfig& config);
double average_round_time(const WorkflowConfig& config);

std::vector<TraceEvent> emit_trace(const WorkflowConfig& config, std::uint64_t epoch_index = 0);

/// Publish, verify and dispatch precede all training; each upload follows
/// its own worker's training; relay check, transfer, aggregation and
/// distribution follow every upload in that order. Both subchains must appear.
bool causal_order_holds(std::span<const TraceEvent> trace);

void write_trace_jsonl(std::ostream& os, std::span<const TraceEvent> trace, std::uint64_t epoch_index);
std::string summary_json(const RoundTiming& timing, int epochs);

}  // namespace aoicontract::flsim

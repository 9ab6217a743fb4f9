#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "osim/agents.hpp"
#include "osim/behavior.hpp"
#include "osim/liquidity.hpp"
#include "osim/merchants.hpp"
#include "osim/network.hpp"
#include "osim/scenario.hpp"

namespace osim {

struct NetworkSpec {
    int k = 8;
    double beta = 0.1;

    bool operator==(const NetworkSpec&) const = default;
};

// Everything that determines one run. Identical configs (and seed) must
// produce identical outputs, independent of worker count.
struct RunConfig {
    PiecewiseSpec scenario;
    PopulationSpec population;
    NetworkSpec network;
    BehaviorParams behavior;
    MerchantSpec merchants;
    SubstitutionConfig substitution;
    std::uint64_t seed = 1;
};

// Per-step system aggregates, recorded at the end of each step.
struct MetricsFrame {
    int t = 0;
    double p_success = 0.0;
    double demand = 1.0;
    double frac_ok = 0.0;
    double frac_frustrated = 0.0;
    double frac_avoiding = 0.0;
    double mean_trust = 0.0;
    double mean_scar = 0.0;
    double mean_rumor = 0.0;
    double mean_broadcast_severity = 0.0;
    long long attempts = 0;
    long long successes = 0; // card outcomes, before substitution
    long long failures = 0;
    long long unknowns = 0;
    double substitution_rate = 0.0; // substituted / adverse card outcomes, 0 when none
    double outflow = 0.0;
    double cumulative_outflow = 0.0;
    int broadcast_accepting = 0;
    int broadcast_degraded = 0;
    int broadcast_fallback = 0;
};

// Violation counters maintained while the run executes; all zero in a
// healthy run.
struct AuditCounters {
    long long range_violations = 0;       // T, C or R outside [0,1]
    long long frame_sum_violations = 0;   // mode fractions not summing to 1
    long long eligibility_violations = 0; // withdrawal without eligibility
    long long balance_violations = 0;     // balance increased
    long long broadcast_lag_violations = 0; // broadcast cleared before operational
};

struct RunSummary {
    std::uint64_t seed = 0;
    int horizon = 0;
    int t_min = 0;
    double peak_outflow = 0.0;
    int peak_outflow_step = 0;
    double peak_avoidance = 0.0;
    int peak_avoidance_step = 0;
    double cumulative_outflow = 0.0;
    double cumulative_outflow_fraction = 0.0;
    double total_initial_balance = 0.0;
    double total_final_balance = 0.0;
    long long withdrawal_events = 0;
    bool delayed_peak = false; // peak_outflow_step > t_min
    // Clearance means over merchants that ever left ACCEPTING operationally;
    // clearance step = last non-ACCEPTING step + 1 (horizon if never cleared).
    double mean_operational_clearance = 0.0;
    double mean_broadcast_clearance = 0.0;
    int merchants_degraded = 0;
    double substitution_rate_overall = 0.0;
    double conservation_residual_rel = 0.0;
    AuditCounters audit;
};

// Full per-step state snapshot, used by the straight-line reference check.
struct StateTraceStep {
    std::vector<double> trust, scar, rumor, balance;
    std::vector<Mode> mode;
    std::vector<MerchantLabel> operational, broadcast;
    std::vector<double> dwell;
    std::vector<int> streak;
    std::vector<long long> win_attempts, win_failures, win_unknowns;
};

struct ExecOptions {
    int workers = 1;
    bool record_state_trace = false;
};

struct RunResult {
    std::vector<MetricsFrame> frames;
    RunSummary summary;
    std::vector<WithdrawalEvent> events;
    std::vector<StateTraceStep> trace; // empty unless requested
};

// Semantic validation of a run configuration. Returns human-readable error
// strings; empty means valid. Advisory notes for values outside the
// documented typical ranges go to `warnings` when non-null.
std::vector<std::string> validate_config(const RunConfig& cfg,
                                         std::vector<std::string>* warnings = nullptr);

// Executes one run. Throws std::invalid_argument when validation fails,
// before any simulation step executes.
RunResult run(const RunConfig& cfg, const ExecOptions& opts = {});

struct DistStats {
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

DistStats dist_stats(std::vector<double> values);

struct BatchResult {
    std::vector<RunSummary> summaries; // one per seed, in input order
    DistStats peak_avoidance;
    DistStats peak_outflow;
    DistStats cumulative_outflow_fraction;
    double delayed_peak_fraction = 0.0;
};

// Independent runs over a seed list; seeds may be distributed across
// workers (each run then executes single-threaded).
BatchResult run_batch(const RunConfig& cfg, const std::vector<std::uint64_t>& seeds,
                      const ExecOptions& opts = {});

struct PairedDelta {
    std::uint64_t seed = 0;
    RunSummary base;
    RunSummary variant;
    double peak_avoidance_delta = 0.0;    // variant - base
    double peak_outflow_delta = 0.0;
    double cumulative_outflow_delta = 0.0;
};

struct PairedResult {
    std::vector<PairedDelta> deltas;
    double median_peak_avoidance_delta = 0.0;
    double median_peak_outflow_delta = 0.0;
    double median_cumulative_outflow_delta = 0.0;
};

// Common-random-number comparison: base and variant share every stream seed
// per seed. The variant may differ from the base only in policy fields
// (substitution settings and merchant comm_quality); anything else throws.
PairedResult run_paired(const RunConfig& base, const RunConfig& variant,
                        const std::vector<std::uint64_t>& seeds,
                        const ExecOptions& opts = {});

} // namespace osim

#pragma once

#include <string>
#include <vector>

#include "osim/engine.hpp"

namespace osim {

// Shortest round-trip decimal rendering (std::to_chars).
std::string format_double(double v);

// One row per step; fixed column order.
std::string metrics_csv(const std::vector<MetricsFrame>& frames);

// `t,customer_id,amount,balance_after`
std::string events_csv(const std::vector<WithdrawalEvent>& events);

// `t,p_success,p_failure,p_unknown,demand`
std::string scenario_csv(const ScenarioTimeline& timeline);

// `node_a,node_b`, one row per undirected edge, a < b.
std::string edges_csv(const SocialGraph& graph);

// `customer_id,lambda,theta1,theta2,omega,theta_C_w,theta_R_w,adopter`
std::string population_csv(const std::vector<CustomerParams>& params);

// `seed,peak_avoidance,peak_avoidance_step,peak_outflow,peak_outflow_step,
//  t_min,cumulative_outflow_fraction,delayed_peak`
std::string batch_csv(const std::vector<RunSummary>& summaries);

// `metric,min,q1,median,q3,max` plus a delayed_peak_fraction row.
std::string batch_stats_csv(const BatchResult& batch);

// Per-seed base/variant metrics and deltas.
std::string paired_csv(const PairedResult& paired);

} // namespace osim

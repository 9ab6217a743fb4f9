#pragma once

#include <vector>

namespace osim {

// Per-step infrastructure outcome probabilities.
struct OutcomeProbs {
    double p_success = 1.0;
    double p_failure = 0.0;
    double p_unknown = 0.0;

    bool operator==(const OutcomeProbs&) const = default;

    double sum() const { return p_success + p_failure + p_unknown; }
    bool valid(double tol = 1e-9) const;
};

// Exogenous infrastructure process plus demand schedule. Immutable after
// construction; safe to share read-only across runs.
class ScenarioTimeline {
public:
    ScenarioTimeline(std::vector<OutcomeProbs> probs, std::vector<double> demand);

    int horizon() const { return static_cast<int>(probs_.size()); }
    const OutcomeProbs& probs(int t) const { return probs_[static_cast<size_t>(t)]; }
    double demand(int t) const { return demand_[static_cast<size_t>(t)]; }

    const std::vector<OutcomeProbs>& all_probs() const { return probs_; }
    const std::vector<double>& all_demand() const { return demand_; }

private:
    std::vector<OutcomeProbs> probs_;
    std::vector<double> demand_;
};

enum class PhaseKind { Hold, Ramp };

// One phase of a piecewise scenario. Hold repeats the phase level for
// `steps`; Ramp interpolates linearly from the previous phase level to this
// level over `steps` interior points (the ramp never duplicates either
// endpoint, so a following hold owns the first step at the target level).
struct PhaseSpec {
    PhaseKind kind = PhaseKind::Hold;
    double p_success = 1.0;
    // Explicit failure/unknown levels; when negative the residual
    // 1 - p_success is split by PiecewiseSpec::failure_share.
    double p_failure = -1.0;
    double p_unknown = -1.0;
    int steps = 0;

    bool operator==(const PhaseSpec&) const = default;
};

struct DemandPeak {
    int start = 0; // inclusive
    int end = 0;   // exclusive
    double multiplier = 1.0;

    bool operator==(const DemandPeak&) const = default;
};

struct PiecewiseSpec {
    std::vector<PhaseSpec> phases;
    double failure_share = 0.5; // share of residual probability mapped to FAILURE
    double demand_base = 1.0;
    std::vector<DemandPeak> demand_peaks;

    bool operator==(const PiecewiseSpec&) const = default;

    int total_steps() const;
};

// Builds the timeline. Throws std::invalid_argument on specs that cannot be
// normalized, that place a ramp first, or whose emitted p_success is not
// monotonically non-decreasing after the nadir.
ScenarioTimeline build_piecewise_scenario(const PiecewiseSpec& spec);

// Earliest step index minimizing p_success.
int nadir(const ScenarioTimeline& timeline);

// Landmark steps of an outage scenario, derived from the emitted timeline.
struct ScenarioPhases {
    int stable_end = 0;   // first step after the pre-incident phase
    int nadir = 0;        // t_min
    int recovery_end = 0; // first step at the post-nadir maximum of p_success
    std::vector<DemandPeak> peak_demand_windows;
};

// Throws std::invalid_argument for degenerate scenarios (fewer than two
// phases, or landmarks out of order).
ScenarioPhases derive_phases(const PiecewiseSpec& spec, const ScenarioTimeline& timeline);

} // namespace osim

#include "osim/merchants.hpp"

#include <algorithm>

namespace osim {

void update_broadcast(MerchantState& state, MerchantLabel prev_operational,
                      double delta, int step_attempts, const MerchantParams& p,
                      double comm_quality) {
    const bool episode_active = state.broadcast != MerchantLabel::Accepting;

    if (episode_active)
        state.dwell_timer = std::max(0.0, state.dwell_timer - comm_quality);

    // Clearing needs the expired timer, the clean streak, and an ACCEPTING
    // operational assessment; a merchant that still judges itself degraded
    // has no evidence of recovery to display.
    if (episode_active && state.dwell_timer == 0.0 &&
        state.clean_streak >= p.clean_required &&
        state.operational == MerchantLabel::Accepting) {
        state.broadcast = MerchantLabel::Accepting;
        state.episode_severity = MerchantLabel::Accepting;
    }

    const bool entered_degraded = state.operational != prev_operational &&
                                  state.operational != MerchantLabel::Accepting;
    if (entered_degraded) {
        state.dwell_timer = p.dwell_init;
        state.episode_severity = std::max(state.episode_severity, state.operational);
        state.broadcast = state.episode_severity;
    }

    if (step_attempts == 0) {
        if (p.idle_counts_clean) ++state.clean_streak;
        // otherwise an idle step leaves the streak untouched
    } else if (delta < p.theta_op1) {
        ++state.clean_streak;
    } else {
        state.clean_streak = 0;
    }
}

void step_merchant(MerchantState& state, StepCounts counts,
                   const MerchantParams& p, double comm_quality) {
    state.window.push(counts);
    const double delta = degradation_ratio(state.window.attempts(), state.window.failures(),
                                           state.window.unknowns(), p);
    const MerchantLabel prev = state.operational;
    state.operational = update_operational(delta, p);
    update_broadcast(state, prev, delta, counts.attempts, p, comm_quality);
}

} // namespace osim

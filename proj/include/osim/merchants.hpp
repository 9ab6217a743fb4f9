#pragma once

#include <cstdint>
#include <vector>

namespace osim {

enum class MerchantLabel : std::uint8_t { Accepting = 0, Degraded = 1, Fallback = 2 };

// Per-merchant configuration. Thresholds and dwell time are heterogeneous;
// the remaining fields are copied from the merchant section of the config.
struct MerchantParams {
    double theta_op1 = 0.2;  // operational: accepting below this
    double theta_op2 = 0.45; // operational: fallback at or above this
    double eta = 0.7;        // weight of UNKNOWN outcomes in the degradation ratio
    double epsilon = 1e-9;   // denominator guard
    int window_len = 10;
    double dwell_init = 12.5;
    int clean_required = 3;
    bool idle_counts_clean = true;
};

struct StepCounts {
    int attempts = 0;
    int failures = 0;
    int unknowns = 0;
};

// Fixed-length ring of per-step outcome counts with running totals.
class OutcomeWindow {
public:
    explicit OutcomeWindow(int len) : slots_(static_cast<size_t>(len)) {}

    void push(StepCounts c) {
        StepCounts& slot = slots_[pos_];
        attempts_ += c.attempts - slot.attempts;
        failures_ += c.failures - slot.failures;
        unknowns_ += c.unknowns - slot.unknowns;
        slot = c;
        pos_ = (pos_ + 1) % slots_.size();
    }

    long long attempts() const { return attempts_; }
    long long failures() const { return failures_; }
    long long unknowns() const { return unknowns_; }
    int length() const { return static_cast<int>(slots_.size()); }
    const std::vector<StepCounts>& slots() const { return slots_; }

private:
    std::vector<StepCounts> slots_;
    size_t pos_ = 0;
    long long attempts_ = 0;
    long long failures_ = 0;
    long long unknowns_ = 0;
};

struct MerchantState {
    OutcomeWindow window;
    MerchantLabel operational = MerchantLabel::Accepting;
    MerchantLabel broadcast = MerchantLabel::Accepting;
    double dwell_timer = 0.0;
    int clean_streak = 0;
    // Most severe operational label seen since the current broadcast episode
    // began; the broadcast holds this label while the episode lasts.
    MerchantLabel episode_severity = MerchantLabel::Accepting;

    explicit MerchantState(int window_len) : window(window_len) {}
};

inline double degradation_ratio(long long attempts, long long failures,
                                long long unknowns, const MerchantParams& p) {
    return (static_cast<double>(failures) + p.eta * static_cast<double>(unknowns)) /
           (static_cast<double>(attempts) + p.epsilon);
}

inline MerchantLabel update_operational(double delta, const MerchantParams& p) {
    if (delta < p.theta_op1) return MerchantLabel::Accepting;
    if (delta < p.theta_op2) return MerchantLabel::Degraded;
    return MerchantLabel::Fallback;
}

inline double broadcast_severity(MerchantLabel label) {
    switch (label) {
    case MerchantLabel::Accepting: return 0.0;
    case MerchantLabel::Degraded: return 0.5;
    case MerchantLabel::Fallback: return 1.0;
    }
    return 0.0;
}

// Advances the broadcast state machine one step. `prev_operational` is the
// label before this step's operational update, `step_attempts` the attempts
// observed this step (for the idle-streak rule). Within the step: the dwell
// timer decays first, then an expired episode may clear (which also needs an
// ACCEPTING operational state), then a fresh operational transition into a
// degraded label re-arms the timer, and finally the clean streak is updated
// from this step's evidence. Clearing therefore requires `clean_required`
// clean steps strictly before the clearing step, and the broadcast can never
// show ACCEPTING while the timer is positive or operations remain degraded.
void update_broadcast(MerchantState& state, MerchantLabel prev_operational,
                      double delta, int step_attempts, const MerchantParams& p,
                      double comm_quality);

// Full merchant update for one step: window push, degradation ratio,
// operational thresholds, broadcast stickiness.
void step_merchant(MerchantState& state, StepCounts counts,
                   const MerchantParams& p, double comm_quality);

} // namespace osim

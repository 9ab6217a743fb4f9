#pragma once

#include <algorithm>
#include <cstdint>

#include "osim/agents.hpp"

namespace osim {

enum class OutcomeKind : std::uint8_t { Success, Failure, Unknown, None };

struct PaymentOutcome {
    OutcomeKind kind = OutcomeKind::None;
    bool via_substitution = false;
};

// Signed experience value and its [0,1] normalization.
struct ExperienceSignal {
    double raw = 0.0;
    double normalized = 0.0;
};

// Shared behavioral constants (customer-level heterogeneity lives in
// CustomerParams).
struct BehaviorParams {
    double phi_ok = 1.0;
    double phi_frustrated = 0.7;
    double phi_avoiding = 0.3;
    double alpha_f = 0.75; // severity of an explicit failure
    double alpha_u = 1.0;  // severity of an unknown outcome; >= alpha_f
    double w_merchant = 0.6;
    double w_social = 0.4;
    double w_feedback = 0.0; // weight of the aggregate-outflow term, off by default
    double feedback_ref_fraction = 0.01; // outflow (as fraction of deposits) saturating the term
    // Sensitivity toggle: when true, perception reads the broadcasts of the
    // previous step instead of the ones refreshed earlier in the same step.
    bool lagged_broadcast_read = false;

    bool operator==(const BehaviorParams&) const = default;

    double phi(Mode m) const {
        switch (m) {
        case Mode::Ok: return phi_ok;
        case Mode::Frustrated: return phi_frustrated;
        case Mode::Avoiding: return phi_avoiding;
        }
        return phi_ok;
    }
};

inline double attempt_probability(const CustomerParams& cp, Mode mode, double demand,
                                  const BehaviorParams& bp) {
    return std::min(1.0, cp.lambda * demand * bp.phi(mode));
}

// Encodes an experienced outcome. SUCCESS (substituted or not) maps to +1;
// FAILURE to -alpha_f; UNKNOWN to -alpha_u; no attempt carries the current
// trust so that idle steps leave trust at a fixed point.
inline ExperienceSignal encode_experience(PaymentOutcome outcome, double alpha_f,
                                          double alpha_u, double current_trust) {
    ExperienceSignal sig;
    switch (outcome.kind) {
    case OutcomeKind::Success:
        sig.raw = 1.0;
        break;
    case OutcomeKind::Failure:
        sig.raw = -alpha_f;
        break;
    case OutcomeKind::Unknown:
        sig.raw = -alpha_u;
        break;
    case OutcomeKind::None:
        sig.raw = 0.0;
        sig.normalized = std::clamp(current_trust, 0.0, 1.0);
        return sig;
    }
    sig.normalized = std::clamp((sig.raw + alpha_u) / (1.0 + alpha_u), 0.0, 1.0);
    return sig;
}

inline double update_scar(double scar, const CustomerParams& cp, const ExperienceSignal& sig) {
    const double bump = sig.raw < 0.0 ? cp.gamma_C : 0.0;
    return std::min(1.0, cp.rho_C * scar + bump);
}

// Trust moves toward the normalized experience and is eroded by scar, then
// clipped. The incremental form is algebraically identical to the convex
// combination and keeps the no-attempt case an exact fixed point.
inline double update_trust(double trust, double scar, const CustomerParams& cp,
                           const ExperienceSignal& sig) {
    const double next = trust + (1.0 - cp.rho_T) * (sig.normalized - trust) - cp.beta_T * scar;
    return std::clamp(next, 0.0, 1.0);
}

inline double update_rumor(double rumor, const CustomerParams& cp, double psi) {
    return rumor + (1.0 - cp.rho_R) * (psi - rumor);
}

// Composite perception: merchant broadcast severity plus neighbor avoidance,
// optionally reinforced by recent aggregate outflow; clipped to [0,1].
inline double composite_perception(double broadcast_avg, double avoiding_frac,
                                   const BehaviorParams& bp, double outflow_feedback = 0.0) {
    const double psi = bp.w_merchant * broadcast_avg + bp.w_social * avoiding_frac +
                       bp.w_feedback * outflow_feedback;
    return std::clamp(psi, 0.0, 1.0);
}

inline Mode transition_mode(double trust, double scar, const CustomerParams& cp) {
    const double effective = trust - cp.kappa_C * scar;
    if (effective >= cp.theta1) return Mode::Ok;
    if (effective >= cp.theta2) return Mode::Frustrated;
    return Mode::Avoiding;
}

} // namespace osim

#pragma once

#include <cmath>
#include <optional>
#include <span>

#include "osim/agents.hpp"
#include "osim/behavior.hpp"

namespace osim {

struct WithdrawalEvent {
    int step = 0;
    int customer = 0;
    double amount = 0.0;
    double balance_after = 0.0;
    // Decision-time state, kept for invariant audits (not serialized).
    Mode mode_at_decision = Mode::Avoiding;
    double scar_at_decision = 0.0;
    double rumor_at_decision = 0.0;
};

struct SubstitutionConfig {
    bool enabled = false;
    double adoption_prob = 0.6;
    double transfer_success_prob = 0.05;

    bool operator==(const SubstitutionConfig&) const = default;
};

// Withdrawal requires sustained avoidance plus elevated scar and rumor,
// all at once.
inline bool is_eligible(const CustomerState& s, const CustomerParams& p) {
    return s.mode == Mode::Avoiding && s.scar >= p.theta_C_w && s.rumor >= p.theta_R_w;
}

inline double withdrawal_probability(const CustomerState& s, const CustomerParams& p) {
    const double x = p.alpha_R * s.rumor + p.alpha_C * s.scar - p.alpha_T * s.trust;
    return 1.0 / (1.0 + std::exp(-x));
}

// Removes the customer's withdrawal fraction from the remaining balance.
// Returns nothing when the balance is already zero.
inline std::optional<WithdrawalEvent> apply_withdrawal(CustomerState& s,
                                                       const CustomerParams& p,
                                                       int step, int customer) {
    if (s.balance <= 0.0) return std::nullopt;
    WithdrawalEvent ev;
    ev.step = step;
    ev.customer = customer;
    ev.amount = p.omega * s.balance;
    s.balance -= ev.amount;
    ev.balance_after = s.balance;
    ev.mode_at_decision = s.mode;
    ev.scar_at_decision = s.scar;
    ev.rumor_at_decision = s.rumor;
    return ev;
}

inline double aggregate_outflow(std::span<const WithdrawalEvent> events) {
    double w = 0.0;
    for (const auto& ev : events) w += ev.amount;
    return w;
}

// Instant-transfer substitution: an adopter facing an adverse card outcome
// retries over the substitution rail and, on success, experiences a SUCCESS.
// The merchant still records the original card outcome. `u` must come from
// the dedicated substitution stream so enabling the channel does not perturb
// any other draw.
inline PaymentOutcome try_substitution(PaymentOutcome card, bool adopter,
                                       const SubstitutionConfig& cfg, double u) {
    if (!cfg.enabled || !adopter) return card;
    if (card.kind != OutcomeKind::Failure && card.kind != OutcomeKind::Unknown) return card;
    if (u < cfg.transfer_success_prob) return {OutcomeKind::Success, true};
    return card;
}

} // namespace osim

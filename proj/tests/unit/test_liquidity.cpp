#include "doctest.h"

#include <cmath>

#include "osim/liquidity.hpp"

using namespace osim;

TEST_CASE("eligibility: all three gates, boundaries inclusive") {
    CustomerParams p;
    p.theta_C_w = 0.5;
    p.theta_R_w = 0.5;
    CustomerState s;
    s.scar = 1.0;
    s.rumor = 1.0;

    s.mode = Mode::Ok;
    CHECK_FALSE(is_eligible(s, p));
    s.mode = Mode::Frustrated;
    CHECK_FALSE(is_eligible(s, p));

    s.mode = Mode::Avoiding;
    s.scar = p.theta_C_w; // boundary inclusive
    s.rumor = p.theta_R_w;
    CHECK(is_eligible(s, p));

    s.scar = p.theta_C_w - 0.01;
    s.rumor = 1.0;
    CHECK_FALSE(is_eligible(s, p));

    s.scar = 1.0;
    s.rumor = p.theta_R_w - 0.01;
    CHECK_FALSE(is_eligible(s, p));
}

TEST_CASE("withdrawal probability is the logistic of the linear score") {
    CustomerParams p;
    p.alpha_R = p.alpha_C = p.alpha_T = 1.0;
    CustomerState s;

    // Zero score -> exactly 1/2.
    s.rumor = 0.5;
    s.scar = 0.0;
    s.trust = 0.5;
    CHECK(withdrawal_probability(s, p) == doctest::Approx(0.5));

    // sigma(0.8 + 0.7 - 0.2) = sigma(1.3).
    s.rumor = 0.8;
    s.scar = 0.7;
    s.trust = 0.2;
    CHECK(withdrawal_probability(s, p) == doctest::Approx(0.7858).epsilon(1e-4));

    // Saturation.
    p.alpha_R = 100.0;
    s.rumor = 1.0;
    CHECK(withdrawal_probability(s, p) > 0.999999);
}

TEST_CASE("apply_withdrawal: fraction of remaining balance") {
    CustomerParams p;
    p.omega = 0.1;
    CustomerState s;
    s.balance = 100.0;

    const auto ev = apply_withdrawal(s, p, 5, 3);
    REQUIRE(ev.has_value());
    CHECK(ev->amount == doctest::Approx(10.0));
    CHECK(ev->balance_after == doctest::Approx(90.0));
    CHECK(s.balance == doctest::Approx(90.0));
    CHECK(ev->step == 5);
    CHECK(ev->customer == 3);

    // Two consecutive withdrawals at omega = 0.5.
    p.omega = 0.5;
    s.balance = 1.0;
    const auto e1 = apply_withdrawal(s, p, 0, 0);
    const auto e2 = apply_withdrawal(s, p, 1, 0);
    CHECK(e1->amount == doctest::Approx(0.5));
    CHECK(e2->amount == doctest::Approx(0.25));
    CHECK(s.balance == doctest::Approx(0.25));

    s.balance = 0.0;
    CHECK_FALSE(apply_withdrawal(s, p, 2, 0).has_value());
}

TEST_CASE("aggregate_outflow sums event amounts") {
    std::vector<WithdrawalEvent> events;
    CHECK(aggregate_outflow(events) == 0.0);
    events.push_back({0, 0, 10.0, 90.0, Mode::Avoiding, 1, 1});
    events.push_back({0, 1, 5.0, 45.0, Mode::Avoiding, 1, 1});
    CHECK(aggregate_outflow(events) == doctest::Approx(15.0));
}

TEST_CASE("try_substitution: identity cases and conversion") {
    SubstitutionConfig cfg;
    cfg.enabled = false;
    const PaymentOutcome fail{OutcomeKind::Failure, false};

    // Disabled: the outcome passes through untouched.
    const auto off = try_substitution(fail, true, cfg, 0.0);
    CHECK(off.kind == OutcomeKind::Failure);
    CHECK_FALSE(off.via_substitution);

    cfg.enabled = true;
    // Non-adopters never substitute.
    const auto non = try_substitution(fail, false, cfg, 0.0);
    CHECK(non.kind == OutcomeKind::Failure);

    // Success outcomes are not retried.
    const auto ok = try_substitution({OutcomeKind::Success, false}, true, cfg, 0.0);
    CHECK(ok.kind == OutcomeKind::Success);
    CHECK_FALSE(ok.via_substitution);

    // Certain transfer converts the adverse outcome into a flagged success.
    cfg.transfer_success_prob = 1.0;
    const auto conv = try_substitution(fail, true, cfg, 0.999999);
    CHECK(conv.kind == OutcomeKind::Success);
    CHECK(conv.via_substitution);

    const auto unk = try_substitution({OutcomeKind::Unknown, false}, true, cfg, 0.5);
    CHECK(unk.kind == OutcomeKind::Success);
    CHECK(unk.via_substitution);

    // Failed transfer leaves the card outcome.
    cfg.transfer_success_prob = 0.3;
    const auto kept = try_substitution(fail, true, cfg, 0.7);
    CHECK(kept.kind == OutcomeKind::Failure);
    CHECK_FALSE(kept.via_substitution);
}

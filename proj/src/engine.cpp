#include "osim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace osim {

namespace {

void parallel_for(int workers, size_t n, const std::function<void(size_t, size_t)>& body) {
    if (workers <= 1 || n < 2) {
        body(0, n);
        return;
    }
    const size_t w = std::min<size_t>(static_cast<size_t>(workers), n);
    const size_t chunk = (n + w - 1) / w;
    std::vector<std::thread> threads;
    threads.reserve(w);
    for (size_t s = 0; s < n; s += chunk) {
        const size_t e = std::min(n, s + chunk);
        threads.emplace_back(body, s, e);
    }
    for (auto& th : threads) th.join();
}

void check_range(const char* name, double v, double lo, double hi, bool open,
                 std::vector<std::string>& errors) {
    const bool ok = open ? (v > lo && v < hi) : (v >= lo && v <= hi);
    if (!ok) {
        std::ostringstream os;
        os << name << " = " << v << " outside " << (open ? "(" : "[") << lo << "," << hi
           << (open ? ")" : "]");
        errors.push_back(os.str());
    }
}

void check_range(const char* name, const Range& r, double lo, double hi, bool open,
                 std::vector<std::string>& errors) {
    if (r.lo > r.hi) {
        errors.push_back(std::string(name) + ": lo > hi");
        return;
    }
    check_range((std::string(name) + ".lo").c_str(), r.lo, lo, hi, open, errors);
    check_range((std::string(name) + ".hi").c_str(), r.hi, lo, hi, open, errors);
}

void warn_outside(const char* name, const Range& r, double lo, double hi,
                  std::vector<std::string>* warnings) {
    if (!warnings) return;
    if (r.lo < lo || r.hi > hi) {
        std::ostringstream os;
        os << name << " range [" << r.lo << "," << r.hi << "] outside the documented typical range ["
           << lo << "," << hi << "]";
        warnings->push_back(os.str());
    }
}

void warn_outside(const char* name, double v, double lo, double hi,
                  std::vector<std::string>* warnings) {
    if (!warnings) return;
    if (v < lo || v > hi) {
        std::ostringstream os;
        os << name << " = " << v << " outside the documented typical range [" << lo << "," << hi << "]";
        warnings->push_back(os.str());
    }
}

} // namespace

std::vector<std::string> validate_config(const RunConfig& cfg,
                                         std::vector<std::string>* warnings) {
    std::vector<std::string> errors;

    // Scenario: the builder enforces its own invariants; surface failures here.
    try {
        build_piecewise_scenario(cfg.scenario);
    } catch (const std::exception& e) {
        errors.push_back(e.what());
    }
    for (const auto& peak : cfg.scenario.demand_peaks)
        warn_outside("scenario.demand_peaks.multiplier", peak.multiplier, 1.0, 2.0, warnings);

    const PopulationSpec& pop = cfg.population;
    if (pop.n_customers <= 0) errors.push_back("population.n_customers must be positive");
    if (pop.n_merchants <= 0) errors.push_back("population.n_merchants must be positive");
    if (pop.merchants_per_customer <= 0 || pop.merchants_per_customer > pop.n_merchants)
        errors.push_back("population.merchants_per_customer outside [1, n_merchants]");
    check_range("population.initial_trust", pop.initial_trust, 0.0, 1.0, false, errors);
    if (pop.initial_balance <= 0.0) errors.push_back("population.initial_balance must be positive");

    const ParamRanges& r = pop.ranges;
    check_range("population.lambda", r.lambda, 0.0, 1.0, true, errors);
    check_range("population.rho_T", r.rho_T, 0.0, 1.0, true, errors);
    check_range("population.rho_C", r.rho_C, 0.0, 1.0, true, errors);
    check_range("population.rho_R", r.rho_R, 0.0, 1.0, true, errors);
    if (r.gamma_C.lo <= 0.0) errors.push_back("population.gamma_C must be positive");
    if (r.theta_gap.lo <= 0.0)
        errors.push_back("population.theta_gap must be positive (theta1 > theta2)");
    if (r.kappa_C.lo <= 0.0) errors.push_back("population.kappa_C must be positive");
    if (r.beta_T.lo <= 0.0) errors.push_back("population.beta_T must be positive");
    if (r.alpha_R.lo <= 0.0 || r.alpha_C.lo <= 0.0 || r.alpha_T.lo <= 0.0)
        errors.push_back("population withdrawal sensitivities must be positive");
    check_range("population.omega", r.omega, 0.0, 1.0, true, errors);
    check_range("population.theta_C_w", r.theta_C_w, 0.0, 1.0, false, errors);
    check_range("population.theta_R_w", r.theta_R_w, 0.0, 1.0, false, errors);

    // Typical-range advisories (warnings, not errors).
    warn_outside("population.n_customers", pop.n_customers, 1e3, 1e4, warnings);
    warn_outside("population.n_merchants", pop.n_merchants, 1e2, 1e3, warnings);
    warn_outside("population.lambda", r.lambda, 0.1, 0.4, warnings);
    warn_outside("population.rho_C", r.rho_C, 0.9, 0.99, warnings);
    warn_outside("population.rho_T", r.rho_T, 0.8, 0.95, warnings);
    warn_outside("population.rho_R", r.rho_R, 0.9, 0.99, warnings);
    warn_outside("population.gamma_C", r.gamma_C, 0.05, 0.2, warnings);
    warn_outside("population.omega", r.omega, 0.05, 0.3, warnings);
    warn_outside("population.theta_C_w", r.theta_C_w, 0.4, 0.7, warnings);
    warn_outside("population.theta_R_w", r.theta_R_w, 0.4, 0.7, warnings);

    if (cfg.network.k < 2 || cfg.network.k % 2 != 0)
        errors.push_back("network.k must be even and >= 2");
    if (cfg.network.k >= pop.n_customers) errors.push_back("network.k must be below n_customers");
    check_range("network.beta", cfg.network.beta, 0.0, 1.0, false, errors);
    warn_outside("network.k", cfg.network.k, 6, 12, warnings);
    warn_outside("network.beta", cfg.network.beta, 0.05, 0.2, warnings);

    const BehaviorParams& b = cfg.behavior;
    if (!(b.phi_avoiding > 0.0 && b.phi_avoiding <= b.phi_frustrated &&
          b.phi_frustrated <= b.phi_ok && b.phi_ok <= 1.0))
        errors.push_back("behavior.phi values must satisfy 0 < phi_avoiding <= phi_frustrated <= phi_ok <= 1");
    if (!(b.alpha_f > 0.0 && b.alpha_u >= b.alpha_f))
        errors.push_back("behavior: need alpha_u >= alpha_f > 0");
    warn_outside("behavior.alpha_f", b.alpha_f, 0.5, 1.0, warnings);
    warn_outside("behavior.alpha_u", b.alpha_u, 0.8, 1.2, warnings);
    if (b.w_merchant < 0.0 || b.w_social < 0.0)
        errors.push_back("behavior: perception weights must be non-negative");
    if (std::abs(b.w_merchant + b.w_social - 1.0) > 1e-9)
        errors.push_back("behavior: w_merchant + w_social must equal 1");
    if (b.w_feedback < 0.0) errors.push_back("behavior.w_feedback must be non-negative");
    if (b.w_feedback > 0.0 && b.feedback_ref_fraction <= 0.0)
        errors.push_back("behavior.feedback_ref_fraction must be positive when feedback is on");

    const MerchantSpec& m = cfg.merchants;
    if (m.window_len < 1) errors.push_back("merchants.window_len must be >= 1");
    if (m.theta_op1.lo <= 0.0) errors.push_back("merchants.theta_op1 must be positive");
    if (m.theta_op_gap.lo <= 0.0)
        errors.push_back("merchants.theta_op_gap must be positive (theta_op2 > theta_op1)");
    check_range("merchants.eta", m.eta, 0.0, 1.0, true, errors);
    if (m.epsilon <= 0.0) errors.push_back("merchants.epsilon must be positive");
    if (m.dwell.lo < 0.0 || m.dwell.lo > m.dwell.hi)
        errors.push_back("merchants.dwell must be a non-negative range");
    warn_outside("merchants.dwell", m.dwell, 5.0, 20.0, warnings);
    if (m.clean_required < 1) errors.push_back("merchants.clean_required must be >= 1");
    if (m.comm_quality < 1.0) errors.push_back("merchants.comm_quality must be >= 1");

    const SubstitutionConfig& s = cfg.substitution;
    check_range("substitution.adoption_prob", s.adoption_prob, 0.0, 1.0, false, errors);
    check_range("substitution.transfer_success_prob", s.transfer_success_prob, 0.0, 1.0, false, errors);

    return errors;
}

namespace {

// Per-step scratch written by the customer phases; slots are customer-indexed
// so workers never contend.
struct StepScratch {
    std::vector<std::uint8_t> attempted;
    std::vector<int> merchant;
    std::vector<OutcomeKind> card;
    std::vector<PaymentOutcome> experienced;
    std::vector<std::uint8_t> withdrew;
    std::vector<WithdrawalEvent> event_slot;
    std::vector<Mode> mode_snapshot;

    explicit StepScratch(size_t n)
        : attempted(n), merchant(n), card(n), experienced(n), withdrew(n), event_slot(n),
          mode_snapshot(n) {}
};

struct ClearanceTracker {
    std::vector<int> last_op_degraded;
    std::vector<int> last_bcast_degraded;

    explicit ClearanceTracker(size_t m) : last_op_degraded(m, -1), last_bcast_degraded(m, -1) {}
};

} // namespace

RunResult run(const RunConfig& cfg, const ExecOptions& opts) {
    {
        const auto errors = validate_config(cfg);
        if (!errors.empty()) {
            std::string msg = "invalid run configuration:";
            for (const auto& e : errors) msg += "\n  " + e;
            throw std::invalid_argument(msg);
        }
    }

    const ScenarioTimeline timeline = build_piecewise_scenario(cfg.scenario);
    const int horizon = timeline.horizon();
    const RngStreams streams(cfg.seed);

    SequentialRng net_rng = streams.sequential(Stream::Network);
    const SocialGraph graph =
        generate_watts_strogatz(cfg.population.n_customers, cfg.network.k, cfg.network.beta, net_rng);

    SequentialRng pop_rng = streams.sequential(Stream::Population);
    Population pop =
        sample_population(cfg.population, cfg.merchants, cfg.substitution.adoption_prob, pop_rng);

    const size_t n = static_cast<size_t>(cfg.population.n_customers);
    const size_t m = static_cast<size_t>(cfg.population.n_merchants);

    RunResult result;
    result.frames.reserve(static_cast<size_t>(horizon));
    RunSummary& summary = result.summary;
    summary.seed = cfg.seed;
    summary.horizon = horizon;
    summary.t_min = nadir(timeline);
    summary.total_initial_balance =
        static_cast<double>(cfg.population.n_customers) * cfg.population.initial_balance;

    StepScratch scratch(n);
    ClearanceTracker clearance(m);
    std::vector<StepCounts> merchant_counts(m);
    std::vector<MerchantLabel> broadcast_read(m, MerchantLabel::Accepting);

    double cumulative_outflow = 0.0;
    double prev_outflow = 0.0;
    long long total_adverse = 0;
    long long total_substituted = 0;

    const double feedback_scale =
        cfg.behavior.feedback_ref_fraction * summary.total_initial_balance;

    for (int t = 0; t < horizon; ++t) {
        const OutcomeProbs& probs = timeline.probs(t);
        const double demand = timeline.demand(t);
        const std::uint64_t ut = static_cast<std::uint64_t>(t);

        // --- Phase A: payment attempts and card outcomes -------------------
        parallel_for(opts.workers, n, [&](size_t lo, size_t hi) {
            for (size_t i = lo; i < hi; ++i) {
                const CustomerParams& cp = pop.customer_params[i];
                const CustomerState& cs = pop.customer_states[i];
                const double p_att = attempt_probability(cp, cs.mode, demand, cfg.behavior);
                const double u_att = streams.keyed_uniform(Stream::Attempts, ut, i, 0);
                if (u_att >= p_att) {
                    scratch.attempted[i] = 0;
                    scratch.experienced[i] = {OutcomeKind::None, false};
                    continue;
                }
                scratch.attempted[i] = 1;
                const double u_sel = streams.keyed_uniform(Stream::Attempts, ut, i, 1);
                scratch.merchant[i] = select_merchant(pop.exposure.rows[i], u_sel);

                const double u_out = streams.keyed_uniform(Stream::Outcomes, ut, i, 0);
                OutcomeKind card;
                if (u_out < probs.p_success) card = OutcomeKind::Success;
                else if (u_out < probs.p_success + probs.p_failure) card = OutcomeKind::Failure;
                else card = OutcomeKind::Unknown;
                scratch.card[i] = card;

                PaymentOutcome experienced{card, false};
                if (cfg.substitution.enabled && cp.substitution_adopter &&
                    (card == OutcomeKind::Failure || card == OutcomeKind::Unknown)) {
                    const double u_sub = streams.keyed_uniform(Stream::Substitution, ut, i, 0);
                    experienced = try_substitution(experienced, true, cfg.substitution, u_sub);
                }
                scratch.experienced[i] = experienced;
            }
        });

        // Serial aggregation of merchant evidence, in ascending customer id.
        std::fill(merchant_counts.begin(), merchant_counts.end(), StepCounts{});
        long long att = 0, succ = 0, fail = 0, unk = 0, substituted = 0;
        for (size_t i = 0; i < n; ++i) {
            if (!scratch.attempted[i]) continue;
            ++att;
            StepCounts& mc = merchant_counts[static_cast<size_t>(scratch.merchant[i])];
            ++mc.attempts;
            switch (scratch.card[i]) {
            case OutcomeKind::Success: ++succ; break;
            case OutcomeKind::Failure: ++fail; ++mc.failures; break;
            case OutcomeKind::Unknown: ++unk; ++mc.unknowns; break;
            case OutcomeKind::None: break;
            }
            if (scratch.experienced[i].via_substitution) ++substituted;
        }
        total_adverse += fail + unk;
        total_substituted += substituted;

        // --- Phase B: merchant assessment and broadcast --------------------
        if (cfg.behavior.lagged_broadcast_read)
            for (size_t j = 0; j < m; ++j) broadcast_read[j] = pop.merchant_states[j].broadcast;
        parallel_for(opts.workers, m, [&](size_t lo, size_t hi) {
            for (size_t j = lo; j < hi; ++j)
                step_merchant(pop.merchant_states[j], merchant_counts[j],
                              pop.merchant_params[j], cfg.merchants.comm_quality);
        });
        if (!cfg.behavior.lagged_broadcast_read)
            for (size_t j = 0; j < m; ++j) broadcast_read[j] = pop.merchant_states[j].broadcast;
        for (size_t j = 0; j < m; ++j) {
            if (pop.merchant_states[j].operational != MerchantLabel::Accepting)
                clearance.last_op_degraded[j] = t;
            if (pop.merchant_states[j].broadcast != MerchantLabel::Accepting)
                clearance.last_bcast_degraded[j] = t;
        }

        // --- Phase C: customer state updates and withdrawals ---------------
        // Neighbor modes are read from the start-of-step snapshot; merchant
        // broadcasts are read fresh from phase B.
        for (size_t i = 0; i < n; ++i) scratch.mode_snapshot[i] = pop.customer_states[i].mode;
        const double outflow_feedback =
            cfg.behavior.w_feedback > 0.0
                ? std::min(1.0, prev_outflow / feedback_scale)
                : 0.0;

        parallel_for(opts.workers, n, [&](size_t lo, size_t hi) {
            for (size_t i = lo; i < hi; ++i) {
                const CustomerParams& cp = pop.customer_params[i];
                CustomerState& cs = pop.customer_states[i];

                double bcast_sum = 0.0;
                const auto& row = pop.exposure.rows[i];
                for (const auto& [mid, w] : row)
                    bcast_sum += broadcast_severity(broadcast_read[static_cast<size_t>(mid)]);
                const double bcast_avg = bcast_sum / static_cast<double>(row.size());
                const double avoid_frac =
                    avoiding_fraction(graph, static_cast<int>(i), scratch.mode_snapshot);
                const double psi =
                    composite_perception(bcast_avg, avoid_frac, cfg.behavior, outflow_feedback);

                const ExperienceSignal sig = encode_experience(
                    scratch.experienced[i], cfg.behavior.alpha_f, cfg.behavior.alpha_u, cs.trust);

                const double scar_before = cs.scar;
                cs.scar = update_scar(cs.scar, cp, sig);
                cs.trust = update_trust(cs.trust, scar_before, cp, sig);
                cs.rumor = update_rumor(cs.rumor, cp, psi);
                cs.mode = transition_mode(cs.trust, cs.scar, cp);

                scratch.withdrew[i] = 0;
                if (is_eligible(cs, cp)) {
                    const double p_w = withdrawal_probability(cs, cp);
                    const double u_w = streams.keyed_uniform(Stream::Withdrawals, ut, i, 0);
                    if (u_w < p_w) {
                        auto ev = apply_withdrawal(cs, cp, t, static_cast<int>(i));
                        if (ev) {
                            scratch.withdrew[i] = 1;
                            scratch.event_slot[i] = *ev;
                        }
                    }
                }
            }
        });

        // Serial event collection in ascending customer id.
        double outflow = 0.0;
        for (size_t i = 0; i < n; ++i) {
            if (!scratch.withdrew[i]) continue;
            const WithdrawalEvent& ev = scratch.event_slot[i];
            outflow += ev.amount;
            result.events.push_back(ev);
            const CustomerParams& cp = pop.customer_params[i];
            if (!(ev.mode_at_decision == Mode::Avoiding && ev.scar_at_decision >= cp.theta_C_w &&
                  ev.rumor_at_decision >= cp.theta_R_w))
                ++summary.audit.eligibility_violations;
        }
        cumulative_outflow += outflow;

        // --- Metrics --------------------------------------------------------
        MetricsFrame frame;
        frame.t = t;
        frame.p_success = probs.p_success;
        frame.demand = demand;
        int n_ok = 0, n_fr = 0, n_av = 0;
        double sum_t = 0.0, sum_c = 0.0, sum_r = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const CustomerState& cs = pop.customer_states[i];
            switch (cs.mode) {
            case Mode::Ok: ++n_ok; break;
            case Mode::Frustrated: ++n_fr; break;
            case Mode::Avoiding: ++n_av; break;
            }
            sum_t += cs.trust;
            sum_c += cs.scar;
            sum_r += cs.rumor;
            if (cs.trust < 0.0 || cs.trust > 1.0 || cs.scar < 0.0 || cs.scar > 1.0 ||
                cs.rumor < 0.0 || cs.rumor > 1.0)
                ++summary.audit.range_violations;
        }
        const double dn = static_cast<double>(n);
        frame.frac_ok = n_ok / dn;
        frame.frac_frustrated = n_fr / dn;
        frame.frac_avoiding = n_av / dn;
        frame.mean_trust = sum_t / dn;
        frame.mean_scar = sum_c / dn;
        frame.mean_rumor = sum_r / dn;
        if (std::abs(frame.frac_ok + frame.frac_frustrated + frame.frac_avoiding - 1.0) > 1e-9)
            ++summary.audit.frame_sum_violations;

        double sev_sum = 0.0;
        for (size_t j = 0; j < m; ++j) {
            switch (pop.merchant_states[j].broadcast) {
            case MerchantLabel::Accepting: ++frame.broadcast_accepting; break;
            case MerchantLabel::Degraded: ++frame.broadcast_degraded; break;
            case MerchantLabel::Fallback: ++frame.broadcast_fallback; break;
            }
            sev_sum += broadcast_severity(pop.merchant_states[j].broadcast);
        }
        frame.mean_broadcast_severity = sev_sum / static_cast<double>(m);

        frame.attempts = att;
        frame.successes = succ;
        frame.failures = fail;
        frame.unknowns = unk;
        frame.substitution_rate =
            (fail + unk) > 0 ? static_cast<double>(substituted) / static_cast<double>(fail + unk) : 0.0;
        frame.outflow = outflow;
        frame.cumulative_outflow = cumulative_outflow;
        result.frames.push_back(frame);

        if (outflow > summary.peak_outflow) {
            summary.peak_outflow = outflow;
            summary.peak_outflow_step = t;
        }
        if (frame.frac_avoiding > summary.peak_avoidance) {
            summary.peak_avoidance = frame.frac_avoiding;
            summary.peak_avoidance_step = t;
        }

        if (opts.record_state_trace) {
            StateTraceStep snap;
            snap.trust.reserve(n); snap.scar.reserve(n); snap.rumor.reserve(n);
            snap.balance.reserve(n); snap.mode.reserve(n);
            for (size_t i = 0; i < n; ++i) {
                const CustomerState& cs = pop.customer_states[i];
                snap.trust.push_back(cs.trust);
                snap.scar.push_back(cs.scar);
                snap.rumor.push_back(cs.rumor);
                snap.balance.push_back(cs.balance);
                snap.mode.push_back(cs.mode);
            }
            for (size_t j = 0; j < m; ++j) {
                const MerchantState& ms = pop.merchant_states[j];
                snap.operational.push_back(ms.operational);
                snap.broadcast.push_back(ms.broadcast);
                snap.dwell.push_back(ms.dwell_timer);
                snap.streak.push_back(ms.clean_streak);
                snap.win_attempts.push_back(ms.window.attempts());
                snap.win_failures.push_back(ms.window.failures());
                snap.win_unknowns.push_back(ms.window.unknowns());
            }
            result.trace.push_back(std::move(snap));
        }

        prev_outflow = outflow;
    }

    // --- Summary ------------------------------------------------------------
    double final_balance = 0.0;
    for (size_t i = 0; i < n; ++i) final_balance += pop.customer_states[i].balance;
    summary.total_final_balance = final_balance;
    summary.cumulative_outflow = cumulative_outflow;
    summary.cumulative_outflow_fraction = cumulative_outflow / summary.total_initial_balance;
    summary.withdrawal_events = static_cast<long long>(result.events.size());
    summary.delayed_peak = summary.peak_outflow_step > summary.t_min;
    summary.substitution_rate_overall =
        total_adverse > 0 ? static_cast<double>(total_substituted) / static_cast<double>(total_adverse)
                          : 0.0;

    const double diff = summary.total_initial_balance - summary.total_final_balance;
    const double denom = std::max({std::abs(cumulative_outflow), std::abs(diff), 1e-12});
    summary.conservation_residual_rel = std::abs(cumulative_outflow - diff) / denom;

    double op_sum = 0.0, bc_sum = 0.0;
    int degraded = 0;
    for (size_t j = 0; j < m; ++j) {
        if (clearance.last_op_degraded[j] < 0) continue;
        ++degraded;
        const int op_clear = clearance.last_op_degraded[j] + 1;
        const int bc_clear = clearance.last_bcast_degraded[j] + 1;
        op_sum += op_clear;
        bc_sum += bc_clear;
        if (bc_clear < op_clear) ++summary.audit.broadcast_lag_violations;
    }
    summary.merchants_degraded = degraded;
    if (degraded > 0) {
        summary.mean_operational_clearance = op_sum / degraded;
        summary.mean_broadcast_clearance = bc_sum / degraded;
    }

    // Balance monotonicity: withdrawals are the only balance writes; audit
    // the event log against itself.
    for (const auto& ev : result.events)
        if (ev.amount <= 0.0 || ev.balance_after < 0.0) ++summary.audit.balance_violations;

    return result;
}

DistStats dist_stats(std::vector<double> values) {
    DistStats s;
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    auto quantile = [&](double p) {
        const double idx = p * static_cast<double>(values.size() - 1);
        const size_t lo = static_cast<size_t>(idx);
        const size_t hi = std::min(values.size() - 1, lo + 1);
        const double w = idx - static_cast<double>(lo);
        return values[lo] + (values[hi] - values[lo]) * w;
    };
    s.min = values.front();
    s.q1 = quantile(0.25);
    s.median = quantile(0.5);
    s.q3 = quantile(0.75);
    s.max = values.back();
    return s;
}

BatchResult run_batch(const RunConfig& cfg, const std::vector<std::uint64_t>& seeds,
                      const ExecOptions& opts) {
    if (seeds.empty()) throw std::invalid_argument("run_batch: empty seed list");

    BatchResult out;
    out.summaries.resize(seeds.size());
    std::vector<std::string> failures(seeds.size());

    parallel_for(opts.workers, seeds.size(), [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i) {
            RunConfig c = cfg;
            c.seed = seeds[i];
            try {
                ExecOptions inner = opts;
                inner.workers = 1; // parallelism is across seeds here
                inner.record_state_trace = false;
                out.summaries[i] = run(c, inner).summary;
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    });

    for (size_t i = 0; i < seeds.size(); ++i) {
        if (!failures[i].empty())
            throw std::runtime_error("run_batch: seed " + std::to_string(seeds[i]) +
                                     " failed: " + failures[i]);
    }

    std::vector<double> pa, po, cf;
    int delayed = 0;
    for (const auto& s : out.summaries) {
        pa.push_back(s.peak_avoidance);
        po.push_back(s.peak_outflow);
        cf.push_back(s.cumulative_outflow_fraction);
        if (s.delayed_peak) ++delayed;
    }
    out.peak_avoidance = dist_stats(std::move(pa));
    out.peak_outflow = dist_stats(std::move(po));
    out.cumulative_outflow_fraction = dist_stats(std::move(cf));
    out.delayed_peak_fraction = static_cast<double>(delayed) / static_cast<double>(seeds.size());
    return out;
}

namespace {

double median_of(std::vector<double> v) {
    return dist_stats(std::move(v)).median;
}

} // namespace

PairedResult run_paired(const RunConfig& base, const RunConfig& variant,
                        const std::vector<std::uint64_t>& seeds, const ExecOptions& opts) {
    if (seeds.empty()) throw std::invalid_argument("run_paired: empty seed list");

    // Only policy fields may differ.
    MerchantSpec base_m = base.merchants;
    MerchantSpec var_m = variant.merchants;
    base_m.comm_quality = var_m.comm_quality = 1.0;
    if (!(base.scenario == variant.scenario && base.population == variant.population &&
          base.network == variant.network && base.behavior == variant.behavior &&
          base_m == var_m))
        throw std::invalid_argument(
            "run_paired: variant may differ only in substitution settings and merchants.comm_quality");

    PairedResult out;
    out.deltas.resize(seeds.size());

    std::vector<std::string> failures(seeds.size());
    parallel_for(opts.workers, seeds.size(), [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i) {
            try {
                ExecOptions inner = opts;
                inner.workers = 1;
                inner.record_state_trace = false;
                RunConfig cb = base;
                RunConfig cv = variant;
                cb.seed = cv.seed = seeds[i];
                PairedDelta d;
                d.seed = seeds[i];
                d.base = run(cb, inner).summary;
                d.variant = run(cv, inner).summary;
                d.peak_avoidance_delta = d.variant.peak_avoidance - d.base.peak_avoidance;
                d.peak_outflow_delta = d.variant.peak_outflow - d.base.peak_outflow;
                d.cumulative_outflow_delta =
                    d.variant.cumulative_outflow - d.base.cumulative_outflow;
                out.deltas[i] = d;
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    });
    for (size_t i = 0; i < seeds.size(); ++i) {
        if (!failures[i].empty())
            throw std::runtime_error("run_paired: seed " + std::to_string(seeds[i]) +
                                     " failed: " + failures[i]);
    }

    std::vector<double> pa, po, cf;
    for (const auto& d : out.deltas) {
        pa.push_back(d.peak_avoidance_delta);
        po.push_back(d.peak_outflow_delta);
        cf.push_back(d.cumulative_outflow_delta);
    }
    out.median_peak_avoidance_delta = median_of(std::move(pa));
    out.median_peak_outflow_delta = median_of(std::move(po));
    out.median_cumulative_outflow_delta = median_of(std::move(cf));
    return out;
}

} // namespace osim

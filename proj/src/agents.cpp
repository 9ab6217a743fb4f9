#include "osim/agents.hpp"

#include <algorithm>
#include <stdexcept>

namespace osim {

namespace {

double draw(SequentialRng& rng, const Range& r) { return rng.uniform(r.lo, r.hi); }

} // namespace

Population sample_population(const PopulationSpec& pop, const MerchantSpec& merch,
                             double adoption_prob, SequentialRng& rng) {
    if (pop.n_customers <= 0 || pop.n_merchants <= 0)
        throw std::invalid_argument("population: counts must be positive");
    if (pop.merchants_per_customer <= 0 || pop.merchants_per_customer > pop.n_merchants)
        throw std::invalid_argument("population: merchants_per_customer outside [1, n_merchants]");

    Population out;
    out.customer_params.reserve(static_cast<size_t>(pop.n_customers));
    out.customer_states.reserve(static_cast<size_t>(pop.n_customers));

    const ParamRanges& r = pop.ranges;
    for (int i = 0; i < pop.n_customers; ++i) {
        CustomerParams p;
        p.lambda = draw(rng, r.lambda);
        p.rho_T = draw(rng, r.rho_T);
        p.rho_C = draw(rng, r.rho_C);
        p.rho_R = draw(rng, r.rho_R);
        p.gamma_C = draw(rng, r.gamma_C);
        p.kappa_C = draw(rng, r.kappa_C);
        p.beta_T = draw(rng, r.beta_T);
        p.alpha_R = draw(rng, r.alpha_R);
        p.alpha_C = draw(rng, r.alpha_C);
        p.alpha_T = draw(rng, r.alpha_T);
        p.omega = draw(rng, r.omega);
        p.theta1 = draw(rng, r.theta1);
        p.theta2 = p.theta1 - draw(rng, r.theta_gap);
        p.theta_C_w = draw(rng, r.theta_C_w);
        p.theta_R_w = draw(rng, r.theta_R_w);
        p.substitution_adopter = rng.next_double() < adoption_prob;
        out.customer_params.push_back(p);

        CustomerState s;
        s.trust = pop.initial_trust;
        s.scar = 0.0;
        s.rumor = 0.0;
        s.mode = Mode::Ok;
        s.balance = pop.initial_balance;
        out.customer_states.push_back(s);
    }

    // Exposure subsets: uniform without replacement, uniform weights.
    out.exposure.rows.resize(static_cast<size_t>(pop.n_customers));
    const double w = 1.0 / static_cast<double>(pop.merchants_per_customer);
    for (int i = 0; i < pop.n_customers; ++i) {
        auto& row = out.exposure.rows[static_cast<size_t>(i)];
        while (static_cast<int>(row.size()) < pop.merchants_per_customer) {
            const int m = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(pop.n_merchants)));
            bool dup = false;
            for (const auto& [id, _] : row) dup = dup || id == m;
            if (!dup) row.emplace_back(m, w);
        }
        std::sort(row.begin(), row.end());
    }

    out.merchant_params.reserve(static_cast<size_t>(pop.n_merchants));
    out.merchant_states.reserve(static_cast<size_t>(pop.n_merchants));
    for (int m = 0; m < pop.n_merchants; ++m) {
        MerchantParams p;
        p.theta_op1 = draw(rng, merch.theta_op1);
        p.theta_op2 = p.theta_op1 + draw(rng, merch.theta_op_gap);
        p.dwell_init = draw(rng, merch.dwell);
        p.eta = merch.eta;
        p.epsilon = merch.epsilon;
        p.window_len = merch.window_len;
        p.clean_required = merch.clean_required;
        p.idle_counts_clean = merch.idle_counts_clean;
        out.merchant_params.push_back(p);
        out.merchant_states.emplace_back(merch.window_len);
    }

    return out;
}

int select_merchant(const std::vector<std::pair<int, double>>& row, double u) {
    double acc = 0.0;
    for (const auto& [id, w] : row) {
        acc += w;
        if (u < acc) return id;
    }
    return row.back().first;
}

} // namespace osim

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "osim/merchants.hpp"
#include "osim/rng.hpp"

namespace osim {

enum class Mode : std::uint8_t { Ok = 0, Frustrated = 1, Avoiding = 2 };

// Fixed behavioral parameters of one customer, sampled once per run.
struct CustomerParams {
    double lambda = 0.25;  // baseline payment attempt propensity
    double theta1 = 0.65;  // effective trust at or above: OK
    double theta2 = 0.45;  // effective trust below: AVOIDING
    double rho_T = 0.875;  // trust persistence
    double rho_C = 0.945;  // scar persistence
    double rho_R = 0.945;  // rumor persistence
    double gamma_C = 0.125; // scar increment per adverse experience
    double kappa_C = 0.5;  // scar weight in effective trust
    double beta_T = 0.02;  // trust erosion per unit of scar
    double alpha_R = 1.0;  // withdrawal sensitivity to rumor
    double alpha_C = 1.0;  // withdrawal sensitivity to scar
    double alpha_T = 1.0;  // withdrawal sensitivity to trust (protective)
    double omega = 0.175;  // withdrawal fraction of remaining balance
    double theta_C_w = 0.55; // scar threshold for withdrawal eligibility
    double theta_R_w = 0.55; // rumor threshold for withdrawal eligibility
    bool substitution_adopter = false;
};

struct CustomerState {
    double trust = 0.95;
    double scar = 0.0;
    double rumor = 0.0;
    Mode mode = Mode::Ok;
    double balance = 1.0;
};

struct Range {
    double lo = 0.0;
    double hi = 0.0;

    bool operator==(const Range&) const = default;
    double mid() const { return 0.5 * (lo + hi); }
};

// Sampling ranges for the heterogeneous customer parameters. Defaults follow
// the documented typical ranges where those exist; the rest are exposed as
// configuration.
struct ParamRanges {
    Range lambda{0.1, 0.4};
    Range rho_T{0.8, 0.95};
    Range rho_C{0.9, 0.99};
    Range rho_R{0.9, 0.99};
    Range gamma_C{0.05, 0.2};
    Range theta1{0.55, 0.75};
    Range theta_gap{0.15, 0.25}; // theta2 = theta1 - gap
    Range kappa_C{0.4, 0.6};
    Range beta_T{0.01, 0.03};
    Range alpha_R{0.8, 1.2};
    Range alpha_C{0.8, 1.2};
    Range alpha_T{0.8, 1.2};
    Range omega{0.05, 0.3};
    Range theta_C_w{0.4, 0.7};
    Range theta_R_w{0.4, 0.7};

    bool operator==(const ParamRanges&) const = default;
};

struct PopulationSpec {
    int n_customers = 1000;
    int n_merchants = 100;
    int merchants_per_customer = 3;
    double initial_trust = 0.95;
    double initial_balance = 1.0;
    ParamRanges ranges;

    bool operator==(const PopulationSpec&) const = default;
};

// Config for merchant-side sampling plus the shared merchant constants.
struct MerchantSpec {
    int window_len = 10;
    Range theta_op1{0.15, 0.25};
    Range theta_op_gap{0.2, 0.3}; // theta_op2 = theta_op1 + gap
    double eta = 0.7;
    double epsilon = 1e-9;
    Range dwell{5.0, 20.0};
    int clean_required = 3;
    bool idle_counts_clean = true;
    double comm_quality = 1.0; // policy lever: accelerates broadcast timer decay

    bool operator==(const MerchantSpec&) const = default;
};

// Habitual customer -> merchant exposure. Each row holds (merchant id,
// weight) pairs sorted by merchant id; weights are positive and sum to 1.
struct ExposureMap {
    std::vector<std::vector<std::pair<int, double>>> rows;
};

struct Population {
    std::vector<CustomerParams> customer_params;
    std::vector<CustomerState> customer_states;
    std::vector<MerchantParams> merchant_params;
    std::vector<MerchantState> merchant_states;
    ExposureMap exposure;
};

// Samples the heterogeneous population from the population stream. Customers
// start OK with zero scar and rumor; merchants start ACCEPTING. The draw
// order (per customer: lambda, rho_T, rho_C, rho_R, gamma_C, kappa_C,
// beta_T, alpha_R, alpha_C, alpha_T, omega, theta1, theta_gap, theta_C_w,
// theta_R_w, adopter; then exposure rows; then per merchant: theta_op1,
// theta_op_gap, dwell) is fixed and part of the reproducibility contract.
Population sample_population(const PopulationSpec& pop, const MerchantSpec& merch,
                             double adoption_prob, SequentialRng& rng);

// Merchant draw by exposure weight; `u` is a uniform [0,1) variate.
int select_merchant(const std::vector<std::pair<int, double>>& row, double u);

} // namespace osim

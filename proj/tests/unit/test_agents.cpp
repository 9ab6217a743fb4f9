#include "doctest.h"

#include <cmath>
#include <set>
#include <stdexcept>

#include "osim/agents.hpp"

using namespace osim;

namespace {

Population sample(std::uint64_t seed, int n_customers = 1000, int n_merchants = 100) {
    PopulationSpec pop;
    pop.n_customers = n_customers;
    pop.n_merchants = n_merchants;
    MerchantSpec merch;
    SequentialRng rng(RngStreams(seed).stream_seed(Stream::Population));
    return sample_population(pop, merch, 0.6, rng);
}

} // namespace

TEST_CASE("sampled parameters respect their ranges") {
    const auto pop = sample(1);
    const ParamRanges r; // defaults
    for (const auto& p : pop.customer_params) {
        CHECK(p.lambda >= r.lambda.lo);
        CHECK(p.lambda <= r.lambda.hi);
        CHECK(p.omega >= 0.05);
        CHECK(p.omega <= 0.3);
        CHECK(p.theta1 > p.theta2);
        CHECK(p.rho_T > 0.0);
        CHECK(p.rho_T < 1.0);
        CHECK(p.rho_C > 0.0);
        CHECK(p.rho_C < 1.0);
        CHECK(p.rho_R > 0.0);
        CHECK(p.rho_R < 1.0);
        CHECK(p.theta_C_w >= 0.4);
        CHECK(p.theta_C_w <= 0.7);
        CHECK(p.theta_R_w >= 0.4);
        CHECK(p.theta_R_w <= 0.7);
    }
    for (const auto& mp : pop.merchant_params) {
        CHECK(mp.theta_op2 > mp.theta_op1);
        CHECK(mp.theta_op1 > 0.0);
        CHECK(mp.dwell_init >= 5.0);
        CHECK(mp.dwell_init <= 20.0);
    }
}

TEST_CASE("initial states: OK mode, zero scar and rumor, accepting merchants") {
    const auto pop = sample(2, 50, 10);
    for (const auto& s : pop.customer_states) {
        CHECK(s.mode == Mode::Ok);
        CHECK(s.scar == 0.0);
        CHECK(s.rumor == 0.0);
        CHECK(s.trust == doctest::Approx(0.95));
        CHECK(s.balance == doctest::Approx(1.0));
    }
    for (const auto& m : pop.merchant_states) {
        CHECK(m.operational == MerchantLabel::Accepting);
        CHECK(m.broadcast == MerchantLabel::Accepting);
        CHECK(m.dwell_timer == 0.0);
    }
}

TEST_CASE("exposure rows: distinct merchants, uniform weights summing to 1") {
    const auto pop = sample(3, 200, 20);
    for (const auto& row : pop.exposure.rows) {
        REQUIRE(row.size() == 3);
        std::set<int> ids;
        double sum = 0.0;
        for (const auto& [id, w] : row) {
            ids.insert(id);
            CHECK(w == doctest::Approx(1.0 / 3.0));
            sum += w;
            CHECK(id >= 0);
            CHECK(id < 20);
        }
        CHECK(ids.size() == 3);
        CHECK(sum == doctest::Approx(1.0));
    }
}

TEST_CASE("sampling is deterministic per seed and heterogeneous") {
    const auto a = sample(4);
    const auto b = sample(4);
    const auto c = sample(5);
    bool identical = true;
    for (size_t i = 0; i < a.customer_params.size(); ++i)
        identical = identical && a.customer_params[i].lambda == b.customer_params[i].lambda;
    CHECK(identical);

    bool differs = false;
    for (size_t i = 0; i < a.customer_params.size(); ++i)
        differs = differs || a.customer_params[i].lambda != c.customer_params[i].lambda;
    CHECK(differs);

    // Heterogeneity: lambdas are not all equal.
    bool varied = false;
    for (size_t i = 1; i < a.customer_params.size(); ++i)
        varied = varied || a.customer_params[i].lambda != a.customer_params[0].lambda;
    CHECK(varied);
}

TEST_CASE("select_merchant: degenerate and zero-weight rows") {
    std::vector<std::pair<int, double>> single{{7, 1.0}};
    SequentialRng rng(9);
    for (int i = 0; i < 100; ++i) CHECK(select_merchant(single, rng.next_double()) == 7);

    std::vector<std::pair<int, double>> skewed{{1, 1.0}, {2, 0.0}};
    for (int i = 0; i < 1000; ++i) CHECK(select_merchant(skewed, rng.next_double()) == 1);
}

TEST_CASE("select_merchant frequencies match the weights") {
    std::vector<std::pair<int, double>> row{{0, 0.5}, {1, 0.5}};
    SequentialRng rng(1234);
    const int n = 100000;
    int first = 0;
    for (int i = 0; i < n; ++i)
        if (select_merchant(row, rng.next_double()) == 0) ++first;
    CHECK(std::abs(static_cast<double>(first) / n - 0.5) < 0.01);
}

TEST_CASE("invalid population specs rejected") {
    PopulationSpec pop;
    pop.n_customers = 0;
    MerchantSpec merch;
    SequentialRng rng(1);
    CHECK_THROWS_AS(sample_population(pop, merch, 0.5, rng), std::invalid_argument);

    pop.n_customers = 10;
    pop.n_merchants = 2;
    pop.merchants_per_customer = 3;
    CHECK_THROWS_AS(sample_population(pop, merch, 0.5, rng), std::invalid_argument);
}

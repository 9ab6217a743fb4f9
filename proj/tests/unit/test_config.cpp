#include "doctest.h"

#include "osim/config.hpp"

using namespace osim;

namespace {

const char* kMinimal = R"({
  "scenario": {
    "phases": [
      {"kind": "hold", "p_success": 0.99, "steps": 10},
      {"kind": "ramp", "p_success": 0.4, "steps": 5},
      {"kind": "hold", "p_success": 0.4, "steps": 5},
      {"kind": "ramp", "p_success": 0.99, "steps": 10}
    ]
  },
  "run": {"seed": 3}
})";

} // namespace

TEST_CASE("minimal config parses with documented defaults") {
    const auto loaded = parse_config_json(kMinimal);
    CHECK(loaded.config.seed == 3);
    CHECK(loaded.config.population.n_customers == 1000);
    CHECK(loaded.config.network.k == 8);
    CHECK(loaded.config.behavior.w_merchant == doctest::Approx(0.6));
    CHECK(loaded.config.merchants.window_len == 10);
    CHECK_FALSE(loaded.config.substitution.enabled);
    CHECK(loaded.seeds == std::vector<std::uint64_t>{3});
    CHECK(loaded.warnings.empty());
}

TEST_CASE("unknown keys are rejected with their path") {
    const std::string text = R"({
      "scenario": {"phases": [{"kind": "hold", "p_success": 1.0, "steps": 5}]},
      "population": {"n_costumers": 10}
    })";
    try {
        parse_config_json(text);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("population.n_costumers") != std::string::npos);
    }
}

TEST_CASE("parse errors carry a line number") {
    try {
        parse_config_json("{\n  \"scenario\": [,]\n}");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("semantic violations name the offending key") {
    // theta_gap of zero would collapse theta1 onto theta2.
    const std::string text = R"({
      "scenario": {"phases": [{"kind": "hold", "p_success": 1.0, "steps": 5}]},
      "population": {"theta_gap": [0.0, 0.0]}
    })";
    try {
        parse_config_json(text);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("theta_gap") != std::string::npos);
    }
}

TEST_CASE("perception weights must sum to one at load time") {
    const std::string text = R"({
      "scenario": {"phases": [{"kind": "hold", "p_success": 1.0, "steps": 5}]},
      "behavior": {"w_merchant": 0.7, "w_social": 0.4}
    })";
    CHECK_THROWS_AS(parse_config_json(text), ConfigError);
}

TEST_CASE("experience severity ordering enforced at load time") {
    const std::string text = R"({
      "scenario": {"phases": [{"kind": "hold", "p_success": 1.0, "steps": 5}]},
      "behavior": {"alpha_f": 1.0, "alpha_u": 0.5}
    })";
    CHECK_THROWS_AS(parse_config_json(text), ConfigError);
}

TEST_CASE("horizon must match the phase total when given") {
    const std::string good = R"({
      "scenario": {"phases": [{"kind": "hold", "p_success": 1.0, "steps": 5}]},
      "run": {"horizon": 5}
    })";
    CHECK_NOTHROW(parse_config_json(good));

    const std::string bad = R"({
      "scenario": {"phases": [{"kind": "hold", "p_success": 1.0, "steps": 5}]},
      "run": {"horizon": 6}
    })";
    CHECK_THROWS_AS(parse_config_json(bad), ConfigError);
}

TEST_CASE("out-of-typical-range values warn but do not fail") {
    const std::string text = R"({
      "scenario": {"phases": [{"kind": "hold", "p_success": 1.0, "steps": 5}]},
      "population": {"n_customers": 120, "omega": [0.02, 0.5]},
      "network": {"k": 4}
    })";
    const auto loaded = parse_config_json(text);
    CHECK(loaded.warnings.size() >= 2);
}

TEST_CASE("variant overrides: policy keys only") {
    const std::string patched =
        apply_variant(kMinimal, {"substitution.enabled=true", "merchants.comm_quality=2.0"});
    const auto loaded = parse_config_json(patched);
    CHECK(loaded.config.substitution.enabled);
    CHECK(loaded.config.merchants.comm_quality == doctest::Approx(2.0));

    CHECK_THROWS_AS(apply_variant(kMinimal, {"network.beta=0.5"}), ConfigError);
    CHECK_THROWS_AS(apply_variant(kMinimal, {"merchants.window_len=5"}), ConfigError);
    CHECK_THROWS_AS(apply_variant(kMinimal, {"substitution.enabled"}), ConfigError);
}

TEST_CASE("summary serializes as one JSON record") {
    RunSummary s;
    s.seed = 12;
    s.peak_outflow = 1.5;
    const std::string j = summary_json(s);
    CHECK(j.find("\"seed\": 12") != std::string::npos);
    CHECK(j.find("\"peak_outflow\": 1.5") != std::string::npos);
    CHECK(j.find("\"audit\"") != std::string::npos);
}

#include "osim/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace osim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config error: " + msg); }

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(path + ": expected an object");
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) { known = true; break; }
        if (!known) fail(path + "." + item.key() + ": unknown key");
    }
}

double get_double(const json& obj, const std::string& path, const char* key, double def) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(path + "." + key + ": expected a number");
    return v.get<double>();
}

int get_int(const json& obj, const std::string& path, const char* key, int def) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(path + "." + key + ": expected an integer");
    return v.get<int>();
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool def) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(path + "." + key + ": expected a boolean");
    return v.get<bool>();
}

Range get_range(const json& obj, const std::string& path, const char* key, Range def) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        fail(path + "." + key + ": expected [lo, hi]");
    Range r{v[0].get<double>(), v[1].get<double>()};
    if (r.lo > r.hi) fail(path + "." + key + ": lo > hi");
    return r;
}

PiecewiseSpec parse_scenario(const json& obj) {
    check_keys(obj, "scenario", {"phases", "failure_share", "demand_base", "demand_peaks"});
    PiecewiseSpec spec;
    spec.failure_share = get_double(obj, "scenario", "failure_share", spec.failure_share);
    spec.demand_base = get_double(obj, "scenario", "demand_base", spec.demand_base);

    if (!obj.contains("phases") || !obj.at("phases").is_array() || obj.at("phases").empty())
        fail("scenario.phases: expected a non-empty array");
    int idx = 0;
    for (const json& ph : obj.at("phases")) {
        const std::string path = "scenario.phases[" + std::to_string(idx++) + "]";
        check_keys(ph, path, {"kind", "p_success", "p_failure", "p_unknown", "steps"});
        PhaseSpec p;
        if (ph.contains("kind")) {
            const std::string kind = ph.at("kind").get<std::string>();
            if (kind == "hold") p.kind = PhaseKind::Hold;
            else if (kind == "ramp") p.kind = PhaseKind::Ramp;
            else fail(path + ".kind: expected \"hold\" or \"ramp\"");
        }
        if (!ph.contains("p_success")) fail(path + ".p_success: required");
        p.p_success = get_double(ph, path, "p_success", 1.0);
        p.p_failure = get_double(ph, path, "p_failure", -1.0);
        p.p_unknown = get_double(ph, path, "p_unknown", -1.0);
        p.steps = get_int(ph, path, "steps", 0);
        if (p.steps <= 0) fail(path + ".steps: must be positive");
        spec.phases.push_back(p);
    }

    if (obj.contains("demand_peaks")) {
        if (!obj.at("demand_peaks").is_array()) fail("scenario.demand_peaks: expected an array");
        idx = 0;
        for (const json& pk : obj.at("demand_peaks")) {
            const std::string path = "scenario.demand_peaks[" + std::to_string(idx++) + "]";
            check_keys(pk, path, {"start", "end", "multiplier"});
            DemandPeak d;
            d.start = get_int(pk, path, "start", 0);
            d.end = get_int(pk, path, "end", 0);
            d.multiplier = get_double(pk, path, "multiplier", 1.0);
            spec.demand_peaks.push_back(d);
        }
    }
    return spec;
}

PopulationSpec parse_population(const json& obj) {
    const std::string path = "population";
    check_keys(obj, path,
               {"n_customers", "n_merchants", "merchants_per_customer", "initial_trust",
                "initial_balance", "lambda", "rho_T", "rho_C", "rho_R", "gamma_C", "theta1",
                "theta_gap", "kappa_C", "beta_T", "alpha_R", "alpha_C", "alpha_T", "omega",
                "theta_C_w", "theta_R_w"});
    PopulationSpec p;
    p.n_customers = get_int(obj, path, "n_customers", p.n_customers);
    p.n_merchants = get_int(obj, path, "n_merchants", p.n_merchants);
    p.merchants_per_customer = get_int(obj, path, "merchants_per_customer", p.merchants_per_customer);
    p.initial_trust = get_double(obj, path, "initial_trust", p.initial_trust);
    p.initial_balance = get_double(obj, path, "initial_balance", p.initial_balance);
    ParamRanges& r = p.ranges;
    r.lambda = get_range(obj, path, "lambda", r.lambda);
    r.rho_T = get_range(obj, path, "rho_T", r.rho_T);
    r.rho_C = get_range(obj, path, "rho_C", r.rho_C);
    r.rho_R = get_range(obj, path, "rho_R", r.rho_R);
    r.gamma_C = get_range(obj, path, "gamma_C", r.gamma_C);
    r.theta1 = get_range(obj, path, "theta1", r.theta1);
    r.theta_gap = get_range(obj, path, "theta_gap", r.theta_gap);
    r.kappa_C = get_range(obj, path, "kappa_C", r.kappa_C);
    r.beta_T = get_range(obj, path, "beta_T", r.beta_T);
    r.alpha_R = get_range(obj, path, "alpha_R", r.alpha_R);
    r.alpha_C = get_range(obj, path, "alpha_C", r.alpha_C);
    r.alpha_T = get_range(obj, path, "alpha_T", r.alpha_T);
    r.omega = get_range(obj, path, "omega", r.omega);
    r.theta_C_w = get_range(obj, path, "theta_C_w", r.theta_C_w);
    r.theta_R_w = get_range(obj, path, "theta_R_w", r.theta_R_w);
    return p;
}

BehaviorParams parse_behavior(const json& obj) {
    const std::string path = "behavior";
    check_keys(obj, path,
               {"phi_ok", "phi_frustrated", "phi_avoiding", "alpha_f", "alpha_u", "w_merchant",
                "w_social", "w_feedback", "feedback_ref_fraction", "lagged_broadcast_read"});
    BehaviorParams b;
    b.phi_ok = get_double(obj, path, "phi_ok", b.phi_ok);
    b.phi_frustrated = get_double(obj, path, "phi_frustrated", b.phi_frustrated);
    b.phi_avoiding = get_double(obj, path, "phi_avoiding", b.phi_avoiding);
    b.alpha_f = get_double(obj, path, "alpha_f", b.alpha_f);
    b.alpha_u = get_double(obj, path, "alpha_u", b.alpha_u);
    b.w_merchant = get_double(obj, path, "w_merchant", b.w_merchant);
    b.w_social = get_double(obj, path, "w_social", b.w_social);
    b.w_feedback = get_double(obj, path, "w_feedback", b.w_feedback);
    b.feedback_ref_fraction = get_double(obj, path, "feedback_ref_fraction", b.feedback_ref_fraction);
    b.lagged_broadcast_read = get_bool(obj, path, "lagged_broadcast_read", b.lagged_broadcast_read);
    return b;
}

MerchantSpec parse_merchants(const json& obj) {
    const std::string path = "merchants";
    check_keys(obj, path,
               {"window_len", "theta_op1", "theta_op_gap", "eta", "epsilon", "dwell",
                "clean_required", "idle_counts_clean", "comm_quality"});
    MerchantSpec m;
    m.window_len = get_int(obj, path, "window_len", m.window_len);
    m.theta_op1 = get_range(obj, path, "theta_op1", m.theta_op1);
    m.theta_op_gap = get_range(obj, path, "theta_op_gap", m.theta_op_gap);
    m.eta = get_double(obj, path, "eta", m.eta);
    m.epsilon = get_double(obj, path, "epsilon", m.epsilon);
    m.dwell = get_range(obj, path, "dwell", m.dwell);
    m.clean_required = get_int(obj, path, "clean_required", m.clean_required);
    m.idle_counts_clean = get_bool(obj, path, "idle_counts_clean", m.idle_counts_clean);
    m.comm_quality = get_double(obj, path, "comm_quality", m.comm_quality);
    return m;
}

SubstitutionConfig parse_substitution(const json& obj) {
    const std::string path = "substitution";
    check_keys(obj, path, {"enabled", "adoption_prob", "transfer_success_prob", "trigger"});
    SubstitutionConfig s;
    s.enabled = get_bool(obj, path, "enabled", s.enabled);
    s.adoption_prob = get_double(obj, path, "adoption_prob", s.adoption_prob);
    s.transfer_success_prob = get_double(obj, path, "transfer_success_prob", s.transfer_success_prob);
    if (obj.contains("trigger")) {
        const std::string trig = obj.at("trigger").get<std::string>();
        if (trig != "on_failure_and_unknown")
            fail("substitution.trigger: only \"on_failure_and_unknown\" is supported");
    }
    return s;
}

int line_of_byte(const std::string& text, size_t byte) {
    int line = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

} // namespace

LoadedConfig parse_config_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("line " + std::to_string(line_of_byte(text, e.byte)) + ": " + e.what());
    }

    check_keys(doc, "config",
               {"scenario", "population", "network", "behavior", "merchants", "substitution", "run"});

    LoadedConfig out;
    RunConfig& cfg = out.config;
    if (!doc.contains("scenario")) fail("scenario: section required");
    cfg.scenario = parse_scenario(doc.at("scenario"));
    if (doc.contains("population")) cfg.population = parse_population(doc.at("population"));
    if (doc.contains("network")) {
        check_keys(doc.at("network"), "network", {"k", "beta"});
        cfg.network.k = get_int(doc.at("network"), "network", "k", cfg.network.k);
        cfg.network.beta = get_double(doc.at("network"), "network", "beta", cfg.network.beta);
    }
    if (doc.contains("behavior")) cfg.behavior = parse_behavior(doc.at("behavior"));
    if (doc.contains("merchants")) cfg.merchants = parse_merchants(doc.at("merchants"));
    if (doc.contains("substitution")) cfg.substitution = parse_substitution(doc.at("substitution"));

    if (doc.contains("run")) {
        const json& run = doc.at("run");
        check_keys(run, "run", {"horizon", "seed", "seeds", "out_dir", "events", "parallel"});
        if (run.contains("horizon")) {
            const int horizon = get_int(run, "run", "horizon", 0);
            if (horizon != cfg.scenario.total_steps())
                fail("run.horizon: must equal the total phase steps (" +
                     std::to_string(cfg.scenario.total_steps()) + ")");
        }
        if (run.contains("seed")) {
            if (!run.at("seed").is_number_integer()) fail("run.seed: expected an integer");
            cfg.seed = run.at("seed").get<std::uint64_t>();
        }
        if (run.contains("seeds")) {
            if (!run.at("seeds").is_array()) fail("run.seeds: expected an array");
            for (const json& s : run.at("seeds")) {
                if (!s.is_number_integer()) fail("run.seeds: expected integers");
                out.seeds.push_back(s.get<std::uint64_t>());
            }
        }
        if (run.contains("out_dir")) out.out_dir = run.at("out_dir").get<std::string>();
        out.events = get_bool(run, "run", "events", out.events);
        out.parallel = get_int(run, "run", "parallel", out.parallel);
        if (out.parallel < 1) fail("run.parallel: must be >= 1");
    }
    if (out.seeds.empty()) out.seeds.push_back(cfg.seed);

    const auto errors = validate_config(cfg, &out.warnings);
    if (!errors.empty()) {
        std::string msg = errors.front();
        for (size_t i = 1; i < errors.size(); ++i) msg += "; " + errors[i];
        fail(msg);
    }
    return out;
}

LoadedConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config error: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_json(buf.str());
}

std::string apply_variant(const std::string& text, const std::vector<std::string>& overrides) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("variant base: ") + e.what());
    }

    for (const std::string& kv : overrides) {
        const size_t eq = kv.find('=');
        if (eq == std::string::npos) fail("variant \"" + kv + "\": expected KEY=VALUE");
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);

        const bool policy = key.rfind("substitution.", 0) == 0 || key == "merchants.comm_quality";
        if (!policy)
            fail("variant key \"" + key + "\" is not a policy field (allowed: substitution.*, "
                 "merchants.comm_quality)");

        json parsed;
        try {
            parsed = json::parse(value);
        } catch (const json::parse_error&) {
            parsed = value; // plain string
        }

        json* node = &doc;
        size_t pos = 0;
        while (true) {
            const size_t dot = key.find('.', pos);
            const std::string part = key.substr(pos, dot == std::string::npos ? dot : dot - pos);
            if (dot == std::string::npos) {
                (*node)[part] = parsed;
                break;
            }
            node = &(*node)[part];
            pos = dot + 1;
        }
    }
    return doc.dump(2);
}

std::string summary_json(const RunSummary& s) {
    json j;
    j["seed"] = s.seed;
    j["horizon"] = s.horizon;
    j["t_min"] = s.t_min;
    j["peak_outflow"] = s.peak_outflow;
    j["peak_outflow_step"] = s.peak_outflow_step;
    j["peak_avoidance"] = s.peak_avoidance;
    j["peak_avoidance_step"] = s.peak_avoidance_step;
    j["cumulative_outflow"] = s.cumulative_outflow;
    j["cumulative_outflow_fraction"] = s.cumulative_outflow_fraction;
    j["total_initial_balance"] = s.total_initial_balance;
    j["total_final_balance"] = s.total_final_balance;
    j["withdrawal_events"] = s.withdrawal_events;
    j["delayed_peak"] = s.delayed_peak;
    j["mean_operational_clearance"] = s.mean_operational_clearance;
    j["mean_broadcast_clearance"] = s.mean_broadcast_clearance;
    j["merchants_degraded"] = s.merchants_degraded;
    j["substitution_rate_overall"] = s.substitution_rate_overall;
    j["conservation_residual_rel"] = s.conservation_residual_rel;
    j["audit"] = {{"range_violations", s.audit.range_violations},
                  {"frame_sum_violations", s.audit.frame_sum_violations},
                  {"eligibility_violations", s.audit.eligibility_violations},
                  {"balance_violations", s.audit.balance_violations},
                  {"broadcast_lag_violations", s.audit.broadcast_lag_violations}};
    return j.dump(2) + "\n";
}

} // namespace osim

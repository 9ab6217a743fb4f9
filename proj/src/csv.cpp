#include "osim/csv.hpp"

#include <charconv>
#include <sstream>

namespace osim {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

struct Row {
    std::string line;

    Row& add(const std::string& s) {
        if (!line.empty()) line += ',';
        line += s;
        return *this;
    }
    Row& add(double v) { return add(format_double(v)); }
    Row& add(int v) { return add(std::to_string(v)); }
    Row& add(long long v) { return add(std::to_string(v)); }
    Row& add(std::uint64_t v) { return add(std::to_string(v)); }
};

} // namespace

std::string metrics_csv(const std::vector<MetricsFrame>& frames) {
    std::string out =
        "t,p_success,demand,frac_ok,frac_frustrated,frac_avoiding,mean_trust,mean_scar,"
        "mean_rumor,mean_broadcast_severity,attempts,successes,failures,unknowns,"
        "substitution_rate,outflow,cumulative_outflow,"
        "broadcast_accepting,broadcast_degraded,broadcast_fallback\n";
    for (const auto& f : frames) {
        Row r;
        r.add(f.t).add(f.p_success).add(f.demand);
        r.add(f.frac_ok).add(f.frac_frustrated).add(f.frac_avoiding);
        r.add(f.mean_trust).add(f.mean_scar).add(f.mean_rumor).add(f.mean_broadcast_severity);
        r.add(f.attempts).add(f.successes).add(f.failures).add(f.unknowns);
        r.add(f.substitution_rate).add(f.outflow).add(f.cumulative_outflow);
        r.add(f.broadcast_accepting).add(f.broadcast_degraded).add(f.broadcast_fallback);
        out += r.line;
        out += '\n';
    }
    return out;
}

std::string events_csv(const std::vector<WithdrawalEvent>& events) {
    std::string out = "t,customer_id,amount,balance_after\n";
    for (const auto& ev : events) {
        Row r;
        r.add(ev.step).add(ev.customer).add(ev.amount).add(ev.balance_after);
        out += r.line;
        out += '\n';
    }
    return out;
}

std::string scenario_csv(const ScenarioTimeline& timeline) {
    std::string out = "t,p_success,p_failure,p_unknown,demand\n";
    for (int t = 0; t < timeline.horizon(); ++t) {
        const OutcomeProbs& p = timeline.probs(t);
        Row r;
        r.add(t).add(p.p_success).add(p.p_failure).add(p.p_unknown).add(timeline.demand(t));
        out += r.line;
        out += '\n';
    }
    return out;
}

std::string edges_csv(const SocialGraph& graph) {
    std::string out = "node_a,node_b\n";
    for (int i = 0; i < graph.n_nodes(); ++i) {
        for (int j : graph.neighbors(i)) {
            if (i < j) {
                Row r;
                r.add(i).add(j);
                out += r.line;
                out += '\n';
            }
        }
    }
    return out;
}

std::string population_csv(const std::vector<CustomerParams>& params) {
    std::string out = "customer_id,lambda,theta1,theta2,omega,theta_C_w,theta_R_w,adopter\n";
    for (size_t i = 0; i < params.size(); ++i) {
        const CustomerParams& p = params[i];
        Row r;
        r.add(static_cast<int>(i)).add(p.lambda).add(p.theta1).add(p.theta2);
        r.add(p.omega).add(p.theta_C_w).add(p.theta_R_w).add(p.substitution_adopter ? 1 : 0);
        out += r.line;
        out += '\n';
    }
    return out;
}

std::string batch_csv(const std::vector<RunSummary>& summaries) {
    std::string out =
        "seed,peak_avoidance,peak_avoidance_step,peak_outflow,peak_outflow_step,t_min,"
        "cumulative_outflow_fraction,delayed_peak\n";
    for (const auto& s : summaries) {
        Row r;
        r.add(s.seed).add(s.peak_avoidance).add(s.peak_avoidance_step);
        r.add(s.peak_outflow).add(s.peak_outflow_step).add(s.t_min);
        r.add(s.cumulative_outflow_fraction).add(s.delayed_peak ? 1 : 0);
        out += r.line;
        out += '\n';
    }
    return out;
}

std::string batch_stats_csv(const BatchResult& batch) {
    std::string out = "metric,min,q1,median,q3,max\n";
    auto row = [&](const char* name, const DistStats& d) {
        Row r;
        r.add(std::string(name)).add(d.min).add(d.q1).add(d.median).add(d.q3).add(d.max);
        out += r.line;
        out += '\n';
    };
    row("peak_avoidance", batch.peak_avoidance);
    row("peak_outflow", batch.peak_outflow);
    row("cumulative_outflow_fraction", batch.cumulative_outflow_fraction);
    out += "delayed_peak_fraction," + format_double(batch.delayed_peak_fraction) + ",,,,\n";
    return out;
}

std::string paired_csv(const PairedResult& paired) {
    std::string out =
        "seed,peak_avoidance_base,peak_avoidance_variant,peak_avoidance_delta,"
        "peak_outflow_base,peak_outflow_variant,peak_outflow_delta,"
        "cumulative_outflow_base,cumulative_outflow_variant,cumulative_outflow_delta\n";
    for (const auto& d : paired.deltas) {
        Row r;
        r.add(d.seed);
        r.add(d.base.peak_avoidance).add(d.variant.peak_avoidance).add(d.peak_avoidance_delta);
        r.add(d.base.peak_outflow).add(d.variant.peak_outflow).add(d.peak_outflow_delta);
        r.add(d.base.cumulative_outflow).add(d.variant.cumulative_outflow).add(d.cumulative_outflow_delta);
        out += r.line;
        out += '\n';
    }
    return out;
}

} // namespace osim

#include "osim/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace osim {

bool OutcomeProbs::valid(double tol) const {
    auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
    return in_unit(p_success) && in_unit(p_failure) && in_unit(p_unknown) &&
           std::abs(sum() - 1.0) <= tol;
}

ScenarioTimeline::ScenarioTimeline(std::vector<OutcomeProbs> probs,
                                   std::vector<double> demand)
    : probs_(std::move(probs)), demand_(std::move(demand)) {
    if (probs_.empty() || probs_.size() != demand_.size())
        throw std::invalid_argument("timeline: probs and demand must be non-empty and equal length");
    for (size_t t = 0; t < probs_.size(); ++t) {
        if (!probs_[t].valid())
            throw std::invalid_argument("timeline: invalid outcome probabilities at step " + std::to_string(t));
        if (demand_[t] < 1.0)
            throw std::invalid_argument("timeline: demand multiplier below 1 at step " + std::to_string(t));
    }
}

int PiecewiseSpec::total_steps() const {
    int n = 0;
    for (const auto& ph : phases) n += ph.steps;
    return n;
}

namespace {

OutcomeProbs phase_level(const PhaseSpec& ph, double failure_share) {
    OutcomeProbs level;
    level.p_success = ph.p_success;
    if (ph.p_failure >= 0.0 || ph.p_unknown >= 0.0) {
        if (ph.p_failure < 0.0 || ph.p_unknown < 0.0)
            throw std::invalid_argument("scenario phase: p_failure and p_unknown must be given together");
        level.p_failure = ph.p_failure;
        level.p_unknown = ph.p_unknown;
    } else {
        const double residual = 1.0 - ph.p_success;
        level.p_failure = residual * failure_share;
        level.p_unknown = residual * (1.0 - failure_share);
    }
    const double s = level.sum();
    if (s <= 0.0)
        throw std::invalid_argument("scenario phase: probabilities cannot be normalized (sum <= 0)");
    level.p_success /= s;
    level.p_failure /= s;
    level.p_unknown /= s;
    if (!level.valid())
        throw std::invalid_argument("scenario phase: invalid probability level");
    return level;
}

OutcomeProbs normalized_lerp(const OutcomeProbs& a, const OutcomeProbs& b, double w) {
    OutcomeProbs p;
    p.p_success = a.p_success + (b.p_success - a.p_success) * w;
    p.p_failure = a.p_failure + (b.p_failure - a.p_failure) * w;
    p.p_unknown = a.p_unknown + (b.p_unknown - a.p_unknown) * w;
    const double s = p.sum();
    p.p_success /= s;
    p.p_failure /= s;
    p.p_unknown /= s;
    return p;
}

} // namespace

ScenarioTimeline build_piecewise_scenario(const PiecewiseSpec& spec) {
    if (spec.phases.empty())
        throw std::invalid_argument("scenario: no phases");
    if (spec.failure_share < 0.0 || spec.failure_share > 1.0)
        throw std::invalid_argument("scenario: failure_share outside [0,1]");
    if (spec.phases.front().kind == PhaseKind::Ramp)
        throw std::invalid_argument("scenario: first phase must be a hold");

    std::vector<OutcomeProbs> probs;
    probs.reserve(static_cast<size_t>(spec.total_steps()));

    OutcomeProbs prev_level{};
    bool have_prev = false;
    for (const auto& ph : spec.phases) {
        if (ph.steps <= 0)
            throw std::invalid_argument("scenario: phase durations must be positive");
        const OutcomeProbs level = phase_level(ph, spec.failure_share);
        if (ph.kind == PhaseKind::Hold) {
            for (int j = 0; j < ph.steps; ++j) probs.push_back(level);
        } else {
            if (!have_prev)
                throw std::invalid_argument("scenario: ramp without a preceding level");
            for (int j = 0; j < ph.steps; ++j) {
                const double w = static_cast<double>(j + 1) / static_cast<double>(ph.steps + 1);
                probs.push_back(normalized_lerp(prev_level, level, w));
            }
        }
        prev_level = level;
        have_prev = true;
    }

    std::vector<double> demand(probs.size(), spec.demand_base);
    if (spec.demand_base < 1.0)
        throw std::invalid_argument("scenario: demand_base below 1");
    for (const auto& peak : spec.demand_peaks) {
        if (peak.start < 0 || peak.end > static_cast<int>(demand.size()) || peak.start >= peak.end)
            throw std::invalid_argument("scenario: demand peak window outside the horizon");
        if (peak.multiplier < 1.0)
            throw std::invalid_argument("scenario: demand peak multiplier below 1");
        for (int t = peak.start; t < peak.end; ++t)
            demand[static_cast<size_t>(t)] = peak.multiplier;
    }

    ScenarioTimeline timeline(std::move(probs), std::move(demand));

    // Exogenous-recovery check: p_success must not decline after the nadir.
    const int t_min = nadir(timeline);
    for (int t = t_min + 1; t < timeline.horizon(); ++t) {
        if (timeline.probs(t).p_success < timeline.probs(t - 1).p_success - 1e-12)
            throw std::invalid_argument(
                "scenario: p_success declines after the nadir (step " + std::to_string(t) + ")");
    }
    return timeline;
}

int nadir(const ScenarioTimeline& timeline) {
    int best = 0;
    for (int t = 1; t < timeline.horizon(); ++t) {
        if (timeline.probs(t).p_success < timeline.probs(best).p_success) best = t;
    }
    return best;
}

ScenarioPhases derive_phases(const PiecewiseSpec& spec, const ScenarioTimeline& timeline) {
    if (spec.phases.size() < 2)
        throw std::invalid_argument("scenario phases: need at least a stable phase and an outage");

    ScenarioPhases out;
    out.stable_end = spec.phases.front().steps;
    out.nadir = nadir(timeline);

    double post_max = 0.0;
    for (int t = out.nadir; t < timeline.horizon(); ++t)
        post_max = std::max(post_max, timeline.probs(t).p_success);
    out.recovery_end = timeline.horizon();
    for (int t = out.nadir; t < timeline.horizon(); ++t) {
        if (timeline.probs(t).p_success >= post_max) {
            out.recovery_end = t;
            break;
        }
    }
    out.peak_demand_windows = spec.demand_peaks;

    if (!(out.stable_end < out.nadir && out.nadir < out.recovery_end &&
          out.recovery_end <= timeline.horizon()))
        throw std::invalid_argument("scenario phases: landmarks out of order (not an outage scenario)");
    return out;
}

} // namespace osim

#include "ibn/utility_engine.hpp"

#include <cmath>
#include <string>

#include "ibn/error.hpp"

namespace ibn {

double score_latency(double tau_ms) {
    if (!(tau_ms > 0.0)) throw ValidationError("latency must be > 0 ms, got " + std::to_string(tau_ms));
    if (tau_ms < 10.0) return 1.0;
    if (tau_ms < 30.0) return 0.5;
    return 0.0;
}

double score_resource(Band band, BandwidthCategory beta) {
    switch (band) {
        case Band::mmwave:
            switch (beta) {
                case BandwidthCategory::high: return 1.0;
                case BandwidthCategory::medium: return 0.5;
                case BandwidthCategory::low: return 0.0;
            }
            break;
        case Band::mid_band:
            return beta == BandwidthCategory::high ? 0.5 : 1.0;
        case Band::low_band:
            return beta == BandwidthCategory::low ? 1.0 : 0.5;
    }
    return 0.0;
}

double score_congestion(double load_percent) {
    if (!(load_percent >= 0.0 && load_percent <= 100.0)) {
        throw ValidationError("load must be within [0, 100], got " + std::to_string(load_percent));
    }
    return 1.0 - load_percent / 100.0;
}

ScoreBreakdown compute_utility(const SliceConfiguration& config, const IntentProfile& profile,
                               const NetworkState& state) {
    validate_configuration(state, config);
    ScoreBreakdown b;
    b.s_latency = score_latency(latency(state, config.sector_id, config.node_id));
    b.s_resource = score_resource(config.band, profile.bandwidth);
    b.s_congestion = score_congestion(state.sector(config.sector_id).load_percent);
    b.weights = weights_for(profile.traffic_class);
    b.utility = b.weights.latency * b.s_latency + b.weights.resource * b.s_resource +
                b.weights.congestion * b.s_congestion;
    return b;
}

ConstraintReport check_constraints(const SliceConfiguration& config, const IntentProfile& profile,
                                   const NetworkState& state, const Thresholds& thresholds) {
    const auto& sector = state.sector(config.sector_id);
    const auto& node = state.node(config.node_id);
    ConstraintReport r;
    r.l_max = thresholds.l_max;
    r.kappa_max = thresholds.kappa_max;
    r.tau_req_ms = profile.tau_req_ms;
    r.load_ok = sector.load_percent <= thresholds.l_max;
    r.band_ok = sector.spectrum.available(config.band);
    r.compute_ok = node.compute_load_percent <= thresholds.kappa_max;
    r.latency_ok = latency(state, config.sector_id, config.node_id) <= profile.tau_req_ms;
    r.feasible = r.load_ok && r.band_ok && r.compute_ok && r.latency_ok;
    r.load_warning = sector.load_percent > thresholds.load_warning;
    return r;
}

double round_to(double value, int decimals) {
    // Snap to the 1e-9 comparison grid first so 0.8*0.5 + 0.1*0.5 + 0.1*0.85 reports as 0.54.
    const double snapped = std::round(value * 1e9) / 1e9;
    const double scale = std::pow(10.0, decimals);
    return std::round(snapped * scale) / scale;
}

}  // namespace ibn

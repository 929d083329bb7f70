#pragma once

#include "ibn/intent_classifier.hpp"
#include "ibn/network_model.hpp"

namespace ibn {

/// Operational limits for the constraint check. The load warning level is
/// informational only: a sector above it stays feasible.
struct Thresholds {
    double l_max = 100.0;
    double kappa_max = 85.0;
    double load_warning = 80.0;
};

struct ScoreBreakdown {
    double s_latency = 0.0;
    double s_resource = 0.0;
    double s_congestion = 0.0;
    Weights weights;
    double utility = 0.0;
};

struct ConstraintReport {
    bool load_ok = false;
    bool band_ok = false;
    bool compute_ok = false;
    bool latency_ok = false;
    bool feasible = false;
    double l_max = 0.0;
    double kappa_max = 0.0;
    double tau_req_ms = 0.0;
    bool load_warning = false;
};

/// 1.0 below 10 ms, 0.5 in [10, 30), 0.0 from 30 ms.
double score_latency(double tau_ms);
double score_resource(Band band, BandwidthCategory beta);
/// 1 - load/100.
double score_congestion(double load_percent);

/// Weighted utility of `config`; weights come from the profile's traffic class.
/// Throws UnknownIdError / ProvisioningError for configurations that do not fit the state.
ScoreBreakdown compute_utility(const SliceConfiguration& config, const IntentProfile& profile,
                               const NetworkState& state);

ConstraintReport check_constraints(const SliceConfiguration& config, const IntentProfile& profile,
                                   const NetworkState& state, const Thresholds& thresholds = {});

/// Half-away-from-zero rounding for report emission.
double round_to(double value, int decimals);

}  // namespace ibn

#pragma once

#include <string>
#include <vector>

#include "ibn/intent_classifier.hpp"
#include "ibn/network_model.hpp"
#include "ibn/utility_engine.hpp"

namespace ibn {

struct RankedConfiguration {
    SliceConfiguration config;
    ScoreBreakdown breakdown;
    ConstraintReport constraints;
    double latency_ms = 0.0;
    int rank = 0;  // 1-based
};

/// sectors x bands x nodes, restricted to the profile's target sector when set,
/// skipping bands with no spectrum at the sector. Order: sector id, band
/// (mmwave, mid_band, low_band), node id.
std::vector<SliceConfiguration> enumerate_candidates(const NetworkState& state, const IntentProfile& profile);

/// Strict weak order used for ranking: feasible first, then higher utility,
/// lower latency, lower sector load, then sector id, band order, node id.
bool ranks_before(const RankedConfiguration& a, const RankedConfiguration& b, const NetworkState& state);

/// Scores and ranks every candidate. The head is the optimum when anything is
/// feasible, otherwise the best infeasible fallback (constraints.feasible == false).
/// Throws ValidationError when there are no candidates.
std::vector<RankedConfiguration> solve(const NetworkState& state, const IntentProfile& profile,
                                       const Thresholds& thresholds = {});

struct RuleBasedDecision {
    SliceConfiguration config;
    IntentProfile profile;
    RankedConfiguration head;
    std::string rationale;
};

/// Keyword classification with a frozen lexicon followed by the exhaustive solve.
RuleBasedDecision rule_based_provision(std::string_view intent_text, const NetworkState& state,
                                       const Thresholds& thresholds = {},
                                       const Lexicon& lexicon = Lexicon::strict());

}  // namespace ibn

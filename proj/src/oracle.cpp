#include "ibn/oracle.hpp"

#include <algorithm>
#include <sstream>

#include "ibn/error.hpp"

namespace ibn {

std::vector<SliceConfiguration> enumerate_candidates(const NetworkState& state, const IntentProfile& profile) {
    std::vector<SliceConfiguration> out;
    for (const auto& [sid, sector] : state.sectors) {
        if (profile.target_sector && *profile.target_sector != sid) continue;
        for (Band band : kAllBands) {
            if (!sector.spectrum.available(band)) continue;
            for (const auto& [nid, _] : state.nodes) out.push_back({sid, band, nid, std::nullopt});
        }
    }
    return out;
}

bool ranks_before(const RankedConfiguration& a, const RankedConfiguration& b, const NetworkState& state) {
    if (a.constraints.feasible != b.constraints.feasible) return a.constraints.feasible;
    if (a.breakdown.utility != b.breakdown.utility) return a.breakdown.utility > b.breakdown.utility;
    if (a.latency_ms != b.latency_ms) return a.latency_ms < b.latency_ms;
    const double la = state.sector(a.config.sector_id).load_percent;
    const double lb = state.sector(b.config.sector_id).load_percent;
    if (la != lb) return la < lb;
    if (a.config.sector_id != b.config.sector_id) return a.config.sector_id < b.config.sector_id;
    if (a.config.band != b.config.band) return a.config.band < b.config.band;
    return a.config.node_id < b.config.node_id;
}

std::vector<RankedConfiguration> solve(const NetworkState& state, const IntentProfile& profile,
                                       const Thresholds& thresholds) {
    const auto candidates = enumerate_candidates(state, profile);
    if (candidates.empty()) throw ValidationError("no candidate configurations for this intent and state");
    std::vector<RankedConfiguration> ranked;
    ranked.reserve(candidates.size());
    for (const auto& c : candidates) {
        RankedConfiguration r;
        r.config = c;
        r.breakdown = compute_utility(c, profile, state);
        r.constraints = check_constraints(c, profile, state, thresholds);
        r.latency_ms = latency(state, c.sector_id, c.node_id);
        ranked.push_back(std::move(r));
    }
    std::sort(ranked.begin(), ranked.end(),
              [&](const auto& a, const auto& b) { return ranks_before(a, b, state); });
    for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].rank = static_cast<int>(i) + 1;
    return ranked;
}

RuleBasedDecision rule_based_provision(std::string_view intent_text, const NetworkState& state,
                                       const Thresholds& thresholds, const Lexicon& lexicon) {
    RuleBasedDecision d;
    d.profile = classify_intent(intent_text, state, lexicon);
    auto ranking = solve(state, d.profile, thresholds);
    d.head = ranking.front();
    d.config = d.head.config;

    std::ostringstream why;
    why << "class=" << to_string(d.profile.traffic_class) << " beta=" << to_string(d.profile.bandwidth)
        << " tau_req=" << d.profile.tau_req_ms << "ms";
    if (d.profile.target_sector) why << " target=" << *d.profile.target_sector;
    if (d.profile.defaulted_class) {
        why << "; no class keyword matched, defaulted to eMBB (possible misclassification)";
    } else {
        why << "; matched:";
        for (const auto& k : d.profile.matched_keywords) why << " '" << k << "'";
    }
    if (!d.head.constraints.feasible) why << "; no feasible candidate, best infeasible fallback";
    d.rationale = why.str();
    return d;
}

}  // namespace ibn

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ibn/network_model.hpp"

namespace ibn {

enum class TrafficClass { urllc, embb, mmtc };
enum class BandwidthCategory { high, medium, low };

std::string_view to_string(TrafficClass c);   // "URLLC", "eMBB", "mMTC"
std::string_view to_string(BandwidthCategory c);
std::optional<TrafficClass> parse_traffic_class(std::string_view text);
std::optional<BandwidthCategory> parse_bandwidth_category(std::string_view text);

/// Keyword lists driving the deterministic classifier. Matching is
/// case-insensitive and word-anchored; a trailing "s"/"es" on the text side is
/// tolerated so "sensor" also matches "sensors".
struct Lexicon {
    std::vector<std::string> urllc;
    std::vector<std::string> mmtc;
    std::vector<std::string> high_bandwidth;
    std::vector<std::string> low_bandwidth;

    /// The full lexicon (same content as config/lexicon.json).
    static const Lexicon& standard();
    /// The frozen lexicon used by the rule-based baseline: no synonym expansion.
    static const Lexicon& strict();

    bool operator==(const Lexicon&) const = default;
};

/// Document shape: {"urllc": [...], "mmtc": [...], "high_bandwidth": [...], "low_bandwidth": [...]}.
/// "low_bandwidth" defaults to the mMTC list when absent.
Lexicon load_lexicon(std::string_view document);
Lexicon load_lexicon_file(const std::filesystem::path& path);

/// Keywords of `keywords` found in `text`, lowercased, in lexicon order.
std::vector<std::string> match_keywords(std::string_view text, const std::vector<std::string>& keywords);

/// An explicit latency bound such as "<5ms", "below 20 milliseconds", "under 8 ms".
struct LatencyBound {
    double ms = 0.0;
    std::string matched_text;  // lower-cased span as it appears in the text
};

/// Smallest explicit bound in the text, if any.
std::optional<LatencyBound> find_latency_bound(std::string_view text);

TrafficClass classify_traffic(std::string_view text, const Lexicon& lexicon = Lexicon::standard());
BandwidthCategory classify_bandwidth(std::string_view text, const Lexicon& lexicon = Lexicon::standard());

double default_tau_req_ms(TrafficClass c);
double extract_tau_req(std::string_view text, TrafficClass c);

/// First sector id (by position in the text) that appears in `text`, ignoring
/// case and treating '_' and ' ' as equivalent.
std::optional<std::string> extract_target_sector(std::string_view text, const NetworkState& state);

struct Weights {
    double latency = 0.0;
    double resource = 0.0;
    double congestion = 0.0;

    bool operator==(const Weights&) const = default;
};

Weights weights_for(TrafficClass c);

struct IntentProfile {
    std::string raw_text;
    TrafficClass traffic_class = TrafficClass::embb;
    BandwidthCategory bandwidth = BandwidthCategory::medium;
    double tau_req_ms = 50.0;
    std::optional<std::string> target_sector;
    std::vector<std::string> matched_keywords;
    /// True when no class keyword or bound matched and eMBB was assumed.
    bool defaulted_class = false;
};

IntentProfile classify_intent(std::string_view text, const NetworkState& state,
                              const Lexicon& lexicon = Lexicon::standard());

}  // namespace ibn

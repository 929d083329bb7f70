#include "ibn/intent_classifier.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include "ibn/error.hpp"
#include "json_util.hpp"

namespace ibn {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool is_word(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

/// Position of `needle` in `hay` on word boundaries, allowing a plural suffix.
std::size_t find_anchored(const std::string& hay, const std::string& needle, std::size_t from = 0) {
    if (needle.empty()) return std::string::npos;
    for (std::size_t pos = hay.find(needle, from); pos != std::string::npos; pos = hay.find(needle, pos + 1)) {
        if (pos > 0 && is_word(hay[pos - 1]) && is_word(needle.front())) continue;
        std::size_t end = pos + needle.size();
        if (end >= hay.size() || !is_word(hay[end]) || !is_word(needle.back())) return pos;
        if (hay[end] == 's' && (end + 1 >= hay.size() || !is_word(hay[end + 1]))) return pos;
        if (hay.compare(end, 2, "es") == 0 && (end + 2 >= hay.size() || !is_word(hay[end + 2]))) return pos;
    }
    return std::string::npos;
}

std::vector<std::string> read_list(const detail::json& doc, const char* key) {
    std::vector<std::string> out;
    if (!doc.contains(key)) return out;
    const auto& arr = doc.at(key);
    if (!arr.is_array()) throw ParseError(std::string("lexicon: '") + key + "' must be a list");
    for (const auto& v : arr) {
        if (!v.is_string() || v.get<std::string>().empty()) {
            throw ParseError(std::string("lexicon: '") + key + "' entries must be non-empty strings");
        }
        out.push_back(v.get<std::string>());
    }
    return out;
}

}  // namespace

std::string_view to_string(TrafficClass c) {
    switch (c) {
        case TrafficClass::urllc: return "URLLC";
        case TrafficClass::embb: return "eMBB";
        case TrafficClass::mmtc: return "mMTC";
    }
    return "unknown";
}

std::string_view to_string(BandwidthCategory c) {
    switch (c) {
        case BandwidthCategory::high: return "high";
        case BandwidthCategory::medium: return "medium";
        case BandwidthCategory::low: return "low";
    }
    return "unknown";
}

std::optional<TrafficClass> parse_traffic_class(std::string_view text) {
    const auto t = lower(text);
    if (t == "urllc") return TrafficClass::urllc;
    if (t == "embb") return TrafficClass::embb;
    if (t == "mmtc") return TrafficClass::mmtc;
    return std::nullopt;
}

std::optional<BandwidthCategory> parse_bandwidth_category(std::string_view text) {
    const auto t = lower(text);
    if (t == "high") return BandwidthCategory::high;
    if (t == "medium") return BandwidthCategory::medium;
    if (t == "low") return BandwidthCategory::low;
    return std::nullopt;
}

const Lexicon& Lexicon::standard() {
    static const Lexicon lex{
        {"ultra-low latency", "real-time", "safety-critical", "instantaneous", "closed-loop", "remote surgery",
         "autonomous"},
        {"sensor", "meter", "metering", "telemetry", "IoT", "monitoring", "massive devices"},
        {"4K", "8K", "streaming", "video", "broadband", "extended reality", "XR", "VR"},
        {"sensor", "meter", "metering", "telemetry", "IoT", "monitoring", "massive devices"},
    };
    return lex;
}

const Lexicon& Lexicon::strict() {
    static const Lexicon lex{
        {"ultra-low latency", "low latency"},
        {"sensor", "meter", "IoT"},
        {"4K", "8K", "streaming"},
        {"sensor", "meter", "IoT"},
    };
    return lex;
}

Lexicon load_lexicon(std::string_view document) {
    const auto doc = detail::parse_json(document, "lexicon");
    if (!doc.is_object()) throw ParseError("lexicon: expected an object");
    for (const auto& [key, _] : doc.items()) {
        if (key != "urllc" && key != "mmtc" && key != "high_bandwidth" && key != "low_bandwidth") {
            throw ValidationError("lexicon: unknown category '" + key + "'");
        }
    }
    Lexicon lex;
    lex.urllc = read_list(doc, "urllc");
    lex.mmtc = read_list(doc, "mmtc");
    lex.high_bandwidth = read_list(doc, "high_bandwidth");
    lex.low_bandwidth = doc.contains("low_bandwidth") ? read_list(doc, "low_bandwidth") : lex.mmtc;
    return lex;
}

Lexicon load_lexicon_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open lexicon file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return load_lexicon(buf.str());
}

std::vector<std::string> match_keywords(std::string_view text, const std::vector<std::string>& keywords) {
    const std::string hay = lower(text);
    std::vector<std::string> found;
    for (const auto& k : keywords) {
        if (find_anchored(hay, lower(k)) != std::string::npos) found.push_back(lower(k));
    }
    return found;
}

std::optional<LatencyBound> find_latency_bound(std::string_view text) {
    static const std::regex pattern(
        R"((<|below|under|less than)\s*(\d+(?:\.\d+)?)\s*(ms|msec|milliseconds?)\b)", std::regex::icase);
    const std::string hay = lower(text);
    std::optional<LatencyBound> best;
    for (auto it = std::sregex_iterator(hay.begin(), hay.end(), pattern); it != std::sregex_iterator(); ++it) {
        const double ms = std::stod((*it)[2].str());
        if (ms <= 0.0) continue;
        if (!best || ms < best->ms) best = LatencyBound{ms, (*it)[0].str()};
    }
    return best;
}

namespace {

struct TrafficDecision {
    TrafficClass cls = TrafficClass::embb;
    std::vector<std::string> evidence;
    bool defaulted = true;
};

TrafficDecision decide_traffic(std::string_view text, const Lexicon& lexicon) {
    TrafficDecision d;
    if (auto bound = find_latency_bound(text); bound && bound->ms <= 10.0) {
        d.cls = TrafficClass::urllc;
        d.evidence.push_back(bound->matched_text);
        auto kw = match_keywords(text, lexicon.urllc);
        d.evidence.insert(d.evidence.end(), kw.begin(), kw.end());
        d.defaulted = false;
        return d;
    }
    if (auto kw = match_keywords(text, lexicon.urllc); !kw.empty()) {
        d.cls = TrafficClass::urllc;
        d.evidence = std::move(kw);
        d.defaulted = false;
        return d;
    }
    if (auto kw = match_keywords(text, lexicon.mmtc); !kw.empty()) {
        d.cls = TrafficClass::mmtc;
        d.evidence = std::move(kw);
        d.defaulted = false;
        return d;
    }
    return d;
}

}  // namespace

TrafficClass classify_traffic(std::string_view text, const Lexicon& lexicon) {
    return decide_traffic(text, lexicon).cls;
}

BandwidthCategory classify_bandwidth(std::string_view text, const Lexicon& lexicon) {
    if (!match_keywords(text, lexicon.high_bandwidth).empty()) return BandwidthCategory::high;
    if (!match_keywords(text, lexicon.low_bandwidth).empty()) return BandwidthCategory::low;
    return BandwidthCategory::medium;
}

double default_tau_req_ms(TrafficClass c) {
    switch (c) {
        case TrafficClass::urllc: return 10.0;
        case TrafficClass::embb: return 50.0;
        case TrafficClass::mmtc: return 1000.0;
    }
    return 50.0;
}

double extract_tau_req(std::string_view text, TrafficClass c) {
    if (auto bound = find_latency_bound(text)) return bound->ms;
    return default_tau_req_ms(c);
}

std::optional<std::string> extract_target_sector(std::string_view text, const NetworkState& state) {
    auto normalize = [](std::string_view s) {
        std::string out = lower(s);
        std::replace(out.begin(), out.end(), '_', ' ');
        return out;
    };
    const std::string hay = normalize(text);
    std::optional<std::string> best;
    std::size_t best_pos = std::string::npos;
    for (const auto& [id, _] : state.sectors) {
        const std::string needle = normalize(id);
        for (std::size_t pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) {
            const std::size_t end = pos + needle.size();
            const bool left_ok = pos == 0 || !is_word(hay[pos - 1]);
            const bool right_ok = end >= hay.size() || !is_word(hay[end]);
            if (!left_ok || !right_ok) continue;
            if (pos < best_pos || (pos == best_pos && best && id.size() > best->size())) {
                best_pos = pos;
                best = id;
            }
            break;
        }
    }
    return best;
}

Weights weights_for(TrafficClass c) {
    switch (c) {
        case TrafficClass::urllc: return {0.8, 0.1, 0.1};
        case TrafficClass::embb: return {0.1, 0.3, 0.6};
        case TrafficClass::mmtc: return {0.1, 0.6, 0.3};
    }
    return {0.1, 0.3, 0.6};
}

IntentProfile classify_intent(std::string_view text, const NetworkState& state, const Lexicon& lexicon) {
    IntentProfile p;
    p.raw_text = std::string(text);
    auto decision = decide_traffic(text, lexicon);
    p.traffic_class = decision.cls;
    p.defaulted_class = decision.defaulted;
    p.matched_keywords = std::move(decision.evidence);
    p.bandwidth = classify_bandwidth(text, lexicon);
    auto bw = p.bandwidth == BandwidthCategory::high  ? match_keywords(text, lexicon.high_bandwidth)
              : p.bandwidth == BandwidthCategory::low ? match_keywords(text, lexicon.low_bandwidth)
                                                      : std::vector<std::string>{};
    for (auto& k : bw) {
        if (std::find(p.matched_keywords.begin(), p.matched_keywords.end(), k) == p.matched_keywords.end()) {
            p.matched_keywords.push_back(std::move(k));
        }
    }
    p.tau_req_ms = extract_tau_req(text, p.traffic_class);
    p.target_sector = extract_target_sector(text, state);
    return p;
}

}  // namespace ibn

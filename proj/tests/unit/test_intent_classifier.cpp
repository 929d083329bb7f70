#include <doctest.h>

#include <algorithm>
#include <cctype>

#include "ibn/error.hpp"
#include "ibn/intent_classifier.hpp"
#include "test_support.hpp"

using namespace ibn;
using ibn::test::bundled_state;

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

const char* kAssemblyIntent =
    "Configure network slice for automated robotic assembly line at industrial_park_a. Requires ultra-low "
    "latency (<5ms) for real-time control and high reliability for safety-critical operations.";

}  // namespace

TEST_CASE("traffic classes") {
    CHECK(classify_traffic("ultra-low latency for real-time control") == TrafficClass::urllc);
    CHECK(classify_traffic("smart metering telemetry, thousands of sensors") == TrafficClass::mmtc);
    CHECK(classify_traffic("4K streaming for stadium attendees") == TrafficClass::embb);
    CHECK(classify_traffic(kAssemblyIntent) == TrafficClass::urllc);
    CHECK(classify_traffic("") == TrafficClass::embb);
}

TEST_CASE("an explicit bound of at most 10 ms forces URLLC") {
    CHECK(classify_traffic("thousands of sensors, each reading must arrive <8ms") == TrafficClass::urllc);
    CHECK(classify_traffic("4K streaming with latency under 10 ms") == TrafficClass::urllc);
    CHECK(classify_traffic("meter telemetry below 3 milliseconds") == TrafficClass::urllc);
    // Bounds above 10 ms do not decide the class.
    CHECK(classify_traffic("video streaming under 40 ms") == TrafficClass::embb);
    CHECK(classify_traffic("sensor uploads under 200 ms") == TrafficClass::mmtc);
}

TEST_CASE("URLLC keywords win over mMTC keywords") {
    CHECK(classify_traffic("real-time monitoring of the press line") == TrafficClass::urllc);
}

TEST_CASE("bandwidth categories") {
    CHECK(classify_bandwidth(kAssemblyIntent) == BandwidthCategory::medium);
    CHECK(classify_bandwidth("4K streaming") == BandwidthCategory::high);
    CHECK(classify_bandwidth("environmental monitoring sensors") == BandwidthCategory::low);
    CHECK(classify_bandwidth("plain connectivity") == BandwidthCategory::medium);
    CHECK(classify_bandwidth("XR headsets") == BandwidthCategory::high);
    CHECK(classify_bandwidth("extended reality training") == BandwidthCategory::high);
}

TEST_CASE("latency requirement") {
    CHECK(extract_tau_req("Requires ultra-low latency (<5ms)", TrafficClass::urllc) == 5);
    CHECK(extract_tau_req("real-time gaming", TrafficClass::urllc) == 10);
    CHECK(extract_tau_req("smart meters", TrafficClass::mmtc) == 1000);
    CHECK(extract_tau_req("video", TrafficClass::embb) == 50);
    CHECK(extract_tau_req("stay below 20 milliseconds", TrafficClass::embb) == 20);
    CHECK(extract_tau_req("under 8 ms", TrafficClass::embb) == 8);
    CHECK(extract_tau_req("< 12 ms or, ideally, under 7 ms", TrafficClass::embb) == 7);
    auto b = find_latency_bound(kAssemblyIntent);
    REQUIRE(b);
    CHECK(b->ms == 5);
    CHECK_FALSE(find_latency_bound("5 sensors per hectare"));
}

TEST_CASE("mMTC default bound admits every node") {
    for (const auto& [nid, node] : bundled_state().nodes) {
        for (const auto& [sid, ms] : node.latency_to_sector) {
            CHECK(ms <= default_tau_req_ms(TrafficClass::mmtc));
        }
    }
}

TEST_CASE("target sector") {
    const auto& s = bundled_state();
    CHECK(extract_target_sector(kAssemblyIntent, s) == "industrial_park_a");
    CHECK_FALSE(extract_target_sector("configure a slice somewhere cheap", s));
    CHECK(extract_target_sector("stadium_central overflow to city_plaza", s) == "stadium_central");
    CHECK(extract_target_sector("overflow from City Plaza into stadium_central", s) == "city_plaza");
    CHECK(extract_target_sector("the RURAL HIGHWAY corridor", s) == "rural_highway");
    CHECK_FALSE(extract_target_sector("my_city_plazas", s));
}

TEST_CASE("weights") {
    CHECK(weights_for(TrafficClass::urllc) == Weights{0.8, 0.1, 0.1});
    CHECK(weights_for(TrafficClass::embb) == Weights{0.1, 0.3, 0.6});
    CHECK(weights_for(TrafficClass::mmtc) == Weights{0.1, 0.6, 0.3});
    for (auto c : {TrafficClass::urllc, TrafficClass::embb, TrafficClass::mmtc}) {
        const auto w = weights_for(c);
        CHECK(w.latency + w.resource + w.congestion == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("full profile of the worked example") {
    const auto p = classify_intent(kAssemblyIntent, bundled_state());
    CHECK(p.traffic_class == TrafficClass::urllc);
    CHECK(p.bandwidth == BandwidthCategory::medium);
    CHECK(p.tau_req_ms == 5);
    CHECK(p.target_sector == "industrial_park_a");
    CHECK_FALSE(p.defaulted_class);
    CHECK_FALSE(p.matched_keywords.empty());
}

TEST_CASE("profile invariants over a corpus") {
    const std::vector<std::string> corpus = {
        kAssemblyIntent,
        "Deliver 4K video streaming at stadium_central",
        "Connect thousands of IoT sensors at rural_highway",
        "Smart metering telemetry for suburban_residential",
        "Remote surgery between two hospitals under 4 ms",
        "Autonomous shuttles around city_plaza",
        "Fixed broadband for homes",
        "Something unspecified",
        "Closed-loop control of VR rigs",
        "massive devices reporting monitoring data every hour",
    };
    for (const auto& text : corpus) {
        CAPTURE(text);
        const auto a = classify_intent(text, bundled_state());
        const auto b = classify_intent(text, bundled_state());
        CHECK(a.traffic_class == b.traffic_class);
        CHECK(a.bandwidth == b.bandwidth);
        CHECK(a.matched_keywords == b.matched_keywords);
        CHECK(a.tau_req_ms > 0);
        if (a.traffic_class != TrafficClass::embb) CHECK_FALSE(a.matched_keywords.empty());
        const std::string hay = lower(text);
        for (const auto& k : a.matched_keywords) CHECK(hay.find(lower(k)) != std::string::npos);
    }
}

TEST_CASE("strict lexicon misses synonyms") {
    const std::string text = "Robots need instantaneous connectivity on the line";
    CHECK(classify_traffic(text, Lexicon::standard()) == TrafficClass::urllc);
    const auto p = classify_intent(text, bundled_state(), Lexicon::strict());
    CHECK(p.traffic_class == TrafficClass::embb);
    CHECK(p.defaulted_class);
    // Explicit keywords still work.
    CHECK(classify_traffic("ultra-low latency robots", Lexicon::strict()) == TrafficClass::urllc);
}

TEST_CASE("lexicon documents") {
    const auto file = load_lexicon_file(ibn::test::data_dir() / "config" / "lexicon.json");
    CHECK(file == Lexicon::standard());
    const auto strict = load_lexicon_file(ibn::test::data_dir() / "config" / "lexicon_strict.json");
    CHECK(strict == Lexicon::strict());

    const auto l = load_lexicon(R"({"urllc": ["zap"], "mmtc": ["blip"], "high_bandwidth": ["wide"]})");
    CHECK(l.low_bandwidth == l.mmtc);
    CHECK(classify_traffic("needs zap", l) == TrafficClass::urllc);
    CHECK(classify_bandwidth("blips everywhere", l) == BandwidthCategory::low);
    CHECK_THROWS_AS(load_lexicon("[1, 2]"), Error);
    CHECK_THROWS_AS(load_lexicon("{"), ParseError);
}

TEST_CASE("keyword matching is word-anchored with plural tolerance") {
    const std::vector<std::string> kw = {"sensor", "IoT", "meter"};
    CHECK(match_keywords("Sensors and iot devices", kw) == std::vector<std::string>{"sensor", "iot"});
    CHECK(match_keywords("parametered telemetry", kw).empty());
    CHECK(match_keywords("smart meters", kw) == std::vector<std::string>{"meter"});
}

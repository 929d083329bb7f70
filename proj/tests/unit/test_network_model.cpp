#include <doctest.h>

#include <json.hpp>

#include "ibn/error.hpp"
#include "ibn/network_model.hpp"
#include "test_support.hpp"

using namespace ibn;
using ibn::test::bundled_state;
using nlohmann::json;

namespace {

struct SectorRow {
    const char* id;
    long long users;
    double load;
    double mmwave, mid, low;
};

// Sector table of the reference topology, typed in by hand.
const SectorRow kSectors[] = {
    {"stadium_central", 45000, 88, 800, 20, 5},
    {"city_plaza", 1200, 35, 800, 80, 30},
    {"industrial_park_a", 500, 60, 400, 100, 20},
    {"suburban_residential", 3000, 45, 0, 60, 40},
    {"rural_highway", 150, 15, 0, 20, 50},
};

struct NodeRow {
    const char* id;
    Tier tier;
    double compute;
    double lat[5];  // same sector order as kSectors
};

const NodeRow kNodes[] = {
    {"mec_stadium_1", Tier::edge, 65, {2, 12, 15, 25, 45}},
    {"mec_industrial_1", Tier::edge, 30, {15, 12, 3, 25, 40}},
    {"metro_agg_hub", Tier::metro, 50, {8, 5, 10, 15, 25}},
    {"regional_dc_north", Tier::regional, 40, {35, 30, 35, 40, 50}},
};

json bundled_json() { return json::parse(serialize_state(bundled_state())); }

}  // namespace

TEST_CASE("bundled topology matches the sector and node tables") {
    const auto& s = bundled_state();
    REQUIRE(s.sectors.size() == 5);
    REQUIRE(s.nodes.size() == 4);
    for (const auto& row : kSectors) {
        CAPTURE(row.id);
        const auto& sec = s.sector(row.id);
        CHECK(sec.active_users == row.users);
        CHECK(sec.load_percent == row.load);
        CHECK(sec.spectrum.mmwave_mhz == row.mmwave);
        CHECK(sec.spectrum.mid_band_mhz == row.mid);
        CHECK(sec.spectrum.low_band_mhz == row.low);
    }
    for (const auto& row : kNodes) {
        CAPTURE(row.id);
        const auto& n = s.node(row.id);
        CHECK(n.tier == row.tier);
        CHECK(n.compute_load_percent == row.compute);
    }
}

TEST_CASE("latency lookup returns all twenty matrix entries") {
    int checked = 0;
    for (const auto& n : kNodes) {
        for (int i = 0; i < 5; ++i) {
            CAPTURE(n.id);
            CAPTURE(kSectors[i].id);
            CHECK(latency(bundled_state(), kSectors[i].id, n.id) == n.lat[i]);
            ++checked;
        }
    }
    CHECK(checked == 20);
    CHECK(latency(bundled_state(), "industrial_park_a", "mec_industrial_1") == 3);
    CHECK(latency(bundled_state(), "stadium_central", "mec_stadium_1") == 2);
    CHECK(latency(bundled_state(), "rural_highway", "regional_dc_north") == 50);
    CHECK_THROWS_AS(latency(bundled_state(), "nowhere", "mec_stadium_1"), UnknownIdError);
    CHECK_THROWS_AS(latency(bundled_state(), "city_plaza", "nobody"), UnknownIdError);
}

TEST_CASE("band and tier vocabularies") {
    CHECK(parse_band("mmWave") == Band::mmwave);
    CHECK(parse_band("mm-wave") == Band::mmwave);
    CHECK(parse_band("mid-band") == Band::mid_band);
    CHECK(parse_band("midband") == Band::mid_band);
    CHECK(parse_band("low_band") == Band::low_band);
    CHECK_FALSE(parse_band("teraband"));
    CHECK(parse_tier("core") == Tier::regional);
    CHECK(parse_tier("regional") == Tier::regional);
    CHECK(parse_tier("metro") == Tier::metro);
    CHECK_FALSE(parse_tier("cloud"));
}

TEST_CASE("serialization is canonical and round-trips") {
    const std::string a = serialize_state(bundled_state());
    CHECK(a == serialize_state(load_state(a)));
    CHECK(load_state(a) == bundled_state());
    // Keys come out sorted and integral values carry no fraction.
    CHECK(a.find("\"nodes\"") < a.find("\"sectors\""));
    CHECK(a.find("\"load_percentage\": 88") != std::string::npos);
    CHECK(a.find("88.0") == std::string::npos);

    SUBCASE("fractional values survive") {
        auto doc = bundled_json();
        doc["sectors"]["city_plaza"]["load_percentage"] = 35.25;
        const auto s = load_state(doc.dump());
        CHECK(s.sector("city_plaza").load_percent == 35.25);
        CHECK(load_state(serialize_state(s)) == s);
    }

    SUBCASE("a mutation changes exactly one field") {
        NetworkState s = bundled_state();
        s.sectors.at("rural_highway").load_percent = 16;
        const json before = bundled_json();
        const json after = json::parse(serialize_state(s));
        const json diff = json::diff(before, after);
        REQUIRE(diff.size() == 1);
        CHECK(diff[0]["path"] == "/sectors/rural_highway/load_percentage");
    }
}

TEST_CASE("round trip holds over generated states") {
    // Small deterministic generator: vary counts, loads and spectra.
    unsigned seed = 12345;
    auto next = [&seed] {
        seed = seed * 1103515245u + 12345u;
        return (seed >> 16) & 0x7fff;
    };
    for (int trial = 0; trial < 200; ++trial) {
        NetworkState s;
        const int ns = 1 + next() % 6, nn = 1 + next() % 5;
        for (int i = 0; i < ns; ++i) {
            RanSector r;
            r.id = "s" + std::to_string(i);
            r.active_users = next() % 100000;
            r.load_percent = (next() % 4001) / 40.0;
            r.spectrum = {double(next() % 3 * 200), double(next() % 120), double(next() % 60) / 4};
            if (next() % 2) r.context = "ctx " + std::to_string(i);
            s.sectors.emplace(r.id, r);
        }
        for (int j = 0; j < nn; ++j) {
            CoreNode n;
            n.id = "n" + std::to_string(j);
            n.tier = static_cast<Tier>(next() % 3);
            n.compute_load_percent = (next() % 1001) / 10.0;
            for (const auto& [sid, _] : s.sectors) n.latency_to_sector[sid] = 0.5 + next() % 80;
            s.nodes.emplace(n.id, n);
        }
        validate_state(s);
        CHECK(load_state(serialize_state(s)) == s);
    }
}

TEST_CASE("load_state rejects invalid documents") {
    CHECK_THROWS_AS(load_state("{not json"), ParseError);
    CHECK_THROWS_AS(load_state(R"({"sectors": {}, "nodes": {}})"), ValidationError);

    SUBCASE("missing latency entry names the pair") {
        auto doc = bundled_json();
        doc["nodes"]["metro_agg_hub"]["latency_to_ran_ms"].erase("city_plaza");
        try {
            load_state(doc.dump());
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("city_plaza") != std::string::npos);
            CHECK(msg.find("metro_agg_hub") != std::string::npos);
        }
    }
    SUBCASE("latency for an unknown sector") {
        auto doc = bundled_json();
        doc["nodes"]["metro_agg_hub"]["latency_to_ran_ms"]["atlantis"] = 4;
        CHECK_THROWS_AS(load_state(doc.dump()), ValidationError);
    }
    SUBCASE("percentages out of range") {
        auto doc = bundled_json();
        doc["sectors"]["city_plaza"]["load_percentage"] = 101;
        CHECK_THROWS_AS(load_state(doc.dump()), ValidationError);
        doc = bundled_json();
        doc["nodes"]["metro_agg_hub"]["compute_load_percent"] = -1;
        CHECK_THROWS_AS(load_state(doc.dump()), ValidationError);
    }
    SUBCASE("non-positive latency and negative spectrum") {
        auto doc = bundled_json();
        doc["nodes"]["metro_agg_hub"]["latency_to_ran_ms"]["city_plaza"] = 0;
        CHECK_THROWS_AS(load_state(doc.dump()), ValidationError);
        doc = bundled_json();
        doc["sectors"]["city_plaza"]["spectrum_available_mhz"]["low_band"] = -5;
        CHECK_THROWS_AS(load_state(doc.dump()), ValidationError);
    }
    SUBCASE("unknown fields and bad types") {
        auto doc = bundled_json();
        doc["sectors"]["city_plaza"]["owner"] = "acme";
        CHECK_THROWS_AS(load_state(doc.dump()), ValidationError);
        doc = bundled_json();
        doc["extra"] = 1;
        CHECK_THROWS_AS(load_state(doc.dump()), ValidationError);
        doc = bundled_json();
        doc["sectors"]["city_plaza"]["active_users"] = 12.5;
        CHECK_THROWS_AS(load_state(doc.dump()), ValidationError);
        doc = bundled_json();
        doc["nodes"]["metro_agg_hub"]["type"] = "cloud";
        CHECK_THROWS_AS(load_state(doc.dump()), ValidationError);
    }
    SUBCASE("duplicate ids") {
        const std::string text = serialize_state(bundled_state());
        const auto pos = text.find("\"city_plaza\": {");
        REQUIRE(pos != std::string::npos);
        // Insert a second city_plaza sector entry.
        const std::string dup = text.substr(0, pos) +
                                R"("city_plaza": {"active_users": 1, "load_percentage": 1,
                                "spectrum_available_mhz": {"mmWave": 0, "mid_band": 1, "low_band": 1}}, )" +
                                text.substr(pos);
        CHECK_THROWS_AS(load_state(dup), Error);
    }
    CHECK_THROWS_AS(load_state_file("/nonexistent/state.json"), ConfigError);
}

TEST_CASE("apply_provisioning records slices without touching loads") {
    const auto& s = bundled_state();
    SliceConfiguration golden{"industrial_park_a", Band::mid_band, "mec_industrial_1", "industrial_autonomy_001"};
    const auto next = apply_provisioning(s, golden);
    REQUIRE(next.provisioned.size() == 1);
    CHECK(next.provisioned[0] == golden);
    CHECK(next.sectors == s.sectors);
    CHECK(next.nodes == s.nodes);
    CHECK(s.provisioned.empty());
    CHECK(load_state(serialize_state(next)) == next);

    CHECK_THROWS_AS(apply_provisioning(next, golden), ProvisioningError);
    CHECK_THROWS_AS(apply_provisioning(s, {"suburban_residential", Band::mmwave, "metro_agg_hub", "x"}),
                    ProvisioningError);
    CHECK_THROWS_AS(apply_provisioning(s, {"rural_highway", Band::mmwave, "metro_agg_hub", "x"}),
                    ProvisioningError);
    CHECK_THROWS_AS(apply_provisioning(s, {"atlantis", Band::low_band, "metro_agg_hub", "x"}), UnknownIdError);
    CHECK_THROWS_AS(apply_provisioning(s, {"city_plaza", Band::low_band, "nobody", "x"}), UnknownIdError);

    // Unlabelled slices can repeat.
    SliceConfiguration unlabelled{"city_plaza", Band::low_band, "metro_agg_hub", std::nullopt};
    CHECK(apply_provisioning(apply_provisioning(s, unlabelled), unlabelled).provisioned.size() == 2);
}

TEST_CASE("every candidate referencing a band is available iff spectrum > 0") {
    for (const auto& [sid, sec] : bundled_state().sectors) {
        for (Band b : kAllBands) {
            SliceConfiguration c{sid, b, "metro_agg_hub", std::nullopt};
            if (sec.spectrum.capacity(b) > 0) {
                CHECK_NOTHROW(validate_configuration(bundled_state(), c));
            } else {
                CHECK_THROWS_AS(validate_configuration(bundled_state(), c), ProvisioningError);
            }
        }
    }
}

TEST_CASE("describe") {
    CHECK(describe({"industrial_park_a", Band::mid_band, "mec_industrial_1", std::nullopt}) ==
          "mid_band@industrial_park_a, UPF@mec_industrial_1");
}

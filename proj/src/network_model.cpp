#include "ibn/network_model.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "ibn/error.hpp"
#include "json_util.hpp"

namespace ibn {

using detail::json;

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

void require_keys(const json& obj, std::initializer_list<std::string_view> required,
                  std::initializer_list<std::string_view> optional, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where + ": expected an object");
    for (auto key : required) {
        if (!obj.contains(std::string(key))) {
            throw ValidationError(where + ": missing field '" + std::string(key) + "'");
        }
    }
    for (const auto& [key, _] : obj.items()) {
        bool known = std::find(required.begin(), required.end(), key) != required.end() ||
                     std::find(optional.begin(), optional.end(), key) != optional.end();
        if (!known) throw ValidationError(where + ": unknown field '" + key + "'");
    }
}

double get_number(const json& obj, const char* key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ValidationError(where + ": field '" + key + "' must be a number");
    return v.get<double>();
}

void check_percent(double value, const std::string& what) {
    if (!(value >= 0.0 && value <= 100.0)) {
        throw ValidationError(what + " must be within [0, 100], got " + std::to_string(value));
    }
}

SliceConfiguration config_from_json(const json& j, const std::string& where) {
    require_keys(j, {"sector", "band", "node"}, {"slice_id"}, where);
    SliceConfiguration c;
    c.sector_id = j.at("sector").get<std::string>();
    auto band = parse_band(j.at("band").get<std::string>());
    if (!band) throw ValidationError(where + ": unknown band '" + j.at("band").get<std::string>() + "'");
    c.band = *band;
    c.node_id = j.at("node").get<std::string>();
    if (j.contains("slice_id")) c.slice_id = j.at("slice_id").get<std::string>();
    return c;
}

}  // namespace

std::string_view to_string(Band band) {
    switch (band) {
        case Band::mmwave: return "mmwave";
        case Band::mid_band: return "mid_band";
        case Band::low_band: return "low_band";
    }
    return "unknown";
}

std::optional<Band> parse_band(std::string_view text) {
    const std::string t = lower(text);
    if (t == "mmwave" || t == "mm-wave" || t == "mm_wave") return Band::mmwave;
    if (t == "mid_band" || t == "mid-band" || t == "midband" || t == "mid") return Band::mid_band;
    if (t == "low_band" || t == "low-band" || t == "lowband" || t == "low") return Band::low_band;
    return std::nullopt;
}

std::string_view to_string(Tier tier) {
    switch (tier) {
        case Tier::edge: return "edge";
        case Tier::metro: return "metro";
        case Tier::regional: return "regional";
    }
    return "unknown";
}

std::optional<Tier> parse_tier(std::string_view text) {
    const std::string t = lower(text);
    if (t == "edge") return Tier::edge;
    if (t == "metro") return Tier::metro;
    if (t == "regional" || t == "core") return Tier::regional;
    return std::nullopt;
}

double SpectrumBands::capacity(Band band) const {
    switch (band) {
        case Band::mmwave: return mmwave_mhz;
        case Band::mid_band: return mid_band_mhz;
        case Band::low_band: return low_band_mhz;
    }
    return 0.0;
}

bool same_placement(const SliceConfiguration& a, const SliceConfiguration& b) {
    return a.sector_id == b.sector_id && a.band == b.band && a.node_id == b.node_id;
}

std::string describe(const SliceConfiguration& config) {
    std::string out;
    out += to_string(config.band);
    out += "@" + config.sector_id + ", UPF@" + config.node_id;
    return out;
}

const RanSector& NetworkState::sector(std::string_view id) const {
    auto it = sectors.find(id);
    if (it == sectors.end()) throw UnknownIdError("unknown sector '" + std::string(id) + "'");
    return it->second;
}

const CoreNode& NetworkState::node(std::string_view id) const {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw UnknownIdError("unknown node '" + std::string(id) + "'");
    return it->second;
}

void validate_state(const NetworkState& state) {
    if (state.sectors.empty()) throw ValidationError("state has no sectors");
    if (state.nodes.empty()) throw ValidationError("state has no nodes");
    for (const auto& [id, s] : state.sectors) {
        if (id.empty() || s.id != id) throw ValidationError("sector id mismatch or empty id '" + id + "'");
        if (s.active_users < 0) throw ValidationError("sector " + id + ": active_users must be >= 0");
        check_percent(s.load_percent, "sector " + id + " load_percentage");
        for (Band b : kAllBands) {
            if (!(s.spectrum.capacity(b) >= 0.0)) {
                throw ValidationError("sector " + id + ": spectrum for " + std::string(to_string(b)) +
                                      " must be >= 0");
            }
        }
    }
    for (const auto& [id, n] : state.nodes) {
        if (id.empty() || n.id != id) throw ValidationError("node id mismatch or empty id '" + id + "'");
        check_percent(n.compute_load_percent, "node " + id + " compute_load_percent");
        for (const auto& [sid, _] : state.sectors) {
            auto it = n.latency_to_sector.find(sid);
            if (it == n.latency_to_sector.end()) {
                throw ValidationError("missing latency entry for (" + sid + ", " + id + ")");
            }
            if (!(it->second > 0.0)) {
                throw ValidationError("latency for (" + sid + ", " + id + ") must be > 0");
            }
        }
        for (const auto& [sid, _] : n.latency_to_sector) {
            if (!state.sectors.count(sid)) {
                throw ValidationError("node " + id + " has latency for unknown sector '" + sid + "'");
            }
        }
    }
    for (const auto& c : state.provisioned) validate_configuration(state, c);
}

NetworkState load_state(std::string_view document) {
    const json doc = detail::parse_json(document, "state document");
    NetworkState state;
    try {
        require_keys(doc, {"sectors", "nodes"}, {"provisioned_slices"}, "state");
        if (!doc.at("sectors").is_object() || !doc.at("nodes").is_object()) {
            throw ParseError("state: 'sectors' and 'nodes' must be objects");
        }
        for (const auto& [id, entry] : doc.at("sectors").items()) {
            const std::string where = "sector " + id;
            require_keys(entry, {"active_users", "load_percentage", "spectrum_available_mhz"}, {"description"},
                         where);
            RanSector s;
            s.id = id;
            const auto& users = entry.at("active_users");
            if (!users.is_number_integer()) throw ValidationError(where + ": active_users must be an integer");
            s.active_users = users.get<long long>();
            s.load_percent = get_number(entry, "load_percentage", where);
            const auto& spec = entry.at("spectrum_available_mhz");
            require_keys(spec, {"mmWave", "mid_band", "low_band"}, {}, where + " spectrum_available_mhz");
            s.spectrum.mmwave_mhz = get_number(spec, "mmWave", where);
            s.spectrum.mid_band_mhz = get_number(spec, "mid_band", where);
            s.spectrum.low_band_mhz = get_number(spec, "low_band", where);
            if (entry.contains("description")) s.context = entry.at("description").get<std::string>();
            state.sectors.emplace(id, std::move(s));
        }
        for (const auto& [id, entry] : doc.at("nodes").items()) {
            const std::string where = "node " + id;
            require_keys(entry, {"type", "latency_to_ran_ms", "compute_load_percent"}, {"description"}, where);
            CoreNode n;
            n.id = id;
            auto tier = parse_tier(entry.at("type").get<std::string>());
            if (!tier) throw ValidationError(where + ": unknown type '" + entry.at("type").get<std::string>() + "'");
            n.tier = *tier;
            n.compute_load_percent = get_number(entry, "compute_load_percent", where);
            const auto& lat = entry.at("latency_to_ran_ms");
            if (!lat.is_object()) throw ValidationError(where + ": latency_to_ran_ms must map sector ids to numbers");
            for (const auto& [sid, v] : lat.items()) {
                if (!v.is_number()) throw ValidationError(where + ": latency to " + sid + " must be a number");
                n.latency_to_sector.emplace(sid, v.get<double>());
            }
            if (entry.contains("description")) n.description = entry.at("description").get<std::string>();
            state.nodes.emplace(id, std::move(n));
        }
        if (doc.contains("provisioned_slices")) {
            for (const auto& entry : doc.at("provisioned_slices")) {
                state.provisioned.push_back(config_from_json(entry, "provisioned slice"));
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("state document: ") + e.what());
    }
    validate_state(state);
    return state;
}

NetworkState load_state_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open state file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return load_state(buf.str());
}

std::string serialize_state(const NetworkState& state) {
    json doc = json::object();
    json sectors = json::object();
    for (const auto& [id, s] : state.sectors) {
        json e = json::object();
        e["active_users"] = s.active_users;
        e["load_percentage"] = detail::number(s.load_percent);
        e["spectrum_available_mhz"] = {{"mmWave", detail::number(s.spectrum.mmwave_mhz)},
                                       {"mid_band", detail::number(s.spectrum.mid_band_mhz)},
                                       {"low_band", detail::number(s.spectrum.low_band_mhz)}};
        if (!s.context.empty()) e["description"] = s.context;
        sectors[id] = std::move(e);
    }
    json nodes = json::object();
    for (const auto& [id, n] : state.nodes) {
        json e = json::object();
        e["type"] = std::string(to_string(n.tier));
        e["compute_load_percent"] = detail::number(n.compute_load_percent);
        json lat = json::object();
        for (const auto& [sid, v] : n.latency_to_sector) lat[sid] = detail::number(v);
        e["latency_to_ran_ms"] = std::move(lat);
        if (!n.description.empty()) e["description"] = n.description;
        nodes[id] = std::move(e);
    }
    doc["sectors"] = std::move(sectors);
    doc["nodes"] = std::move(nodes);
    if (!state.provisioned.empty()) {
        json ledger = json::array();
        for (const auto& c : state.provisioned) {
            json e = {{"sector", c.sector_id}, {"band", std::string(to_string(c.band))}, {"node", c.node_id}};
            if (c.slice_id) e["slice_id"] = *c.slice_id;
            ledger.push_back(std::move(e));
        }
        doc["provisioned_slices"] = std::move(ledger);
    }
    return doc.dump(2);
}

double latency(const NetworkState& state, std::string_view sector_id, std::string_view node_id) {
    state.sector(sector_id);
    const auto& n = state.node(node_id);
    auto it = n.latency_to_sector.find(sector_id);
    if (it == n.latency_to_sector.end()) {
        throw UnknownIdError("no latency entry for (" + std::string(sector_id) + ", " + std::string(node_id) + ")");
    }
    return it->second;
}

void validate_configuration(const NetworkState& state, const SliceConfiguration& config) {
    const auto& s = state.sector(config.sector_id);
    state.node(config.node_id);
    if (!s.spectrum.available(config.band)) {
        throw ProvisioningError("band " + std::string(to_string(config.band)) + " has no available spectrum at " +
                                config.sector_id);
    }
}

NetworkState apply_provisioning(const NetworkState& state, const SliceConfiguration& config) {
    validate_configuration(state, config);
    if (config.slice_id) {
        for (const auto& existing : state.provisioned) {
            if (existing.slice_id == config.slice_id) {
                throw ProvisioningError("slice '" + *config.slice_id + "' is already provisioned");
            }
        }
    }
    NetworkState next = state;
    next.provisioned.push_back(config);
    return next;
}

}  // namespace ibn

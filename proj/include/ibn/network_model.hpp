#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ibn {

enum class Band { mmwave, mid_band, low_band };

inline constexpr Band kAllBands[] = {Band::mmwave, Band::mid_band, Band::low_band};

std::string_view to_string(Band band);
/// Accepts the canonical names plus the spellings used in state documents and
/// agent output (mmWave, mm-wave, mid-band, midband, low-band, lowband).
std::optional<Band> parse_band(std::string_view text);

enum class Tier { edge, metro, regional };

std::string_view to_string(Tier tier);
/// "core" is accepted as an alias of "regional".
std::optional<Tier> parse_tier(std::string_view text);

struct SpectrumBands {
    double mmwave_mhz = 0.0;
    double mid_band_mhz = 0.0;
    double low_band_mhz = 0.0;

    double capacity(Band band) const;
    bool available(Band band) const { return capacity(band) > 0.0; }

    bool operator==(const SpectrumBands&) const = default;
};

struct RanSector {
    std::string id;
    long long active_users = 0;
    double load_percent = 0.0;
    SpectrumBands spectrum;
    std::string context;

    bool operator==(const RanSector&) const = default;
};

struct CoreNode {
    std::string id;
    Tier tier = Tier::edge;
    double compute_load_percent = 0.0;
    std::map<std::string, double, std::less<>> latency_to_sector;
    std::string description;

    bool operator==(const CoreNode&) const = default;
};

struct SliceConfiguration {
    std::string sector_id;
    Band band = Band::mid_band;
    std::string node_id;
    std::optional<std::string> slice_id;

    bool operator==(const SliceConfiguration&) const = default;
};

/// The (sector, band, node) triple compared without the slice label.
bool same_placement(const SliceConfiguration& a, const SliceConfiguration& b);

/// "mid_band@industrial_park_a, UPF@mec_industrial_1"
std::string describe(const SliceConfiguration& config);

/// Immutable snapshot of the RAN and core. Maps are ordered so iteration and
/// serialization are deterministic.
struct NetworkState {
    std::map<std::string, RanSector, std::less<>> sectors;
    std::map<std::string, CoreNode, std::less<>> nodes;
    std::vector<SliceConfiguration> provisioned;

    const RanSector& sector(std::string_view id) const;
    const CoreNode& node(std::string_view id) const;

    bool operator==(const NetworkState&) const = default;
};

/// Parses and validates a state document. Throws ParseError for malformed text
/// and ValidationError for invariant violations (empty maps, duplicate ids,
/// out-of-range percentages, missing or unknown latency entries, unknown fields).
NetworkState load_state(std::string_view document);
NetworkState load_state_file(const std::filesystem::path& path);

/// Canonical form: sorted keys, two-space indent, integral values without a
/// fractional part.
std::string serialize_state(const NetworkState& state);

/// Checks every invariant of an in-memory state; load_state calls this.
void validate_state(const NetworkState& state);

/// Latency lookup in the sector-by-node matrix. Throws UnknownIdError.
double latency(const NetworkState& state, std::string_view sector_id, std::string_view node_id);

/// Throws UnknownIdError for unknown ids and ProvisioningError when the band
/// has no spectrum at the sector.
void validate_configuration(const NetworkState& state, const SliceConfiguration& config);

/// Returns a copy of `state` with `config` appended to the provisioned ledger.
/// Loads and spectrum are left untouched.
NetworkState apply_provisioning(const NetworkState& state, const SliceConfiguration& config);

}  // namespace ibn

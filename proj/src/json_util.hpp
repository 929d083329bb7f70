#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>
#include <set>

#include <json.hpp>

#include "ibn/error.hpp"

namespace ibn::detail {

using json = nlohmann::json;

/// Parses `text`, rejecting duplicate object keys at any depth.
inline json parse_json(std::string_view text, std::string_view what) {
    std::vector<std::set<std::string>> open_objects;
    std::string duplicate;
    json::parser_callback_t cb = [&](int, json::parse_event_t event, json& parsed) {
        switch (event) {
            case json::parse_event_t::object_start:
                open_objects.emplace_back();
                break;
            case json::parse_event_t::object_end:
                if (!open_objects.empty()) open_objects.pop_back();
                break;
            case json::parse_event_t::key:
                if (!open_objects.empty() && !open_objects.back().insert(parsed.get<std::string>()).second &&
                    duplicate.empty()) {
                    duplicate = parsed.get<std::string>();
                }
                break;
            default:
                break;
        }
        return true;
    };
    json doc;
    try {
        doc = json::parse(text.begin(), text.end(), cb);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
    if (!duplicate.empty()) {
        throw ValidationError(std::string(what) + ": duplicate key '" + duplicate + "'");
    }
    return doc;
}

/// Integral doubles are emitted as JSON integers so canonical output reads 88, not 88.0.
inline json number(double value) {
    if (std::isfinite(value) && std::floor(value) == value && std::fabs(value) < 9.0e15) {
        return json(static_cast<std::int64_t>(value));
    }
    return json(value);
}

}  // namespace ibn::detail

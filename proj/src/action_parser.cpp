
#include "ibn/agent_runtime.hpp"
#include "ibn/error.hpp"
#include "text_util.hpp"

namespace ibn {

using detail::trim;

namespace {

constexpr std::string_view kActionPrefix = "ACTION:";

bool is_action_line(std::string_view line) { return detail::starts_with(trim(line), kActionPrefix); }

std::optional<ActionKind> parse_kind(std::string_view token) {
    const std::string t = detail::to_lower(token);
    if (t == "call_agent") return ActionKind::call_agent;
    if (t == "provision_slice") return ActionKind::provision_slice;
    if (t == "finish") return ActionKind::finish;
    return std::nullopt;
}

[[noreturn]] void fail(std::string_view line, const std::string& why) {
    throw ParseError("malformed action (" + why + "): " + std::string(line));
}

void set_once(std::optional<std::string>& slot, std::string_view key, std::string_view value, std::string_view line) {
    if (slot) fail(line, "duplicate key '" + std::string(key) + "'");
    slot = std::string(value);
}

}  // namespace

std::string_view to_string(ActionKind kind) {
    switch (kind) {
        case ActionKind::call_agent: return "CALL_AGENT";
        case ActionKind::provision_slice: return "PROVISION_SLICE";
        case ActionKind::finish: return "FINISH";
        case ActionKind::none: return "NONE";
    }
    return "NONE";
}

AgentAction parse_action_line(std::string_view raw) {
    const std::string_view line = trim(raw);
    if (!detail::starts_with(line, kActionPrefix)) fail(raw, "missing ACTION: prefix");
    std::string_view rest = line.substr(kActionPrefix.size());

    const auto bar = rest.find('|');
    const auto kind_token = trim(rest.substr(0, bar));
    const auto kind = parse_kind(kind_token);
    if (!kind) fail(raw, "unknown action kind '" + std::string(kind_token) + "'");

    AgentAction a;
    a.kind = *kind;
    rest = bar == std::string_view::npos ? std::string_view() : rest.substr(bar + 1);
    while (!trim(rest).empty()) {
        const auto eq = rest.find('=');
        const auto next_bar = rest.find('|');
        if (eq == std::string_view::npos || (next_bar != std::string_view::npos && next_bar < eq)) {
            fail(raw, "segment without '=': '" + std::string(trim(rest.substr(0, next_bar))) + "'");
        }
        const auto key = trim(rest.substr(0, eq));
        if (key.empty()) fail(raw, "empty key");
        std::string_view value;
        if (key == "request" || key == "summary") {
            value = trim(rest.substr(eq + 1));
            rest = {};
        } else {
            const auto end = rest.find('|', eq);
            value = trim(rest.substr(eq + 1, end == std::string_view::npos ? std::string_view::npos : end - eq - 1));
            rest = end == std::string_view::npos ? std::string_view() : rest.substr(end + 1);
            if (value.empty()) fail(raw, "empty value for '" + std::string(key) + "'");
        }
        if (key == "agent_name") set_once(a.agent_name, key, value, raw);
        else if (key == "request") set_once(a.request, key, value, raw);
        else if (key == "slice_id") set_once(a.slice_id, key, value, raw);
        else if (key == "ran_config") set_once(a.ran_config, key, value, raw);
        else if (key == "core_config") set_once(a.core_config, key, value, raw);
        else if (key == "summary") set_once(a.summary, key, value, raw);
    }

    switch (a.kind) {
        case ActionKind::call_agent:
            if (!a.agent_name) fail(raw, "CALL_AGENT needs agent_name");
            if (!a.request || a.request->empty()) fail(raw, "CALL_AGENT needs a non-empty request");
            break;
        case ActionKind::provision_slice:
            if (!a.slice_id || !a.ran_config || !a.core_config) {
                fail(raw, "PROVISION_SLICE needs slice_id, ran_config and core_config");
            }
            break;
        default:
            break;
    }
    return a;
}

std::vector<AgentAction> parse_action(std::string_view text) {
    const auto lines = detail::split_lines(text);
    std::size_t last = lines.size();
    for (std::size_t i = lines.size(); i-- > 0;) {
        if (is_action_line(lines[i])) {
            last = i;
            break;
        }
    }
    if (last == lines.size()) return {AgentAction{}};

    AgentAction operative = parse_action_line(lines[last]);
    if (operative.kind == ActionKind::finish) {
        std::size_t prev = last;
        while (prev > 0 && trim(lines[prev - 1]).empty()) --prev;
        if (prev > 0 && is_action_line(lines[prev - 1])) {
            AgentAction before = parse_action_line(lines[prev - 1]);
            if (before.kind == ActionKind::provision_slice) return {std::move(before), std::move(operative)};
        }
    }
    return {std::move(operative)};
}

std::string format_action(const AgentAction& a) {
    if (a.kind == ActionKind::none) return {};
    std::string out = "ACTION: " + std::string(to_string(a.kind));
    const auto add = [&out](std::string_view key, const std::optional<std::string>& v) {
        if (v) out += " | " + std::string(key) + "=" + *v;
    };
    switch (a.kind) {
        case ActionKind::call_agent:
            add("agent_name", a.agent_name);
            add("request", a.request);
            break;
        case ActionKind::provision_slice:
            add("slice_id", a.slice_id);
            add("ran_config", a.ran_config);
            add("core_config", a.core_config);
            break;
        case ActionKind::finish:
            add("summary", a.summary);
            break;
        case ActionKind::none:
            break;
    }
    return out;
}

ParsedSliceConfig parse_slice_configs(std::string_view ran_config, std::string_view core_config) {
    const auto ran_at = ran_config.find('@');
    if (ran_at == std::string_view::npos) {
        throw ParseError("ran_config '" + std::string(ran_config) + "' is missing '@' (expected <band>@<sector>)");
    }
    const auto band_token = trim(ran_config.substr(0, ran_at));
    const auto sector = trim(ran_config.substr(ran_at + 1));
    if (band_token.empty() || sector.empty()) throw ParseError("ran_config '" + std::string(ran_config) + "' has an empty segment");
    const auto band = parse_band(band_token);
    if (!band) throw ParseError("unknown band '" + std::string(band_token) + "' in ran_config");

    const auto core_at = core_config.find('@');
    if (core_at == std::string_view::npos) {
        throw ParseError("core_config '" + std::string(core_config) + "' is missing '@' (expected UPF@<node>)");
    }
    const auto function = trim(core_config.substr(0, core_at));
    const auto node = trim(core_config.substr(core_at + 1));
    if (function.empty() || node.empty()) throw ParseError("core_config '" + std::string(core_config) + "' has an empty segment");
    if (detail::to_lower(function) != "upf") {
        throw ParseError("core_config '" + std::string(core_config) + "' must place a UPF");
    }
    return {*band, std::string(sector), std::string(node)};
}

std::string extract_thought(std::string_view text) {
    std::string out;
    for (const auto line : detail::split_lines(text)) {
        if (is_action_line(line)) break;
        if (!out.empty()) out += '\n';
        out += line;
    }
    std::string_view t = trim(out);
    if (detail::starts_with(t, "THOUGHT:")) t = trim(t.substr(8));
    return std::string(t);
}

}  // namespace ibn

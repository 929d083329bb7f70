#include "ibn/llm_gateway.hpp"

#include <fstream>
#include <sstream>

#include "ibn/error.hpp"
#include "json_util.hpp"

namespace ibn {

using detail::json;

std::string_view to_string(Role role) {
    switch (role) {
        case Role::system: return "system";
        case Role::user: return "user";
        case Role::assistant: return "assistant";
    }
    return "user";
}

TokenUsage& TokenUsage::operator+=(const TokenUsage& other) {
    prompt_tokens += other.prompt_tokens;
    completion_tokens += other.completion_tokens;
    wall_seconds += other.wall_seconds;
    calls += other.calls;
    return *this;
}

TokenUsage& TokenUsage::operator+=(const CompletionResult& call) {
    prompt_tokens += call.prompt_tokens;
    completion_tokens += call.completion_tokens;
    wall_seconds += call.latency_seconds;
    calls += 1;
    return *this;
}

void validate_history(std::span<const ChatMessage> history) {
    if (history.empty()) throw ValidationError("chat history is empty");
    if (history.front().role != Role::system) throw ValidationError("chat history must start with a system message");
    for (std::size_t i = 0; i < history.size(); ++i) {
        const auto& m = history[i];
        if (m.role != Role::assistant && m.content.empty()) {
            throw ValidationError("message " + std::to_string(i) + " (" + std::string(to_string(m.role)) +
                                  ") has empty content");
        }
    }
}

// ---------------------------------------------------------------------------

ScriptedBackend::ScriptedBackend(std::vector<ScriptedExchange> script, std::string id)
    : script_(std::move(script)), id_(std::move(id)) {}

namespace {

std::string excerpt(std::string_view s, std::size_t n = 160) {
    if (s.size() <= n) return std::string(s);
    return std::string(s.substr(0, n)) + "...";
}

}  // namespace

CompletionResult ScriptedBackend::complete(std::span<const ChatMessage> history, double temperature) {
    std::lock_guard lock(mu_);
    if (next_ >= script_.size()) {
        throw ScriptError(id_ + ": script exhausted after " + std::to_string(script_.size()) + " exchanges");
    }
    const auto& ex = script_[next_];
    if (ex.expect_system) {
        const auto& sys = history.empty() ? std::string() : history.front().content;
        if (sys.find(*ex.expect_system) == std::string::npos) {
            throw ScriptError(id_ + ": exchange " + std::to_string(next_) + " expected system prompt containing '" +
                              *ex.expect_system + "', got '" + excerpt(sys) + "'");
        }
    }
    if (ex.expect_contains) {
        const auto& last = history.empty() ? std::string() : history.back().content;
        if (last.find(*ex.expect_contains) == std::string::npos) {
            throw ScriptError(id_ + ": exchange " + std::to_string(next_) + " expected last message containing '" +
                              *ex.expect_contains + "', got '" + excerpt(last) + "'");
        }
    }
    ++next_;
    temperatures_.push_back(temperature);

    CompletionResult r;
    r.text = ex.response;
    r.backend_id = id_;
    r.latency_seconds = ex.latency_seconds;
    if (ex.prompt_tokens) {
        r.prompt_tokens = *ex.prompt_tokens;
    } else {
        std::size_t chars = 0;
        for (const auto& m : history) chars += m.content.size();
        r.prompt_tokens = static_cast<long long>(chars / 4);
    }
    r.completion_tokens = ex.completion_tokens ? *ex.completion_tokens : static_cast<long long>(ex.response.size() / 4);
    return r;
}

std::size_t ScriptedBackend::consumed() const {
    std::lock_guard lock(mu_);
    return next_;
}

std::size_t ScriptedBackend::remaining() const {
    std::lock_guard lock(mu_);
    return script_.size() - next_;
}

std::vector<double> ScriptedBackend::temperatures() const {
    std::lock_guard lock(mu_);
    return temperatures_;
}

const std::vector<ScriptedExchange>* ScriptLibrary::find(std::string_view system, std::string_view scenario) const {
    const std::string keyed = std::string(system) + "/" + std::string(scenario);
    if (auto it = scripts.find(keyed); it != scripts.end()) return &it->second;
    if (auto it = scripts.find(scenario); it != scripts.end()) return &it->second;
    if (auto it = scripts.find(std::string_view("*")); it != scripts.end()) return &it->second;
    return nullptr;
}

namespace {

std::vector<ScriptedExchange> parse_exchanges(const json& arr, const std::string& where) {
    if (!arr.is_array()) throw ParseError(where + ": expected a list of exchanges");
    std::vector<ScriptedExchange> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto& e = arr[i];
        const std::string at = where + "[" + std::to_string(i) + "]";
        if (!e.is_object() || !e.contains("response") || !e.at("response").is_string()) {
            throw ParseError(at + ": exchange needs a string 'response'");
        }
        for (const auto& [key, _] : e.items()) {
            if (key != "response" && key != "matcher" && key != "prompt_tokens" && key != "completion_tokens" &&
                key != "latency_seconds" && key != "note") {
                throw ParseError(at + ": unknown field '" + key + "'");
            }
        }
        ScriptedExchange ex;
        ex.response = e.at("response").get<std::string>();
        if (e.contains("matcher")) {
            const auto& m = e.at("matcher");
            if (m.is_string()) {
                ex.expect_contains = m.get<std::string>();
            } else if (m.is_object()) {
                if (m.contains("contains")) ex.expect_contains = m.at("contains").get<std::string>();
                if (m.contains("system")) ex.expect_system = m.at("system").get<std::string>();
            } else if (!m.is_null()) {
                throw ParseError(at + ": matcher must be a string or object");
            }
        }
        if (e.contains("prompt_tokens")) ex.prompt_tokens = e.at("prompt_tokens").get<long long>();
        if (e.contains("completion_tokens")) ex.completion_tokens = e.at("completion_tokens").get<long long>();
        if (e.contains("latency_seconds")) ex.latency_seconds = e.at("latency_seconds").get<double>();
        if ((ex.prompt_tokens && *ex.prompt_tokens < 0) || (ex.completion_tokens && *ex.completion_tokens < 0)) {
            throw ParseError(at + ": token counts must be >= 0");
        }
        out.push_back(std::move(ex));
    }
    return out;
}

}  // namespace

ScriptLibrary load_script_library(std::string_view document) {
    const json doc = detail::parse_json(document, "script fixture");
    ScriptLibrary lib;
    try {
        if (doc.is_array()) {
            lib.scripts.emplace("*", parse_exchanges(doc, "fixture"));
        } else if (doc.is_object() && doc.contains("exchanges")) {
            lib.scripts.emplace("*", parse_exchanges(doc.at("exchanges"), "fixture.exchanges"));
        } else if (doc.is_object() && doc.contains("scripts")) {
            for (const auto& [key, arr] : doc.at("scripts").items()) {
                lib.scripts.emplace(key, parse_exchanges(arr, "fixture.scripts." + key));
            }
        } else {
            throw ParseError("script fixture: expected a list, {\"exchanges\": [...]} or {\"scripts\": {...}}");
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("script fixture: ") + e.what());
    }
    return lib;
}

ScriptLibrary load_script_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open script fixture: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return load_script_library(buf.str());
}

// ---------------------------------------------------------------------------

CompletionResult Session::complete(std::span<const ChatMessage> history, double temperature) {
    validate_history(history);
    auto result = backend_->complete(history, temperature);
    calls_.push_back(result);
    return result;
}

TokenUsage Session::total_usage() const {
    TokenUsage u;
    for (const auto& c : calls_) u += c;
    return u;
}

TokenUsage total_usage(const Session& session) { return session.total_usage(); }

std::shared_ptr<ChatBackend> ScriptedBackendFactory::open(std::string_view system, std::string_view scenario) {
    const auto* script = library_.find(system, scenario);
    if (!script) {
        throw ScriptError("no scripted exchanges for '" + std::string(system) + "/" + std::string(scenario) + "'");
    }
    return std::make_shared<ScriptedBackend>(*script, "scripted:" + std::string(system) + "/" + std::string(scenario));
}

LiveBackendFactory::LiveBackendFactory(HttpBackendConfig config)
    : backend_(std::make_shared<HttpBackend>(std::move(config))) {}

std::unique_ptr<BackendFactory> make_backend_factory(std::string_view selection) {
    if (selection == "live") return std::make_unique<LiveBackendFactory>(http_config_from_env());
    constexpr std::string_view prefix = "scripted:";
    if (selection.substr(0, prefix.size()) == prefix && selection.size() > prefix.size()) {
        return std::make_unique<ScriptedBackendFactory>(
            load_script_file(std::filesystem::path(std::string(selection.substr(prefix.size())))));
    }
    throw ConfigError("backend must be 'live' or 'scripted:<fixture>', got '" + std::string(selection) + "'");
}

}  // namespace ibn

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "ibn/error.hpp"
#include "ibn/llm_gateway.hpp"
#include "json_util.hpp"

namespace ibn {

using detail::json;

namespace {

thread_local int t_last_attempts = 0;

std::string env_or_empty(const char* name) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : std::string();
}

}  // namespace

HttpBackendConfig http_config_from_env() {
    HttpBackendConfig cfg;
    cfg.base_url = env_or_empty("IBN_LLM_BASE_URL");
    cfg.model = env_or_empty("IBN_LLM_MODEL");
    cfg.api_key = env_or_empty("IBN_LLM_API_KEY");
    if (cfg.base_url.empty()) throw ConfigError("IBN_LLM_BASE_URL is not set");
    if (cfg.model.empty()) throw ConfigError("IBN_LLM_MODEL is not set");
    return cfg;
}

std::string build_chat_request(std::span<const ChatMessage> history, std::string_view model, double temperature) {
    json messages = json::array();
    for (const auto& m : history) {
        messages.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
    }
    json body = {{"model", std::string(model)}, {"messages", messages}, {"temperature", temperature}, {"stream", false}};
    return body.dump();
}

CompletionResult parse_chat_response(std::string_view body, int status) {
    json doc;
    try {
        doc = json::parse(body.begin(), body.end());
    } catch (const json::parse_error& e) {
        if (status != 200) throw ProviderError("provider returned HTTP " + std::to_string(status), status);
        throw ParseError(std::string("chat response is not JSON: ") + e.what());
    }
    if (doc.is_object() && doc.contains("error")) {
        const auto& err = doc.at("error");
        std::string msg = err.is_object() && err.contains("message") && err.at("message").is_string()
                              ? err.at("message").get<std::string>()
                              : err.dump();
        throw ProviderError("provider error (HTTP " + std::to_string(status) + "): " + msg, status);
    }
    if (status != 200) throw ProviderError("provider returned HTTP " + std::to_string(status), status);

    CompletionResult r;
    try {
        const auto& choice = doc.at("choices").at(0);
        const auto& content = choice.at("message").at("content");
        r.text = content.is_null() ? std::string() : content.get<std::string>();
        if (doc.contains("usage") && doc.at("usage").is_object()) {
            const auto& u = doc.at("usage");
            r.prompt_tokens = u.value("prompt_tokens", 0LL);
            r.completion_tokens = u.value("completion_tokens", 0LL);
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("unexpected chat response shape: ") + e.what());
    }
    if (r.prompt_tokens < 0 || r.completion_tokens < 0) throw ParseError("negative token usage in chat response");
    return r;
}

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
    const auto& url = config_.base_url;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("base URL needs a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    scheme_host_port_ = url.substr(0, path_start);
    path_prefix_ = path_start == std::string::npos ? std::string() : url.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
    if (config_.retry.max_attempts < 1) throw ConfigError("retry.max_attempts must be >= 1");
    if (!config_.sleep) {
        config_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    }
}

int HttpBackend::last_attempts() const { return t_last_attempts; }

CompletionResult HttpBackend::attempt(const std::string& body) const {
    httplib::Client client(scheme_host_port_);
    const auto secs = static_cast<time_t>(config_.timeout.count());
    client.set_connection_timeout(secs, 0);
    client.set_read_timeout(secs, 0);
    client.set_write_timeout(secs, 0);
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

    const auto start = std::chrono::steady_clock::now();
    auto res = client.Post(path_prefix_ + "/chat/completions", headers, body, "application/json");
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    if (!res) {
        const auto err = res.error();
        if (err == httplib::Error::Read || err == httplib::Error::Write || err == httplib::Error::ConnectionTimeout) {
            throw TimeoutError("request to " + scheme_host_port_ + " timed out or was cut off: " + httplib::to_string(err));
        }
        throw TransportError("request to " + scheme_host_port_ + " failed: " + httplib::to_string(err));
    }
    auto result = parse_chat_response(res->body, res->status);
    result.latency_seconds = elapsed.count();
    result.backend_id = id();
    return result;
}

CompletionResult HttpBackend::complete(std::span<const ChatMessage> history, double temperature) {
    validate_history(history);
    const std::string body = build_chat_request(history, config_.model, temperature);
    auto backoff = config_.retry.initial_backoff;
    t_last_attempts = 0;
    for (int i = 1;; ++i) {
        t_last_attempts = i;
        try {
            return attempt(body);
        } catch (const GatewayError& e) {
            if (!e.retryable() || i >= config_.retry.max_attempts) throw;
        }
        config_.sleep(backoff);
        backoff = std::chrono::milliseconds(
            static_cast<long long>(static_cast<double>(backoff.count()) * config_.retry.multiplier));
    }
}

}  // namespace ibn

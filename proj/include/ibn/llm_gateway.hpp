#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ibn {

enum class Role { system, user, assistant };

std::string_view to_string(Role role);

struct ChatMessage {
    Role role = Role::user;
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

struct CompletionResult {
    std::string text;
    long long prompt_tokens = 0;
    long long completion_tokens = 0;
    double latency_seconds = 0.0;
    std::string backend_id;
};

struct TokenUsage {
    long long prompt_tokens = 0;
    long long completion_tokens = 0;
    double wall_seconds = 0.0;
    int calls = 0;

    long long total_tokens() const { return prompt_tokens + completion_tokens; }
    TokenUsage& operator+=(const TokenUsage& other);
    TokenUsage& operator+=(const CompletionResult& call);
};

/// One chat-completion provider. Implementations must tolerate concurrent calls.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual CompletionResult complete(std::span<const ChatMessage> history, double temperature) = 0;
    virtual std::string id() const = 0;
};

/// Throws ValidationError unless the history is non-empty, starts with a system
/// message, and every system/user message has content.
void validate_history(std::span<const ChatMessage> history);

// ---------------------------------------------------------------------------
// Scripted backend

struct ScriptedExchange {
    std::optional<std::string> expect_contains;  // substring of the last message
    std::optional<std::string> expect_system;    // substring of the system prompt
    std::string response;
    std::optional<long long> prompt_tokens;
    std::optional<long long> completion_tokens;
    double latency_seconds = 0.0;
};

/// Replays exchanges strictly in order and never touches the network. Token
/// counts fall back to characters / 4 when the exchange leaves them unset.
class ScriptedBackend final : public ChatBackend {
public:
    explicit ScriptedBackend(std::vector<ScriptedExchange> script, std::string id = "scripted");

    CompletionResult complete(std::span<const ChatMessage> history, double temperature) override;
    std::string id() const override { return id_; }

    std::size_t consumed() const;
    std::size_t remaining() const;
    /// Temperatures received, in call order.
    std::vector<double> temperatures() const;

private:
    std::vector<ScriptedExchange> script_;
    std::string id_;
    mutable std::mutex mu_;
    std::size_t next_ = 0;
    std::vector<double> temperatures_;
};

/// Named scripts loaded from a fixture document. Accepted shapes:
///   [ exchange, ... ]                       -> single script under key "*"
///   {"exchanges": [ ... ]}                  -> single script under key "*"
///   {"scripts": {"<key>": [ ... ], ...}}    -> one script per key
/// Exchange fields: response (required), matcher {contains, system},
/// prompt_tokens, completion_tokens, latency_seconds.
struct ScriptLibrary {
    std::map<std::string, std::vector<ScriptedExchange>, std::less<>> scripts;

    /// Looks up "<system>/<scenario>", then "<scenario>", then "*".
    const std::vector<ScriptedExchange>* find(std::string_view system, std::string_view scenario) const;
};

ScriptLibrary load_script_library(std::string_view document);
ScriptLibrary load_script_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Live backend (OpenAI-compatible chat completions)

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{500};
    double multiplier = 2.0;
};

struct HttpBackendConfig {
    std::string base_url;  // e.g. https://api.example.com/v1
    std::string model;
    std::string api_key;
    RetryPolicy retry;
    std::chrono::seconds timeout{120};
    /// Replaceable for tests; defaults to std::this_thread::sleep_for.
    std::function<void(std::chrono::milliseconds)> sleep;
};

/// Reads IBN_LLM_BASE_URL, IBN_LLM_MODEL and IBN_LLM_API_KEY. Throws ConfigError
/// when the base URL or model is missing.
HttpBackendConfig http_config_from_env();

/// Request body for POST {base_url}/chat/completions.
std::string build_chat_request(std::span<const ChatMessage> history, std::string_view model, double temperature);

/// Extracts assistant text and provider-reported usage. Throws ProviderError on
/// an error payload and ParseError on an unexpected shape.
CompletionResult parse_chat_response(std::string_view body, int status = 200);

class HttpBackend final : public ChatBackend {
public:
    explicit HttpBackend(HttpBackendConfig config);

    CompletionResult complete(std::span<const ChatMessage> history, double temperature) override;
    std::string id() const override { return "live:" + config_.model; }

    /// Attempts made by the most recent complete() call on this thread.
    int last_attempts() const;

private:
    CompletionResult attempt(const std::string& body) const;

    HttpBackendConfig config_;
    std::string scheme_host_port_;
    std::string path_prefix_;
};

// ---------------------------------------------------------------------------
// Session: one agent run's view of a backend, with usage accounting

class Session {
public:
    explicit Session(ChatBackend& backend) : backend_(&backend) {}

    /// Validates the history, forwards it, and records usage of the successful call.
    CompletionResult complete(std::span<const ChatMessage> history, double temperature = 0.0);

    TokenUsage total_usage() const;
    const std::vector<CompletionResult>& calls() const { return calls_; }
    ChatBackend& backend() const { return *backend_; }

private:
    ChatBackend* backend_;
    std::vector<CompletionResult> calls_;
};

TokenUsage total_usage(const Session& session);

/// Hands out a backend per (system, scenario) run. Scripted factories return a
/// fresh replay per call so repeats are independent sessions.
class BackendFactory {
public:
    virtual ~BackendFactory() = default;
    virtual std::shared_ptr<ChatBackend> open(std::string_view system, std::string_view scenario) = 0;
    virtual bool is_live() const = 0;
};

class ScriptedBackendFactory final : public BackendFactory {
public:
    explicit ScriptedBackendFactory(ScriptLibrary library) : library_(std::move(library)) {}
    std::shared_ptr<ChatBackend> open(std::string_view system, std::string_view scenario) override;
    bool is_live() const override { return false; }

private:
    ScriptLibrary library_;
};

class LiveBackendFactory final : public BackendFactory {
public:
    explicit LiveBackendFactory(HttpBackendConfig config);
    std::shared_ptr<ChatBackend> open(std::string_view, std::string_view) override { return backend_; }
    bool is_live() const override { return true; }

private:
    std::shared_ptr<HttpBackend> backend_;
};

/// "live" or "scripted:<fixture path>".
std::unique_ptr<BackendFactory> make_backend_factory(std::string_view selection);

}  // namespace ibn

#pragma once

#include <stdexcept>
#include <string>

namespace ibn {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document (state, lexicon, scenario suite, fixture, action line).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

class UnknownIdError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ProvisioningError : public Error {
public:
    using Error::Error;
};

class PromptError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Any failure talking to a chat-completion backend. `retryable()` drives the retry loop.
class GatewayError : public Error {
public:
    GatewayError(const std::string& what, bool retryable) : Error(what), retryable_(retryable) {}
    bool retryable() const noexcept { return retryable_; }

private:
    bool retryable_;
};

class TransportError : public GatewayError {
public:
    explicit TransportError(const std::string& what) : GatewayError(what, true) {}
};

class TimeoutError : public GatewayError {
public:
    explicit TimeoutError(const std::string& what) : GatewayError(what, true) {}
};

class ProviderError : public GatewayError {
public:
    ProviderError(const std::string& what, int status)
        : GatewayError(what, status == 429 || status >= 500), status_(status) {}
    int status() const noexcept { return status_; }

private:
    int status_;
};

/// Scripted backend ran out of exchanges or a prompt matcher did not match.
class ScriptError : public GatewayError {
public:
    explicit ScriptError(const std::string& what) : GatewayError(what, false) {}
};

}  // namespace ibn

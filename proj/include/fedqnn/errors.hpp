#pragma once

#include <stdexcept>
#include <string>

namespace fedqnn {

// Invalid configuration detected before any work starts.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad argument to an individual operation.
struct ArgumentError : std::invalid_argument {
    explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Non-finite values encountered during optimization.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Framing / checksum failures on the wire.
struct TransportError : std::runtime_error {
    explicit TransportError(const std::string& msg) : std::runtime_error(msg) {}
};

// Federated round contract violations (mixed rounds, duplicate clients, stragglers).
struct ProtocolError : std::runtime_error {
    explicit ProtocolError(const std::string& msg) : std::runtime_error(msg) {}
};

// CSV ingestion failures.
struct IngestionError : std::runtime_error {
    explicit IngestionError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fedqnn

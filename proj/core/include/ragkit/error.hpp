#pragma once

#include <stdexcept>
#include <string>

namespace ragkit {

enum class ErrorKind {
    load,        // file or corpus could not be read
    validation,  // input violates a documented invariant
    argument,    // bad call-site argument (dimension mismatch, k = 0, ...)
    provider,    // transport or backend failure after retries
    protocol,    // backend answered but the payload breaks the wire contract
    fixture,     // scripted provider has no response for a prompt digest
    format,      // persisted artifact is corrupt or version-mismatched
    extraction,  // triplet response wholly unparseable
    metric,      // judge output cannot be turned into a metric value
    schema,      // CSV/manifest misses a required column or field
    state,       // required store missing, run directory locked, ...
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + " error: " + message),
          kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace ragkit

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace rocem {

/// Library error carrying a stable machine-readable code alongside the
/// human-readable message. Codes ("invalid-dimension",
/// "identifiability-violation", "parse-error", ...) are part of the public
/// contract; the CLI maps them to structured JSON error objects.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

} // namespace rocem

#pragma once
#include <stdexcept>
#include <string>
#include <utility>

namespace spinortrace {

/* All user-facing failures carry a stable machine-readable code; the CLI maps
 * them straight into the JSON error envelope. */
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

}  // namespace spinortrace

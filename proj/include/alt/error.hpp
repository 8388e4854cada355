#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace alt {

// Library errors carry a short machine-readable category alongside the
// message. Categories: "parse", "config", "data", "io", "compute".
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}

    const std::string& category() const { return category_; }

private:
    std::string category_;
};

[[noreturn]] inline void fail(const char* category, const std::string& message) {
    throw Error(category, message);
}

} // namespace alt

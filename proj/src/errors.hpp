#pragma once

#include <stdexcept>
#include <string>

namespace edgelaw {

struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NumericFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a backward integration leaves its stable range.
struct InstabilityError : NumericFailure {
    InstabilityError(const std::string& what, double at) : NumericFailure(what), t(at) {}
    double t;
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw InvalidArgument(msg);
}

}  // namespace edgelaw

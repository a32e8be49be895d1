#pragma once

#include <stdexcept>
#include <string>

namespace ydss {

/// Input that breaks a documented contract: malformed files, unknown
/// attributes or levels, out-of-range options. The CLI maps it to exit code 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ydss

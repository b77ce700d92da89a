#pragma once

#include <stdexcept>
#include <string>

namespace spclust {

/// Malformed or inconsistent input data (bad CSV, id mismatch, support violation).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Writes "[spclust] warning: <msg>" to stderr unless warnings are silenced.
void warn(const std::string& msg);
void set_warnings_enabled(bool enabled);
bool warnings_enabled();

} // namespace spclust

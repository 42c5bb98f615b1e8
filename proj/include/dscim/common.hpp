#pragma once

#include <stdexcept>
#include <string>

namespace dscim {

/// Bad user-supplied data (CSV contents, trace files, shapes). CLI exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad configuration (macro geometry, PRNG spec, mode presets). CLI exit code 3.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A library-internal invariant tripped (e.g. mutual exclusion violated).
/// Always a bug, never a user error. CLI exit code 4.
struct InvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dscim

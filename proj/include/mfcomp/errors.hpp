#pragma once

#include <stdexcept>
#include <string>

namespace mfcomp {

// Process exit codes used by the command line tool. Library code throws the
// exception types below; the tool maps them onto these codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitBadArgs = 2,
    kExitInputError = 3,
    kExitNumericError = 4,
};

// Invalid configuration or argument combination.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Unreadable, malformed or out-of-domain input data.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A computation that cannot proceed (degenerate sample, non-finite value,
// divergent moment at the requested order, ...).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mfcomp

#ifndef GENECLUSTER_ERROR_HPP
#define GENECLUSTER_ERROR_HPP

#include <stdexcept>
#include <string>

namespace genecluster {

/// Input data violates an operation's contract: malformed file, degenerate
/// row/column, impossible parameter combination. The CLI maps this to exit
/// code 2; anything else unexpected maps to 3.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configuration document cannot be parsed or fails validation. The CLI
/// treats this as a usage error (exit code 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace genecluster

#endif  // GENECLUSTER_ERROR_HPP

#ifndef MAGSOLVE_ERRORS_HPP
#define MAGSOLVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace magsolve {

/// Bad user input: malformed config files, inconsistent geometry, bad curve data.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

/// A numerical contract was violated at runtime (non-SPD system, line search
/// exhausted, certification of bounds failed).
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Requested combination of method and material is not defined, e.g. the
/// chord-reluctivity metric on an anisotropic law.
class UnsupportedMethodError : public std::runtime_error {
public:
  explicit UnsupportedMethodError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace magsolve

#endif

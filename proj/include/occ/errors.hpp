#ifndef OCC_ERRORS_HPP
#define OCC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace occ {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller contract was violated (e.g. overlapping fresh-id ranges in merge).
class ContractViolation : public Error {
public:
  explicit ContractViolation(const std::string& what) : Error(what) {}
};

/// A limiting ratio was requested for a regime where the theory does not
/// define it (e.g. R_{n,k}/R_n for k >= 2 under a partly diffuse law).
class UnsupportedRatio : public Error {
public:
  explicit UnsupportedRatio(const std::string& what) : Error(what) {}
};

/// An estimator was asked for a quantity the data cannot determine
/// (empty spectrum, no repeated states, ...).
class UndefinedEstimate : public Error {
public:
  explicit UndefinedEstimate(const std::string& what) : Error(what) {}
};

/// Malformed configuration or input file.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

} // namespace occ

#endif

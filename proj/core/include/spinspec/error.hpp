#pragma once

#include <stdexcept>
#include <string>

namespace spinspec {

// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
  domain,     // bad argument or out-of-domain request
  config,     // invalid scenario/configuration
  numerical,  // eigensolver, quadrature or optimizer failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error domain_error(const std::string& what) {
  return Error(ErrorKind::domain, what);
}
inline Error config_error(const std::string& what) {
  return Error(ErrorKind::config, what);
}
inline Error numerical_error(const std::string& what) {
  return Error(ErrorKind::numerical, what);
}

}  // namespace spinspec

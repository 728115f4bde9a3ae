#include "qode/errors.hpp"

namespace qode {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::input: return "input";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::precondition: return "precondition";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

}  // namespace qode

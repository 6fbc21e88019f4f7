#pragma once

#include <stdexcept>
#include <string>

namespace schreier {

enum class ErrorKind {
  invalid_argument,
  parse,
  not_limit,
  not_member,
  not_maximal,
  precondition,
  cap_exceeded,
  not_found,
  internal,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::parse: return "parse";
    case ErrorKind::not_limit: return "not_limit";
    case ErrorKind::not_member: return "not_member";
    case ErrorKind::not_maximal: return "not_maximal";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::cap_exceeded: return "cap_exceeded";
    case ErrorKind::not_found: return "not_found";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace schreier

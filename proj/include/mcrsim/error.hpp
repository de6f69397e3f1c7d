#pragma once

#include <stdexcept>
#include <string>

namespace mcrsim {

enum class ErrorCode {
  parse = 1,
  invariant,
  argument,
  numerical,
  infeasible,
  io,
};

// Every failure raised by the library carries one of the codes above; the C
// API maps them 1:1 onto mcr_status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mcrsim

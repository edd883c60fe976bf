#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ssm {

enum class ErrorCode {
  argument,
  normalization_required,
  resolution_exceeded,
  empty_restriction,
  budget_exceeded,
  uncertain_zero,
  unsupported,
  hypothesis_not_met,
  degenerate,
  config,
  parse,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace ssm

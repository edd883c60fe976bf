#include "ssm/errors.hpp"

namespace ssm {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::argument: return "argument";
    case ErrorCode::normalization_required: return "normalization_required";
    case ErrorCode::resolution_exceeded: return "resolution_exceeded";
    case ErrorCode::empty_restriction: return "empty_restriction";
    case ErrorCode::budget_exceeded: return "budget_exceeded";
    case ErrorCode::uncertain_zero: return "uncertain_zero";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::hypothesis_not_met: return "hypothesis_not_met";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::config: return "config";
    case ErrorCode::parse: return "parse";
  }
  return "unknown";
}

}  // namespace ssm

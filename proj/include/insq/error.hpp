#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace insq {

enum class ErrorCode {
  kInvalidArgument,
  kNotFound,
  kDuplicateId,
  kCoincidentSites,
  kTooFewSites,
  kConnectivity,
  kInvalidLength,
  kMalformed,
  kSchema,
  kTrajectory,
  kConflict,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library. `field` names the offending
// scenario field or edit parameter when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string field = {})
      : std::runtime_error(message), code_(code), field_(std::move(field)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

}  // namespace insq

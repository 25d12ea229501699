#include "insq/error.hpp"

namespace insq {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kDuplicateId: return "duplicate_id";
    case ErrorCode::kCoincidentSites: return "coincident_sites";
    case ErrorCode::kTooFewSites: return "too_few_sites";
    case ErrorCode::kConnectivity: return "connectivity";
    case ErrorCode::kInvalidLength: return "invalid_length";
    case ErrorCode::kMalformed: return "malformed";
    case ErrorCode::kSchema: return "schema";
    case ErrorCode::kTrajectory: return "trajectory";
    case ErrorCode::kConflict: return "conflict";
  }
  return "unknown";
}

}  // namespace insq

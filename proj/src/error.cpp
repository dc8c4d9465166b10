#include "elicit/error.hpp"

namespace elicit {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::QOutOfRange: return "QOutOfRange";
    case ErrorCode::CostOutOfRange: return "CostOutOfRange";
    case ErrorCode::BadFunctionTable: return "BadFunctionTable";
    case ErrorCode::StateExhausted: return "StateExhausted";
    case ErrorCode::TargetNotInGraph: return "TargetNotInGraph";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::PolicyFailed: return "PolicyFailed";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace elicit

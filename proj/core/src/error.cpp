#include "goal/error.hpp"

namespace goal {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
      return "CONFIG_ERROR";
    case ErrorCode::kData:
      return "DATA_ERROR";
    case ErrorCode::kNumerical:
      return "NUMERICAL_ERROR";
  }
  return "UNKNOWN_ERROR";
}

}  // namespace goal

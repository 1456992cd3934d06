#include "obstower/error.hpp"

namespace obstower {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NotNormal: return "NotNormal";
    case Errc::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case Errc::MixedTargets: return "MixedTargets";
    case Errc::NotACocycle: return "NotACocycle";
    case Errc::TargetMismatch: return "TargetMismatch";
    case Errc::DegreeTooLarge: return "DegreeTooLarge";
    case Errc::RamificationMismatch: return "RamificationMismatch";
    case Errc::IncompatibleLocalData: return "IncompatibleLocalData";
    case Errc::TruncationInsufficient: return "TruncationInsufficient";
    case Errc::NotAbelian: return "NotAbelian";
    case Errc::NotAbelianKernel: return "NotAbelianKernel";
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::Inadmissible: return "Inadmissible";
  }
  return "Unknown";
}

}  // namespace obstower

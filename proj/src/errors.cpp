#include "selfsched/errors.hpp"

namespace selfsched {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDate: return "InvalidDate";
    case ErrorCode::InvalidMonth: return "InvalidMonth";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidField: return "InvalidField";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::DuplicateWorkerId: return "DuplicateWorkerId";
    case ErrorCode::AnchorNotSaturday: return "AnchorNotSaturday";
    case ErrorCode::NegativeHours: return "NegativeHours";
    case ErrorCode::UnknownWorker: return "UnknownWorker";
    case ErrorCode::SlotOutsideCycle: return "SlotOutsideCycle";
    case ErrorCode::CycleExists: return "CycleExists";
    case ErrorCode::UnknownCycle: return "UnknownCycle";
    case ErrorCode::PhaseClosed: return "PhaseClosed";
    case ErrorCode::DateOutsideCycle: return "DateOutsideCycle";
    case ErrorCode::QuotaExceeded: return "QuotaExceeded";
    case ErrorCode::FreeWeekend: return "FreeWeekend";
    case ErrorCode::WholeDayOnWeekend: return "WholeDayOnWeekend";
    case ErrorCode::DuplicateWish: return "DuplicateWish";
    case ErrorCode::PriorityDisabled: return "PriorityDisabled";
    case ErrorCode::PriorityTaken: return "PriorityTaken";
    case ErrorCode::UnknownWish: return "UnknownWish";
    case ErrorCode::NotOwner: return "NotOwner";
    case ErrorCode::AlreadyWithdrawn: return "AlreadyWithdrawn";
    case ErrorCode::InvalidTransition: return "InvalidTransition";
    case ErrorCode::Unauthenticated: return "Unauthenticated";
    case ErrorCode::Forbidden: return "Forbidden";
    case ErrorCode::SelfSwap: return "SelfSwap";
    case ErrorCode::NotAssigned: return "NotAssigned";
    case ErrorCode::UnknownSwap: return "UnknownSwap";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::VolunteerUnavailable: return "VolunteerUnavailable";
    case ErrorCode::EmptyConflict: return "EmptyConflict";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::UnknownConflict: return "UnknownConflict";
    case ErrorCode::UnresolvedConflicts: return "UnresolvedConflicts";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::NoDraft: return "NoDraft";
    case ErrorCode::HardViolationsPresent: return "HardViolationsPresent";
    case ErrorCode::StaleSnapshot: return "StaleSnapshot";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::CorruptLog: return "CorruptLog";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NotFound: return "NotFound";
  }
  return "Unknown";
}

PlanningError::PlanningError(ErrorCode code, const std::string& message,
                             nlohmann::json detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      detail_(std::move(detail)) {}

}  // namespace selfsched

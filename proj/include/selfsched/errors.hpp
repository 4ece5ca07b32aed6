#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace selfsched {

enum class ErrorCode {
  InvalidDate,
  InvalidMonth,
  ParseError,
  InvalidField,
  InvalidConfig,
  DuplicateWorkerId,
  AnchorNotSaturday,
  NegativeHours,
  UnknownWorker,
  SlotOutsideCycle,
  CycleExists,
  UnknownCycle,
  PhaseClosed,
  DateOutsideCycle,
  QuotaExceeded,
  FreeWeekend,
  WholeDayOnWeekend,
  DuplicateWish,
  PriorityDisabled,
  PriorityTaken,
  UnknownWish,
  NotOwner,
  AlreadyWithdrawn,
  InvalidTransition,
  Unauthenticated,
  Forbidden,
  SelfSwap,
  NotAssigned,
  UnknownSwap,
  ValidationFailed,
  VolunteerUnavailable,
  EmptyConflict,
  NoSolution,
  UnknownConflict,
  UnresolvedConflicts,
  BudgetExhausted,
  Infeasible,
  NoDraft,
  HardViolationsPresent,
  StaleSnapshot,
  EmptyWindow,
  CorruptLog,
  IoError,
  NotFound,
};

std::string_view to_string(ErrorCode code);

/// Domain error carrying a stable code and an optional structured detail
/// (for example a serialized ValidationReport). The HTTP layer maps codes to
/// status numbers and ships `detail` verbatim in the error body.
class PlanningError : public std::runtime_error {
 public:
  PlanningError(ErrorCode code, const std::string& message,
                nlohmann::json detail = nullptr);

  ErrorCode code() const noexcept { return code_; }
  const nlohmann::json& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  nlohmann::json detail_;
};

}  // namespace selfsched

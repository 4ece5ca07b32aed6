#pragma once

#include <string>
#include <vector>

#include "instances.hpp"

namespace selfsched::oracle {

struct OracleSlot {
  ShiftSlot slot;
  int staff = 0;
  int certified = 0;

  friend bool operator==(const OracleSlot&, const OracleSlot&) = default;
};

struct OracleConflict {
  std::vector<OracleSlot> slots;
  std::vector<std::string> involved;
  /// Minimal withdrawal sets, each sorted by (worker, date, scope, id),
  /// listed by size then lexicographically by that key sequence.
  std::vector<std::vector<std::string>> solutions;
};

struct OracleDetection {
  std::vector<OracleConflict> conflicts;
  std::vector<OracleSlot> uncovered;
};

/// Brute force straight from the definitions: recount availability per
/// slot, try every subset of the pending wishes, keep the subsets that clear
/// a component's deficits and have no clearing proper subset.
OracleDetection brute_force_conflicts(const testing::Instance& instance);

}  // namespace selfsched::oracle

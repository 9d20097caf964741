#ifndef TESTS_NUMERIC_ORACLE_H
#define TESTS_NUMERIC_ORACLE_H

#include "radar/grounding.h"

#include <cstddef>
#include <optional>
#include <span>

namespace radar::test {
/*
  Breadth-first search over ground actions with numeric fluents, written
  against the data layout only (it does not call the library's
  applicability or successor functions). Returns the length of a shortest
  plan reaching `goal` through states that contain no atom of `avoid`,
  nullopt if none exists. `complete` is cleared when the state cap is hit.
*/
std::optional<int> shortest_plan(const State &start, const AtomSet &goal,
                                 std::span<const GroundAction> actions, bool &complete,
                                 const AtomSet &avoid = {}, std::size_t cap = 100000);

// Copies of the actions without numeric preconditions.
std::vector<GroundAction> without_numeric(std::span<const GroundAction> actions);
}

#endif

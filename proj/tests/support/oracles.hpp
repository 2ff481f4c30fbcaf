// Reference implementations for oracle tests.  Deliberately naive: each
// decision is re-derived from the raw data instead of reusing any library
// state, so agreement with the production code is evidence, not tautology.
#pragma once

#include <cstddef>
#include <vector>

#include "lobflow/types.hpp"

namespace testsupport {

struct OracleRun {
  std::vector<std::size_t> trade_indices;  // indices into the event vector
  lobflow::Side aggressor = lobflow::Side::Unknown;
};

// Scans the stream left to right.  A trade joins the open run only when
// every rule holds against the whole run re-checked from scratch:
// stream-adjacency, no partial execution before it, first-to-last span
// within the window, and at most one distinct visible resting side.
std::vector<OracleRun> oracle_consolidate(const std::vector<lobflow::Event>& events,
                                          lobflow::TimestampMs window_ms);

// Sup of |Fa - Fb| over the union of both sample grids, with each ECDF
// evaluated by counting.
double oracle_ks(std::vector<double> a, std::vector<double> b);

}  // namespace testsupport

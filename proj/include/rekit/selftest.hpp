#pragma once

#include <ostream>

namespace rekit {

/// Condensed invariant battery (elementary properties, transform laws,
/// atom decomposition, symmetrization round-trip, kernel closed forms,
/// the bundled fixtures). Prints one line per check; returns the number
/// of failures.
int run_selftest(std::ostream& out);

}  // namespace rekit

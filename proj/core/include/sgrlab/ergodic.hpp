#pragma once

#include <optional>

#include "sgrlab/model.hpp"

namespace sgrlab {

enum class ErgodicStatus { ergodic, not_ergodic, inconclusive };

struct ErgodicityResult {
  ErgodicStatus status = ErgodicStatus::inconclusive;
  /// Smallest product length for which every product is positive.
  std::optional<int> witness_length;

  bool ergodic() const { return status == ErgodicStatus::ergodic; }
};

/// Decides over the boolean semiring whether every product of g matrices
/// drawn from the set is all-positive for some g <= g_max.
///
/// The sets of reachable product patterns S_1, S_2, ... are generated
/// breadth first; a repeated set means the sequence has become periodic
/// without a witness, so the result is not_ergodic. Reaching g_max first
/// yields inconclusive. Depends only on the incidence patterns.
ErgodicityResult check_ergodic_set(const EnvironmentSet& envs, int g_max = 64);

const char* to_string(ErgodicStatus status);

}  // namespace sgrlab

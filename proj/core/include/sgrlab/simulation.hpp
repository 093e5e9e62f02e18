#pragma once

#include <cstdint>
#include <vector>

#include "sgrlab/model.hpp"
#include "sgrlab/parallel.hpp"

namespace sgrlab {

struct SimParams {
  std::int64_t samples = 500;  // trajectories N
  std::int64_t steps = 600;    // steps per trajectory T
  std::int64_t burn_in = 100;  // discarded initial steps
  std::uint64_t seed = 20190901;

  /// Throws ValidationError unless N >= 1 and T > burn_in >= 0.
  void validate() const;
};

/// Monte-Carlo estimate of log lambda_S.
struct SgrEstimate {
  double log_sgr_mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  std::int64_t steps = 0;
  std::int64_t burn_in = 0;
  std::uint64_t seed = 0;
};

/// splitmix64 finalizer applied to (base, index); used for every derived
/// stream so results never depend on scheduling.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// One trajectory: z <- A z / |A z|_1 every step, returning the average of
/// log |A z|_1 over steps burn_in+1..T. IID chains draw each environment
/// from pi; Markov chains start from a stationary draw.
double simulate_log_growth(const ModelSpec& model, std::int64_t steps, std::int64_t burn_in,
                           std::uint64_t seed);

/// N independent trajectories seeded by derive_seed(params.seed, k). Mean and
/// standard error (sample SD / sqrt N) are reduced in trajectory order, so
/// the result is bit-identical for any worker count.
SgrEstimate estimate_sgr(const ModelSpec& model, const SimParams& params,
                         unsigned workers = default_workers());

/// Normalized population structure z(t)/|z(t)|_1 for t = 0..steps, one column
/// per time, along a trajectory drawn exactly as in simulate_log_growth.
Matrix simulate_structure(const ModelSpec& model, std::int64_t steps, std::uint64_t seed);

}  // namespace sgrlab

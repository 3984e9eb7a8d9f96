#pragma once

#include <cstdint>
#include <vector>

#include "tenfold/ensembles.hpp"
#include "tenfold/error.hpp"
#include "tenfold/parallel.hpp"
#include "tenfold/rng.hpp"
#include "tenfold/structure.hpp"

namespace tenfold {

/// Variance of each free parameter: sigma2_eff for off-diagonal positions,
/// 2 * sigma2_eff on the diagonals of (skew)symmetric or hermitian blocks.
inline std::vector<double> parameter_variances(const EnsembleSpec& ensemble) {
  const double unit = ensemble.sigma2_eff();
  std::vector<double> out;
  for (const Slot& sl : coordinate_slots(ensemble.shape)) out.push_back(sl.diagonal ? 2.0 * unit : unit);
  return out;
}

/// Seed of replicate `rep` under `master_seed`.
inline std::uint64_t replicate_seed(std::uint64_t master_seed, std::uint64_t rep) {
  return mix_seed(master_seed, rep);
}

/// One draw from GE(sigma2/n) using the stream of replicate `rep`.
inline StructuredMatrix sample_one(const EnsembleSpec& ensemble, std::uint64_t master_seed, std::uint64_t rep) {
  GaussianStream g(replicate_seed(master_seed, rep));
  std::vector<double> params = parameter_variances(ensemble);
  for (double& v : params) v = g(v);
  return build(ensemble.shape, params);
}

struct SampleBatch {
  EnsembleSpec ensemble;
  std::uint64_t master_seed = 0;
  int reps = 0;
  std::vector<StructuredMatrix> matrices;
};

inline void require_reps(int reps) {
  if (reps < 1) throw Error(ErrorCode::InvalidReps, "reps must be at least 1, got " + std::to_string(reps));
}

/// Draws `reps` matrices. Replicate r always uses stream replicate_seed(seed, r),
/// so the batch is identical for any thread count.
inline SampleBatch sample(const EnsembleSpec& ensemble, std::uint64_t seed, int reps, int threads = 1) {
  require_reps(reps);
  SampleBatch batch{ensemble, seed, reps, {}};
  batch.matrices.resize(static_cast<std::size_t>(reps));
  parallel_for(batch.matrices.size(), threads,
               [&](std::size_t r) { batch.matrices[r] = sample_one(ensemble, seed, r); });
  return batch;
}

/// -Tr(X^2) / (phi * sigma2_eff): the log of the invariant Gaussian density
/// up to its normalization.
inline double log_density_unnormalized(const StructuredMatrix& m, const EnsembleSpec& ensemble) {
  if (!(m.shape == ensemble.shape)) {
    throw Error(ErrorCode::StructureViolation, "matrix shape does not match the ensemble");
  }
  require_valid(m);
  return -m.entries.frobenius2() / (ensemble.spec().phi * ensemble.sigma2_eff());
}

}  // namespace tenfold

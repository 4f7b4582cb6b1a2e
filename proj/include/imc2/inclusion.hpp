#pragma once

#include <cstdint>
#include <variant>

#include "imc2/membership.hpp"
#include "imc2/nba.hpp"
#include "imc2/sampler.hpp"

namespace imc2 {

// ceil(ln delta / ln(1 - epsilon)); the quotient is scaled by (1 - 1e-12)
// before the ceiling so exact integers are not bumped by rounding noise.
// Throws ParameterError unless both arguments lie in (0, 1).
std::uint64_t required_samples(double epsilon, double delta);

struct StatParams {
  double epsilon = 0.001;
  double delta = 0.02;
  std::uint64_t samples = 0;  // M, derived

  static StatParams make(double epsilon, double delta) {
    return {epsilon, delta, required_samples(epsilon, delta)};
  }
};

struct NotIncluded {
  UPWord counterexample;  // normalized
  std::uint64_t samples_used = 0;
};

struct NoCounterexampleFound {
  std::uint64_t samples = 0;
};

// L(A) is empty after trimming.
struct TriviallyIncluded {};

using Verdict = std::variant<NotIncluded, NoCounterexampleFound, TriviallyIncluded>;

// max(n_A, n_B), at least 2.
unsigned default_k(const Nba& a, const Nba& b);

struct CheckOptions {
  unsigned workers = 1;
};

/// Monte Carlo non-inclusion test of L(a) in L(b).
///
/// Trims a, then draws up to stat.samples terminating k-lassos. Sample i uses
/// an Rng seeded with derive_seed(sample.seed, i). Candidate words of a lasso
/// are tried in anchor order; the first word in L(a) but not in L(b) ends the
/// run. With several workers the result is the witness of the lowest sample
/// index, so it matches the single-worker run bit for bit.
///
/// A NotIncluded verdict is re-verified with member() before it is returned;
/// a failed re-check is a bug and throws std::logic_error.
Verdict check_inclusion(const Nba& a, const Nba& b, const StatParams& stat, const SampleParams& sample,
                        const CheckOptions& options = {});

}  // namespace imc2

#pragma once

#include <cstdint>
#include <vector>

#include "imc2/membership.hpp"
#include "imc2/nba.hpp"
#include "imc2/rng.hpp"

namespace imc2 {

struct SampleParams {
  unsigned k = 2;        // occurrence bound, >= 2
  double p_stop = 0.5;   // stopping probability, in (0, 1)
  std::uint64_t seed = 0;
};

// Throws ParameterError unless k >= 2 and 0 < p_stop < 1.
void check_sample_params(const SampleParams& p);

/// A terminated K-lasso q0 a0 q1 ... an q(n+1).
///
/// states has one more entry than letters. anchors lists every i <= n with
/// q_i == q_(n+1), ascending.
struct TerminatingLasso {
  std::vector<StateId> states;
  std::vector<Letter> letters;
  std::vector<std::size_t> anchors;

  StateId last() const { return states.back(); }
  StateOccurrence occurrences() const { return StateOccurrence(states); }

  friend bool operator==(const TerminatingLasso&, const TerminatingLasso&) = default;
  friend auto operator<=>(const TerminatingLasso&, const TerminatingLasso&) = default;
};

// Builds the lasso for a finished run, computing the anchors.
TerminatingLasso make_lasso(std::vector<StateId> states, std::vector<Letter> letters);

// True iff l is a terminating k-lasso of a: starts in an initial state,
// follows transitions, every state of q0..qn occurs at most k-1 times in
// q0..qn, and the last state occurs earlier (so at most k times overall).
bool is_k_lasso(const Nba& a, const TerminatingLasso& l, unsigned k);

// One candidate word per anchor, normalized, duplicates dropped, in anchor
// order.
std::vector<IndexedWord> words_of(const TerminatingLasso& l);

// "s1 a s1 b s2" rendering with state and letter names.
std::string format_run(const Nba& a, const TerminatingLasso& l);

/// Random walk on a trimmed automaton.
///
/// The initial state is uniform over a.initial(). On entering a state whose
/// occurrence count in the run is c: if c == k the walk stops; if c >= 2 it
/// stops with probability p_stop; otherwise it takes one of the state's
/// outgoing transitions uniformly (uniform over (q, a, q') triples, not
/// letters). A returned lasso therefore has exactly the lasso probability
/// that oracle::enumerate_lassos assigns it.
class LassoSampler {
 public:
  // Throws ParameterError if a is not trimmed or params are out of range.
  LassoSampler(const Nba& a, unsigned k, double p_stop);

  TerminatingLasso sample(Rng& rng);

 private:
  const Nba& a_;
  unsigned k_;
  double p_stop_;
  std::vector<std::uint32_t> counts_;  // scratch, all zero between samples
};

}  // namespace imc2

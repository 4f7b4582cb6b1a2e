#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "imc2/membership.hpp"
#include "imc2/nba.hpp"
#include "imc2/sampler.hpp"

// Exhaustive ground truth used to check the sampler and the Monte Carlo
// driver. Everything here is exponential in the worst case and guarded by
// explicit size bounds.
namespace imc2::oracle {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::size_t kDefaultMaxNodes = 10'000'000;
inline constexpr std::size_t kDefaultComplementStates = 6;
inline constexpr std::size_t kDefaultMaxMacroStates = 2'000'000;

// Exact value of "3/8", "0.375" or "1". Throws ParameterError.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);

struct LassoProbability {
  TerminatingLasso lasso;
  Rational probability;
};

struct LassoDistribution {
  std::vector<LassoProbability> entries;  // depth-first order

  Rational total() const;
};

/// Node of the probability tree over terminating lassos.
///
/// Node 0 is the root: empty run, probability 1. Its children are the
/// one-state runs of the initial states. An inner node's children are its
/// one-transition extensions and, when the last state already occurred at
/// least twice, the terminated run (terminal == true). Every inner node's
/// probability is the sum of its children's.
struct EnumerationNode {
  std::vector<StateId> states;
  std::vector<Letter> letters;
  Rational probability;
  bool terminal = false;
  std::vector<std::size_t> children;
};

struct ProbabilityTree {
  std::vector<EnumerationNode> nodes;
};

// Throws ParameterError (untrimmed automaton, k < 2, p_stop outside (0,1))
// or GuardError once more than max_nodes nodes would be created.
ProbabilityTree build_probability_tree(const Nba& a, unsigned k, const Rational& p_stop,
                                       std::size_t max_nodes = kDefaultMaxNodes);

// Every terminating k-lasso of a with its exact probability; same guards.
LassoDistribution enumerate_lassos(const Nba& a, unsigned k, const Rational& p_stop,
                                   std::size_t max_nodes = kDefaultMaxNodes);

struct WitnessStats {
  LassoDistribution distribution;
  std::vector<bool> witness;  // parallel to distribution.entries
  Rational p_z;
  Rational q_z;
};

// Trims a, enumerates its lassos and splits the mass into witnesses (some
// candidate word in L(a) \ L(b)) and the rest. An empty L(a) gives p_z = 0,
// q_z = 1 over an empty table.
WitnessStats exact_pz(const Nba& a, const Nba& b, unsigned k, const Rational& p_stop,
                      std::size_t max_nodes = kDefaultMaxNodes);

/// Rank-based complement over b's alphabet extended by extra_letters.
///
/// Macro-states are (f, O): f a level ranking with ranks 0..2n and odd ranks
/// forbidden on accepting states, O the states still owing a visit to an odd
/// rank. Only reachable macro-states are built. Throws GuardError if b has
/// more than max_states states or the construction exceeds max_macro_states.
Nba complement(const Nba& b, std::span<const std::string> extra_letters = {},
               std::size_t max_states = kDefaultComplementStates,
               std::size_t max_macro_states = kDefaultMaxMacroStates);

// Two-copy Buchi product, reachable part only. Uses a's alphabet; letters
// that c lacks carry no transitions.
Nba intersect(const Nba& a, const Nba& c);

// Some accepting lasso of c as a normalized word, or nullopt if L(c) is
// empty. Picks the lowest-numbered accepting state on a reachable cycle, then
// a shortest stem to it and a shortest cycle through it.
std::optional<UPWord> find_accepted_word(const Nba& c);

struct Included {};
struct ExactNotIncluded {
  UPWord witness;
};
using ExactVerdict = std::variant<Included, ExactNotIncluded>;

// L(a) subset of L(b), decided via emptiness of a x complement(b).
ExactVerdict exact_inclusion(const Nba& a, const Nba& b, std::size_t max_b_states = kDefaultComplementStates);

// 2 (2n+2)^n 2^n + 1.
BigInt sufficient_k(unsigned n_b);

}  // namespace imc2::oracle

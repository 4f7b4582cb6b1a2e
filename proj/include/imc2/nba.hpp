#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace imc2 {

using StateId = std::uint32_t;
using Letter = std::uint32_t;  // index into Nba::alphabet()

struct Transition {
  Letter letter;
  StateId target;

  friend bool operator==(const Transition&, const Transition&) = default;
};

// Unchecked automaton description as produced by the format parsers and the
// random generator. validate() turns it into an Nba.
struct RawAutomaton {
  struct Edge {
    std::size_t source;
    std::string letter;
    std::size_t target;
  };

  std::vector<std::string> alphabet;
  std::size_t num_states = 0;
  // Optional; either empty or exactly num_states entries.
  std::vector<std::string> state_names;
  std::vector<std::size_t> initial;
  std::vector<std::size_t> accepting;
  std::vector<Edge> edges;
};

/// Nondeterministic Buchi automaton with state-based acceptance.
///
/// States are dense indices 0..n-1. Display names, when the automaton came
/// from a file, live in a side table and are only used for printing. An Nba
/// is immutable once built; every instance satisfies:
///  - the alphabet is non-empty and duplicate-free,
///  - every transition letter and endpoint is in range,
///  - the initial set is non-empty.
/// The trimmed() flag additionally certifies that every state is reachable,
/// has an outgoing transition and can reach an accepting state.
class Nba {
 public:
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  std::size_t num_letters() const { return alphabet_.size(); }
  std::size_t num_states() const { return out_.size(); }
  std::size_t num_transitions() const { return successors_.size(); }

  std::optional<Letter> find_letter(std::string_view symbol) const;

  // Outgoing transitions of q in declaration order; this is T(q).
  std::span<const Transition> out(StateId q) const { return out_[q]; }

  // Targets of q on letter a, ascending and duplicate-free.
  std::span<const StateId> successors(StateId q, Letter a) const {
    const std::size_t slot = static_cast<std::size_t>(q) * alphabet_.size() + a;
    return {successors_.data() + offsets_[slot], successors_.data() + offsets_[slot + 1]};
  }

  // Sorted ascending.
  const std::vector<StateId>& initial() const { return initial_; }
  const std::vector<StateId>& accepting() const { return accepting_; }
  bool is_initial(StateId q) const { return is_initial_[q] != 0; }
  bool is_accepting(StateId q) const { return is_accepting_[q] != 0; }

  bool has_state_names() const { return !names_.empty(); }
  // The display name, or the decimal index when the state is unnamed.
  std::string state_name(StateId q) const;

  bool trimmed() const { return trimmed_; }

  // Structural equality: same alphabet order, names, sets and transition
  // lists (order included).
  friend bool operator==(const Nba& lhs, const Nba& rhs);

 private:
  friend Nba validate(const RawAutomaton& raw);
  friend std::optional<Nba> trim(const Nba& a);
  friend class NbaBuilder;

  Nba() = default;
  void index();

  std::vector<std::string> alphabet_;
  std::unordered_map<std::string, Letter> letter_index_;
  std::vector<std::vector<Transition>> out_;
  std::vector<StateId> initial_;
  std::vector<StateId> accepting_;
  std::vector<std::uint8_t> is_initial_;
  std::vector<std::uint8_t> is_accepting_;
  std::vector<std::string> names_;
  bool trimmed_ = false;

  // CSR index of successors by (state, letter).
  std::vector<std::size_t> offsets_;
  std::vector<StateId> successors_;
};

// Index-based construction for code that already works with dense ids
// (products, complements). Checks the same invariants as validate().
class NbaBuilder {
 public:
  explicit NbaBuilder(std::vector<std::string> alphabet);

  StateId add_state(bool accepting = false);
  void set_initial(StateId q);
  void set_accepting(StateId q, bool accepting = true);
  void add_transition(StateId source, Letter letter, StateId target);
  void set_state_name(StateId q, std::string name);
  std::size_t num_states() const { return out_.size(); }

  Nba build() &&;

 private:
  std::vector<std::string> alphabet_;
  std::vector<std::vector<Transition>> out_;
  std::vector<std::uint8_t> initial_;
  std::vector<std::uint8_t> accepting_;
  std::vector<std::string> names_;
};

// Throws ValidationError naming the first violated invariant: empty
// alphabet, duplicate letter, dangling state, letter not in alphabet, empty
// initial set.
Nba validate(const RawAutomaton& raw);

// Restricts a to the states that are reachable from an initial state, can
// reach an accepting state and have a successor, iterating to a fixpoint.
// Survivors keep their relative order and names; the alphabet is kept as is.
// Returns nullopt when no initial state survives, i.e. L(a) is empty.
std::optional<Nba> trim(const Nba& a);

// Successor view of an Nba for the SCC routines in scc.hpp.
struct TransitionGraph {
  struct Targets {
    std::span<const Transition> out;
    std::size_t size() const { return out.size(); }
    StateId operator[](std::size_t k) const { return out[k].target; }
  };
  const Nba& a;
  std::size_t size() const { return a.num_states(); }
  Targets edges(StateId v) const { return {a.out(v)}; }
};

// L(a) is empty iff no reachable non-trivial SCC contains an accepting state.
bool is_empty(const Nba& a);

// count(run, q): how often each state occurs in a run prefix.
class StateOccurrence {
 public:
  StateOccurrence() = default;
  explicit StateOccurrence(std::span<const StateId> run);

  std::uint32_t count(StateId q) const;
  std::uint32_t total() const { return total_; }
  void add(StateId q);
  const std::unordered_map<StateId, std::uint32_t>& counts() const { return counts_; }

 private:
  std::unordered_map<StateId, std::uint32_t> counts_;
  std::uint32_t total_ = 0;
};

}  // namespace imc2

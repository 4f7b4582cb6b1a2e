#include "imc2/nba.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "imc2/errors.hpp"
#include "imc2/scc.hpp"

namespace imc2 {

namespace {

std::vector<StateId> members_of(const std::vector<std::uint8_t>& flags) {
  std::vector<StateId> out;
  for (std::size_t q = 0; q < flags.size(); ++q)
    if (flags[q]) out.push_back(static_cast<StateId>(q));
  return out;
}

void check_alphabet(const std::vector<std::string>& alphabet) {
  if (alphabet.empty()) throw ValidationError("empty alphabet");
  std::unordered_set<std::string> seen;
  for (const auto& letter : alphabet)
    if (!seen.insert(letter).second) throw ValidationError("duplicate letter \"" + letter + "\" in alphabet");
}

}  // namespace

std::optional<Letter> Nba::find_letter(std::string_view symbol) const {
  auto it = letter_index_.find(std::string(symbol));
  if (it == letter_index_.end()) return std::nullopt;
  return it->second;
}

std::string Nba::state_name(StateId q) const {
  if (!names_.empty() && !names_[q].empty()) return names_[q];
  return std::to_string(q);
}

bool operator==(const Nba& lhs, const Nba& rhs) {
  return lhs.alphabet_ == rhs.alphabet_ && lhs.out_ == rhs.out_ && lhs.initial_ == rhs.initial_ &&
         lhs.accepting_ == rhs.accepting_ && lhs.names_ == rhs.names_;
}

void Nba::index() {
  letter_index_.clear();
  for (std::size_t i = 0; i < alphabet_.size(); ++i) letter_index_.emplace(alphabet_[i], static_cast<Letter>(i));

  const std::size_t n = out_.size();
  const std::size_t sigma = alphabet_.size();
  is_initial_.assign(n, 0);
  is_accepting_.assign(n, 0);
  for (StateId q : initial_) is_initial_[q] = 1;
  for (StateId q : accepting_) is_accepting_[q] = 1;

  // Counting sort into (state, letter) slots, then sort + dedup per slot.
  std::vector<std::size_t> counts(n * sigma + 1, 0);
  for (std::size_t q = 0; q < n; ++q)
    for (const Transition& t : out_[q]) ++counts[q * sigma + t.letter + 1];
  for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
  std::vector<StateId> raw(counts.back());
  std::vector<std::size_t> fill(counts.begin(), counts.end() - 1);
  for (std::size_t q = 0; q < n; ++q)
    for (const Transition& t : out_[q]) raw[fill[q * sigma + t.letter]++] = t.target;

  offsets_.assign(counts.size(), 0);
  successors_.clear();
  successors_.reserve(raw.size());
  for (std::size_t slot = 0; slot + 1 < counts.size(); ++slot) {
    auto first = raw.begin() + static_cast<std::ptrdiff_t>(counts[slot]);
    auto last = raw.begin() + static_cast<std::ptrdiff_t>(counts[slot + 1]);
    std::sort(first, last);
    last = std::unique(first, last);
    offsets_[slot] = successors_.size();
    successors_.insert(successors_.end(), first, last);
  }
  offsets_.back() = successors_.size();
}

NbaBuilder::NbaBuilder(std::vector<std::string> alphabet) : alphabet_(std::move(alphabet)) {}

StateId NbaBuilder::add_state(bool accepting) {
  out_.emplace_back();
  initial_.push_back(0);
  accepting_.push_back(accepting ? 1 : 0);
  return static_cast<StateId>(out_.size() - 1);
}

void NbaBuilder::set_initial(StateId q) { initial_.at(q) = 1; }
void NbaBuilder::set_accepting(StateId q, bool accepting) { accepting_.at(q) = accepting ? 1 : 0; }

void NbaBuilder::add_transition(StateId source, Letter letter, StateId target) {
  if (source >= out_.size() || target >= out_.size()) throw ValidationError("dangling state");
  if (letter >= alphabet_.size()) throw ValidationError("letter not in alphabet");
  out_[source].push_back({letter, target});
}

void NbaBuilder::set_state_name(StateId q, std::string name) {
  names_.resize(out_.size());
  names_.at(q) = std::move(name);
}

Nba NbaBuilder::build() && {
  check_alphabet(alphabet_);
  Nba a;
  a.initial_ = members_of(initial_);
  if (a.initial_.empty()) throw ValidationError("empty initial set");
  a.accepting_ = members_of(accepting_);
  a.alphabet_ = std::move(alphabet_);
  a.out_ = std::move(out_);
  // T(q) is a set: repeated (letter, target) pairs are dropped.
  for (auto& out : a.out_) {
    std::vector<Transition> unique;
    for (const Transition& t : out)
      if (std::find(unique.begin(), unique.end(), t) == unique.end()) unique.push_back(t);
    out = std::move(unique);
  }
  if (!names_.empty()) {
    names_.resize(a.out_.size());
    a.names_ = std::move(names_);
  }
  a.index();
  return a;
}

Nba validate(const RawAutomaton& raw) {
  check_alphabet(raw.alphabet);
  const std::size_t n = raw.num_states;
  if (!raw.state_names.empty() && raw.state_names.size() != n)
    throw ValidationError("state name table has " + std::to_string(raw.state_names.size()) +
                          " entries for " + std::to_string(n) + " states");
  auto check_state = [&](std::size_t q) {
    if (q >= n)
      throw ValidationError("dangling state " + std::to_string(q) + " in a " + std::to_string(n) +
                            "-state automaton");
  };
  if (raw.initial.empty()) throw ValidationError("empty initial set");

  NbaBuilder builder(raw.alphabet);
  for (std::size_t q = 0; q < n; ++q) builder.add_state();
  for (std::size_t q : raw.initial) {
    check_state(q);
    builder.set_initial(static_cast<StateId>(q));
  }
  for (std::size_t q : raw.accepting) {
    check_state(q);
    builder.set_accepting(static_cast<StateId>(q));
  }
  std::unordered_map<std::string, Letter> letters;
  for (std::size_t i = 0; i < raw.alphabet.size(); ++i) letters.emplace(raw.alphabet[i], static_cast<Letter>(i));
  for (const auto& e : raw.edges) {
    check_state(e.source);
    check_state(e.target);
    auto it = letters.find(e.letter);
    if (it == letters.end()) throw ValidationError("letter \"" + e.letter + "\" not in alphabet");
    builder.add_transition(static_cast<StateId>(e.source), it->second, static_cast<StateId>(e.target));
  }
  for (std::size_t q = 0; q < raw.state_names.size(); ++q)
    builder.set_state_name(static_cast<StateId>(q), raw.state_names[q]);
  return std::move(builder).build();
}

std::optional<Nba> trim(const Nba& a) {
  const std::size_t n = a.num_states();
  std::vector<std::vector<StateId>> preds(n);
  for (StateId q = 0; q < n; ++q)
    for (const Transition& t : a.out(q)) preds[t.target].push_back(q);

  std::vector<std::uint8_t> alive(n, 1);
  for (bool changed = true; changed;) {
    changed = false;

    std::vector<std::uint8_t> forward(n, 0);
    std::deque<StateId> queue;
    for (StateId q : a.initial())
      if (alive[q] && !forward[q]) {
        forward[q] = 1;
        queue.push_back(q);
      }
    while (!queue.empty()) {
      const StateId q = queue.front();
      queue.pop_front();
      for (const Transition& t : a.out(q))
        if (alive[t.target] && !forward[t.target]) {
          forward[t.target] = 1;
          queue.push_back(t.target);
        }
    }

    std::vector<std::uint8_t> backward(n, 0);
    for (StateId q : a.accepting())
      if (alive[q]) {
        backward[q] = 1;
        queue.push_back(q);
      }
    while (!queue.empty()) {
      const StateId q = queue.front();
      queue.pop_front();
      for (StateId p : preds[q])
        if (alive[p] && !backward[p]) {
          backward[p] = 1;
          queue.push_back(p);
        }
    }

    for (StateId q = 0; q < n; ++q) {
      if (!alive[q]) continue;
      bool has_successor = false;
      for (const Transition& t : a.out(q)) has_successor = has_successor || alive[t.target];
      if (!forward[q] || !backward[q] || !has_successor) {
        alive[q] = 0;
        changed = true;
      }
    }
  }

  std::vector<StateId> renumber(n, 0);
  StateId next = 0;
  for (StateId q = 0; q < n; ++q)
    if (alive[q]) renumber[q] = next++;
  bool any_initial = false;
  for (StateId q : a.initial()) any_initial = any_initial || alive[q];
  if (!any_initial) return std::nullopt;

  Nba result;
  result.alphabet_ = a.alphabet_;
  result.out_.resize(next);
  if (a.has_state_names()) result.names_.resize(next);
  for (StateId q = 0; q < n; ++q) {
    if (!alive[q]) continue;
    const StateId r = renumber[q];
    for (const Transition& t : a.out(q))
      if (alive[t.target]) result.out_[r].push_back({t.letter, renumber[t.target]});
    if (a.is_initial(q)) result.initial_.push_back(r);
    if (a.is_accepting(q)) result.accepting_.push_back(r);
    if (a.has_state_names()) result.names_[r] = a.names_[q];
  }
  result.trimmed_ = true;
  result.index();
  return result;
}

bool is_empty(const Nba& a) {
  TransitionGraph graph{a};
  std::vector<NodeId> roots(a.initial().begin(), a.initial().end());
  const bool found = for_each_scc(graph, roots, [&](std::span<const NodeId> members) {
    if (!is_cyclic_component(graph, members)) return false;
    return std::any_of(members.begin(), members.end(), [&](NodeId v) { return a.is_accepting(v); });
  });
  return !found;
}

StateOccurrence::StateOccurrence(std::span<const StateId> run) {
  for (StateId q : run) add(q);
}

std::uint32_t StateOccurrence::count(StateId q) const {
  auto it = counts_.find(q);
  return it == counts_.end() ? 0 : it->second;
}

void StateOccurrence::add(StateId q) {
  ++counts_[q];
  ++total_;
}

}  // namespace imc2

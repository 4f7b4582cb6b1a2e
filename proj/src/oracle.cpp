#include "imc2/oracle.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <stdexcept>
#include <unordered_map>

#include "imc2/errors.hpp"
#include "imc2/scc.hpp"

namespace imc2::oracle {

namespace {

void check_enumeration_params(const Nba& a, unsigned k, const Rational& p_stop) {
  if (!a.trimmed()) throw ParameterError("lasso enumeration requires a trimmed automaton");
  if (k < 2) throw ParameterError("k must be at least 2, got " + std::to_string(k));
  if (p_stop <= 0 || p_stop >= 1) throw ParameterError("pstop out of range (0,1): " + to_string(p_stop));
}

struct Expansion {
  bool terminal;
  Letter letter;
  StateId target;
  Rational probability;
};

// Children of the run prefix `states` with probability p, following the
// lasso probability clauses literally.
std::vector<Expansion> expand(const Nba& a, const std::vector<StateId>& states, const Rational& p, unsigned k,
                              const Rational& p_stop) {
  const StateId last = states.back();
  const auto c = static_cast<unsigned>(std::count(states.begin(), states.end(), last));
  std::vector<Expansion> children;
  if (c == k) {
    children.push_back({true, 0, 0, p});
    return children;
  }
  const auto out = a.out(last);
  Rational step = p / static_cast<long>(out.size());
  if (c >= 2) {
    children.push_back({true, 0, 0, p * p_stop});
    step *= (1 - p_stop);
  }
  for (const Transition& t : out) children.push_back({false, t.letter, t.target, step});
  return children;
}

void count_node(std::size_t& created, std::size_t max_nodes) {
  if (++created > max_nodes)
    throw GuardError("lasso enumeration exceeded " + std::to_string(max_nodes) + " nodes");
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto fail = [&] { return ParameterError("not a rational number: \"" + std::string(text) + "\""); };
  auto parse_int = [&](std::string_view digits) {
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
      throw fail();
    return BigInt(std::string(digits));
  };
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational value;
  if (const auto slash = text.find('/'); slash != text.npos) {
    const BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw fail();
    value = Rational(parse_int(text.substr(0, slash)), den);
  } else if (const auto dot = text.find('.'); dot != text.npos) {
    const std::string_view whole = text.substr(0, dot);
    const std::string_view frac = text.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw fail();
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    const BigInt w = whole.empty() ? BigInt(0) : parse_int(whole);
    const BigInt f = frac.empty() ? BigInt(0) : parse_int(frac);
    value = Rational(w * scale + f, scale);
  } else {
    value = Rational(parse_int(text));
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational LassoDistribution::total() const {
  Rational sum = 0;
  for (const auto& e : entries) sum += e.probability;
  return sum;
}

ProbabilityTree build_probability_tree(const Nba& a, unsigned k, const Rational& p_stop, std::size_t max_nodes) {
  check_enumeration_params(a, k, p_stop);
  ProbabilityTree tree;
  std::size_t created = 1;
  tree.nodes.push_back({{}, {}, Rational(1), false, {}});
  std::vector<std::size_t> pending;
  const Rational initial_mass = Rational(1, static_cast<long>(a.initial().size()));
  for (StateId q : a.initial()) {
    count_node(created, max_nodes);
    tree.nodes.push_back({{q}, {}, initial_mass, false, {}});
    tree.nodes[0].children.push_back(tree.nodes.size() - 1);
    pending.push_back(tree.nodes.size() - 1);
  }
  while (!pending.empty()) {
    const std::size_t id = pending.back();
    pending.pop_back();
    const auto children = expand(a, tree.nodes[id].states, tree.nodes[id].probability, k, p_stop);
    for (const Expansion& e : children) {
      count_node(created, max_nodes);
      EnumerationNode child{tree.nodes[id].states, tree.nodes[id].letters, e.probability, e.terminal, {}};
      if (!e.terminal) {
        child.letters.push_back(e.letter);
        child.states.push_back(e.target);
      }
      tree.nodes.push_back(std::move(child));
      const std::size_t child_id = tree.nodes.size() - 1;
      tree.nodes[id].children.push_back(child_id);
      if (!e.terminal) pending.push_back(child_id);
    }
  }
  return tree;
}

LassoDistribution enumerate_lassos(const Nba& a, unsigned k, const Rational& p_stop, std::size_t max_nodes) {
  check_enumeration_params(a, k, p_stop);
  struct Pending {
    std::vector<StateId> states;
    std::vector<Letter> letters;
    Rational probability;
  };
  LassoDistribution dist;
  std::size_t created = 1;
  std::vector<Pending> stack;
  const Rational initial_mass = Rational(1, static_cast<long>(a.initial().size()));
  // Reverse so that the first initial state is expanded first.
  for (auto it = a.initial().rbegin(); it != a.initial().rend(); ++it) {
    count_node(created, max_nodes);
    stack.push_back({{*it}, {}, initial_mass});
  }
  while (!stack.empty()) {
    Pending node = std::move(stack.back());
    stack.pop_back();
    auto children = expand(a, node.states, node.probability, k, p_stop);
    for (auto it = children.rbegin(); it != children.rend(); ++it) {
      count_node(created, max_nodes);
      if (it->terminal) {
        dist.entries.push_back({make_lasso(node.states, node.letters), it->probability});
        continue;
      }
      Pending child{node.states, node.letters, it->probability};
      child.states.push_back(it->target);
      child.letters.push_back(it->letter);
      stack.push_back(std::move(child));
    }
  }
  return dist;
}

WitnessStats exact_pz(const Nba& a, const Nba& b, unsigned k, const Rational& p_stop, std::size_t max_nodes) {
  WitnessStats stats;
  const auto trimmed = trim(a);
  if (!trimmed) {
    stats.p_z = 0;
    stats.q_z = 1;
    return stats;
  }
  stats.distribution = enumerate_lassos(*trimmed, k, p_stop, max_nodes);
  stats.p_z = 0;
  stats.q_z = 0;
  for (const auto& entry : stats.distribution.entries) {
    bool witness = false;
    for (const IndexedWord& w : words_of(entry.lasso)) {
      if (member(*trimmed, w) && !member(b, to_symbols(*trimmed, w))) {
        witness = true;
        break;
      }
    }
    stats.witness.push_back(witness);
    (witness ? stats.p_z : stats.q_z) += entry.probability;
  }
  return stats;
}

Nba complement(const Nba& b, std::span<const std::string> extra_letters, std::size_t max_states,
               std::size_t max_macro_states) {
  const std::size_t n = b.num_states();
  if (n > max_states)
    throw GuardError("complement guard exceeded: " + std::to_string(n) + " states > " + std::to_string(max_states));

  std::vector<std::string> alphabet = b.alphabet();
  for (const auto& letter : extra_letters)
    if (std::find(alphabet.begin(), alphabet.end(), letter) == alphabet.end()) alphabet.push_back(letter);
  std::vector<std::optional<Letter>> in_b;
  for (const auto& letter : alphabet) in_b.push_back(b.find_letter(letter));

  // Macro-state key: one byte per state (rank + 1, 0 = absent) followed by
  // the O set, one byte per state.
  using Key = std::string;
  const int max_rank = static_cast<int>(2 * n);
  std::unordered_map<Key, StateId> ids;
  std::vector<Key> keys;
  NbaBuilder builder(alphabet);

  auto intern = [&](const Key& key) {
    auto [it, inserted] = ids.emplace(key, static_cast<StateId>(keys.size()));
    if (inserted) {
      if (keys.size() >= max_macro_states)
        throw GuardError("complement exceeded " + std::to_string(max_macro_states) + " macro-states");
      keys.push_back(key);
      bool obligation_empty = true;
      for (std::size_t q = 0; q < n; ++q) obligation_empty = obligation_empty && key[n + q] == 0;
      builder.add_state(obligation_empty);
    }
    return it->second;
  };

  Key initial(2 * n, '\0');
  for (StateId q : b.initial()) initial[q] = static_cast<char>(max_rank + 1);
  builder.set_initial(intern(initial));

  std::vector<int> bound(n);
  std::vector<int> rank(n);
  std::vector<std::uint8_t> owed(n);
  std::vector<std::size_t> targets;
  for (StateId id = 0; id < keys.size(); ++id) {
    const Key key = keys[id];
    bool obligation_empty = true;
    for (std::size_t q = 0; q < n; ++q) obligation_empty = obligation_empty && key[n + q] == 0;

    for (Letter x = 0; x < alphabet.size(); ++x) {
      std::fill(bound.begin(), bound.end(), -1);
      std::fill(owed.begin(), owed.end(), 0);
      if (in_b[x]) {
        for (StateId q = 0; q < n; ++q) {
          const int r = static_cast<unsigned char>(key[q]) - 1;
          if (r < 0) continue;
          for (StateId t : b.successors(q, *in_b[x])) {
            bound[t] = bound[t] < 0 ? r : std::min(bound[t], r);
            if (key[n + q]) owed[t] = 1;
          }
        }
      }
      targets.clear();
      for (std::size_t q = 0; q < n; ++q)
        if (bound[q] >= 0) targets.push_back(q);

      // Odometer over all rankings below the bounds; accepting states take
      // even ranks only.
      for (std::size_t q : targets) rank[q] = 0;
      auto step = [&](std::size_t q) { return b.is_accepting(static_cast<StateId>(q)) ? 2 : 1; };
      while (true) {
        Key next(2 * n, '\0');
        for (std::size_t q : targets) {
          next[q] = static_cast<char>(rank[q] + 1);
          const bool even = rank[q] % 2 == 0;
          next[n + q] = static_cast<char>(even && (obligation_empty || owed[q]) ? 1 : 0);
        }
        builder.add_transition(id, x, intern(next));

        std::size_t i = 0;
        for (; i < targets.size(); ++i) {
          const std::size_t q = targets[i];
          rank[q] += step(q);
          if (rank[q] <= bound[q]) break;
          rank[q] = 0;
        }
        if (i == targets.size()) break;
      }
    }
  }
  return std::move(builder).build();
}

Nba intersect(const Nba& a, const Nba& c) {
  const auto to_c = letter_map(a, c);
  struct Triple {
    StateId p, q;
    std::uint8_t copy;
    bool operator==(const Triple&) const = default;
  };
  struct TripleHash {
    std::size_t operator()(const Triple& t) const {
      return (static_cast<std::size_t>(t.p) * 0x9e3779b97f4a7c15ULL) ^ (static_cast<std::size_t>(t.q) << 1) ^ t.copy;
    }
  };
  std::unordered_map<Triple, StateId, TripleHash> ids;
  std::vector<Triple> triples;
  NbaBuilder builder(a.alphabet());
  auto intern = [&](Triple t) {
    auto [it, inserted] = ids.emplace(t, static_cast<StateId>(triples.size()));
    if (inserted) {
      triples.push_back(t);
      builder.add_state(t.copy == 1 && a.is_accepting(t.p));
    }
    return it->second;
  };
  for (StateId p : a.initial())
    for (StateId q : c.initial()) builder.set_initial(intern({p, q, 1}));

  for (StateId id = 0; id < triples.size(); ++id) {
    const Triple t = triples[id];
    std::uint8_t copy = t.copy;
    if (t.copy == 1 && a.is_accepting(t.p)) copy = 2;
    else if (t.copy == 2 && c.is_accepting(t.q)) copy = 1;
    for (Letter x = 0; x < a.num_letters(); ++x) {
      if (!to_c[x]) continue;
      for (StateId p2 : a.successors(t.p, x))
        for (StateId q2 : c.successors(t.q, *to_c[x])) builder.add_transition(id, x, intern({p2, q2, copy}));
    }
  }
  return std::move(builder).build();
}

namespace {

// Letters of a shortest path from any of `sources` to target, taking at
// least one step. Ties go to the first transition in declaration order.
std::optional<std::vector<Letter>> shortest_path(const Nba& a, const std::vector<StateId>& sources, StateId target,
                                                 bool allow_empty) {
  if (allow_empty && std::find(sources.begin(), sources.end(), target) != sources.end())
    return std::vector<Letter>{};
  const std::size_t n = a.num_states();
  std::vector<std::int64_t> parent(n, -1);
  std::vector<Letter> via(n, 0);
  std::vector<std::uint8_t> seen(n, 0);
  std::deque<StateId> queue;
  for (StateId s : sources) {
    for (const Transition& t : a.out(s)) {
      if (seen[t.target]) continue;
      seen[t.target] = 1;
      parent[t.target] = -1;
      via[t.target] = t.letter;
      queue.push_back(t.target);
    }
  }
  while (!queue.empty()) {
    const StateId q = queue.front();
    queue.pop_front();
    if (q == target) {
      std::vector<Letter> letters;
      for (std::int64_t v = q; v >= 0; v = parent[v]) letters.push_back(via[v]);
      std::reverse(letters.begin(), letters.end());
      return letters;
    }
    for (const Transition& t : a.out(q)) {
      if (seen[t.target]) continue;
      seen[t.target] = 1;
      parent[t.target] = q;
      via[t.target] = t.letter;
      queue.push_back(t.target);
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<UPWord> find_accepted_word(const Nba& c) {
  TransitionGraph graph{c};
  std::vector<NodeId> roots(c.initial().begin(), c.initial().end());
  std::optional<StateId> best;
  for_each_scc(graph, roots, [&](std::span<const NodeId> members) {
    if (!is_cyclic_component(graph, members)) return false;
    for (NodeId v : members)
      if (c.is_accepting(v) && (!best || v < *best)) best = v;
    return false;
  });
  if (!best) return std::nullopt;
  auto stem = shortest_path(c, c.initial(), *best, true);
  auto loop = shortest_path(c, {*best}, *best, false);
  if (!stem || !loop) throw std::logic_error("accepting lasso extraction failed");
  IndexedWord w{std::move(*stem), std::move(*loop)};
  return normalize(to_symbols(c, w));
}

ExactVerdict exact_inclusion(const Nba& a, const Nba& b, std::size_t max_b_states) {
  const auto trimmed = trim(a);
  if (!trimmed) return Included{};
  const Nba co_b = complement(b, trimmed->alphabet(), max_b_states);
  const Nba product = intersect(*trimmed, co_b);
  auto word = find_accepted_word(product);
  if (!word) return Included{};
  if (!member(a, *word) || member(b, *word))
    throw std::logic_error("exact witness " + format_word(*word) + " failed re-verification");
  return ExactNotIncluded{std::move(*word)};
}

BigInt sufficient_k(unsigned n_b) {
  const BigInt ranks = boost::multiprecision::pow(BigInt(2 * n_b + 2), n_b);
  const BigInt subsets = boost::multiprecision::pow(BigInt(2), n_b);
  return 2 * ranks * subsets + 1;
}

}  // namespace imc2::oracle

#include "imc2/membership.hpp"

#include <cctype>

#include "imc2/errors.hpp"
#include "imc2/scc.hpp"

namespace imc2 {

namespace {

// Product of an automaton with the positions of a loop word. Node
// pos * n + q stands for "in state q, about to read loop[pos]".
struct LoopProduct {
  struct Targets {
    std::span<const StateId> states;
    NodeId base;  // first node of the next position
    std::size_t size() const { return states.size(); }
    NodeId operator[](std::size_t k) const { return base + states[k]; }
  };

  const Nba& a;
  std::span<const Letter> loop;
  std::uint32_t n;  // 32-bit on purpose: one division per visited node

  std::size_t size() const { return std::size_t{n} * loop.size(); }
  Targets edges(NodeId v) const {
    const std::uint32_t pos = v / n;
    const std::uint32_t next = pos + 1 == loop.size() ? 0 : pos + 1;
    return {a.successors(v - pos * n, loop[pos]), next * n};
  }
};

std::vector<std::string> split_letters(std::string_view text) {
  std::vector<std::string> letters;
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) return letters;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    std::string_view token = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    if (token.empty()) throw ParameterError("empty letter in word \"" + std::string(text) + "\"");
    letters.emplace_back(token);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return letters;
}

std::string join(const std::vector<std::string>& letters, char sep) {
  std::string out;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i) out += sep;
    out += letters[i];
  }
  return out;
}

}  // namespace

UPWord make_word(std::vector<std::string> stem, std::vector<std::string> loop) {
  if (loop.empty()) throw ParameterError("loop of an ultimately periodic word must be non-empty");
  return UPWord{std::move(stem), std::move(loop)};
}

bool member(const Nba& a, std::span<const Letter> stem, std::span<const Letter> loop) {
  if (loop.empty()) throw ParameterError("loop of an ultimately periodic word must be non-empty");
  const std::size_t n = a.num_states();

  // Stem: plain subset simulation; a stamp array avoids clearing per step.
  std::vector<StateId> frontier(a.initial().begin(), a.initial().end());
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t epoch = 0;
  std::vector<StateId> next;
  for (Letter letter : stem) {
    ++epoch;
    next.clear();
    for (StateId q : frontier)
      for (StateId t : a.successors(q, letter))
        if (stamp[t] != epoch) {
          stamp[t] = epoch;
          next.push_back(t);
        }
    frontier.swap(next);
    if (frontier.empty()) return false;
  }

  if (static_cast<double>(n) * static_cast<double>(loop.size()) >= 4294967295.0)
    throw GuardError("membership product of " + std::to_string(n) + " states and a loop of " +
                     std::to_string(loop.size()) + " letters exceeds 2^32 nodes");
  const LoopProduct product{a, loop, static_cast<std::uint32_t>(n)};
  std::vector<NodeId> roots(frontier.begin(), frontier.end());
  return has_accepting_cycle(product, roots, [&](NodeId v) { return a.is_accepting(v % product.n); });
}

bool member(const Nba& a, const IndexedWord& w) { return member(a, w.stem, w.loop); }

MembershipResult check_membership(const Nba& a, const UPWord& w) {
  if (w.loop.empty()) throw ParameterError("loop of an ultimately periodic word must be non-empty");
  auto translate = [&](const std::vector<std::string>& symbols, std::vector<Letter>& out) {
    out.reserve(symbols.size());
    for (const auto& s : symbols) {
      auto letter = a.find_letter(s);
      if (!letter) return false;
      out.push_back(*letter);
    }
    return true;
  };
  IndexedWord indexed;
  if (!translate(w.stem, indexed.stem) || !translate(w.loop, indexed.loop)) return {false, true};
  return {member(a, indexed), false};
}

bool member(const Nba& a, const UPWord& w) { return check_membership(a, w).accepted; }

std::vector<std::optional<Letter>> letter_map(const Nba& from, const Nba& to) {
  std::vector<std::optional<Letter>> map;
  map.reserve(from.num_letters());
  for (const auto& symbol : from.alphabet()) map.push_back(to.find_letter(symbol));
  return map;
}

UPWord to_symbols(const Nba& a, const IndexedWord& w) {
  UPWord out;
  for (Letter l : w.stem) out.stem.push_back(a.alphabet()[l]);
  for (Letter l : w.loop) out.loop.push_back(a.alphabet()[l]);
  return out;
}

UPWord parse_word(std::string_view text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ParameterError("word \"" + std::string(text) + "\" must have the form stem:loop");
  return make_word(split_letters(text.substr(0, colon)), split_letters(text.substr(colon + 1)));
}

std::string format_word(const UPWord& w) { return join(w.stem, ',') + ":" + join(w.loop, ','); }

}  // namespace imc2

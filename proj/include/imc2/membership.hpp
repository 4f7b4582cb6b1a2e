#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "imc2/nba.hpp"

namespace imc2 {

// Ultimately periodic word stem . loop^omega; the loop is never empty.
template <class Symbol>
struct BasicUPWord {
  std::vector<Symbol> stem;
  std::vector<Symbol> loop;

  std::size_t length() const { return stem.size() + loop.size(); }
  friend bool operator==(const BasicUPWord&, const BasicUPWord&) = default;
  friend auto operator<=>(const BasicUPWord&, const BasicUPWord&) = default;
};

// Word over letter symbols; comparable across automata.
using UPWord = BasicUPWord<std::string>;
// Word over the letter indices of one particular automaton.
using IndexedWord = BasicUPWord<Letter>;

// Throws ParameterError if the loop is empty.
UPWord make_word(std::vector<std::string> stem, std::vector<std::string> loop);

// Canonical decomposition of the same omega-word: the loop becomes its
// primitive root and every trailing stem letter that matches the loop's last
// letter is rotated into the loop.
template <class Symbol>
BasicUPWord<Symbol> normalize(BasicUPWord<Symbol> w) {
  auto& loop = w.loop;
  if (loop.empty()) return w;
  // Shortest period via the KMP failure function.
  std::vector<std::size_t> fail(loop.size() + 1, 0);
  for (std::size_t i = 1, k = 0; i < loop.size(); ++i) {
    while (k > 0 && loop[i] != loop[k]) k = fail[k];
    if (loop[i] == loop[k]) ++k;
    fail[i + 1] = k;
  }
  const std::size_t period = loop.size() - fail[loop.size()];
  if (loop.size() % period == 0) loop.resize(period);

  while (!w.stem.empty() && w.stem.back() == loop.back()) {
    w.stem.pop_back();
    std::rotate(loop.rbegin(), loop.rbegin() + 1, loop.rend());
  }
  return w;
}

struct MembershipResult {
  bool accepted = false;
  // Set when the word uses a letter outside the automaton's alphabet; the
  // word is then rejected.
  bool unknown_letter = false;
};

// Decides stem . loop^omega in L(a) in O(|a| * |w|): the stem is simulated
// on state sets, then the product of a with the loop positions is swept for
// a reachable accepting cycle.
bool member(const Nba& a, std::span<const Letter> stem, std::span<const Letter> loop);
bool member(const Nba& a, const IndexedWord& w);
MembershipResult check_membership(const Nba& a, const UPWord& w);
bool member(const Nba& a, const UPWord& w);

// Letter-index translation between automata; nullopt entries mark letters of
// `from` that `to` lacks.
std::vector<std::optional<Letter>> letter_map(const Nba& from, const Nba& to);

UPWord to_symbols(const Nba& a, const IndexedWord& w);

// "a,b:c" style text: stem letters, a colon, loop letters.
UPWord parse_word(std::string_view text);
std::string format_word(const UPWord& w);

}  // namespace imc2

#include "imc2/sampler.hpp"

#include <algorithm>

#include "imc2/errors.hpp"

namespace imc2 {

void check_sample_params(const SampleParams& p) {
  if (p.k < 2) throw ParameterError("k must be at least 2, got " + std::to_string(p.k));
  if (!(p.p_stop > 0.0 && p.p_stop < 1.0))
    throw ParameterError("pstop out of range (0,1): " + std::to_string(p.p_stop));
}

TerminatingLasso make_lasso(std::vector<StateId> states, std::vector<Letter> letters) {
  TerminatingLasso l{std::move(states), std::move(letters), {}};
  for (std::size_t i = 0; i + 1 < l.states.size(); ++i)
    if (l.states[i] == l.states.back()) l.anchors.push_back(i);
  return l;
}

bool is_k_lasso(const Nba& a, const TerminatingLasso& l, unsigned k) {
  if (l.states.size() != l.letters.size() + 1 || l.letters.empty()) return false;
  if (!a.is_initial(l.states.front())) return false;
  for (std::size_t i = 0; i < l.letters.size(); ++i) {
    auto succ = a.successors(l.states[i], l.letters[i]);
    if (!std::binary_search(succ.begin(), succ.end(), l.states[i + 1])) return false;
  }
  const std::span<const StateId> prefix(l.states.data(), l.states.size() - 1);
  StateOccurrence occ(prefix);
  for (const auto& [q, c] : occ.counts())
    if (c > k - 1) return false;
  if (occ.count(l.last()) == 0) return false;
  std::vector<std::size_t> anchors;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (prefix[i] == l.last()) anchors.push_back(i);
  return anchors == l.anchors;
}

std::vector<IndexedWord> words_of(const TerminatingLasso& l) {
  std::vector<IndexedWord> words;
  for (std::size_t i : l.anchors) {
    IndexedWord w;
    w.stem.assign(l.letters.begin(), l.letters.begin() + static_cast<std::ptrdiff_t>(i));
    w.loop.assign(l.letters.begin() + static_cast<std::ptrdiff_t>(i), l.letters.end());
    w = normalize(std::move(w));
    if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(std::move(w));
  }
  return words;
}

std::string format_run(const Nba& a, const TerminatingLasso& l) {
  std::string out = a.state_name(l.states.front());
  for (std::size_t i = 0; i < l.letters.size(); ++i) {
    out += ' ';
    out += a.alphabet()[l.letters[i]];
    out += ' ';
    out += a.state_name(l.states[i + 1]);
  }
  return out;
}

LassoSampler::LassoSampler(const Nba& a, unsigned k, double p_stop) : a_(a), k_(k), p_stop_(p_stop) {
  check_sample_params({k, p_stop, 0});
  if (!a.trimmed()) throw ParameterError("lasso sampling requires a trimmed automaton");
  counts_.assign(a.num_states(), 0);
}

TerminatingLasso LassoSampler::sample(Rng& rng) {
  std::vector<StateId> states;
  std::vector<Letter> letters;
  const auto& init = a_.initial();
  StateId q = init[rng.below(init.size())];
  while (true) {
    states.push_back(q);
    const std::uint32_t c = ++counts_[q];
    if (c >= k_) break;
    if (c >= 2 && rng.bernoulli(p_stop_)) break;
    const auto out = a_.out(q);
    const Transition& t = out[rng.below(out.size())];
    letters.push_back(t.letter);
    q = t.target;
  }
  for (StateId s : states) counts_[s] = 0;
  return make_lasso(std::move(states), std::move(letters));
}

}  // namespace imc2

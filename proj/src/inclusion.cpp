#include "imc2/inclusion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "imc2/errors.hpp"

namespace imc2 {

std::uint64_t required_samples(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ParameterError("epsilon out of range (0,1): " + std::to_string(epsilon));
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta out of range (0,1): " + std::to_string(delta));
  const double ratio = std::log(delta) / std::log1p(-epsilon);
  const double m = std::ceil(ratio * (1.0 - 1e-12));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(m));
}

unsigned default_k(const Nba& a, const Nba& b) {
  return static_cast<unsigned>(std::max<std::size_t>({2, a.num_states(), b.num_states()}));
}

namespace {

// Runs the sample with the given index; returns the first witness word.
class WitnessSearch {
 public:
  WitnessSearch(const Nba& a, const Nba& b, const SampleParams& p)
      : a_(a), b_(b), to_b_(letter_map(a, b)), sampler_(a, p.k, p.p_stop), seed_(p.seed) {}

  std::optional<IndexedWord> run(std::uint64_t index) {
    Rng rng(derive_seed(seed_, index));
    const TerminatingLasso lasso = sampler_.sample(rng);
    for (IndexedWord& w : words_of(lasso)) {
      if (!member(a_, w)) continue;
      if (!member_b(w)) return std::move(w);
    }
    return std::nullopt;
  }

 private:
  bool member_b(const IndexedWord& w) {
    IndexedWord translated;
    auto map = [&](const std::vector<Letter>& from, std::vector<Letter>& to) {
      to.reserve(from.size());
      for (Letter l : from) {
        if (!to_b_[l]) return false;
        to.push_back(*to_b_[l]);
      }
      return true;
    };
    if (!map(w.stem, translated.stem) || !map(w.loop, translated.loop)) return false;
    return member(b_, translated);
  }

  const Nba& a_;
  const Nba& b_;
  std::vector<std::optional<Letter>> to_b_;
  LassoSampler sampler_;
  std::uint64_t seed_;
};

NotIncluded certify(const Nba& a, const Nba& b, const IndexedWord& w, std::uint64_t samples_used) {
  UPWord word = normalize(to_symbols(a, w));
  if (!member(a, word) || member(b, word))
    throw std::logic_error("counterexample " + format_word(word) + " failed re-verification");
  return {std::move(word), samples_used};
}

}  // namespace

Verdict check_inclusion(const Nba& a, const Nba& b, const StatParams& stat, const SampleParams& sample,
                        const CheckOptions& options) {
  check_sample_params(sample);
  const std::uint64_t m = required_samples(stat.epsilon, stat.delta);
  auto trimmed = trim(a);
  if (!trimmed) return TriviallyIncluded{};
  const Nba& source = *trimmed;

  const unsigned workers = std::max(1u, options.workers);
  if (workers == 1) {
    WitnessSearch search(source, b, sample);
    for (std::uint64_t i = 0; i < m; ++i)
      if (auto w = search.run(i)) return certify(source, b, *w, i + 1);
    return NoCounterexampleFound{m};
  }

  // Workers pull indices from a shared counter. best holds the lowest index
  // with a witness so far; indices above it are skipped.
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
  std::mutex slot_mutex;
  std::optional<IndexedWord> best_word;
  std::exception_ptr failure;

  auto work = [&] {
    try {
      WitnessSearch search(source, b, sample);
      while (true) {
        const std::uint64_t i = next.fetch_add(1);
        if (i >= m || i > best.load()) return;
        if (auto w = search.run(i)) {
          std::lock_guard lock(slot_mutex);
          if (i < best.load()) {
            best.store(i);
            best_word = std::move(w);
          }
          return;
        }
      }
    } catch (...) {
      std::lock_guard lock(slot_mutex);
      if (!failure) failure = std::current_exception();
      best.store(0);
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  if (best_word) return certify(source, b, *best_word, best.load() + 1);
  return NoCounterexampleFound{m};
}

}  // namespace imc2

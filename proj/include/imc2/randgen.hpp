#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "imc2/inclusion.hpp"
#include "imc2/nba.hpp"
#include "imc2/rng.hpp"

namespace imc2 {

/// Random automaton distribution.
///
/// For each (state, letter) pair the number of targets is
/// floor(trans_density) plus one more with probability frac(trans_density),
/// capped at n_states; targets are distinct and uniform. ceil(acc_density * n)
/// accepting states are chosen uniformly, the initial state is one uniform
/// state. Letters are named a, b, c, ... (l26, l27, ... past z).
struct GenParams {
  std::size_t n_states = 10;
  std::size_t n_letters = 2;
  double trans_density = 1.5;
  double acc_density = 0.3;
  std::uint64_t seed = 0;
};

void check_gen_params(const GenParams& g);

std::vector<std::string> default_alphabet(std::size_t n_letters);

// Draws, trims and retries (up to 100 draws from the same rng) until the
// language is non-empty. Throws Error when every draw was empty.
Nba random_nba(const GenParams& g, Rng& rng);

struct SampleSetting {
  unsigned k = 0;  // 0 = max(n_A, n_B)
  double p_stop = 0.5;
};

struct BenchGrid {
  std::vector<GenParams> gen;
  std::vector<StatParams> stat;
  std::vector<SampleSetting> sample;
};

struct BenchRow {
  GenParams gen;
  StatParams stat;
  SampleSetting sample;
  std::size_t pairs = 0;
  std::size_t included_assumed = 0;  // NoCounterexampleFound + TriviallyIncluded
  std::size_t not_included = 0;
  double mean_ms = 0;
  double mean_samples = 0;
};

struct BenchPair {
  Nba a;
  Nba b;
};

// Generates pair_count pairs per generator setting (pair i of a setting uses
// derive_seed(gen.seed, 2i) and derive_seed(gen.seed, 2i+1)) and runs every
// stat x sample cell over them; the run for pair i uses check seed
// derive_seed(seed, i). One row per grid cell.
std::vector<BenchRow> bench_sweep(std::size_t pair_count, const BenchGrid& grid, std::uint64_t seed,
                                  unsigned workers = 1);

// The same aggregation over a fixed pair list. The gen column of each row is
// left default.
std::vector<BenchRow> bench_pairs(const std::vector<BenchPair>& pairs, const std::vector<StatParams>& stat,
                                  const std::vector<SampleSetting>& sample, std::uint64_t seed, unsigned workers = 1);

// Tab-separated table with a header line.
void write_bench_table(std::ostream& out, const std::vector<BenchRow>& rows);

// Grid file (JSON):
//   {"gen":    [{"states":10,"letters":2,"density":1.5,"acc":0.3,"seed":1}],
//    "stat":   [{"epsilon":0.001,"delta":0.02}],
//    "sample": [{"k":"auto","pstop":0.5}]}
// Any section may be omitted and then holds the single default entry.
BenchGrid parse_bench_grid(std::string_view json_text);

}  // namespace imc2

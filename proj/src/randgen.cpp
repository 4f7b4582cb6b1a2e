#include "imc2/randgen.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "imc2/errors.hpp"

namespace imc2 {

namespace {

constexpr int kMaxDraws = 100;

// k distinct values from [0, n), uniformly.
std::vector<std::size_t> distinct_sample(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> out;
  if (2 * k <= n) {
    std::unordered_set<std::size_t> seen;
    while (out.size() < k) {
      const std::size_t x = rng.below(n);
      if (seen.insert(x).second) out.push_back(x);
    }
    return out;
  }
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.below(n - i)]);
  pool.resize(k);
  return pool;
}

std::vector<BenchRow> run_cells(const std::vector<BenchPair>& pairs, const GenParams& gen,
                                const std::vector<StatParams>& stat, const std::vector<SampleSetting>& sample,
                                std::uint64_t seed, unsigned workers) {
  std::vector<BenchRow> rows;
  for (const StatParams& s : stat) {
    for (const SampleSetting& setting : sample) {
      BenchRow row{gen, s, setting, pairs.size(), 0, 0, 0.0, 0.0};
      double total_ms = 0;
      double total_samples = 0;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& [a, b] = pairs[i];
        const SampleParams params{setting.k == 0 ? default_k(a, b) : setting.k, setting.p_stop, derive_seed(seed, i)};
        const auto start = std::chrono::steady_clock::now();
        const Verdict verdict = check_inclusion(a, b, s, params, {workers});
        total_ms += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        if (const auto* hit = std::get_if<NotIncluded>(&verdict)) {
          ++row.not_included;
          total_samples += static_cast<double>(hit->samples_used);
        } else {
          ++row.included_assumed;
          if (const auto* miss = std::get_if<NoCounterexampleFound>(&verdict))
            total_samples += static_cast<double>(miss->samples);
        }
      }
      if (!pairs.empty()) {
        row.mean_ms = total_ms / static_cast<double>(pairs.size());
        row.mean_samples = total_samples / static_cast<double>(pairs.size());
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace

void check_gen_params(const GenParams& g) {
  if (g.n_states < 1) throw ParameterError("states must be at least 1");
  if (g.n_letters < 1) throw ParameterError("letters must be at least 1");
  if (!(g.trans_density > 0.0) || !std::isfinite(g.trans_density))
    throw ParameterError("density must be positive");
  if (!(g.acc_density > 0.0 && g.acc_density <= 1.0)) throw ParameterError("acc out of range (0,1]");
}

std::vector<std::string> default_alphabet(std::size_t n_letters) {
  std::vector<std::string> letters;
  for (std::size_t i = 0; i < n_letters; ++i)
    letters.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "l" + std::to_string(i));
  return letters;
}

Nba random_nba(const GenParams& g, Rng& rng) {
  check_gen_params(g);
  const std::size_t n = g.n_states;
  const double whole = std::floor(g.trans_density);
  const double frac = g.trans_density - whole;
  const auto n_accepting = std::min(n, static_cast<std::size_t>(std::ceil(g.acc_density * static_cast<double>(n))));

  for (int draw = 0; draw < kMaxDraws; ++draw) {
    RawAutomaton raw;
    raw.alphabet = default_alphabet(g.n_letters);
    raw.num_states = n;
    for (std::size_t q = 0; q < n; ++q) {
      for (const auto& letter : raw.alphabet) {
        std::size_t k = static_cast<std::size_t>(whole) + (rng.bernoulli(frac) ? 1 : 0);
        k = std::min(k, n);
        for (std::size_t t : distinct_sample(rng, n, k)) raw.edges.push_back({q, letter, t});
      }
    }
    raw.accepting = distinct_sample(rng, n, n_accepting);
    std::sort(raw.accepting.begin(), raw.accepting.end());
    raw.initial = {static_cast<std::size_t>(rng.below(n))};
    if (auto trimmed = trim(validate(raw))) return std::move(*trimmed);
  }
  throw Error("random_nba: all " + std::to_string(kMaxDraws) + " draws had an empty language");
}

std::vector<BenchRow> bench_sweep(std::size_t pair_count, const BenchGrid& grid, std::uint64_t seed,
                                  unsigned workers) {
  std::vector<BenchRow> rows;
  for (const GenParams& gen : grid.gen) {
    std::vector<BenchPair> pairs;
    for (std::size_t i = 0; i < pair_count; ++i) {
      Rng rng_a(derive_seed(gen.seed, 2 * i));
      Rng rng_b(derive_seed(gen.seed, 2 * i + 1));
      Nba a = random_nba(gen, rng_a);
      Nba b = random_nba(gen, rng_b);
      pairs.push_back({std::move(a), std::move(b)});
    }
    auto cell_rows = run_cells(pairs, gen, grid.stat, grid.sample, seed, workers);
    rows.insert(rows.end(), cell_rows.begin(), cell_rows.end());
  }
  return rows;
}

std::vector<BenchRow> bench_pairs(const std::vector<BenchPair>& pairs, const std::vector<StatParams>& stat,
                                  const std::vector<SampleSetting>& sample, std::uint64_t seed, unsigned workers) {
  return run_cells(pairs, GenParams{}, stat, sample, seed, workers);
}

void write_bench_table(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "states\tletters\tdensity\tacc\tgen_seed\tepsilon\tdelta\tM\tk\tpstop\tpairs\tincluded_assumed\tnot_included"
         "\tmean_ms\tmean_samples\n";
  for (const BenchRow& r : rows) {
    out << r.gen.n_states << '\t' << r.gen.n_letters << '\t' << r.gen.trans_density << '\t' << r.gen.acc_density
        << '\t' << r.gen.seed << '\t' << r.stat.epsilon << '\t' << r.stat.delta << '\t' << r.stat.samples << '\t'
        << (r.sample.k == 0 ? std::string("auto") : std::to_string(r.sample.k)) << '\t' << r.sample.p_stop << '\t'
        << r.pairs << '\t' << r.included_assumed << '\t' << r.not_included << '\t' << r.mean_ms << '\t'
        << r.mean_samples << '\n';
  }
}

BenchGrid parse_bench_grid(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("grid file: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("grid file: top level must be an object");

  BenchGrid grid;
  try {
    if (doc.contains("gen")) {
      for (const auto& g : doc.at("gen")) {
        GenParams p;
        p.n_states = g.value("states", p.n_states);
        p.n_letters = g.value("letters", p.n_letters);
        p.trans_density = g.value("density", p.trans_density);
        p.acc_density = g.value("acc", p.acc_density);
        p.seed = g.value("seed", p.seed);
        check_gen_params(p);
        grid.gen.push_back(p);
      }
    } else {
      grid.gen.push_back({});
    }
    if (doc.contains("stat")) {
      for (const auto& s : doc.at("stat"))
        grid.stat.push_back(StatParams::make(s.value("epsilon", 0.001), s.value("delta", 0.02)));
    } else {
      grid.stat.push_back(StatParams::make(0.001, 0.02));
    }
    if (doc.contains("sample")) {
      for (const auto& s : doc.at("sample")) {
        SampleSetting setting;
        if (s.contains("k") && !(s.at("k").is_string() && s.at("k") == "auto")) setting.k = s.at("k").get<unsigned>();
        setting.p_stop = s.value("pstop", setting.p_stop);
        if (setting.k == 1) throw ParameterError("k must be at least 2");
        check_sample_params({setting.k == 0 ? 2 : setting.k, setting.p_stop, 0});
        grid.sample.push_back(setting);
      }
    } else {
      grid.sample.push_back({});
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("grid file: ") + e.what());
  }
  if (grid.gen.empty() || grid.stat.empty() || grid.sample.empty())
    throw FormatError("grid file: every section must be non-empty");
  return grid;
}

}  // namespace imc2

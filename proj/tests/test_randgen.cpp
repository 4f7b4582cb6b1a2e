#include <doctest.h>

#include <sstream>

#include "imc2/errors.hpp"
#include "imc2/formats.hpp"
#include "imc2/randgen.hpp"
#include "test_support.hpp"

using namespace imc2;

TEST_CASE("generator parameters are validated") {
  CHECK_THROWS_AS(check_gen_params({0, 2, 1.5, 0.3, 0}), ParameterError);
  CHECK_THROWS_AS(check_gen_params({3, 0, 1.5, 0.3, 0}), ParameterError);
  CHECK_THROWS_AS(check_gen_params({3, 2, 0.0, 0.3, 0}), ParameterError);
  CHECK_THROWS_AS(check_gen_params({3, 2, 1.5, 0.0, 0}), ParameterError);
  CHECK_THROWS_AS(check_gen_params({3, 2, 1.5, 1.5, 0}), ParameterError);
  CHECK_NOTHROW(check_gen_params({3, 2, 1.5, 1.0, 0}));
}

TEST_CASE("default alphabet") {
  CHECK(default_alphabet(3) == std::vector<std::string>{"a", "b", "c"});
  const auto many = default_alphabet(28);
  CHECK(many[25] == "z");
  CHECK(many[26] == "l26");
  CHECK(many[27] == "l27");
}

TEST_CASE("one state, one letter is the self loop") {
  Rng rng(0);
  const Nba a = random_nba({1, 1, 1.0, 1.0, 0}, rng);
  CHECK(emit_ba(a) == "[0]\na,[0]->[0]\n[0]");
}

TEST_CASE("generation is deterministic") {
  const GenParams g{10, 2, 1.5, 0.3, 42};
  Rng r1(g.seed), r2(g.seed), r3(g.seed + 1);
  const Nba a = random_nba(g, r1);
  const Nba b = random_nba(g, r2);
  const Nba c = random_nba(g, r3);
  CHECK(a == b);
  CHECK(emit_ba(a) == emit_ba(b));
  CHECK_FALSE(a == c);
}

TEST_CASE("1000 generated automata are valid and trimmed") {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const GenParams g{1 + rng.below(12), 1 + rng.below(3), 0.5 + 2 * rng.unit(), 0.1 + 0.9 * rng.unit(), 0};
    const Nba a = random_nba(g, rng);
    CHECK(a.trimmed());
    CHECK(a.num_states() <= g.n_states);
    CHECK(a.num_letters() == g.n_letters);
    CHECK_FALSE(is_empty(a));
    const auto again = trim(a);
    REQUIRE(again);
    CHECK(*again == a);
    // Round trip through the validating parser.
    if (test::all_letters_used(a)) CHECK(test::same_by_names(parse_ba(emit_ba(a)), a));
  }
}

TEST_CASE("generator follows its documented density") {
  Rng rng(3);
  // Every (state, letter) gets 1 or 2 targets. With full acceptance only
  // unreachable states are trimmed, so fully reachable draws show the raw
  // density.
  double transitions = 0;
  int counted = 0;
  for (int i = 0; i < 300; ++i) {
    const Nba a = random_nba({20, 2, 1.5, 1.0, 0}, rng);
    if (a.num_states() != 20) continue;
    transitions += static_cast<double>(a.num_transitions());
    ++counted;
  }
  REQUIRE(counted > 20);
  const double per_pair = transitions / (counted * 40.0);
  CHECK(per_pair > 1.3);
  CHECK(per_pair < 1.7);
}

TEST_CASE("sparse settings exhaust the retry cap") {
  Rng rng(4);
  // 0.01 targets per state and letter: virtually never a cycle.
  CHECK_THROWS_AS(random_nba({50, 1, 0.01, 0.1, 0}, rng), Error);
}

TEST_CASE("bench sweep aggregates one row per cell") {
  BenchGrid grid;
  grid.gen = {{4, 2, 1.5, 0.5, 9}};
  grid.stat = {StatParams::make(0.1, 0.1)};
  grid.sample = {{0, 0.5}};
  const auto rows = bench_sweep(10, grid, 1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].pairs == 10);
  CHECK(rows[0].included_assumed + rows[0].not_included == 10);

  grid.gen.push_back({5, 3, 1.2, 0.4, 10});
  grid.sample.push_back({3, 0.2});
  grid.stat.push_back(StatParams::make(0.2, 0.05));
  const auto more = bench_sweep(5, grid, 1);
  CHECK(more.size() == 2 * 2 * 2);
  for (const auto& r : more) CHECK(r.included_assumed + r.not_included == 5);
}

TEST_CASE("bench tables are reproducible") {
  BenchGrid grid;
  grid.gen = {{5, 2, 1.5, 0.4, 3}};
  grid.stat = {StatParams::make(0.05, 0.05)};
  grid.sample = {{2, 0.5}, {3, 0.5}};
  auto table = [&] {
    std::ostringstream out;
    auto rows = bench_sweep(8, grid, 77);
    for (auto& r : rows) r.mean_ms = 0;  // wall time is the only non-deterministic column
    write_bench_table(out, rows);
    return out.str();
  };
  const std::string first = table();
  CHECK(first == table());
  CHECK(first.rfind("states\tletters\tdensity\tacc\tgen_seed\tepsilon\tdelta\tM\tk\tpstop\tpairs", 0) == 0);
  std::size_t lines = 0;
  for (char c : first) lines += c == '\n';
  CHECK(lines == 3);
}

TEST_CASE("K = 3 beats K = 2 on a sweep containing the running example") {
  std::vector<BenchPair> pairs{{test::running_a(), test::running_b()}, {test::running_a(), test::running_a()}};
  const auto rows = bench_pairs(pairs, {StatParams::make(0.05, 0.01)}, {{2, 0.5}, {3, 0.5}}, 5);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].not_included == 0);
  CHECK(rows[1].not_included == 1);
  CHECK(rows[1].not_included > rows[0].not_included);
}

TEST_CASE("grid files") {
  const BenchGrid g = parse_bench_grid(
      R"({"gen":[{"states":7,"letters":3,"density":1.2,"acc":0.5,"seed":4}],
          "stat":[{"epsilon":0.1,"delta":0.02}],
          "sample":[{"k":"auto","pstop":0.25},{"k":4}]})");
  REQUIRE(g.gen.size() == 1);
  CHECK(g.gen[0].n_states == 7);
  CHECK(g.gen[0].seed == 4);
  CHECK(g.stat[0].samples == 38);
  REQUIRE(g.sample.size() == 2);
  CHECK(g.sample[0].k == 0);
  CHECK(g.sample[0].p_stop == 0.25);
  CHECK(g.sample[1].k == 4);

  const BenchGrid d = parse_bench_grid("{}");
  CHECK(d.gen.size() == 1);
  CHECK(d.stat[0].samples == 3911);

  CHECK_THROWS_AS(parse_bench_grid("[1]"), FormatError);
  CHECK_THROWS_AS(parse_bench_grid("{"), FormatError);
  CHECK_THROWS_AS(parse_bench_grid(R"({"sample":[{"k":1}]})"), ParameterError);
  CHECK_THROWS_AS(parse_bench_grid(R"({"stat":[{"epsilon":2}]})"), ParameterError);
  CHECK_THROWS_AS(parse_bench_grid(R"({"gen":[]})"), FormatError);
  CHECK_THROWS_AS(parse_bench_grid(R"({"gen":[{"states":"x"}]})"), FormatError);
}

#include <doctest.h>

#include "imc2/errors.hpp"
#include "imc2/inclusion.hpp"
#include "imc2/oracle.hpp"
#include "test_support.hpp"

using namespace imc2;
using test::w;

namespace {

// Independent re-check of a NotIncluded verdict.
void check_witness(const Nba& a, const Nba& b, const Verdict& v) {
  if (const auto* hit = std::get_if<NotIncluded>(&v)) {
    CHECK(test::brute_member(a, hit->counterexample));
    CHECK_FALSE(test::brute_member(b, hit->counterexample));
    CHECK(normalize(hit->counterexample) == hit->counterexample);
  }
}

}  // namespace

TEST_CASE("required samples") {
  CHECK(required_samples(0.001, 0.02) == 3911);
  CHECK(required_samples(0.5, 0.5) == 1);
  CHECK(required_samples(0.1, 0.02) == 38);
  CHECK(required_samples(0.05, 0.01) == 90);
  CHECK(required_samples(0.5, 0.25) == 2);
  CHECK(required_samples(0.5, 0.125) == 3);
  CHECK(required_samples(0.9, 0.5) == 1);
  for (auto [e, d] : {std::pair{0.0, 0.5}, {1.0, 0.5}, {0.5, 0.0}, {0.5, 1.0}, {-0.1, 0.5}, {2.0, 0.5}})
    CHECK_THROWS_AS(required_samples(e, d), ParameterError);
  const auto s = StatParams::make(0.001, 0.02);
  CHECK(s.samples == 3911);
}

TEST_CASE("required samples against a high-precision reference") {
  // ln(delta) / ln(1 - eps) evaluated with long double; the ceiling only
  // differs at exact integers, which the cases below avoid.
  for (double e : {0.3, 0.05, 0.01, 0.002, 0.0001})
    for (double d : {0.2, 0.05, 0.02, 0.001}) {
      const long double ratio = std::log(static_cast<long double>(d)) / std::log1p(-static_cast<long double>(e));
      CHECK(required_samples(e, d) == static_cast<std::uint64_t>(std::ceil(ratio)));
    }
}

TEST_CASE("default K is the larger automaton size, at least 2") {
  CHECK(default_k(test::running_a(), test::running_b()) == 2);
  CHECK(default_k(test::running_a(), test::b_k(4)) == 5);
  CHECK(default_k(parse_ba("a,[p]->[p]"), parse_ba("a,[p]->[p]")) == 2);
}

TEST_CASE("K = 2 never finds the running example's counterexample") {
  const Nba a = test::running_a();
  const Nba b = test::running_b();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Verdict v = check_inclusion(a, b, StatParams::make(0.05, 0.01), {2, 0.5, seed});
    REQUIRE(std::holds_alternative<NoCounterexampleFound>(v));
    CHECK(std::get<NoCounterexampleFound>(v).samples == 90);
  }
}

TEST_CASE("K = 3 finds a b^omega") {
  const Nba a = test::running_a();
  const Nba b = test::running_b();
  int found = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Verdict v = check_inclusion(a, b, StatParams::make(0.05, 0.01), {3, 0.5, seed});
    check_witness(a, b, v);
    if (const auto* hit = std::get_if<NotIncluded>(&v)) {
      ++found;
      CHECK(hit->counterexample == w("a", "b"));
      CHECK(hit->samples_used >= 1);
      CHECK(hit->samples_used <= 90);
    }
  }
  // Failure probability per run is (7/8)^90 < 6e-6.
  CHECK(found >= 999);
}

TEST_CASE("empty L(A) is trivially included") {
  const Nba empty = parse_ba("[p]\na,[p]->[q]\n[p]");
  CHECK(std::holds_alternative<TriviallyIncluded>(
      check_inclusion(empty, test::running_b(), StatParams::make(0.1, 0.1), {2, 0.5, 0})));
}

TEST_CASE("check_inclusion rejects bad parameters") {
  CHECK_THROWS_AS(check_inclusion(test::running_a(), test::running_b(), StatParams::make(0.1, 0.1), {1, 0.5, 0}),
                  ParameterError);
  CHECK_THROWS_AS(check_inclusion(test::running_a(), test::running_b(), {2.0, 0.1, 0}, {2, 0.5, 0}), ParameterError);
}

TEST_CASE("parallel runs report the serial result") {
  Rng gen(31);
  for (int i = 0; i < 40; ++i) {
    const Nba a = test::random_trimmed(gen, 4 + gen.below(5), 2);
    const Nba b = test::random_trimmed(gen, 4 + gen.below(5), 2);
    const SampleParams p{4, 0.3, static_cast<std::uint64_t>(i)};
    const auto stat = StatParams::make(0.02, 0.05);
    const Verdict serial = check_inclusion(a, b, stat, p);
    check_witness(a, b, serial);
    for (unsigned workers : {2u, 4u}) {
      const Verdict parallel = check_inclusion(a, b, stat, p, {workers});
      REQUIRE(serial.index() == parallel.index());
      if (const auto* hit = std::get_if<NotIncluded>(&serial)) {
        CHECK(hit->counterexample == std::get<NotIncluded>(parallel).counterexample);
        CHECK(hit->samples_used == std::get<NotIncluded>(parallel).samples_used);
      }
    }
  }
}

TEST_CASE("never NotIncluded on oracle-included pairs") {
  Rng gen(13);
  int pairs = 0;
  while (pairs < 15) {
    const Nba a = test::random_trimmed(gen, 2 + gen.below(3), 2);
    // B = A plus extra behaviour keeps inclusion likely.
    const Nba b = test::random_automaton(gen, 1 + gen.below(3), 2, 0.6, 0.7);
    if (!std::holds_alternative<oracle::Included>(oracle::exact_inclusion(a, b))) continue;
    ++pairs;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Verdict v = check_inclusion(a, b, StatParams::make(0.05, 0.05), {3, 0.5, seed});
      CHECK_FALSE(std::holds_alternative<NotIncluded>(v));
    }
  }
}

TEST_CASE("letters missing from B count as rejection") {
  const Nba a = parse_ba("[p]\nc,[p]->[p]\n[p]");
  const Verdict v = check_inclusion(a, test::running_b(), StatParams::make(0.5, 0.5), {2, 0.5, 0});
  REQUIRE(std::holds_alternative<NotIncluded>(v));
  CHECK(std::get<NotIncluded>(v).counterexample == w("", "c"));
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "imc2/errors.hpp"
#include "imc2/formats.hpp"
#include "imc2/inclusion.hpp"
#include "imc2/membership.hpp"
#include "imc2/oracle.hpp"
#include "imc2/randgen.hpp"
#include "imc2/sampler.hpp"
#include "imc2/version.hpp"

namespace py = pybind11;
using namespace imc2;

namespace {

using Word = std::pair<std::vector<std::string>, std::vector<std::string>>;

Word to_pair(const UPWord& w) { return {w.stem, w.loop}; }

py::object fraction(const oracle::Rational& r) {
  return py::module_::import("fractions").attr("Fraction")(oracle::to_string(r));
}

py::dict verdict_dict(const Verdict& v) {
  py::dict d;
  if (const auto* hit = std::get_if<NotIncluded>(&v)) {
    d["verdict"] = "not_included";
    d["counterexample"] = to_pair(hit->counterexample);
    d["samples"] = hit->samples_used;
  } else if (const auto* miss = std::get_if<NoCounterexampleFound>(&v)) {
    d["verdict"] = "no_counterexample";
    d["samples"] = miss->samples;
  } else {
    d["verdict"] = "trivially_included";
    d["samples"] = 0;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_imc2, m) {
  m.doc() = "Buchi automata, ultimately periodic words and the IMC2 inclusion test.";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "Imc2Error");
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<GuardError>(m, "GuardError", base.ptr());

  py::class_<Nba>(m, "Nba")
      .def_property_readonly("alphabet", &Nba::alphabet)
      .def_property_readonly("num_states", &Nba::num_states)
      .def_property_readonly("num_transitions", &Nba::num_transitions)
      .def_property_readonly("initial", &Nba::initial)
      .def_property_readonly("accepting", &Nba::accepting)
      .def_property_readonly("trimmed", &Nba::trimmed)
      .def("state_name", &Nba::state_name, py::arg("state"))
      .def(
          "transitions",
          [](const Nba& a) {
            std::vector<std::tuple<std::string, std::string, std::string>> out;
            for (StateId q = 0; q < a.num_states(); ++q)
              for (const Transition& t : a.out(q))
                out.emplace_back(a.state_name(q), a.alphabet()[t.letter], a.state_name(t.target));
            return out;
          },
          "(source, letter, target) triples by state name, in declaration order.")
      .def("__eq__", [](const Nba& x, const Nba& y) { return x == y; })
      .def("__repr__", [](const Nba& a) {
        return "<Nba states=" + std::to_string(a.num_states()) + " letters=" + std::to_string(a.num_letters()) +
               " transitions=" + std::to_string(a.num_transitions()) + ">";
      });

  m.def("parse_ba", [](const std::string& text) { return parse_ba(text); }, py::arg("text"));
  m.def("parse_hoa", [](const std::string& text) { return parse_hoa(text); }, py::arg("text"));
  m.def("emit_ba", &emit_ba, py::arg("a"));
  m.def("emit_hoa", &emit_hoa, py::arg("a"));
  m.def(
      "load", [](const std::string& path, const std::string& format) {
        return load_automaton(path, parse_format_kind(format));
      },
      py::arg("path"), py::arg("format") = "auto");
  m.def("trim", &trim, py::arg("a"), "Trimmed copy, or None when L(a) is empty.");
  m.def("is_empty", &is_empty, py::arg("a"));

  m.def(
      "member", [](const Nba& a, const std::vector<std::string>& stem, const std::vector<std::string>& loop) {
        return member(a, make_word(stem, loop));
      },
      py::arg("a"), py::arg("stem"), py::arg("loop"));
  m.def(
      "member_text", [](const Nba& a, const std::string& word) { return member(a, parse_word(word)); },
      py::arg("a"), py::arg("word"), "Membership of a word written as \"u1,u2:v1,v2\".");
  m.def(
      "normalize",
      [](const std::vector<std::string>& stem, const std::vector<std::string>& loop) {
        return to_pair(normalize(make_word(stem, loop)));
      },
      py::arg("stem"), py::arg("loop"));

  m.def("required_samples", &required_samples, py::arg("epsilon"), py::arg("delta"));
  m.def("default_k", &default_k, py::arg("a"), py::arg("b"));
  m.def(
      "check_inclusion",
      [](const Nba& a, const Nba& b, double epsilon, double delta, std::optional<unsigned> k, double p_stop,
         std::uint64_t seed, unsigned workers) {
        const SampleParams sample{k ? *k : default_k(a, b), p_stop, seed};
        Verdict v;
        {
          py::gil_scoped_release release;
          v = check_inclusion(a, b, StatParams::make(epsilon, delta), sample, {workers});
        }
        return verdict_dict(v);
      },
      py::arg("a"), py::arg("b"), py::arg("epsilon") = 0.001, py::arg("delta") = 0.02, py::arg("k") = py::none(),
      py::arg("p_stop") = 0.5, py::arg("seed") = 0, py::arg("workers") = 1);

  m.def(
      "sample",
      [](const Nba& a, unsigned k, double p_stop, std::uint64_t seed, std::size_t count) {
        const auto t = trim(a);
        if (!t) throw ParameterError("L(A) is empty; there is nothing to sample");
        LassoSampler sampler(*t, k, p_stop);
        py::list out;
        for (std::size_t i = 0; i < count; ++i) {
          Rng rng(derive_seed(seed, i));
          const TerminatingLasso l = sampler.sample(rng);
          py::list words;
          for (const IndexedWord& w : words_of(l)) words.append(to_pair(to_symbols(*t, w)));
          py::dict d;
          d["run"] = format_run(*t, l);
          d["words"] = words;
          out.append(d);
        }
        return out;
      },
      py::arg("a"), py::arg("k") = 2, py::arg("p_stop") = 0.5, py::arg("seed") = 0, py::arg("count") = 1);

  m.def(
      "exact_pz",
      [](const Nba& a, const Nba& b, unsigned k, const std::string& p_stop, std::size_t max_nodes) {
        const auto stats = oracle::exact_pz(a, b, k, oracle::parse_rational(p_stop), max_nodes);
        py::dict d;
        d["p_z"] = fraction(stats.p_z);
        d["q_z"] = fraction(stats.q_z);
        d["lassos"] = stats.distribution.entries.size();
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("k"), py::arg("p_stop") = "1/2",
      py::arg("max_nodes") = oracle::kDefaultMaxNodes);
  m.def(
      "lasso_distribution",
      [](const Nba& a, unsigned k, const std::string& p_stop) {
        const auto t = trim(a);
        if (!t) return py::list();
        py::list out;
        for (const auto& e : oracle::enumerate_lassos(*t, k, oracle::parse_rational(p_stop)).entries)
          out.append(py::make_tuple(format_run(*t, e.lasso), fraction(e.probability)));
        return out;
      },
      py::arg("a"), py::arg("k"), py::arg("p_stop") = "1/2");
  m.def(
      "exact_inclusion",
      [](const Nba& a, const Nba& b, std::size_t max_b_states) -> std::optional<Word> {
        const auto v = oracle::exact_inclusion(a, b, max_b_states);
        if (const auto* no = std::get_if<oracle::ExactNotIncluded>(&v)) return to_pair(no->witness);
        return std::nullopt;
      },
      py::arg("a"), py::arg("b"), py::arg("max_b_states") = oracle::kDefaultComplementStates,
      "None when L(a) is included in L(b), otherwise a witness (stem, loop).");
  m.def(
      "sufficient_k", [](unsigned n_b) { return py::int_(py::str(oracle::sufficient_k(n_b).str())); },
      py::arg("n_b"));

  m.def(
      "random_nba",
      [](std::size_t states, std::size_t letters, double density, double acc, std::uint64_t seed) {
        const GenParams g{states, letters, density, acc, seed};
        Rng rng(seed);
        return random_nba(g, rng);
      },
      py::arg("states") = 10, py::arg("letters") = 2, py::arg("density") = 1.5, py::arg("acc") = 0.3,
      py::arg("seed") = 0);
}

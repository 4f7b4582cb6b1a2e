#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "imc2/errors.hpp"
#include "imc2/formats.hpp"
#include "imc2/inclusion.hpp"
#include "imc2/membership.hpp"
#include "imc2/oracle.hpp"
#include "imc2/randgen.hpp"
#include "imc2/sampler.hpp"
#include "imc2/version.hpp"

namespace imc2::cli {

namespace {

std::string letters_line(const char* label, const std::vector<std::string>& letters) {
  std::string line = label;
  line += ':';
  for (const auto& l : letters) line += ' ' + l;
  return line;
}

unsigned parse_k(const std::string& text) {
  if (text == "auto") return 0;
  std::size_t used = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || used == 0) throw ParameterError("k must be \"auto\" or an integer, got \"" + text + "\"");
  if (value < 2) throw ParameterError("k must be at least 2, got " + text);
  return static_cast<unsigned>(value);
}

void write_output(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write " + path);
  file << content;
  if (!file) throw Error("cannot write " + path);
}

struct CheckArgs {
  std::string a_path, b_path;
  double epsilon = 0.001;
  double delta = 0.02;
  double p_stop = 0.5;
  std::string k = "auto";
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string format = "auto";
};

int run_check(const CheckArgs& args, std::ostream& out, std::ostream& err) {
  // Flags first, files second.
  const StatParams stat = StatParams::make(args.epsilon, args.delta);
  const unsigned k = parse_k(args.k);
  check_sample_params({k == 0 ? 2 : k, args.p_stop, args.seed});
  if (args.workers == 0) throw ParameterError("workers must be at least 1");
  const FormatKind kind = parse_format_kind(args.format);

  const Nba a = load_automaton(args.a_path, kind);
  const Nba b = load_automaton(args.b_path, kind);
  const SampleParams sample{k == 0 ? default_k(a, b) : k, args.p_stop, args.seed};
  const Verdict verdict = check_inclusion(a, b, stat, sample, {args.workers});

  if (const auto* hit = std::get_if<NotIncluded>(&verdict)) {
    out << letters_line("u", hit->counterexample.stem) << '\n' << letters_line("v", hit->counterexample.loop) << '\n';
    err << "not included (certain): counterexample found after " << hit->samples_used << " of " << stat.samples
        << " samples\n";
    return kNegative;
  }
  if (std::holds_alternative<TriviallyIncluded>(verdict)) {
    out << "included (certain, L(A) is empty)\n";
    return kOk;
  }
  out << "included (statistical): no counterexample found in " << std::get<NoCounterexampleFound>(verdict).samples
      << " samples (epsilon=" << args.epsilon << ", delta=" << args.delta << ", k=" << sample.k
      << ", pstop=" << args.p_stop << ")\n";
  return kOk;
}

int run_member(const std::string& path, const std::string& word_text, const std::string& format, std::ostream& out,
               std::ostream& err) {
  const UPWord word = parse_word(word_text);
  const FormatKind kind = parse_format_kind(format);
  const Nba a = load_automaton(path, kind);
  const MembershipResult result = check_membership(a, word);
  if (result.unknown_letter) err << "note: word uses letters outside the automaton's alphabet\n";
  out << (result.accepted ? "accepted" : "rejected") << '\n';
  return result.accepted ? kOk : kNegative;
}

int run_sample(const std::string& path, const std::string& k_text, double p_stop, std::uint64_t count,
               std::uint64_t seed, const std::string& format, std::ostream& out, std::ostream& err) {
  const unsigned k_flag = parse_k(k_text);
  check_sample_params({k_flag == 0 ? 2 : k_flag, p_stop, seed});
  const FormatKind kind = parse_format_kind(format);
  const Nba a = load_automaton(path, kind);
  const auto trimmed = trim(a);
  if (!trimmed) {
    err << "L(A) is empty: there is nothing to sample\n";
    return kOk;
  }
  const unsigned k = k_flag == 0 ? static_cast<unsigned>(std::max<std::size_t>(2, a.num_states())) : k_flag;
  LassoSampler sampler(*trimmed, k, p_stop);
  for (std::uint64_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, i));
    const TerminatingLasso lasso = sampler.sample(rng);
    out << format_run(*trimmed, lasso) << " =>";
    for (const IndexedWord& w : words_of(lasso)) out << ' ' << format_word(to_symbols(*trimmed, w));
    out << '\n';
  }
  return kOk;
}

int run_oracle(const std::string& a_path, const std::string& b_path, const std::string& k_text,
               const std::string& p_text, std::size_t max_nodes, std::size_t guard, const std::string& format,
               std::ostream& out, std::ostream& err) {
  const unsigned k_flag = parse_k(k_text);
  const oracle::Rational p_stop = oracle::parse_rational(p_text);
  if (p_stop <= 0 || p_stop >= 1) throw ParameterError("pstop out of range (0,1): " + p_text);
  const FormatKind kind = parse_format_kind(format);
  const Nba a = load_automaton(a_path, kind);
  const Nba b = load_automaton(b_path, kind);
  const unsigned k = k_flag == 0 ? default_k(a, b) : k_flag;

  const oracle::WitnessStats stats = oracle::exact_pz(a, b, k, p_stop, max_nodes);
  out << "lassos = " << stats.distribution.entries.size() << '\n';
  out << "p_Z = " << oracle::to_string(stats.p_z) << '\n';
  out << "q_Z = " << oracle::to_string(stats.q_z) << '\n';

  const oracle::ExactVerdict verdict = oracle::exact_inclusion(a, b, guard);
  if (const auto* miss = std::get_if<oracle::ExactNotIncluded>(&verdict)) {
    out << "not included (certain)\n";
    out << letters_line("u", miss->witness.stem) << '\n' << letters_line("v", miss->witness.loop) << '\n';
    return kNegative;
  }
  out << "included (certain, complement-based)\n";
  (void)err;
  return kOk;
}

struct GenArgs {
  GenParams params;
  std::string out_path;
  std::string format = "ba";
};

int run_gen(const GenArgs& args, std::ostream& out) {
  check_gen_params(args.params);
  FormatKind kind = parse_format_kind(args.format);
  if (kind == FormatKind::AUTO) kind = resolve_format(kind, args.out_path, "");
  Rng rng(args.params.seed);
  const Nba a = random_nba(args.params, rng);
  const std::string text = emit_automaton(a, kind);
  if (args.out_path.empty()) {
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
  } else {
    write_output(args.out_path, text);
  }
  return kOk;
}

int run_bench(std::size_t pairs, const std::string& grid_path, const std::string& out_path, std::uint64_t seed,
              unsigned workers, std::ostream& out) {
  std::ifstream in(grid_path);
  if (!in) throw Error("cannot read " + grid_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const BenchGrid grid = parse_bench_grid(buffer.str());
  if (workers == 0) throw ParameterError("workers must be at least 1");
  const auto rows = bench_sweep(pairs, grid, seed, workers);
  std::ostringstream table;
  write_bench_table(table, rows);
  if (out_path.empty()) {
    out << table.str();
  } else {
    write_output(out_path, table.str());
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monte Carlo language inclusion testing for Buchi automata"};
  app.set_version_flag("--version", std::string("imc2 ") + kVersion);
  app.require_subcommand(1);

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Search for a word in L(A) but not in L(B)");
  check_cmd->add_option("A", check.a_path, "Automaton A")->required();
  check_cmd->add_option("B", check.b_path, "Automaton B")->required();
  check_cmd->add_option("--epsilon", check.epsilon, "Error probability")->capture_default_str();
  check_cmd->add_option("--delta", check.delta, "Significance level")->capture_default_str();
  check_cmd->add_option("--pstop", check.p_stop, "Stopping probability")->capture_default_str();
  check_cmd->add_option("--k", check.k, "Occurrence bound: auto or an integer >= 2")->capture_default_str();
  check_cmd->add_option("--seed", check.seed, "Random seed")->capture_default_str();
  check_cmd->add_option("--workers", check.workers, "Sampling threads")->capture_default_str();
  check_cmd->add_option("--format", check.format, "ba, hoa or auto")->capture_default_str();

  std::string member_path, member_word, member_format = "auto";
  auto* member_cmd = app.add_subcommand("member", "Decide u v^omega in L(A); exit 0 accepted, 1 rejected");
  member_cmd->add_option("A", member_path, "Automaton")->required();
  member_cmd->add_option("--word", member_word, "Word as \"u:v\", letters comma-separated")->required();
  member_cmd->add_option("--format", member_format, "ba, hoa or auto")->capture_default_str();

  std::string sample_path, sample_k = "auto", sample_format = "auto";
  double sample_pstop = 0.5;
  std::uint64_t sample_count = 10, sample_seed = 0;
  auto* sample_cmd = app.add_subcommand("sample", "Print sampled terminating lassos and their candidate words");
  sample_cmd->add_option("A", sample_path, "Automaton")->required();
  sample_cmd->add_option("--k", sample_k, "Occurrence bound: auto or an integer >= 2")->capture_default_str();
  sample_cmd->add_option("--pstop", sample_pstop, "Stopping probability")->capture_default_str();
  sample_cmd->add_option("--count", sample_count, "Number of lassos")->capture_default_str();
  sample_cmd->add_option("--seed", sample_seed, "Random seed")->capture_default_str();
  sample_cmd->add_option("--format", sample_format, "ba, hoa or auto")->capture_default_str();

  std::string oracle_a, oracle_b, oracle_k = "auto", oracle_p = "1/2", oracle_format = "auto";
  std::size_t oracle_nodes = oracle::kDefaultMaxNodes, oracle_guard = oracle::kDefaultComplementStates;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact witness probability and exact inclusion");
  oracle_cmd->add_option("A", oracle_a, "Automaton A")->required();
  oracle_cmd->add_option("B", oracle_b, "Automaton B")->required();
  oracle_cmd->add_option("--k", oracle_k, "Occurrence bound: auto or an integer >= 2")->capture_default_str();
  oracle_cmd->add_option("--pstop", oracle_p, "Stopping probability as a fraction or decimal")->capture_default_str();
  oracle_cmd->add_option("--max-nodes", oracle_nodes, "Enumeration node cap")->capture_default_str();
  oracle_cmd->add_option("--complement-guard", oracle_guard, "Largest B to complement")->capture_default_str();
  oracle_cmd->add_option("--format", oracle_format, "ba, hoa or auto")->capture_default_str();

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random trimmed automaton");
  gen_cmd->add_option("--states", gen.params.n_states, "Number of states")->capture_default_str();
  gen_cmd->add_option("--letters", gen.params.n_letters, "Alphabet size")->capture_default_str();
  gen_cmd->add_option("--density", gen.params.trans_density, "Mean targets per state and letter")->capture_default_str();
  gen_cmd->add_option("--acc", gen.params.acc_density, "Fraction of accepting states")->capture_default_str();
  gen_cmd->add_option("--seed", gen.params.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out_path, "Output file (default: standard output)");
  gen_cmd->add_option("--format", gen.format, "ba, hoa or auto")->capture_default_str();

  std::size_t bench_pairs_count = 10;
  std::string bench_grid, bench_out;
  std::uint64_t bench_seed = 0;
  unsigned bench_workers = 1;
  auto* bench_cmd = app.add_subcommand("bench", "Run a parameter sweep over random pairs");
  bench_cmd->add_option("--pairs", bench_pairs_count, "Pairs per generator setting")->capture_default_str();
  bench_cmd->add_option("--grid-file", bench_grid, "JSON grid description")->required();
  bench_cmd->add_option("--out", bench_out, "Output file (default: standard output)");
  bench_cmd->add_option("--seed", bench_seed, "Random seed")->capture_default_str();
  bench_cmd->add_option("--workers", bench_workers, "Sampling threads per check")->capture_default_str();

  std::vector<std::string> argv_storage;
  argv_storage.emplace_back("imc2");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << "imc2 " << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*check_cmd) return run_check(check, out, err);
    if (*member_cmd) return run_member(member_path, member_word, member_format, out, err);
    if (*sample_cmd)
      return run_sample(sample_path, sample_k, sample_pstop, sample_count, sample_seed, sample_format, out, err);
    if (*oracle_cmd)
      return run_oracle(oracle_a, oracle_b, oracle_k, oracle_p, oracle_nodes, oracle_guard, oracle_format, out, err);
    if (*gen_cmd) return run_gen(gen, out);
    if (*bench_cmd) return run_bench(bench_pairs_count, bench_grid, bench_out, bench_seed, bench_workers, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  err << "error: no subcommand\n";
  return kUsageError;
}

}  // namespace imc2::cli

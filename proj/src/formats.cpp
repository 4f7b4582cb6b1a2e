#include "imc2/formats.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "imc2/errors.hpp"

namespace imc2 {

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Assigns dense ids to state names in order of first appearance.
class StateTable {
 public:
  std::size_t id(const std::string& name) {
    auto [it, inserted] = ids_.emplace(name, names_.size());
    if (inserted) names_.push_back(name);
    return it->second;
  }
  std::vector<std::string>& names() { return names_; }

 private:
  std::unordered_map<std::string, std::size_t> ids_;
  std::vector<std::string> names_;
};

std::string ba_state_name(std::string_view token, std::size_t line) {
  token = strip(token);
  if (token.size() >= 2 && token.front() == '[' && token.back() == ']') token = strip(token.substr(1, token.size() - 2));
  if (token.empty()) throw FormatError("empty state name", line);
  return std::string(token);
}

// ---------------------------------------------------------------------------
// HOA lexer and label formulas.

enum class Tok { Header, Ident, Int, String, Punct, Body, End, Eof };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
};

class HoaLexer {
 public:
  explicit HoaLexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }
  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (text_.compare(pos_, 2, "/*") == 0) {
        const std::size_t close = text_.find("*/", pos_ + 2);
        if (close == std::string_view::npos) throw FormatError("unterminated comment", line_);
        line_ += static_cast<std::size_t>(std::count(text_.begin() + static_cast<std::ptrdiff_t>(pos_),
                                                     text_.begin() + static_cast<std::ptrdiff_t>(close), '\n'));
        pos_ = close + 2;
      } else {
        return;
      }
    }
  }

  void advance() {
    skip_space_and_comments();
    const std::size_t line = line_;
    if (pos_ >= text_.size()) {
      current_ = {Tok::Eof, "", line};
      return;
    }
    const char c = text_[pos_];
    if (text_.compare(pos_, 8, "--BODY--") == 0) {
      pos_ += 8;
      current_ = {Tok::Body, "--BODY--", line};
    } else if (text_.compare(pos_, 7, "--END--") == 0) {
      pos_ += 7;
      current_ = {Tok::End, "--END--", line};
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      current_ = {Tok::Int, std::string(text_.substr(start, pos_ - start)), line};
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '@') {
      const std::size_t start = pos_++;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '-'))
        ++pos_;
      std::string word(text_.substr(start, pos_ - start));
      if (pos_ < text_.size() && text_[pos_] == ':') {
        ++pos_;
        current_ = {Tok::Header, word, line};
      } else {
        current_ = {Tok::Ident, word, line};
      }
    } else if (c == '"') {
      std::string value;
      ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
        if (text_[pos_] == '\n') ++line_;
        value += text_[pos_++];
      }
      if (pos_ >= text_.size()) throw FormatError("unterminated string", line);
      ++pos_;
      current_ = {Tok::String, value, line};
    } else {
      ++pos_;
      current_ = {Tok::Punct, std::string(1, c), line};
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  Token current_{Tok::Eof, "", 1};
};

bool is_punct(const Token& t, char c) { return t.kind == Tok::Punct && t.text.size() == 1 && t.text[0] == c; }

// Label formula compiled to postfix over AP indices.
class Label {
 public:
  static Label parse(HoaLexer& lex, std::size_t num_aps) {
    Label label;
    label.num_aps_ = num_aps;
    label.parse_or(lex);
    return label;
  }

  bool eval(std::uint32_t assignment) const {
    std::vector<bool> stack;
    stack.reserve(code_.size());
    for (int op : code_) {
      if (op >= 0) {
        stack.push_back(((assignment >> op) & 1u) != 0);
      } else if (op == kTrue) {
        stack.push_back(true);
      } else if (op == kFalse) {
        stack.push_back(false);
      } else if (op == kNot) {
        stack.back() = !stack.back();
      } else {
        const bool rhs = stack.back();
        stack.pop_back();
        stack.back() = op == kAnd ? (stack.back() && rhs) : (stack.back() || rhs);
      }
    }
    return stack.back();
  }

 private:
  static constexpr int kTrue = -1, kFalse = -2, kNot = -3, kAnd = -4, kOr = -5;

  void parse_or(HoaLexer& lex) {
    parse_and(lex);
    while (is_punct(lex.peek(), '|')) {
      lex.take();
      parse_and(lex);
      code_.push_back(kOr);
    }
  }
  void parse_and(HoaLexer& lex) {
    parse_not(lex);
    while (is_punct(lex.peek(), '&')) {
      lex.take();
      parse_not(lex);
      code_.push_back(kAnd);
    }
  }
  void parse_not(HoaLexer& lex) {
    if (is_punct(lex.peek(), '!')) {
      lex.take();
      parse_not(lex);
      code_.push_back(kNot);
      return;
    }
    parse_atom(lex);
  }
  void parse_atom(HoaLexer& lex) {
    const Token t = lex.take();
    if (t.kind == Tok::Int) {
      const unsigned long ap = std::stoul(t.text);
      if (ap >= num_aps_) throw FormatError("malformed formula: AP " + t.text + " out of range", t.line);
      code_.push_back(static_cast<int>(ap));
    } else if (t.kind == Tok::Ident && t.text == "t") {
      code_.push_back(kTrue);
    } else if (t.kind == Tok::Ident && t.text == "f") {
      code_.push_back(kFalse);
    } else if (t.kind == Tok::Ident && t.text.front() == '@') {
      throw FormatError("aliases are not supported", t.line);
    } else if (is_punct(t, '(')) {
      parse_or(lex);
      if (!is_punct(lex.take(), ')')) throw FormatError("malformed formula: expected ')'", t.line);
    } else {
      throw FormatError("malformed formula near '" + t.text + "'", t.line);
    }
  }

  std::size_t num_aps_ = 0;
  std::vector<int> code_;
};

std::string letter_name(std::uint32_t assignment, std::size_t num_aps) {
  if (num_aps == 0) return "t";
  std::string name(num_aps, '0');
  for (std::size_t i = 0; i < num_aps; ++i)
    if ((assignment >> i) & 1u) name[i] = '1';
  return name;
}

std::size_t parse_index(const Token& t, const char* what) {
  if (t.kind != Tok::Int) throw FormatError(std::string("expected ") + what + ", got '" + t.text + "'", t.line);
  return std::stoul(t.text);
}

}  // namespace

FormatKind parse_format_kind(std::string_view name) {
  if (name == "ba") return FormatKind::BA;
  if (name == "hoa") return FormatKind::HOA;
  if (name == "auto") return FormatKind::AUTO;
  throw ParameterError("unknown format \"" + std::string(name) + "\" (expected ba, hoa or auto)");
}

FormatKind resolve_format(FormatKind kind, const std::filesystem::path& path, std::string_view text) {
  if (kind != FormatKind::AUTO) return kind;
  const std::string ext = path.extension().string();
  if (ext == ".ba") return FormatKind::BA;
  if (ext == ".hoa" || ext == ".aut") return FormatKind::HOA;
  return strip(text).starts_with("HOA:") ? FormatKind::HOA : FormatKind::BA;
}

Nba parse_ba(std::string_view text) {
  enum class Phase { Leading, Transitions, Trailing };
  Phase phase = Phase::Leading;
  StateTable states;
  RawAutomaton raw;
  std::unordered_map<std::string, bool> seen_letters;
  std::vector<std::size_t> leading;
  std::vector<std::size_t> trailing;

  std::size_t line_no = 0;
  std::size_t start = 0;
  bool any_content = false;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    const std::string_view line = strip(text.substr(start, nl == text.npos ? text.npos : nl - start));
    start = nl == text.npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (line.empty()) continue;
    any_content = true;

    const std::size_t arrow = line.find("->");
    const std::size_t comma = line.find(',');
    if (arrow == line.npos && comma == line.npos) {
      const std::size_t q = states.id(ba_state_name(line, line_no));
      if (phase == Phase::Leading) {
        leading.push_back(q);
      } else {
        phase = Phase::Trailing;
        trailing.push_back(q);
      }
      continue;
    }
    if (arrow == line.npos || comma == line.npos || comma > arrow || line.find("->", arrow + 2) != line.npos)
      throw FormatError("malformed line \"" + std::string(line) + "\"", line_no);
    if (phase == Phase::Trailing)
      throw FormatError("transition after accepting-state lines: \"" + std::string(line) + "\"", line_no);
    phase = Phase::Transitions;
    const std::string letter(strip(line.substr(0, comma)));
    if (letter.empty()) throw FormatError("empty letter", line_no);
    const std::size_t src = states.id(ba_state_name(line.substr(comma + 1, arrow - comma - 1), line_no));
    const std::size_t dst = states.id(ba_state_name(line.substr(arrow + 2), line_no));
    if (seen_letters.emplace(letter, true).second) raw.alphabet.push_back(letter);
    raw.edges.push_back({src, letter, dst});
  }
  if (!any_content) throw FormatError("empty input");
  if (raw.edges.empty()) throw FormatError("no transitions");

  raw.num_states = states.names().size();
  raw.state_names = std::move(states.names());
  raw.initial = leading.empty() ? std::vector<std::size_t>{raw.edges.front().source} : leading;
  if (trailing.empty()) {
    for (std::size_t q = 0; q < raw.num_states; ++q) raw.accepting.push_back(q);
  } else {
    raw.accepting = trailing;
  }
  return validate(raw);
}

std::string emit_ba(const Nba& a) {
  if (a.accepting().empty()) throw FormatError("BA cannot express an automaton without accepting states");
  auto name = [&](StateId q) { return "[" + a.state_name(q) + "]"; };
  std::vector<std::string> lines;
  for (StateId q : a.initial()) lines.push_back(name(q));

  std::vector<std::tuple<StateId, const std::string*, StateId>> edges;
  for (StateId q = 0; q < a.num_states(); ++q)
    for (const Transition& t : a.out(q)) edges.emplace_back(q, &a.alphabet()[t.letter], t.target);
  std::sort(edges.begin(), edges.end(), [](const auto& x, const auto& y) {
    return std::tie(std::get<0>(x), *std::get<1>(x), std::get<2>(x)) <
           std::tie(std::get<0>(y), *std::get<1>(y), std::get<2>(y));
  });
  for (const auto& [src, letter, dst] : edges) lines.push_back(*letter + "," + name(src) + "->" + name(dst));
  for (StateId q : a.accepting()) lines.push_back(name(q));

  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += '\n';
    out += lines[i];
  }
  return out;
}

Nba parse_hoa(std::string_view text) {
  HoaLexer lex(text);
  RawAutomaton raw;
  std::optional<std::size_t> num_states;
  std::optional<std::size_t> num_aps;
  bool acceptance_seen = false;

  auto unsupported_acceptance = [](std::size_t line) { return FormatError("unsupported acceptance", line); };

  if (lex.peek().kind != Tok::Header || lex.peek().text != "HOA") throw FormatError("missing HOA: header", 1);
  while (lex.peek().kind != Tok::Body) {
    const Token key = lex.take();
    if (key.kind == Tok::Eof) throw FormatError("missing --BODY--", key.line);
    if (key.kind != Tok::Header) throw FormatError("expected a header, got '" + key.text + "'", key.line);
    std::vector<Token> values;
    while (lex.peek().kind != Tok::Header && lex.peek().kind != Tok::Body && lex.peek().kind != Tok::Eof)
      values.push_back(lex.take());

    if (key.text == "HOA") {
      if (values.empty() || values.front().text != "v1") throw FormatError("unsupported HOA version", key.line);
    } else if (key.text == "States") {
      if (values.size() != 1) throw FormatError("malformed States header", key.line);
      num_states = parse_index(values.front(), "state count");
    } else if (key.text == "Start") {
      if (values.size() != 1) throw FormatError("conjunctive Start (alternation) is not supported", key.line);
      raw.initial.push_back(parse_index(values.front(), "start state"));
    } else if (key.text == "AP") {
      if (values.empty()) throw FormatError("malformed AP header", key.line);
      num_aps = parse_index(values.front(), "AP count");
      if (values.size() != *num_aps + 1) throw FormatError("AP count does not match AP names", key.line);
      if (*num_aps > 16) throw FormatError("too many atomic propositions (" + values.front().text + " > 16)", key.line);
    } else if (key.text == "Acceptance") {
      std::string joined;
      for (const auto& v : values) joined += v.text;
      if (joined != "1Inf(0)") throw unsupported_acceptance(key.line);
      acceptance_seen = true;
    } else if (key.text == "acc-name") {
      if (values.empty() || values.front().text != "Buchi") throw unsupported_acceptance(key.line);
    } else if (key.text == "Alias") {
      throw FormatError("aliases are not supported", key.line);
    }
    // name, tool, properties and unknown headers are ignored.
  }
  lex.take();  // --BODY--
  if (!num_states) throw FormatError("missing States header");
  if (!num_aps) throw FormatError("missing AP header");
  if (!acceptance_seen) throw FormatError("missing Acceptance header");

  const std::uint32_t num_letters = 1u << *num_aps;
  for (std::uint32_t x = 0; x < num_letters; ++x) raw.alphabet.push_back(letter_name(x, *num_aps));
  raw.num_states = *num_states;
  std::vector<std::string> names(*num_states);
  bool any_name = false;

  std::optional<std::size_t> current;
  while (lex.peek().kind != Tok::End) {
    const Token t = lex.take();
    if (t.kind == Tok::Eof) throw FormatError("missing --END--", t.line);
    if (t.kind == Tok::Header && t.text == "State") {
      if (is_punct(lex.peek(), '[')) throw FormatError("state labels are not supported", t.line);
      const std::size_t q = parse_index(lex.take(), "state id");
      if (q >= *num_states) throw ValidationError("dangling state " + std::to_string(q));
      if (lex.peek().kind == Tok::String) {
        names[q] = lex.take().text;
        any_name = true;
      }
      if (is_punct(lex.peek(), '{')) {
        lex.take();
        while (!is_punct(lex.peek(), '}')) {
          const Token mark = lex.take();
          if (parse_index(mark, "acceptance set") != 0) throw FormatError("acceptance set out of range", mark.line);
          raw.accepting.push_back(q);
        }
        lex.take();
      }
      current = q;
      continue;
    }
    if (!is_punct(t, '[')) {
      throw FormatError(t.kind == Tok::Int ? "implicit edge labels are not supported" : "unexpected '" + t.text + "'",
                        t.line);
    }
    if (!current) throw FormatError("edge before any State: line", t.line);
    const Label label = Label::parse(lex, *num_aps);
    if (!is_punct(lex.take(), ']')) throw FormatError("malformed formula: expected ']'", t.line);
    const Token dst_tok = lex.take();
    const std::size_t dst = parse_index(dst_tok, "edge target");
    if (is_punct(lex.peek(), '&')) throw FormatError("universal branching is not supported", dst_tok.line);
    if (is_punct(lex.peek(), '{')) throw FormatError("transition-based acceptance marks are not supported", dst_tok.line);
    for (std::uint32_t x = 0; x < num_letters; ++x)
      if (label.eval(x)) raw.edges.push_back({*current, raw.alphabet[x], dst});
  }
  if (any_name) raw.state_names = std::move(names);
  return validate(raw);
}

std::string emit_hoa(const Nba& a) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < a.num_letters()) ++k;
  std::vector<std::string> labels;
  for (std::size_t letter = 0; letter < a.num_letters(); ++letter) {
    if (k == 0) {
      labels.emplace_back("t");
      continue;
    }
    std::string label;
    for (std::size_t bit = 0; bit < k; ++bit) {
      if (bit) label += '&';
      if (((letter >> bit) & 1u) == 0) label += '!';
      label += std::to_string(bit);
    }
    labels.push_back(std::move(label));
  }

  std::ostringstream out;
  out << "HOA: v1\n";
  out << "States: " << a.num_states() << "\n";
  for (StateId q : a.initial()) out << "Start: " << q << "\n";
  out << "AP: " << k;
  for (std::size_t bit = 0; bit < k; ++bit) out << " \"p" << bit << "\"";
  out << "\n";
  out << "acc-name: Buchi\n";
  out << "Acceptance: 1 Inf(0)\n";
  out << "--BODY--\n";
  for (StateId q = 0; q < a.num_states(); ++q) {
    out << "State: " << q;
    if (a.has_state_names()) out << " \"" << a.state_name(q) << "\"";
    if (a.is_accepting(q)) out << " {0}";
    out << "\n";
    for (const Transition& t : a.out(q)) out << "[" << labels[t.letter] << "] " << t.target << "\n";
  }
  out << "--END--\n";
  return out.str();
}

Nba parse_automaton(std::string_view text, FormatKind kind) {
  if (kind == FormatKind::AUTO) kind = resolve_format(kind, {}, text);
  return kind == FormatKind::HOA ? parse_hoa(text) : parse_ba(text);
}

Nba load_automaton(const std::filesystem::path& path, FormatKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return parse_automaton(text, resolve_format(kind, path, text));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string emit_automaton(const Nba& a, FormatKind kind) {
  return kind == FormatKind::HOA ? emit_hoa(a) : emit_ba(a);
}

}  // namespace imc2

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "imc2/nba.hpp"

namespace imc2 {

enum class FormatKind { BA, HOA, AUTO };

// "ba", "hoa" or "auto"; throws ParameterError otherwise.
FormatKind parse_format_kind(std::string_view name);

// AUTO resolves by extension (.ba -> BA, .hoa/.aut -> HOA), then by content
// (a leading "HOA:" header), and falls back to BA.
FormatKind resolve_format(FormatKind kind, const std::filesystem::path& path, std::string_view text);

/// BA format as read by RABIT and GOAL:
///
///   [init]            zero or more leading state lines: initial states
///   a,[p]->[q]        transition lines
///   [acc]             trailing state lines: accepting states
///
/// Without leading state lines the source of the first transition is the
/// only initial state; without trailing ones every state is accepting. The
/// alphabet is the set of transition letters in order of first appearance.
/// Square brackets around state names are optional.
Nba parse_ba(std::string_view text);

// Initial-state lines, transitions sorted by (source, letter, target), then
// accepting-state lines; lines are joined by '\n' with no trailing newline.
// Throws FormatError for an automaton without accepting states, which BA's
// defaulting rule cannot express.
std::string emit_ba(const Nba& a);

/// The state-based Buchi subset of HOA v1: "Acceptance: 1 Inf(0)", explicit
/// States/Start/AP headers, labelled edges whose labels are boolean formulas
/// over AP indices (!, &, |, t, f, parentheses) and acceptance marks on
/// states only. Letters are the 2^|AP| truth assignments; the name of a
/// letter is its bit pattern, character i being '1' iff AP i holds. With no
/// APs the single letter is named "t".
Nba parse_hoa(std::string_view text);

// Letter i is encoded over ceil(log2 |alphabet|) fresh APs p0, p1, ... as the
// conjunction of its binary code, bit j on AP j.
std::string emit_hoa(const Nba& a);

Nba parse_automaton(std::string_view text, FormatKind kind);
Nba load_automaton(const std::filesystem::path& path, FormatKind kind = FormatKind::AUTO);
std::string emit_automaton(const Nba& a, FormatKind kind);

}  // namespace imc2

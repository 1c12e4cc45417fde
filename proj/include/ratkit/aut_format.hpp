#pragma once
// Line-oriented .aut automaton text format.
//
//   alphabet: a b
//   states: 3
//   names: s0 s1 s2     (optional)
//   initial: 0
//   final: 2
//   0 a 1               (one transition per line, 'eps' for epsilon)

#include <string>
#include <string_view>

#include "ratkit/automaton.hpp"

namespace ratkit {

// Throws InputError with a line number on malformed input.
Nfa parse_aut(std::string_view text);
std::string format_aut(const Nfa& a);
std::string format_aut(const Dfa& d);

Nfa read_aut_file(const std::string& path);
std::string read_text_file(const std::string& path);

} // namespace ratkit

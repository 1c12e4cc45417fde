#pragma once
// Seeded generators for random automata, expressions and sentences.

#include <cstdint>
#include <random>

#include "ratkit/logic.hpp"
#include "ratkit/regex.hpp"

namespace ratkit {

using Rng = std::mt19937_64;

struct NfaShape {
    std::size_t max_states = 5;
    double edge_probability = 0.3;  // per (p, a, q)
    double final_probability = 0.4;
    double extra_initial_probability = 0.15; // state 0 is always initial
};

Nfa random_nfa(Rng& rng, const Alphabet& alphabet, const NfaShape& shape = {});
// Complete DFA with 1..max_states states; state 0 initial.
Dfa random_dfa(Rng& rng, const Alphabet& alphabet, std::size_t max_states, double final_probability = 0.4);
// Tree with at most max_nodes nodes using the operators of the dialect (morph excluded).
RegexPtr random_regex(Rng& rng, const Alphabet& alphabet, std::size_t max_nodes, Dialect dialect);
// Sentence of quantifier depth at most max_depth mixing first-order and set quantifiers.
FormulaPtr random_sentence(Rng& rng, const Alphabet& alphabet, std::size_t max_depth, bool first_order_only = false);
// Random word of length at most max_len.
Word random_word(Rng& rng, const Alphabet& alphabet, std::size_t max_len);

} // namespace ratkit

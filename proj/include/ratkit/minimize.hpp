#pragma once
// Minimal automata: pair marking, Moore refinement, Nerode classes.

#include <optional>
#include <vector>

#include "ratkit/core.hpp"

namespace ratkit {

enum class MinimizeAlgorithm { pair_marking, moore };

struct StatePartition {
    std::vector<std::vector<State>> blocks; // block k lists input states, ascending
    std::vector<State> block_of;            // per input state; kNoState when inaccessible
};

struct MinimizeResult {
    Dfa dfa;                  // complete, accessible, states numbered in BFS order
    StatePartition partition; // block k is the set of input states merged into output state k
    std::vector<State> state_map; // input state -> output state (kNoState when inaccessible)
    std::size_t passes = 0;   // marking passes that marked a pair, or Moore rounds that split a block
};

// Requires a complete automaton.
MinimizeResult minimize(const Dfa& d, MinimizeAlgorithm algorithm = MinimizeAlgorithm::moore);

// Determinize, complete and minimize.
Dfa minimal_dfa(const Nfa& a, const DeterminizeOptions& options = {});
Dfa minimal_dfa(const Dfa& d);

struct Distinction {
    bool equivalent = true;
    std::optional<Word> witness; // shortest word accepted from exactly one of the two states
};

// Requires a complete automaton; p and q are any states.
Distinction equivalent_states(const Dfa& d, State p, State q);

// Words of length <= max_len grouped by the state of the minimal automaton they lead to.
// Groups are ordered by that state, words inside a group in shortlex order.
std::vector<std::vector<Word>> nerode_classes(const Dfa& d, std::size_t max_len);

} // namespace ratkit

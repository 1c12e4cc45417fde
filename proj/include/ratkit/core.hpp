#pragma once
// Acceptance, completion, trimming, epsilon removal, determinization, emptiness.

#include <optional>
#include <vector>

#include "ratkit/automaton.hpp"

namespace ratkit {

// States q0..qn and the labels between them; labels may contain kEpsilon.
struct PathWitness {
    std::vector<State> states;
    std::vector<Symbol> labels;
};

struct AcceptResult {
    bool accepted = false;
    std::optional<PathWitness> witness;
};

AcceptResult accepts_nfa(const Nfa& a, const Word& w);

struct RunResult {
    State state = kNoState; // kNoState when the run blocks
    bool accepted = false;
};

RunResult run_dfa(const Dfa& d, const Word& w);

Nfa complete(const Nfa& a);
Dfa complete(const Dfa& d);

struct TrimResult {
    Nfa automaton;
    std::vector<State> accessible;   // ids in the input
    std::vector<State> coaccessible; // ids in the input
    std::vector<State> kept;         // kept[i] = input id of output state i
    std::size_t rounds = 0;          // fixpoint rounds for the accessible set
};

TrimResult trim(const Nfa& a);

struct EmptinessResult {
    bool empty = true;
    std::optional<Word> shortest; // set iff !empty
};

EmptinessResult is_empty(const Nfa& a);
EmptinessResult is_empty(const Dfa& d);

Nfa remove_epsilon(const Nfa& a);

struct DeterminizeOptions {
    std::size_t state_cap = 1'000'000;
    bool prune_coaccessible = false;
};

struct DeterminizeResult {
    Dfa dfa;
    std::vector<StateSet> subsets; // meaning of each produced state in the epsilon-free input
};

inline constexpr std::size_t kSubsetAutomatonCap = 20;

// Full 2^|Q| construction; state k is the subset whose bit i is bit i of k.
Dfa subset_automaton(const Nfa& a, std::size_t max_states = kSubsetAutomatonCap);

DeterminizeResult determinize(const Nfa& a, const DeterminizeOptions& options = {});

inline constexpr std::size_t kEnumerateCap = 16;

// Accepted words of length <= max_len, shorter first, then lexicographic in alphabet order.
std::vector<Word> enumerate_language(const Nfa& a, std::size_t max_len, std::size_t cap = kEnumerateCap);
std::vector<Word> enumerate_language(const Dfa& d, std::size_t max_len, std::size_t cap = kEnumerateCap);

// Bijection from states of d1 to states of d2 when isomorphic. Both must be complete and accessible.
std::optional<std::vector<State>> dfa_isomorphic(const Dfa& d1, const Dfa& d2);

// Restriction of d to states reachable from the initial state, renumbered in BFS order
// (alphabet order breaks ties). Equal canonical forms mean isomorphic automata.
Dfa canonical_form(const Dfa& d);

// Accessible part only, in BFS order.
Dfa accessible_part(const Dfa& d);

// String helpers used by diagnostics and the CLI.
std::string format_subset(const StateSet& s, const Nfa& origin);
std::string format_path(const PathWitness& p, const Nfa& a);

// Shortlex order on words.
bool shortlex_less(const Word& x, const Word& y);

} // namespace ratkit

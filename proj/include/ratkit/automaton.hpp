#pragma once
// Nfa and Dfa value types. Both are immutable once constructed.

#include <span>
#include <string>
#include <vector>

#include "ratkit/alphabet.hpp"
#include "ratkit/state_set.hpp"

namespace ratkit {

struct Transition {
    State src;
    Symbol label; // kEpsilon for an epsilon move
    State dst;
    friend auto operator<=>(const Transition&, const Transition&) = default;
};

// (Q, T, I, F). A 0-state automaton is legal and recognises the empty language.
class Nfa {
public:
    Nfa() = default;
    // Transitions are sorted and deduplicated; ids and labels are validated.
    Nfa(Alphabet alphabet, std::size_t num_states, std::vector<Transition> transitions,
        std::vector<State> initials, std::vector<State> finals, std::vector<std::string> names = {});

    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t num_states() const { return num_states_; }
    std::span<const Transition> transitions() const { return transitions_; }
    // All moves leaving q (epsilon moves last).
    std::span<const Transition> out(State q) const;
    // Moves leaving q on a (a may be kEpsilon).
    std::span<const Transition> out(State q, Symbol a) const;

    const std::vector<State>& initials() const { return initials_; }
    const std::vector<State>& finals() const { return finals_; }
    bool is_initial(State q) const { return initial_mask_[q]; }
    bool is_final(State q) const { return final_mask_[q]; }

    bool has_epsilon() const { return has_epsilon_; }
    // One initial state, no epsilon moves, at most one move per (state, symbol).
    bool is_deterministic() const;
    // Deterministic and every (state, symbol) has a move.
    bool is_complete() const;

    const std::vector<std::string>& names() const { return names_; }
    bool has_names() const { return !names_.empty(); }
    // Declared name, or the decimal id.
    std::string state_name(State q) const;

    Nfa with_names(std::vector<std::string> names) const;
    Nfa without_names() const { return with_names({}); }
    // Same structure over another alphabet of the same size.
    Nfa relabel(Alphabet alphabet) const;

private:
    Alphabet alphabet_;
    std::size_t num_states_ = 0;
    std::vector<Transition> transitions_;
    std::vector<std::size_t> offsets_{0}; // offsets_[q]..offsets_[q+1] index transitions_
    std::vector<State> initials_, finals_;
    std::vector<bool> initial_mask_, final_mask_;
    std::vector<std::string> names_;
    bool has_epsilon_ = false;
};

// Deterministic automaton with a transition table; kNoState marks an undefined move.
// Has at least one state; the empty language is a lone non-final state.
class Dfa {
public:
    Dfa() = default;
    Dfa(Alphabet alphabet, std::size_t num_states, std::vector<State> delta, State initial,
        std::vector<bool> finals, std::vector<std::string> names = {});

    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t num_states() const { return num_states_; }
    std::size_t num_symbols() const { return alphabet_.size(); }
    State next(State q, Symbol a) const { return delta_[q * alphabet_.size() + a]; }
    std::span<const State> row(State q) const {
        return {delta_.data() + q * alphabet_.size(), alphabet_.size()};
    }
    const std::vector<State>& table() const { return delta_; }
    State initial() const { return initial_; }
    bool is_final(State q) const { return finals_[q]; }
    const std::vector<bool>& final_mask() const { return finals_; }
    std::vector<State> finals() const;
    bool is_complete() const { return complete_; }

    const std::vector<std::string>& names() const { return names_; }
    bool has_names() const { return !names_.empty(); }
    std::string state_name(State q) const;
    Dfa with_names(std::vector<std::string> names) const;
    Dfa relabel(Alphabet alphabet) const;

    // State reached from `from` after reading w, or kNoState if the run blocks.
    State run(const Word& w, State from) const;
    State run(const Word& w) const { return run(w, initial_); }
    bool accepts(const Word& w) const;

    Nfa to_nfa() const;
    // Requires nfa.is_deterministic() and at least one state.
    static Dfa from_nfa(const Nfa& nfa);

private:
    Alphabet alphabet_;
    std::size_t num_states_ = 0;
    std::vector<State> delta_;
    State initial_ = 0;
    std::vector<bool> finals_;
    std::vector<std::string> names_;
    bool complete_ = false;
};

} // namespace ratkit

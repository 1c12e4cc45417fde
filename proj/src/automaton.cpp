#include "ratkit/automaton.hpp"

#include <algorithm>

#include "ratkit/error.hpp"

namespace ratkit {

namespace {

void normalize_states(std::vector<State>& v, std::size_t n, const char* what) {
    for (State q : v) {
        if (q >= n) throw ContractError(std::string(what) + " state " + std::to_string(q) + " out of range");
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<bool> mask_of(const std::vector<State>& v, std::size_t n) {
    std::vector<bool> m(n, false);
    for (State q : v) m[q] = true;
    return m;
}

} // namespace

Nfa::Nfa(Alphabet alphabet, std::size_t num_states, std::vector<Transition> transitions,
         std::vector<State> initials, std::vector<State> finals, std::vector<std::string> names)
    : alphabet_(std::move(alphabet)), num_states_(num_states), transitions_(std::move(transitions)),
      initials_(std::move(initials)), finals_(std::move(finals)), names_(std::move(names)) {
    if (!names_.empty() && names_.size() != num_states_)
        throw ContractError("names table size does not match the number of states");
    for (const auto& t : transitions_) {
        if (t.src >= num_states_ || t.dst >= num_states_)
            throw ContractError("transition endpoint out of range");
        if (t.label != kEpsilon && t.label >= alphabet_.size())
            throw ContractError("transition label outside the alphabet");
        if (t.label == kEpsilon) has_epsilon_ = true;
    }
    std::sort(transitions_.begin(), transitions_.end());
    transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
    normalize_states(initials_, num_states_, "initial");
    normalize_states(finals_, num_states_, "final");
    initial_mask_ = mask_of(initials_, num_states_);
    final_mask_ = mask_of(finals_, num_states_);
    offsets_.assign(num_states_ + 1, 0);
    for (const auto& t : transitions_) ++offsets_[t.src + 1];
    for (std::size_t q = 0; q < num_states_; ++q) offsets_[q + 1] += offsets_[q];
}

std::span<const Transition> Nfa::out(State q) const {
    return std::span<const Transition>(transitions_).subspan(offsets_[q], offsets_[q + 1] - offsets_[q]);
}

std::span<const Transition> Nfa::out(State q, Symbol a) const {
    auto all = out(q);
    auto lo = std::lower_bound(all.begin(), all.end(), a,
                               [](const Transition& t, Symbol s) { return t.label < s; });
    auto hi = std::upper_bound(lo, all.end(), a, [](Symbol s, const Transition& t) { return s < t.label; });
    return {lo, hi};
}

bool Nfa::is_deterministic() const {
    if (initials_.size() != 1 || has_epsilon_) return false;
    for (std::size_t i = 1; i < transitions_.size(); ++i) {
        if (transitions_[i].src == transitions_[i - 1].src && transitions_[i].label == transitions_[i - 1].label)
            return false;
    }
    return true;
}

bool Nfa::is_complete() const {
    return is_deterministic() && transitions_.size() == num_states_ * alphabet_.size();
}

std::string Nfa::state_name(State q) const {
    return names_.empty() ? std::to_string(q) : names_[q];
}

Nfa Nfa::with_names(std::vector<std::string> names) const {
    Nfa copy = *this;
    if (!names.empty() && names.size() != num_states_)
        throw ContractError("names table size does not match the number of states");
    copy.names_ = std::move(names);
    return copy;
}

Nfa Nfa::relabel(Alphabet alphabet) const {
    if (alphabet.size() != alphabet_.size()) throw ContractError("relabel needs an alphabet of equal size");
    Nfa copy = *this;
    copy.alphabet_ = std::move(alphabet);
    return copy;
}

Dfa::Dfa(Alphabet alphabet, std::size_t num_states, std::vector<State> delta, State initial,
         std::vector<bool> finals, std::vector<std::string> names)
    : alphabet_(std::move(alphabet)), num_states_(num_states), delta_(std::move(delta)), initial_(initial),
      finals_(std::move(finals)), names_(std::move(names)) {
    if (num_states_ == 0) throw ContractError("a Dfa needs at least one state");
    if (delta_.size() != num_states_ * alphabet_.size()) throw ContractError("transition table has the wrong size");
    if (finals_.size() != num_states_) throw ContractError("final mask has the wrong size");
    if (initial_ >= num_states_) throw ContractError("initial state out of range");
    if (!names_.empty() && names_.size() != num_states_)
        throw ContractError("names table size does not match the number of states");
    complete_ = true;
    for (State t : delta_) {
        if (t == kNoState) {
            complete_ = false;
        } else if (t >= num_states_) {
            throw ContractError("transition target out of range");
        }
    }
}

std::vector<State> Dfa::finals() const {
    std::vector<State> out;
    for (State q = 0; q < num_states_; ++q)
        if (finals_[q]) out.push_back(q);
    return out;
}

std::string Dfa::state_name(State q) const {
    return names_.empty() ? std::to_string(q) : names_[q];
}

Dfa Dfa::with_names(std::vector<std::string> names) const {
    Dfa copy = *this;
    if (!names.empty() && names.size() != num_states_)
        throw ContractError("names table size does not match the number of states");
    copy.names_ = std::move(names);
    return copy;
}

Dfa Dfa::relabel(Alphabet alphabet) const {
    if (alphabet.size() != alphabet_.size()) throw ContractError("relabel needs an alphabet of equal size");
    Dfa copy = *this;
    copy.alphabet_ = std::move(alphabet);
    return copy;
}

State Dfa::run(const Word& w, State from) const {
    State q = from;
    for (Symbol a : w) {
        if (a >= alphabet_.size()) throw InputError("word contains a symbol id outside the alphabet");
        q = next(q, a);
        if (q == kNoState) return kNoState;
    }
    return q;
}

bool Dfa::accepts(const Word& w) const {
    State q = run(w);
    return q != kNoState && finals_[q];
}

Nfa Dfa::to_nfa() const {
    std::vector<Transition> ts;
    const std::size_t k = alphabet_.size();
    for (State q = 0; q < num_states_; ++q)
        for (Symbol a = 0; a < k; ++a)
            if (State t = next(q, a); t != kNoState) ts.push_back({q, a, t});
    return Nfa(alphabet_, num_states_, std::move(ts), {initial_}, finals(), names_);
}

Dfa Dfa::from_nfa(const Nfa& nfa) {
    if (!nfa.is_deterministic() || nfa.num_states() == 0)
        throw ContractError("automaton is not deterministic");
    const std::size_t k = nfa.alphabet().size();
    std::vector<State> delta(nfa.num_states() * k, kNoState);
    for (const auto& t : nfa.transitions()) delta[t.src * k + t.label] = t.dst;
    std::vector<bool> fin(nfa.num_states(), false);
    for (State f : nfa.finals()) fin[f] = true;
    return Dfa(nfa.alphabet(), nfa.num_states(), std::move(delta), nfa.initials().front(), std::move(fin),
               nfa.names());
}

} // namespace ratkit

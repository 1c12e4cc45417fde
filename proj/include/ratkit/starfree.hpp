#pragma once
// First-order definability, star-free expressions from aperiodic automata, FO(<) sentences from
// star-free expressions.

#include <string>
#include <vector>

#include "ratkit/logic.hpp"
#include "ratkit/monoid.hpp"
#include "ratkit/regex.hpp"

namespace ratkit {

struct FoDefinability {
    bool definable = false;
    std::size_t monoid_size = 0;
    Aperiodicity aperiodicity;
    SyntacticMonoid syntactic;
};

FoDefinability is_fo_definable(const Dfa& d, std::size_t cap = kMonoidCap);
FoDefinability is_fo_definable(const Nfa& a, std::size_t cap = kMonoidCap, const DeterminizeOptions& options = {});

// One recursion step of the extraction.
struct DerivationNode {
    enum class Kind { single_state, unary, permutations, split };
    Kind kind = Kind::single_state;
    std::size_t states = 0;
    std::vector<std::string> alphabet;
    std::string letter;               // split: the letter whose map is not onto
    std::vector<State> image;         // split: Q.f_letter (the state set of the C automaton)
    // split: C letters as (name, shortest word over the B letters whose map they carry)
    std::vector<std::pair<std::string, std::string>> c_letters;
    std::vector<std::string> psi_log; // split: "c0 -> expression"
    std::vector<DerivationNode> children; // split: B automaton, then C automaton
};

const char* derivation_kind_name(DerivationNode::Kind k);
// Indented text dump.
std::string format_derivation(const DerivationNode& node);

inline constexpr std::size_t kStarFreeNodeCap = 50'000;

struct StarFreeOptions {
    std::size_t node_cap = kStarFreeNodeCap; // largest expression tree allowed at any step
    bool validate = true;                    // compile every output and compare with the automaton
};

struct StarFreeResult {
    Regex language;              // star-free dialect
    std::vector<RegexPtr> pairs; // pairs[q * n + q2] denotes {w : q.w = q2}
    DerivationNode trace;
};

// Requires a complete DFA with an aperiodic transition monoid (ContractError otherwise).
StarFreeResult extract_starfree(const Dfa& d, const StarFreeOptions& options = {});

enum class RelativizeMode { below, strictly_above, at_or_below };

// Bounds every quantifier of f by its position relative to x; ContractError if x occurs in f.
FormulaPtr relativize(const FormulaPtr& f, const std::string& x, RelativizeMode mode);

// FO(<) sentence with the language of a star-free expression.
FormulaPtr starfree_to_fo(const Regex& e);
FormulaPtr starfree_to_fo(const RegexPtr& e);

} // namespace ratkit

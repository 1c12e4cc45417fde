#pragma once
// Finite monoids: transition and syntactic monoids, recognition, division, isomorphism.

#include <cstdint>
#include <optional>
#include <vector>

#include "ratkit/core.hpp"

namespace ratkit {

struct TransitionMonoid;

using Element = std::uint32_t;

inline constexpr std::size_t kMonoidCap = 100'000;
inline constexpr std::size_t kFullTableCap = 4096; // larger monoids multiply through representatives
inline constexpr std::size_t kIsomorphismCap = 512;

// Letter images of a morphism from A* into a monoid.
struct LetterImages {
    Alphabet alphabet;
    std::vector<Element> images; // per symbol
};

// A monoid generated by the images of an alphabet. Element 0 need not be the identity for
// monoids read from a table; transition monoids number elements in shortlex order of their
// representatives, so there the identity is 0.
class FiniteMonoid {
public:
    FiniteMonoid() = default;

    // Full multiplication table (row-major, table[x * size + y] = x.y). Checks ranges, the identity
    // law, associativity, and that the generators generate everything (InputError otherwise).
    static FiniteMonoid from_table(std::size_t size, std::vector<Element> table, Element identity,
                                   LetterImages generators);

    std::size_t size() const { return reps_.size(); }
    Element identity() const { return identity_; }
    const LetterImages& generators() const { return gens_; }
    const Alphabet& alphabet() const { return gens_.alphabet; }
    Element generator(Symbol a) const { return gens_.images.at(a); }

    // Shortest, then alphabetically least, word evaluating to e.
    const Word& representative(Element e) const { return reps_.at(e); }
    Element right(Element e, Symbol a) const { return right_[e * alphabet().size() + a]; }
    Element multiply(Element x, Element y) const;
    Element power(Element x, std::uint64_t k) const;
    Element element_of(const Word& w) const;
    bool has_table() const { return !table_.empty(); }
    // Full table; computed on construction when size() <= kFullTableCap.
    const std::vector<Element>& table() const { return table_; }
    bool is_idempotent(Element e) const { return multiply(e, e) == e; }

    // Label for diagnostics: the representative word ("1" for the identity).
    std::string label(Element e) const;

private:
    friend TransitionMonoid transition_monoid(const Dfa& d, std::size_t cap);
    LetterImages gens_;
    Element identity_ = 0;
    std::vector<Element> right_; // size x |A|
    std::vector<Word> reps_;
    std::vector<Element> table_;

    void fill_table();
};

struct TransitionMonoid {
    FiniteMonoid monoid;
    std::vector<std::vector<State>> maps; // maps[e][q] = q.w for the representative w of e
};

// Requires a complete DFA.
TransitionMonoid transition_monoid(const Dfa& d, std::size_t cap = kMonoidCap);

struct SyntacticMonoid {
    Dfa minimal;
    TransitionMonoid transitions; // monoid generators are the syntactic letter images
    const FiniteMonoid& monoid() const { return transitions.monoid; }
};

SyntacticMonoid syntactic_monoid(const Dfa& d, std::size_t cap = kMonoidCap);
SyntacticMonoid syntactic_monoid(const Nfa& a, std::size_t cap = kMonoidCap,
                                 const DeterminizeOptions& options = {});

struct Aperiodicity {
    bool aperiodic = true;
    std::optional<Element> violating;  // first element with m^(n-1) != m^n, n = |M|
    std::optional<Element> witness;    // a non-idempotent element of its power group
    std::vector<Element> group;        // the cyclic group inside the powers of `violating`
};

Aperiodicity is_aperiodic(const FiniteMonoid& m);

// The |M|-state automaton with transitions x -a-> x.phi(a), initial identity and finals X.
Dfa monoid_recognizes(const FiniteMonoid& m, const LetterImages& phi, const std::vector<Element>& accepting);

// Elements reachable from the identity through the letter images, in shortlex order of words.
struct Submonoid {
    std::vector<Element> elements;
    std::vector<Word> representatives;
};
Submonoid generated_submonoid(const FiniteMonoid& m, const LetterImages& phi);

struct DivisionWitness {
    Submonoid source;             // M' = phi(A*) inside m
    SyntacticMonoid target;       // M(L) with L = phi^-1(X)
    std::vector<Element> images;  // images[i] = psi(source.elements[i])
    bool surjective = false;
};

// Builds and verifies psi: M' -> M(L); ContractError when psi is not a well-defined morphism.
DivisionWitness division_witness(const FiniteMonoid& m, const LetterImages& phi,
                                 const std::vector<Element>& accepting);

// Exact; ResourceError above `cap` elements.
bool monoid_isomorphic(const FiniteMonoid& m1, const FiniteMonoid& m2, std::size_t cap = kIsomorphismCap);

// Exhaustive associativity and identity check (for tests and file input).
bool check_monoid_laws(const FiniteMonoid& m);

} // namespace ratkit

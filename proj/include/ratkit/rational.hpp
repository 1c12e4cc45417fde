#pragma once
// Closure operations on recognizable languages and the decisions built on them.

#include <optional>
#include <vector>

#include "ratkit/core.hpp"

namespace ratkit {

class Morphism {
public:
    Morphism() = default;
    // images[s] is the image of source symbol s; every image letter must be below target.size().
    Morphism(Alphabet source, Alphabet target, std::vector<Word> images);
    static Morphism identity(const Alphabet& a);

    const Alphabet& source() const { return source_; }
    const Alphabet& target() const { return target_; }
    const Word& image(Symbol s) const { return images_.at(s); }
    const std::vector<Word>& images() const { return images_; }
    bool erasing() const; // some letter maps to the empty word
    Word apply(const Word& w) const;

    // "a->bc b->eps"
    std::string to_string() const;

private:
    Alphabet source_, target_;
    std::vector<Word> images_;
};

// Small building blocks.
Nfa empty_language(const Alphabet& a);     // no states
Nfa epsilon_language(const Alphabet& a);   // {eps}
Nfa universal_language(const Alphabet& a); // A*
Nfa word_language(const Alphabet& a, const Word& w);

Dfa complement(const Dfa& d);

Nfa union_disjoint(const Nfa& a1, const Nfa& a2);

enum class ProductMode { intersect, unite };

// Accessible pairs only. Union mode needs complete inputs.
Nfa product(const Nfa& a1, const Nfa& a2, ProductMode mode);
Dfa product(const Dfa& d1, const Dfa& d2, ProductMode mode);

Nfa concat(const Nfa& a1, const Nfa& a2);
Nfa star(const Nfa& a);

Nfa morphic_image(const Nfa& a, const Morphism& phi);
Nfa inverse_morphic_image(const Nfa& a, const Morphism& phi);

enum class QuotientSide { left, right };
// left: K^-1 L = {v : uv in L for some u in K}; right: L K^-1.
Nfa quotient(const Nfa& a, const Nfa& k, QuotientSide side);

enum class ClosureKind { prefixes, suffixes, factors, mirror, subwords };
Nfa closure_unary(const Nfa& a, ClosureKind kind);

Nfa shuffle(const Nfa& a1, const Nfa& a2);

struct Decision {
    bool holds = false;
    std::optional<Word> counterexample; // shortest word witnessing failure
};

Decision decide_inclusion(const Nfa& a1, const Nfa& a2, const DeterminizeOptions& options = {});
Decision decide_equivalence(const Nfa& a1, const Nfa& a2, const DeterminizeOptions& options = {});

// Re-express both automata over the union alphabet (symbols of a1 first, then new ones of a2).
std::pair<Nfa, Nfa> align_alphabets(const Nfa& a1, const Nfa& a2);
// Same automaton over a larger alphabet that contains all of its symbols.
Nfa widen_alphabet(const Nfa& a, const Alphabet& wider);

void require_same_alphabet(const Alphabet& x, const Alphabet& y, const char* op);

} // namespace ratkit

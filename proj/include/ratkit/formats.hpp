#pragma once
// Text formats other than .aut:
//
//   .mor   source: a b          (optional)
//          target: a b c        (optional)
//          morphism: a->bc b->eps
//
//   .mso   alphabet: a b
//          <formula, any number of lines>
//
//   .mon   size: 3
//          identity: 0
//          gen: a -> 1
//          0 1 2                (one table row per element)

#include <string>
#include <string_view>

#include "ratkit/logic.hpp"
#include "ratkit/monoid.hpp"
#include "ratkit/rational.hpp"

namespace ratkit {

// Accepts a .mor block or a bare "a->bc b->eps" line. Missing alphabets come from the hints, else
// from the letters in order of appearance. Images over multi-character symbols are '.'-separated.
Morphism parse_morphism(std::string_view text, const Alphabet* source_hint = nullptr,
                        const Alphabet* target_hint = nullptr);
std::string format_morphism(const Morphism& m);

struct MsoFile {
    Alphabet alphabet;
    FormulaPtr formula;
};

MsoFile parse_mso(std::string_view text);
std::string format_mso(const Alphabet& alphabet, const FormulaPtr& f);

FiniteMonoid parse_monoid(std::string_view text);
// ResourceError when the monoid has no stored table.
std::string format_monoid(const FiniteMonoid& m);

} // namespace ratkit

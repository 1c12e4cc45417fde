#pragma once
// Rational, extended and star-free expressions.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ratkit/core.hpp"
#include "ratkit/rational.hpp"

namespace ratkit {

enum class Dialect { rational, extended, star_free };

enum class RegexKind { empty, epsilon, letter, unite, concat, star, intersect, complement, morph };

// Letter images of a map{...} node, by symbol name; resolved against alphabets at compile time.
struct MorphSpec {
    std::vector<std::string> source;
    std::vector<std::vector<std::string>> images;
};

struct RegexNode;
using RegexPtr = std::shared_ptr<const RegexNode>;

struct RegexNode {
    RegexKind kind;
    std::string symbol;                    // letter
    RegexPtr left, right;                  // right unused by unary nodes
    std::shared_ptr<const MorphSpec> morph; // morph
};

namespace rx {
RegexPtr empty();
RegexPtr eps();
RegexPtr letter(std::string symbol);
RegexPtr unite(RegexPtr l, RegexPtr r);
RegexPtr concat(RegexPtr l, RegexPtr r);
RegexPtr star(RegexPtr e);
RegexPtr intersect(RegexPtr l, RegexPtr r);
RegexPtr complement(RegexPtr e);
RegexPtr morph(MorphSpec spec, RegexPtr e);
RegexPtr universe(); // ~0
// Balanced folds; the empty list gives 0 (unite) or eps (concat) or ~0 (intersect).
RegexPtr unite_all(const std::vector<RegexPtr>& es);
RegexPtr concat_all(const std::vector<RegexPtr>& es);
RegexPtr intersect_all(const std::vector<RegexPtr>& es);
} // namespace rx

class Regex {
public:
    Regex() : Regex(rx::empty(), Dialect::extended) {}
    // Throws InputError when the tree uses an operator the dialect forbids.
    Regex(RegexPtr root, Dialect dialect);

    const RegexPtr& root() const { return root_; }
    Dialect dialect() const { return dialect_; }
    std::string to_string() const;

private:
    RegexPtr root_;
    Dialect dialect_;
};

const char* dialect_name(Dialect d);
Dialect parse_dialect(std::string_view name);

// Tokens: 0, eps, ~, *, |, &, (, ), map{ s->w, ... }(e), letters. A run of identifier
// characters is read one character per symbol except the bare runs "eps" and "map";
// multi-character symbols (or the symbol 0) are written in single quotes.
Regex parse_regex(std::string_view text, Dialect dialect);
std::string print_regex(const RegexPtr& e);

struct CompileStats {
    std::size_t star_calls = 0;
    std::size_t complement_calls = 0;
    std::size_t nodes = 0;
};

struct CompileOptions {
    DeterminizeOptions determinize;
    // Intermediate results above this many states are replaced by their minimal automaton.
    std::size_t reduce_threshold = 48;
};

Nfa compile_regex(const Regex& e, const Alphabet& alphabet, const CompileOptions& options = {},
                  CompileStats* stats = nullptr);
Nfa compile_regex(const RegexPtr& e, const Alphabet& alphabet, const CompileOptions& options = {},
                  CompileStats* stats = nullptr);

// Number of nodes of the expression tree, counting shared subtrees once per occurrence (saturating).
std::uint64_t regex_size(const RegexPtr& e);

struct ExtractResult {
    Regex expression;     // rational dialect, unsimplified
    std::uint64_t size = 0; // node count of `expression`
};

// McNaughton-Yamada: states eliminated in ascending id order. Requires an epsilon-free automaton.
ExtractResult extract_regex(const Nfa& a);

RegexPtr simplify(const RegexPtr& e);
Regex simplify(const Regex& e);

// Whether the empty word belongs to the language (no Morph nodes below a Complement needed).
bool nullable(const RegexPtr& e);

// Symbol names of letters outside map bodies and of map images, in order of first occurrence.
std::vector<std::string> regex_symbols(const RegexPtr& e);

} // namespace ratkit

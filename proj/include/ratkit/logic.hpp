#pragma once
// Monadic second-order logic of one successor and order on finite words.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ratkit/core.hpp"
#include "ratkit/rational.hpp"

namespace ratkit {

enum class FormulaKind {
    truth,
    eq,        // var1 = var2
    less,      // var1 < var2
    succ,      // S(var1, var2)
    letter_at, // 'symbol'(var1)
    set_mem,   // var1(var2), var1 a set variable
    negation,
    conjunction,
    disjunction,
    exists_fo,
    forall_fo,
    exists_so,
    forall_so,
};

struct FormulaNode;
using FormulaPtr = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
    FormulaKind kind;
    std::string var1, var2; // atoms; var1 is the bound variable of a quantifier
    std::string symbol;     // letter_at
    FormulaPtr left, right; // negation and quantifiers use left only
};

namespace fo {
FormulaPtr truth();
FormulaPtr falsity(); // !true
FormulaPtr eq(std::string x, std::string y);
FormulaPtr less(std::string x, std::string y);
FormulaPtr succ(std::string x, std::string y);
FormulaPtr letter_at(std::string symbol, std::string x);
FormulaPtr set_mem(std::string set, std::string x);
FormulaPtr negation(FormulaPtr f);
FormulaPtr conj(FormulaPtr l, FormulaPtr r);
FormulaPtr disj(FormulaPtr l, FormulaPtr r);
FormulaPtr implies(FormulaPtr l, FormulaPtr r); // !l | r
FormulaPtr iff(FormulaPtr l, FormulaPtr r);     // (l & r) | (!l & !r)
FormulaPtr exists1(std::string x, FormulaPtr f);
FormulaPtr forall1(std::string x, FormulaPtr f);
FormulaPtr exists2(std::string x, FormulaPtr f);
FormulaPtr forall2(std::string x, FormulaPtr f);
// Balanced folds; empty conjunction is true, empty disjunction is !true.
FormulaPtr conj_all(const std::vector<FormulaPtr>& fs);
FormulaPtr disj_all(const std::vector<FormulaPtr>& fs);
} // namespace fo

bool is_set_variable(std::string_view name); // uppercase initial

struct FragmentTag {
    bool uses_successor = false;
    bool uses_order = false;
    bool uses_set_quantifier = false;
    bool is_fo_order() const { return !uses_successor && !uses_set_quantifier; }
    bool is_fo_successor() const { return !uses_order && !uses_set_quantifier; }
};

FragmentTag fragment(const FormulaPtr& f);

// Throws InputError with line:column on syntax errors and for letters outside the alphabet.
FormulaPtr parse_formula(std::string_view text, const Alphabet& alphabet);
std::string print_formula(const FormulaPtr& f);

// Free variables in order of first free occurrence.
std::vector<std::string> free_variables(const FormulaPtr& f);
// Every variable name that occurs, bound or free.
std::vector<std::string> all_variables(const FormulaPtr& f);
std::size_t quantifier_depth(const FormulaPtr& f);
std::size_t formula_size(const FormulaPtr& f);

struct Valuation {
    std::map<std::string, std::size_t> fo;
    std::map<std::string, std::vector<std::size_t>> so;
};

// Direct recursive evaluation. Set quantifiers enumerate all subsets of positions.
bool eval_formula(const Word& u, const Valuation& v, const FormulaPtr& f, const Alphabet& alphabet);

FormulaPtr rewrite_successor_in_order(const FormulaPtr& f);
FormulaPtr rewrite_order_in_mso_s(const FormulaPtr& f);

// Letters of B_{p,q} = A x {0,1}^p x {0,1}^q. Letter index = base * 2^(p+q) + bits, where bit i
// belongs to track i and tracks are the first-order ones followed by the set ones.
// Letter names are "a:fo-bits:so-bits" ("a:10:0"); with no tracks the names are the base names.
class TrackAlphabet {
public:
    TrackAlphabet() = default;
    TrackAlphabet(Alphabet base, std::vector<std::string> fo_tracks, std::vector<std::string> so_tracks);

    const Alphabet& base() const { return base_; }
    const std::vector<std::string>& fo_tracks() const { return fo_; }
    const std::vector<std::string>& so_tracks() const { return so_; }
    std::size_t num_tracks() const { return fo_.size() + so_.size(); }
    const Alphabet& alphabet() const { return alphabet_; }

    Symbol encode(Symbol base_letter, std::uint64_t bits) const {
        return static_cast<Symbol>((std::uint64_t{base_letter} << num_tracks()) | bits);
    }
    Symbol base_of(Symbol s) const { return s >> num_tracks(); }
    std::uint64_t bits_of(Symbol s) const { return s & ((std::uint64_t{1} << num_tracks()) - 1); }
    // Track index of a variable, or nullopt.
    std::optional<std::size_t> track_of(std::string_view var) const;

    Word encode_word(const Word& u, const Valuation& v) const;
    // Decodes a word of K_{p,q}; nullopt when some first-order track does not hold exactly one 1.
    std::optional<std::pair<Word, Valuation>> decode_word(const Word& t) const;

private:
    Alphabet base_;
    std::vector<std::string> fo_, so_;
    Alphabet alphabet_;
};

inline constexpr std::size_t kMaxTracks = 20;

// Words of B_{p,q}* in which every first-order track holds exactly one 1 (so no empty word when p > 0).
Dfa k_constraint(const TrackAlphabet& tracks);

struct CompiledFormula {
    TrackAlphabet tracks;
    Dfa dfa; // minimal, complete
    Nfa nfa() const { return dfa.to_nfa(); }
};

struct FormulaCompileOptions {
    DeterminizeOptions determinize;
    // Explicit track order (a permutation of the free variables); empty means first free occurrence.
    std::vector<std::string> track_order;
};

CompiledFormula compile_formula(const FormulaPtr& f, const Alphabet& alphabet,
                                const FormulaCompileOptions& options = {});

// Deletes the track of `var` and re-imposes the K constraint of the remaining tracks.
CompiledFormula project_track(const CompiledFormula& c, const std::string& var);

enum class DecideMode { valid, satisfiable };

struct MsoDecision {
    bool holds = false;
    // valid: a shortest word violating the sentence when !holds.
    // satisfiable: a shortest word satisfying it when holds.
    std::optional<Word> witness;
};

// Sentences only.
MsoDecision decide_mso(const FormulaPtr& f, const Alphabet& alphabet, DecideMode mode,
                    const FormulaCompileOptions& options = {});

// Existential MSO sentence describing the runs of a complete DFA; set variable Xk stands for state k.
FormulaPtr dfa_to_mso(const Dfa& d);

} // namespace ratkit

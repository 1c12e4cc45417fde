#include "ratkit/starfree.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <tuple>
#include <sstream>
#include <unordered_map>

#include "ratkit/error.hpp"
#include "ratkit/minimize.hpp"

namespace ratkit {

FoDefinability is_fo_definable(const Dfa& d, std::size_t cap) {
    FoDefinability out;
    out.syntactic = syntactic_monoid(d, cap);
    out.monoid_size = out.syntactic.monoid().size();
    out.aperiodicity = is_aperiodic(out.syntactic.monoid());
    out.definable = out.aperiodicity.aperiodic;
    return out;
}

FoDefinability is_fo_definable(const Nfa& a, std::size_t cap, const DeterminizeOptions& options) {
    return is_fo_definable(minimal_dfa(a, options), cap);
}

const char* derivation_kind_name(DerivationNode::Kind k) {
    switch (k) {
    case DerivationNode::Kind::single_state: return "single state";
    case DerivationNode::Kind::unary: return "unary";
    case DerivationNode::Kind::permutations: return "all letters permute";
    case DerivationNode::Kind::split: return "split";
    }
    return "?";
}

namespace {

void format_into(std::ostringstream& os, const DerivationNode& node, std::size_t depth) {
    std::string pad(2 * depth, ' ');
    os << pad << derivation_kind_name(node.kind) << ": " << node.states << " states, alphabet {";
    for (std::size_t i = 0; i < node.alphabet.size(); ++i) os << (i ? " " : "") << node.alphabet[i];
    os << "}";
    if (node.kind == DerivationNode::Kind::split) {
        os << ", letter " << node.letter << ", image {";
        for (std::size_t i = 0; i < node.image.size(); ++i) os << (i ? " " : "") << node.image[i];
        os << "}";
    }
    os << "\n";
    for (const auto& [c, w] : node.c_letters) os << pad << "  letter " << c << " = (" << w << ", " << node.letter << ")\n";
    for (const auto& line : node.psi_log) os << pad << "  psi " << line << "\n";
    for (const auto& child : node.children) format_into(os, child, depth + 1);
}

} // namespace

std::string format_derivation(const DerivationNode& node) {
    std::ostringstream os;
    format_into(os, node, 0);
    return os.str();
}

namespace {

// A deterministic complete automaton without initial or final states.
struct Level {
    std::size_t n = 0;
    std::vector<std::string> letters;
    std::vector<State> delta; // delta[q * letters.size() + x]

    State next(State q, std::size_t x) const { return delta[q * letters.size() + x]; }
};

// Replaces every subexpression by the smallest expression seen so far with the same language.
// Minimal automata are numbered canonically, so the table is a language key.
class LanguageReducer {
public:
    explicit LanguageReducer(const std::vector<std::string>& letters) : alphabet_(letters) {
        const RegexPtr any = rx::universe();
        std::vector<RegexPtr> seeds{rx::empty(), rx::eps(), any, rx::complement(rx::eps())};
        auto add_factor = [&](const RegexPtr& u) {
            RegexPtr contains = rx::concat_all({any, u, any});
            for (const RegexPtr& e : {u, rx::concat(any, u), rx::concat(u, any), contains, rx::complement(contains)})
                seeds.push_back(e);
        };
        for (const auto& x : letters) add_factor(rx::letter(x));
        for (const auto& x : letters)
            for (const auto& y : letters) add_factor(rx::concat(rx::letter(x), rx::letter(y)));
        for (const auto& e : seeds) reduce(e);
    }

    RegexPtr reduce(const RegexPtr& e) { return visit(e).first; }

private:
    Alphabet alphabet_;
    std::unordered_map<const RegexNode*, std::pair<RegexPtr, Dfa>> memo_;
    std::vector<RegexPtr> keep_alive_;
    std::map<std::pair<std::vector<State>, std::vector<bool>>, RegexPtr> best_;

    const std::pair<RegexPtr, Dfa>& visit(const RegexPtr& e) {
        if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
        RegexPtr rebuilt;
        Dfa lang;
        switch (e->kind) {
        case RegexKind::empty:
            rebuilt = e;
            lang = minimal_dfa(empty_language(alphabet_));
            break;
        case RegexKind::epsilon:
            rebuilt = e;
            lang = minimal_dfa(epsilon_language(alphabet_));
            break;
        case RegexKind::letter:
            rebuilt = e;
            lang = minimal_dfa(word_language(alphabet_, Word{alphabet_.at(e->symbol)}));
            break;
        case RegexKind::complement: {
            const auto& [x, dx] = visit(e->left);
            rebuilt = rx::complement(x);
            lang = complement(dx);
            break;
        }
        case RegexKind::unite:
        case RegexKind::intersect: {
            std::tie(rebuilt, lang) = boolean(e);
            break;
        }
        case RegexKind::concat: {
            auto [x, dx] = visit(e->left);
            const auto& [y, dy] = visit(e->right);
            rebuilt = rx::concat(x, y);
            lang = minimal_dfa(concat(dx.to_nfa(), dy.to_nfa()));
            break;
        }
        default: throw ContractError("star or morphism inside a star-free derivation");
        }
        auto key = std::make_pair(lang.table(), lang.final_mask());
        auto [it, fresh] = best_.emplace(key, rebuilt);
        if (!fresh && regex_size(rebuilt) < regex_size(it->second)) it->second = rebuilt;
        keep_alive_.push_back(e);
        return memo_.emplace(e.get(), std::make_pair(it->second, std::move(lang))).first->second;
    }

    // Flattens a union (intersection) and drops operands the others already cover.
    std::pair<RegexPtr, Dfa> boolean(const RegexPtr& e) {
        const RegexKind kind = e->kind;
        const ProductMode mode = kind == RegexKind::unite ? ProductMode::unite : ProductMode::intersect;
        std::vector<RegexPtr> operands;
        auto collect = [&](auto& self, const RegexPtr& x) -> void {
            if (x->kind == kind) {
                self(self, x->left);
                self(self, x->right);
            } else {
                operands.push_back(x);
            }
        };
        collect(collect, e);
        std::vector<std::pair<RegexPtr, Dfa>> terms;
        for (const auto& x : operands) terms.push_back(visit(x));
        // Larger terms are tried for removal first.
        std::stable_sort(terms.begin(), terms.end(),
                         [](const auto& x, const auto& y) { return regex_size(x.first) > regex_size(y.first); });
        auto combine = [&](std::size_t skip) {
            std::optional<Dfa> acc;
            for (std::size_t i = 0; i < terms.size(); ++i) {
                if (i == skip) continue;
                acc = acc ? minimal_dfa(product(*acc, terms[i].second, mode)) : terms[i].second;
            }
            return acc;
        };
        Dfa whole = *combine(terms.size());
        for (std::size_t i = 0; i < terms.size() && terms.size() > 1;) {
            auto rest = combine(i);
            if (rest->table() == whole.table() && rest->final_mask() == whole.final_mask())
                terms.erase(terms.begin() + static_cast<std::ptrdiff_t>(i));
            else
                ++i;
        }
        std::vector<RegexPtr> kept;
        for (const auto& t : terms) kept.push_back(t.first);
        return {kind == RegexKind::unite ? rx::unite_all(kept) : rx::intersect_all(kept), std::move(whole)};
    }
};

class Extractor {
public:
    explicit Extractor(std::size_t cap) : cap_(cap) {}

    // Entry q * n + q2 denotes {w : q.w = q2}; complements are relative to the level's letters.
    std::vector<RegexPtr> solve(const Level& lv, DerivationNode& trace) {
        const std::size_t n = lv.n, k = lv.letters.size();
        trace.states = n;
        trace.alphabet = lv.letters;
        std::vector<RegexPtr> out(n * n, rx::empty());
        if (n == 1) {
            trace.kind = DerivationNode::Kind::single_state;
            out[0] = rx::universe();
            return out;
        }
        if (k == 1) {
            trace.kind = DerivationNode::Kind::unary;
            return unary(lv);
        }
        std::optional<std::size_t> split_letter;
        for (std::size_t x = 0; x < k && !split_letter; ++x) {
            std::vector<bool> hit(n, false);
            for (State q = 0; q < n; ++q) hit[lv.next(q, x)] = true;
            if (std::count(hit.begin(), hit.end(), true) < static_cast<std::ptrdiff_t>(n)) split_letter = x;
        }
        if (!split_letter) {
            trace.kind = DerivationNode::Kind::permutations;
            for (std::size_t x = 0; x < k; ++x)
                for (State q = 0; q < n; ++q)
                    if (lv.next(q, x) != q) throw ContractError("transition monoid is not aperiodic");
            for (State q = 0; q < n; ++q) out[q * n + q] = rx::universe();
            return out;
        }
        trace.kind = DerivationNode::Kind::split;
        return split(lv, *split_letter, trace);
    }

    RegexPtr checked(RegexPtr e, const Level& lv) {
        auto it = reducers_.find(lv.letters);
        if (it == reducers_.end()) it = reducers_.emplace(lv.letters, LanguageReducer(lv.letters)).first;
        e = simplify(it->second.reduce(simplify(e)));
        if (regex_size(e) > cap_)
            throw ResourceError("star-free expression exceeds the cap of " + std::to_string(cap_) + " nodes");
        return e;
    }

private:
    std::size_t cap_;
    std::map<std::vector<std::string>, LanguageReducer> reducers_;

    std::vector<RegexPtr> unary(const Level& lv) {
        const std::size_t n = lv.n, r = n - 1;
        const RegexPtr a = rx::letter(lv.letters[0]);
        std::vector<RegexPtr> powers{rx::eps()}; // a^j
        for (std::size_t j = 1; j < r; ++j) powers.push_back(rx::concat(powers.back(), a));
        // a^r a* written as the complement of {eps, a, ..., a^(r-1)}.
        std::vector<RegexPtr> short_words(powers.begin(), powers.begin() + static_cast<std::ptrdiff_t>(r));
        const RegexPtr tail = rx::complement(rx::unite_all(short_words));
        std::vector<RegexPtr> out(n * n);
        for (State q = 0; q < n; ++q) {
            std::vector<State> path{q};
            for (std::size_t j = 0; j < n; ++j) path.push_back(lv.next(path.back(), 0));
            if (path[r] != path[r + 1]) throw ContractError("transition monoid is not aperiodic");
            for (State q2 = 0; q2 < n; ++q2) {
                std::vector<RegexPtr> terms;
                for (std::size_t j = 0; j < r; ++j)
                    if (path[j] == q2) terms.push_back(powers[j]);
                if (path[r] == q2) terms.push_back(tail);
                out[q * n + q2] = checked(rx::unite_all(terms), lv);
            }
        }
        return out;
    }

    // Re-reads an expression over a sub-alphabet as one over the full alphabet: complements are
    // cut down to the words avoiding `removed`.
    static RegexPtr embed(const RegexPtr& e, const RegexPtr& sub_universe,
                          std::unordered_map<const RegexNode*, RegexPtr>& memo) {
        if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
        RegexPtr r;
        switch (e->kind) {
        case RegexKind::empty:
        case RegexKind::epsilon:
        case RegexKind::letter: r = e; break;
        case RegexKind::complement:
            r = rx::intersect(sub_universe, rx::complement(embed(e->left, sub_universe, memo)));
            break;
        case RegexKind::unite: r = rx::unite(embed(e->left, sub_universe, memo), embed(e->right, sub_universe, memo)); break;
        case RegexKind::intersect:
            r = rx::intersect(embed(e->left, sub_universe, memo), embed(e->right, sub_universe, memo));
            break;
        case RegexKind::concat: r = rx::concat(embed(e->left, sub_universe, memo), embed(e->right, sub_universe, memo)); break;
        default: throw ContractError("star or morphism inside a star-free derivation");
        }
        memo.emplace(e.get(), r);
        return r;
    }

    std::vector<RegexPtr> split(const Level& lv, std::size_t split_letter, DerivationNode& trace) {
        const std::size_t n = lv.n, k = lv.letters.size();
        const std::string& a_name = lv.letters[split_letter];
        const RegexPtr a = rx::letter(a_name);
        const RegexPtr any = rx::universe();
        trace.letter = a_name;

        // B: same states, the other letters.
        Level b;
        b.n = n;
        std::vector<std::size_t> b_index;
        for (std::size_t x = 0; x < k; ++x)
            if (x != split_letter) {
                b.letters.push_back(lv.letters[x]);
                b_index.push_back(x);
            }
        for (State q = 0; q < n; ++q)
            for (std::size_t x : b_index) b.delta.push_back(lv.next(q, x));
        trace.children.emplace_back();
        auto lb_raw = solve(b, trace.children.back());
        const RegexPtr b_universe = rx::complement(rx::concat(any, rx::concat(a, any)));
        std::unordered_map<const RegexNode*, RegexPtr> memo;
        std::vector<RegexPtr> lb(n * n);
        for (std::size_t i = 0; i < n * n; ++i) lb[i] = checked(embed(lb_raw[i], b_universe, memo), lv);

        // Transition monoid of B; its elements become the letters of C.
        std::vector<std::vector<State>> maps;
        std::vector<std::string> words;
        std::map<std::vector<State>, std::size_t> ids;
        std::vector<State> id(n);
        for (State q = 0; q < n; ++q) id[q] = q;
        maps.push_back(id);
        words.push_back("eps");
        ids.emplace(id, 0);
        for (std::size_t i = 0; i < maps.size(); ++i)
            for (std::size_t x = 0; x < b.letters.size(); ++x) {
                std::vector<State> m(n);
                for (State q = 0; q < n; ++q) m[q] = b.next(maps[i][q], x);
                if (ids.emplace(m, maps.size()).second) {
                    words.push_back((words[i] == "eps" ? "" : words[i]) + b.letters[x]);
                    maps.push_back(std::move(m));
                }
            }

        std::vector<State> image;
        for (State q = 0; q < n; ++q) image.push_back(lv.next(q, split_letter));
        std::sort(image.begin(), image.end());
        image.erase(std::unique(image.begin(), image.end()), image.end());
        trace.image = image;
        std::vector<State> in_image(n, kNoState);
        for (std::size_t i = 0; i < image.size(); ++i) in_image[image[i]] = static_cast<State>(i);

        Level c;
        c.n = image.size();
        for (std::size_t j = 0; j < maps.size(); ++j) {
            c.letters.push_back("c" + std::to_string(j));
            trace.c_letters.emplace_back(c.letters.back(), words[j]);
        }
        for (State q : image)
            for (const auto& m : maps) c.delta.push_back(in_image[lv.next(m[q], split_letter)]);
        trace.children.emplace_back();
        auto lc = solve(c, trace.children.back());

        // Psi on C expressions, over E = {eps} + A*a so that concatenation is preserved.
        const RegexPtr ends_in_a = rx::concat(any, a);
        const RegexPtr e_words = rx::unite(rx::eps(), ends_in_a);
        std::vector<RegexPtr> psi_letter;
        for (std::size_t j = 0; j < maps.size(); ++j) {
            std::vector<RegexPtr> parts;
            for (State p = 0; p < n; ++p) parts.push_back(lb[p * n + maps[j][p]]);
            psi_letter.push_back(checked(rx::concat(rx::intersect_all(parts), a), lv));
            trace.psi_log.push_back(c.letters[j] + " -> " + print_regex(psi_letter.back()));
        }
        std::unordered_map<const RegexNode*, RegexPtr> psi_memo;
        std::function<RegexPtr(const RegexPtr&)> psi = [&](const RegexPtr& e) -> RegexPtr {
            if (auto it = psi_memo.find(e.get()); it != psi_memo.end()) return it->second;
            RegexPtr r;
            switch (e->kind) {
            case RegexKind::empty:
            case RegexKind::epsilon: r = e; break;
            case RegexKind::letter: r = psi_letter.at(std::stoul(e->symbol.substr(1))); break;
            case RegexKind::complement: r = rx::intersect(e_words, rx::complement(psi(e->left))); break;
            case RegexKind::unite: r = rx::unite(psi(e->left), psi(e->right)); break;
            case RegexKind::intersect: r = rx::intersect(psi(e->left), psi(e->right)); break;
            case RegexKind::concat: r = rx::concat(psi(e->left), psi(e->right)); break;
            default: throw ContractError("star or morphism inside a star-free derivation");
            }
            psi_memo.emplace(e.get(), r);
            return r;
        };
        const std::size_t m = image.size();
        std::vector<RegexPtr> t(m * m);
        for (std::size_t i = 0; i < m * m; ++i) t[i] = checked(rx::intersect(psi(lc[i]), ends_in_a), lv);

        // No a, exactly one a, or at least two.
        std::vector<RegexPtr> out(n * n);
        for (State q = 0; q < n; ++q)
            for (State q2 = 0; q2 < n; ++q2) {
                std::vector<RegexPtr> terms{lb[q * n + q2]};
                for (State p = 0; p < n; ++p) {
                    const RegexPtr& before = lb[q * n + p];
                    if (before->kind == RegexKind::empty) continue;
                    State p2 = lv.next(p, split_letter);
                    terms.push_back(rx::concat_all({before, a, lb[p2 * n + q2]}));
                    for (std::size_t j = 0; j < m; ++j) {
                        const RegexPtr& mid = t[in_image[p2] * m + j];
                        if (mid->kind == RegexKind::empty) continue;
                        terms.push_back(rx::concat_all({before, a, mid, lb[image[j] * n + q2]}));
                    }
                }
                out[q * n + q2] = checked(rx::unite_all(terms), lv);
            }
        return out;
    }
};

} // namespace

StarFreeResult extract_starfree(const Dfa& d, const StarFreeOptions& options) {
    if (!d.is_complete()) throw ContractError("extract_starfree needs a complete automaton");
    auto ap = is_aperiodic(transition_monoid(d).monoid);
    if (!ap.aperiodic) throw ContractError("transition monoid is not aperiodic");
    Level top;
    top.n = d.num_states();
    top.letters = d.alphabet().names();
    top.delta = d.table();
    StarFreeResult out;
    Extractor ex(options.node_cap);
    out.pairs = ex.solve(top, out.trace);
    const std::size_t n = d.num_states();
    std::vector<RegexPtr> finals;
    for (State f = 0; f < n; ++f)
        if (d.is_final(f)) finals.push_back(out.pairs[d.initial() * n + f]);
    out.language = Regex(ex.checked(rx::unite_all(finals), top), Dialect::star_free);
    if (options.validate) {
        for (State q = 0; q < n; ++q)
            for (State q2 = 0; q2 < n; ++q2) {
                std::vector<bool> fin(n, false);
                fin[q2] = true;
                Dfa pair(d.alphabet(), n, d.table(), q, fin);
                Nfa got = compile_regex(Regex(out.pairs[q * n + q2], Dialect::star_free), d.alphabet());
                if (!decide_equivalence(got, pair.to_nfa()).holds)
                    throw ContractError("extracted expression for (" + std::to_string(q) + ", " +
                                        std::to_string(q2) + ") does not match the automaton");
            }
    }
    return out;
}

// ---------------------------------------------------------------- FO(<)

namespace {

std::string fresh_variable(const std::vector<std::string>& taken, bool set) {
    static const char* names[] = {"x", "y", "z", "t", "u", "v", "w"};
    auto free = [&](const std::string& s) { return std::find(taken.begin(), taken.end(), s) == taken.end(); };
    for (const char* base : names) {
        std::string s = base;
        if (set) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
        if (free(s)) return s;
    }
    for (std::size_t i = 1;; ++i) {
        std::string s = (set ? "X" : "x") + std::to_string(i);
        if (free(s)) return s;
    }
}

} // namespace

FormulaPtr relativize(const FormulaPtr& f, const std::string& x, RelativizeMode mode) {
    auto vars = all_variables(f);
    if (std::find(vars.begin(), vars.end(), x) != vars.end())
        throw ContractError("relativization variable '" + x + "' occurs in the formula");
    vars.push_back(x);
    const std::string probe = fresh_variable(vars, false);
    auto bound = [&](const std::string& y) -> FormulaPtr {
        switch (mode) {
        case RelativizeMode::below: return fo::less(y, x);
        case RelativizeMode::strictly_above: return fo::less(x, y);
        case RelativizeMode::at_or_below: return fo::disj(fo::less(y, x), fo::eq(y, x));
        }
        return fo::truth();
    };
    std::function<FormulaPtr(const FormulaPtr&)> rel = [&](const FormulaPtr& g) -> FormulaPtr {
        switch (g->kind) {
        case FormulaKind::negation: return fo::negation(rel(g->left));
        case FormulaKind::conjunction: return fo::conj(rel(g->left), rel(g->right));
        case FormulaKind::disjunction: return fo::disj(rel(g->left), rel(g->right));
        case FormulaKind::exists_fo: return fo::exists1(g->var1, fo::conj(bound(g->var1), rel(g->left)));
        case FormulaKind::forall_fo: return fo::forall1(g->var1, fo::implies(bound(g->var1), rel(g->left)));
        case FormulaKind::exists_so:
        case FormulaKind::forall_so: {
            auto inside = fo::forall1(probe, fo::implies(fo::set_mem(g->var1, probe), bound(probe)));
            return g->kind == FormulaKind::exists_so ? fo::exists2(g->var1, fo::conj(inside, rel(g->left)))
                                                     : fo::forall2(g->var1, fo::implies(inside, rel(g->left)));
        }
        default: return g;
        }
    };
    return rel(f);
}

namespace {

void flatten_concat(const RegexPtr& e, std::vector<RegexPtr>& out) {
    if (e->kind == RegexKind::concat) {
        flatten_concat(e->left, out);
        flatten_concat(e->right, out);
    } else {
        out.push_back(e);
    }
}

// The factor of the word strictly after `lo` and up to `hi` inclusive; an empty name is the word's end.
struct Interval {
    std::string lo, hi;
};

// Three names suffice: a fresh variable only has to avoid the two bounds.
std::string other_than(const std::string& p, const std::string& q) {
    for (const char* v : {"x", "y", "z"})
        if (p != v && q != v) return v;
    return "z";
}

FormulaPtr inside(const Interval& iv, const std::string& y) {
    std::vector<FormulaPtr> parts;
    if (!iv.lo.empty()) parts.push_back(fo::less(iv.lo, y));
    if (!iv.hi.empty()) parts.push_back(fo::disj(fo::less(y, iv.hi), fo::eq(y, iv.hi)));
    return parts.empty() ? fo::truth() : fo::conj_all(parts);
}

FormulaPtr to_fo(const RegexPtr& e, const Interval& iv);

FormulaPtr empty_factor(const Interval& iv) {
    if (!iv.hi.empty()) return iv.lo.empty() ? fo::falsity() : fo::negation(fo::less(iv.lo, iv.hi));
    const std::string y = other_than(iv.lo, "");
    return fo::negation(fo::exists1(y, inside(iv, y)));
}

FormulaPtr letter_factor(const std::string& symbol, const Interval& iv) {
    if (!iv.hi.empty()) {
        // the factor is exactly the position hi
        const std::string z = other_than(iv.lo, iv.hi);
        auto alone = fo::negation(fo::exists1(z, fo::conj(inside({iv.lo, ""}, z), fo::less(z, iv.hi))));
        auto f = fo::conj(fo::letter_at(symbol, iv.hi), alone);
        return iv.lo.empty() ? f : fo::conj(fo::less(iv.lo, iv.hi), f);
    }
    const std::string y = other_than(iv.lo, ""), z = other_than(iv.lo, y);
    auto only = fo::forall1(z, fo::implies(inside(iv, z), fo::eq(z, y)));
    return fo::exists1(y, fo::conj_all({inside(iv, y), fo::letter_at(symbol, y), only}));
}

// Concatenation of parts[lo, hi), split in the middle to keep quantifier depth logarithmic.
FormulaPtr concat_to_fo(const std::vector<RegexPtr>& parts, std::size_t lo, std::size_t hi, const Interval& iv) {
    if (hi - lo == 1) return to_fo(parts[lo], iv);
    const std::size_t mid = lo + (hi - lo) / 2;
    const std::string x = other_than(iv.lo, iv.hi);
    FormulaPtr split = fo::exists1(x, fo::conj_all({inside(iv, x), concat_to_fo(parts, lo, mid, {iv.lo, x}),
                                                    concat_to_fo(parts, mid, hi, {x, iv.hi})}));
    bool left_nullable = std::all_of(parts.begin() + static_cast<std::ptrdiff_t>(lo),
                                     parts.begin() + static_cast<std::ptrdiff_t>(mid),
                                     [](const RegexPtr& p) { return nullable(p); });
    return left_nullable ? fo::disj(split, concat_to_fo(parts, mid, hi, iv)) : split;
}

FormulaPtr to_fo(const RegexPtr& e, const Interval& iv) {
    switch (e->kind) {
    case RegexKind::empty: return fo::falsity();
    case RegexKind::epsilon: return empty_factor(iv);
    case RegexKind::letter: return letter_factor(e->symbol, iv);
    case RegexKind::unite: return fo::disj(to_fo(e->left, iv), to_fo(e->right, iv));
    case RegexKind::intersect: return fo::conj(to_fo(e->left, iv), to_fo(e->right, iv));
    case RegexKind::complement: {
        FormulaPtr inner = to_fo(e->left, iv);
        return inner->kind == FormulaKind::negation ? inner->left : fo::negation(inner);
    }
    case RegexKind::concat: {
        std::vector<RegexPtr> parts;
        flatten_concat(e, parts);
        return concat_to_fo(parts, 0, parts.size(), iv);
    }
    default: throw InputError("star and morphisms have no first-order translation; use the star-free dialect");
    }
}

} // namespace

FormulaPtr starfree_to_fo(const RegexPtr& e) { return to_fo(e, {}); }

FormulaPtr starfree_to_fo(const Regex& e) {
    // Re-checking under the star-free dialect rejects star and morph.
    const Regex checked = e.dialect() == Dialect::star_free ? e : Regex(e.root(), Dialect::star_free);
    return to_fo(checked.root(), {});
}

} // namespace ratkit

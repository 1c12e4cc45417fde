#include "ratkit/logic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <iterator>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "ratkit/error.hpp"
#include "ratkit/minimize.hpp"

namespace ratkit {

namespace {

FormulaPtr make(FormulaKind kind, std::string v1 = {}, std::string v2 = {}, std::string sym = {},
                FormulaPtr l = nullptr, FormulaPtr r = nullptr) {
    return std::make_shared<const FormulaNode>(
        FormulaNode{kind, std::move(v1), std::move(v2), std::move(sym), std::move(l), std::move(r)});
}

bool is_quantifier(FormulaKind k) {
    return k == FormulaKind::exists_fo || k == FormulaKind::forall_fo || k == FormulaKind::exists_so ||
           k == FormulaKind::forall_so;
}

bool is_atom(FormulaKind k) {
    return k == FormulaKind::truth || k == FormulaKind::eq || k == FormulaKind::less ||
           k == FormulaKind::succ || k == FormulaKind::letter_at || k == FormulaKind::set_mem;
}

} // namespace

namespace fo {
FormulaPtr truth() { return make(FormulaKind::truth); }
FormulaPtr falsity() { return negation(truth()); }
FormulaPtr eq(std::string x, std::string y) { return make(FormulaKind::eq, std::move(x), std::move(y)); }
FormulaPtr less(std::string x, std::string y) { return make(FormulaKind::less, std::move(x), std::move(y)); }
FormulaPtr succ(std::string x, std::string y) { return make(FormulaKind::succ, std::move(x), std::move(y)); }
FormulaPtr letter_at(std::string symbol, std::string x) {
    return make(FormulaKind::letter_at, std::move(x), {}, std::move(symbol));
}
FormulaPtr set_mem(std::string set, std::string x) {
    return make(FormulaKind::set_mem, std::move(set), std::move(x));
}
FormulaPtr negation(FormulaPtr f) { return make(FormulaKind::negation, {}, {}, {}, std::move(f)); }
FormulaPtr conj(FormulaPtr l, FormulaPtr r) {
    return make(FormulaKind::conjunction, {}, {}, {}, std::move(l), std::move(r));
}
FormulaPtr disj(FormulaPtr l, FormulaPtr r) {
    return make(FormulaKind::disjunction, {}, {}, {}, std::move(l), std::move(r));
}
FormulaPtr implies(FormulaPtr l, FormulaPtr r) { return disj(negation(std::move(l)), std::move(r)); }
FormulaPtr iff(FormulaPtr l, FormulaPtr r) {
    return disj(conj(l, r), conj(negation(l), negation(r)));
}
FormulaPtr exists1(std::string x, FormulaPtr f) {
    return make(FormulaKind::exists_fo, std::move(x), {}, {}, std::move(f));
}
FormulaPtr forall1(std::string x, FormulaPtr f) {
    return make(FormulaKind::forall_fo, std::move(x), {}, {}, std::move(f));
}
FormulaPtr exists2(std::string x, FormulaPtr f) {
    return make(FormulaKind::exists_so, std::move(x), {}, {}, std::move(f));
}
FormulaPtr forall2(std::string x, FormulaPtr f) {
    return make(FormulaKind::forall_so, std::move(x), {}, {}, std::move(f));
}

namespace {
FormulaPtr fold(const std::vector<FormulaPtr>& fs, std::size_t lo, std::size_t hi, bool conjunctive) {
    if (hi - lo == 1) return fs[lo];
    std::size_t mid = lo + (hi - lo) / 2;
    auto l = fold(fs, lo, mid, conjunctive), r = fold(fs, mid, hi, conjunctive);
    return conjunctive ? conj(l, r) : disj(l, r);
}
} // namespace

FormulaPtr conj_all(const std::vector<FormulaPtr>& fs) {
    return fs.empty() ? truth() : fold(fs, 0, fs.size(), true);
}
FormulaPtr disj_all(const std::vector<FormulaPtr>& fs) {
    return fs.empty() ? falsity() : fold(fs, 0, fs.size(), false);
}
} // namespace fo

bool is_set_variable(std::string_view name) {
    return !name.empty() && std::isupper(static_cast<unsigned char>(name[0]));
}

FragmentTag fragment(const FormulaPtr& f) {
    FragmentTag tag;
    std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& g) {
        if (!g) return;
        switch (g->kind) {
        case FormulaKind::succ: tag.uses_successor = true; break;
        case FormulaKind::less: tag.uses_order = true; break;
        case FormulaKind::exists_so:
        case FormulaKind::forall_so: tag.uses_set_quantifier = true; break;
        default: break;
        }
        walk(g->left);
        walk(g->right);
    };
    walk(f);
    return tag;
}

// ---------------------------------------------------------------- parser

namespace {

enum class Tok { ident, quoted, lparen, rparen, comma, dot, bang, amp, bar, arrow, darrow, equal, less, end };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line, col;
};

class FormulaParser {
public:
    FormulaParser(std::string_view text, const Alphabet& alphabet) : alphabet_(alphabet) { lex(text); }

    FormulaPtr parse() {
        auto f = parse_iff();
        if (peek().kind != Tok::end) fail(peek(), "unexpected '" + peek().text + "'");
        return f;
    }

private:
    const Alphabet& alphabet_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    [[noreturn]] static void fail(const Token& t, const std::string& msg) {
        throw InputError(std::to_string(t.line) + ":" + std::to_string(t.col) + ": " + msg);
    }

    void lex(std::string_view s) {
        std::size_t line = 1, col = 1, i = 0;
        auto advance = [&](std::size_t n) {
            for (std::size_t k = 0; k < n; ++k, ++i) {
                if (s[i] == '\n') {
                    ++line;
                    col = 1;
                } else {
                    ++col;
                }
            }
        };
        while (i < s.size()) {
            char c = s[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance(1);
                continue;
            }
            if (c == '#') {
                while (i < s.size() && s[i] != '\n') advance(1);
                continue;
            }
            Token t{Tok::end, {}, line, col};
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t j = i;
                while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
                t.kind = Tok::ident;
                t.text = std::string(s.substr(i, j - i));
                advance(j - i);
            } else if (c == '\'') {
                std::size_t j = s.find('\'', i + 1);
                if (j == std::string_view::npos) fail(t, "unterminated quoted symbol");
                t.kind = Tok::quoted;
                t.text = std::string(s.substr(i + 1, j - i - 1));
                advance(j + 1 - i);
            } else if (s.substr(i, 3) == "<->") {
                t.kind = Tok::darrow;
                t.text = "<->";
                advance(3);
            } else if (s.substr(i, 2) == "->") {
                t.kind = Tok::arrow;
                t.text = "->";
                advance(2);
            } else {
                static const std::string singles = "(),.!&|=<";
                static const Tok kinds[] = {Tok::lparen, Tok::rparen, Tok::comma, Tok::dot, Tok::bang,
                                            Tok::amp,    Tok::bar,    Tok::equal, Tok::less};
                auto k = singles.find(c);
                if (k == std::string::npos) fail(t, std::string("unexpected character '") + c + "'");
                t.kind = kinds[k];
                t.text = std::string(1, c);
                advance(1);
            }
            toks_.push_back(std::move(t));
        }
        toks_.push_back({Tok::end, "end of input", line, col});
    }

    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    const Token& take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
    const Token& expect(Tok k, const char* what) {
        if (peek().kind != k) fail(peek(), std::string("expected ") + what + ", found '" + peek().text + "'");
        return take();
    }

    FormulaPtr parse_iff() {
        auto f = parse_implies();
        while (peek().kind == Tok::darrow) {
            take();
            f = fo::iff(f, parse_implies());
        }
        return f;
    }

    FormulaPtr parse_implies() {
        auto f = parse_or();
        if (peek().kind == Tok::arrow) {
            take();
            return fo::implies(f, parse_implies());
        }
        return f;
    }

    FormulaPtr parse_or() {
        auto f = parse_and();
        while (peek().kind == Tok::bar) {
            take();
            f = fo::disj(f, parse_and());
        }
        return f;
    }

    FormulaPtr parse_and() {
        auto f = parse_unary();
        while (peek().kind == Tok::amp) {
            take();
            f = fo::conj(f, parse_unary());
        }
        return f;
    }

    FormulaPtr parse_unary() {
        const Token& t = peek();
        if (t.kind == Tok::bang) {
            take();
            return fo::negation(parse_unary());
        }
        if (t.kind == Tok::ident &&
            (t.text == "ex1" || t.text == "all1" || t.text == "ex2" || t.text == "all2"))
            return parse_quantifier();
        return parse_atom();
    }

    FormulaPtr parse_quantifier() {
        std::string q = take().text;
        bool second = q.back() == '2';
        std::vector<std::string> vars;
        do {
            if (!vars.empty() && peek().kind == Tok::comma) take();
            const Token& v = expect(Tok::ident, "a variable");
            if (is_set_variable(v.text) != second)
                fail(v, "'" + v.text + "' cannot be bound by " + q +
                            (second ? " (set variables start with an uppercase letter)"
                                    : " (first-order variables start with a lowercase letter)"));
            vars.push_back(v.text);
        } while (peek().kind == Tok::ident || peek().kind == Tok::comma);
        expect(Tok::dot, "'.'");
        auto body = parse_iff();
        for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
            if (q == "ex1") body = fo::exists1(*it, body);
            else if (q == "all1") body = fo::forall1(*it, body);
            else if (q == "ex2") body = fo::exists2(*it, body);
            else body = fo::forall2(*it, body);
        }
        return body;
    }

    std::string fo_var() {
        const Token& v = expect(Tok::ident, "a first-order variable");
        if (is_set_variable(v.text)) fail(v, "'" + v.text + "' is a set variable, a position was expected");
        return v.text;
    }

    FormulaPtr letter(const Token& at, const std::string& sym) {
        if (!alphabet_.find(sym)) fail(at, "letter predicate '" + sym + "' is not in the alphabet");
        expect(Tok::lparen, "'('");
        auto x = fo_var();
        expect(Tok::rparen, "')'");
        return fo::letter_at(sym, x);
    }

    FormulaPtr parse_atom() {
        const Token& t = peek();
        if (t.kind == Tok::lparen) {
            take();
            auto f = parse_iff();
            expect(Tok::rparen, "')'");
            return f;
        }
        if (t.kind == Tok::quoted) {
            const Token& q = take();
            return letter(q, q.text);
        }
        if (t.kind != Tok::ident) fail(t, "expected a formula, found '" + t.text + "'");
        const Token& id = take();
        if (id.text == "true") return fo::truth();
        if (id.text == "false") return fo::falsity();
        if (peek().kind == Tok::lparen) {
            if (!is_set_variable(id.text)) return letter(id, id.text);
            take();
            auto x = fo_var();
            if (peek().kind == Tok::comma && id.text == "S") {
                take();
                auto y = fo_var();
                expect(Tok::rparen, "')'");
                return fo::succ(x, y);
            }
            expect(Tok::rparen, "')'");
            return fo::set_mem(id.text, x);
        }
        if (is_set_variable(id.text)) fail(id, "set variable '" + id.text + "' used as a position");
        if (peek().kind == Tok::equal) {
            take();
            return fo::eq(id.text, fo_var());
        }
        if (peek().kind == Tok::less) {
            take();
            return fo::less(id.text, fo_var());
        }
        fail(peek(), "expected '=' or '<' after '" + id.text + "'");
    }
};

int precedence(const FormulaPtr& f) {
    switch (f->kind) {
    case FormulaKind::disjunction: return 1;
    case FormulaKind::conjunction: return 2;
    case FormulaKind::negation: return 3;
    default: return is_quantifier(f->kind) ? 0 : 4;
    }
}

void print_into(std::ostringstream& os, const FormulaPtr& f);

void print_child(std::ostringstream& os, const FormulaPtr& child, int min_prec) {
    bool paren = precedence(child) < min_prec;
    if (paren) os << '(';
    print_into(os, child);
    if (paren) os << ')';
}

void print_into(std::ostringstream& os, const FormulaPtr& f) {
    switch (f->kind) {
    case FormulaKind::truth: os << "true"; break;
    case FormulaKind::eq: os << f->var1 << " = " << f->var2; break;
    case FormulaKind::less: os << f->var1 << " < " << f->var2; break;
    case FormulaKind::succ: os << "S(" << f->var1 << ", " << f->var2 << ")"; break;
    case FormulaKind::letter_at: os << '\'' << f->symbol << "'(" << f->var1 << ")"; break;
    case FormulaKind::set_mem: os << f->var1 << "(" << f->var2 << ")"; break;
    case FormulaKind::negation:
        os << '!';
        if (f->left->kind == FormulaKind::eq || f->left->kind == FormulaKind::less) {
            os << '(';
            print_into(os, f->left);
            os << ')';
        } else {
            print_child(os, f->left, 3);
        }
        break;
    case FormulaKind::conjunction:
        print_child(os, f->left, 2);
        os << " & ";
        print_child(os, f->right, 3);
        break;
    case FormulaKind::disjunction:
        print_child(os, f->left, 1);
        os << " | ";
        print_child(os, f->right, 2);
        break;
    case FormulaKind::exists_fo: os << "ex1 " << f->var1 << ". "; print_into(os, f->left); break;
    case FormulaKind::forall_fo: os << "all1 " << f->var1 << ". "; print_into(os, f->left); break;
    case FormulaKind::exists_so: os << "ex2 " << f->var1 << ". "; print_into(os, f->left); break;
    case FormulaKind::forall_so: os << "all2 " << f->var1 << ". "; print_into(os, f->left); break;
    }
}

} // namespace

FormulaPtr parse_formula(std::string_view text, const Alphabet& alphabet) {
    return FormulaParser(text, alphabet).parse();
}

std::string print_formula(const FormulaPtr& f) {
    std::ostringstream os;
    print_into(os, f);
    return os.str();
}

// ---------------------------------------------------------------- variables

namespace {

void collect_free(const FormulaPtr& f, std::vector<std::string>& bound, std::vector<std::string>& out) {
    auto note = [&](const std::string& v) {
        if (std::find(bound.begin(), bound.end(), v) != bound.end()) return;
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    };
    switch (f->kind) {
    case FormulaKind::truth: break;
    case FormulaKind::eq:
    case FormulaKind::less:
    case FormulaKind::succ:
    case FormulaKind::set_mem:
        note(f->var1);
        note(f->var2);
        break;
    case FormulaKind::letter_at: note(f->var1); break;
    case FormulaKind::negation: collect_free(f->left, bound, out); break;
    case FormulaKind::conjunction:
    case FormulaKind::disjunction:
        collect_free(f->left, bound, out);
        collect_free(f->right, bound, out);
        break;
    default:
        bound.push_back(f->var1);
        collect_free(f->left, bound, out);
        bound.pop_back();
        break;
    }
}

} // namespace

std::vector<std::string> free_variables(const FormulaPtr& f) {
    std::vector<std::string> bound, out;
    collect_free(f, bound, out);
    return out;
}

std::vector<std::string> all_variables(const FormulaPtr& f) {
    std::vector<std::string> out;
    std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& g) {
        if (!g) return;
        for (const auto* v : {&g->var1, &g->var2})
            if (!v->empty() && std::find(out.begin(), out.end(), *v) == out.end()) out.push_back(*v);
        walk(g->left);
        walk(g->right);
    };
    walk(f);
    return out;
}

std::size_t quantifier_depth(const FormulaPtr& f) {
    if (!f || is_atom(f->kind)) return 0;
    std::size_t d = std::max(quantifier_depth(f->left), quantifier_depth(f->right));
    return is_quantifier(f->kind) ? d + 1 : d;
}

std::size_t formula_size(const FormulaPtr& f) {
    return f ? 1 + formula_size(f->left) + formula_size(f->right) : 0;
}

// ---------------------------------------------------------------- evaluation

namespace {

class Evaluator {
public:
    Evaluator(const Word& u, const Alphabet& alphabet) : u_(u), alphabet_(alphabet) {}

    std::map<std::string, std::size_t> fo;
    std::map<std::string, std::uint64_t> so;

    bool eval(const FormulaPtr& f) {
        switch (f->kind) {
        case FormulaKind::truth: return true;
        case FormulaKind::eq: return pos(f->var1) == pos(f->var2);
        case FormulaKind::less: return pos(f->var1) < pos(f->var2);
        case FormulaKind::succ: return pos(f->var1) + 1 == pos(f->var2);
        case FormulaKind::letter_at: return alphabet_.name(u_[pos(f->var1)]) == f->symbol;
        case FormulaKind::set_mem: return (set(f->var1) >> pos(f->var2)) & 1U;
        case FormulaKind::negation: return !eval(f->left);
        case FormulaKind::conjunction: return eval(f->left) && eval(f->right);
        case FormulaKind::disjunction: return eval(f->left) || eval(f->right);
        case FormulaKind::exists_fo:
        case FormulaKind::forall_fo: {
            bool want = f->kind == FormulaKind::exists_fo;
            auto saved = fo.find(f->var1) == fo.end() ? std::nullopt : std::optional(fo[f->var1]);
            bool result = !want;
            for (std::size_t d = 0; d < u_.size() && result != want; ++d) {
                fo[f->var1] = d;
                if (eval(f->left) == want) result = want;
            }
            if (saved) fo[f->var1] = *saved;
            else fo.erase(f->var1);
            return result;
        }
        case FormulaKind::exists_so:
        case FormulaKind::forall_so: {
            if (u_.size() > 63) throw ResourceError("set quantifier over a word longer than 63 letters");
            bool want = f->kind == FormulaKind::exists_so;
            auto saved = so.find(f->var1) == so.end() ? std::nullopt : std::optional(so[f->var1]);
            bool result = !want;
            const std::uint64_t count = std::uint64_t{1} << u_.size();
            for (std::uint64_t m = 0; m < count && result != want; ++m) {
                so[f->var1] = m;
                if (eval(f->left) == want) result = want;
            }
            if (saved) so[f->var1] = *saved;
            else so.erase(f->var1);
            return result;
        }
        }
        return false;
    }

private:
    const Word& u_;
    const Alphabet& alphabet_;

    std::size_t pos(const std::string& v) const {
        auto it = fo.find(v);
        if (it == fo.end()) throw ContractError("unbound first-order variable '" + v + "'");
        return it->second;
    }
    std::uint64_t set(const std::string& v) const {
        auto it = so.find(v);
        if (it == so.end()) throw ContractError("unbound set variable '" + v + "'");
        return it->second;
    }
};

} // namespace

bool eval_formula(const Word& u, const Valuation& v, const FormulaPtr& f, const Alphabet& alphabet) {
    check_word(alphabet, u);
    Evaluator ev(u, alphabet);
    for (const auto& [name, p] : v.fo) {
        if (p >= u.size()) throw ContractError("position of '" + name + "' is outside the word");
        ev.fo[name] = p;
    }
    for (const auto& [name, ps] : v.so) {
        std::uint64_t m = 0;
        for (auto p : ps) {
            if (p >= u.size() || p >= 64) throw ContractError("set '" + name + "' holds a position outside the word");
            m |= std::uint64_t{1} << p;
        }
        ev.so[name] = m;
    }
    return ev.eval(f);
}

// ---------------------------------------------------------------- rewrites

namespace {

std::string fresh_name(const std::vector<std::string>& taken, const std::string& stem) {
    auto free = [&](const std::string& n) { return std::find(taken.begin(), taken.end(), n) == taken.end(); };
    if (free(stem)) return stem;
    for (std::size_t i = 1;; ++i)
        if (auto n = stem + std::to_string(i); free(n)) return n;
}

FormulaPtr map_atoms(const FormulaPtr& f, const std::function<FormulaPtr(const FormulaPtr&)>& atom) {
    if (is_atom(f->kind)) return atom(f);
    auto l = map_atoms(f->left, atom);
    auto r = f->right ? map_atoms(f->right, atom) : nullptr;
    if (l == f->left && r == f->right) return f;
    return make(f->kind, f->var1, f->var2, f->symbol, l, r);
}

} // namespace

FormulaPtr rewrite_successor_in_order(const FormulaPtr& f) {
    auto taken = all_variables(f);
    const std::string z = fresh_name(taken, "z");
    return map_atoms(f, [&](const FormulaPtr& a) -> FormulaPtr {
        if (a->kind != FormulaKind::succ) return a;
        const auto &x = a->var1, &y = a->var2;
        return fo::conj(fo::less(x, y),
                        fo::forall1(z, fo::implies(fo::less(x, z), fo::disj(fo::eq(y, z), fo::less(y, z)))));
    });
}

FormulaPtr rewrite_order_in_mso_s(const FormulaPtr& f) {
    auto taken = all_variables(f);
    const std::string set = fresh_name(taken, "X");
    taken.push_back(set);
    const std::string z = fresh_name(taken, "z");
    taken.push_back(z);
    const std::string t = fresh_name(taken, "t");
    return map_atoms(f, [&](const FormulaPtr& a) -> FormulaPtr {
        if (a->kind != FormulaKind::less) return a;
        const auto &x = a->var1, &y = a->var2;
        auto closed = fo::forall1(
            z, fo::forall1(t, fo::implies(fo::conj(fo::set_mem(set, z), fo::succ(z, t)), fo::set_mem(set, t))));
        return fo::exists2(set, fo::conj(fo::conj(fo::set_mem(set, y), fo::negation(fo::set_mem(set, x))), closed));
    });
}

// ---------------------------------------------------------------- track alphabets

namespace {

std::string bit_string(std::uint64_t bits, std::size_t from, std::size_t count) {
    std::string s;
    for (std::size_t i = 0; i < count; ++i) s += ((bits >> (from + i)) & 1U) ? '1' : '0';
    return s;
}

void check_track_count(std::size_t base_size, std::size_t tracks) {
    if (tracks > kMaxTracks)
        throw ResourceError("too many variable tracks (" + std::to_string(tracks) + ", limit " +
                            std::to_string(kMaxTracks) + ")");
    if ((std::uint64_t{base_size} << tracks) >= kEpsilon) throw ResourceError("track alphabet too large");
}

// Alphabet with names "a:bits" for the internal compile context (bits in track order).
Alphabet context_alphabet(const Alphabet& base, std::size_t tracks) {
    check_track_count(base.size(), tracks);
    if (tracks == 0) return base;
    std::vector<std::string> names;
    names.reserve(base.size() << tracks);
    for (Symbol a = 0; a < base.size(); ++a)
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << tracks); ++bits)
            names.push_back(base.name(a) + ":" + bit_string(bits, 0, tracks));
    return Alphabet(std::move(names));
}

} // namespace

TrackAlphabet::TrackAlphabet(Alphabet base, std::vector<std::string> fo_tracks, std::vector<std::string> so_tracks)
    : base_(std::move(base)), fo_(std::move(fo_tracks)), so_(std::move(so_tracks)) {
    for (const auto& v : fo_)
        if (is_set_variable(v)) throw ContractError("'" + v + "' is not a first-order variable");
    for (const auto& v : so_)
        if (!is_set_variable(v)) throw ContractError("'" + v + "' is not a set variable");
    check_track_count(base_.size(), num_tracks());
    if (num_tracks() == 0) {
        alphabet_ = base_;
        return;
    }
    std::vector<std::string> names;
    const std::size_t t = num_tracks();
    for (Symbol a = 0; a < base_.size(); ++a)
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << t); ++bits)
            names.push_back(base_.name(a) + ":" + bit_string(bits, 0, fo_.size()) + ":" +
                            bit_string(bits, fo_.size(), so_.size()));
    alphabet_ = Alphabet(std::move(names));
}

std::optional<std::size_t> TrackAlphabet::track_of(std::string_view var) const {
    for (std::size_t i = 0; i < fo_.size(); ++i)
        if (fo_[i] == var) return i;
    for (std::size_t i = 0; i < so_.size(); ++i)
        if (so_[i] == var) return fo_.size() + i;
    return std::nullopt;
}

Word TrackAlphabet::encode_word(const Word& u, const Valuation& v) const {
    check_word(base_, u);
    std::vector<std::uint64_t> bits(u.size(), 0);
    for (std::size_t i = 0; i < fo_.size(); ++i) {
        auto it = v.fo.find(fo_[i]);
        if (it == v.fo.end()) throw ContractError("no position for '" + fo_[i] + "'");
        if (it->second >= u.size()) throw ContractError("position of '" + fo_[i] + "' is outside the word");
        bits[it->second] |= std::uint64_t{1} << i;
    }
    for (std::size_t j = 0; j < so_.size(); ++j) {
        auto it = v.so.find(so_[j]);
        if (it == v.so.end()) continue; // absent set: empty
        for (auto p : it->second) {
            if (p >= u.size()) throw ContractError("set '" + so_[j] + "' holds a position outside the word");
            bits[p] |= std::uint64_t{1} << (fo_.size() + j);
        }
    }
    Word t(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) t[k] = encode(u[k], bits[k]);
    return t;
}

std::optional<std::pair<Word, Valuation>> TrackAlphabet::decode_word(const Word& t) const {
    check_word(alphabet_, t);
    Word u(t.size());
    Valuation v;
    for (const auto& s : so_) v.so[s];
    for (std::size_t k = 0; k < t.size(); ++k) {
        u[k] = base_of(t[k]);
        auto bits = bits_of(t[k]);
        for (std::size_t i = 0; i < fo_.size(); ++i) {
            if (!((bits >> i) & 1U)) continue;
            if (!v.fo.emplace(fo_[i], k).second) return std::nullopt;
        }
        for (std::size_t j = 0; j < so_.size(); ++j)
            if ((bits >> (fo_.size() + j)) & 1U) v.so[so_[j]].push_back(k);
    }
    if (v.fo.size() != fo_.size()) return std::nullopt;
    return std::pair{std::move(u), std::move(v)};
}

namespace {

// Exactly one 1 on each track selected by `mask` (tracks numbered 0..tracks-1).
Dfa exactly_once(const Alphabet& alphabet, std::size_t tracks, std::uint64_t mask) {
    // State = set of selected tracks already seen; plus a dead state.
    std::vector<std::size_t> sel;
    for (std::size_t i = 0; i < tracks; ++i)
        if ((mask >> i) & 1U) sel.push_back(i);
    const std::size_t seen_states = std::size_t{1} << sel.size();
    const State dead = static_cast<State>(seen_states);
    const std::size_t k = alphabet.size();
    const std::uint64_t low = (std::uint64_t{1} << tracks) - 1;
    std::vector<State> delta((seen_states + 1) * k, dead);
    for (std::size_t s = 0; s < seen_states; ++s) {
        for (Symbol a = 0; a < k; ++a) {
            std::uint64_t bits = a & low, compact = 0;
            for (std::size_t j = 0; j < sel.size(); ++j)
                if ((bits >> sel[j]) & 1U) compact |= std::uint64_t{1} << j;
            if (compact & s) continue;
            delta[s * k + a] = static_cast<State>(s | compact);
        }
    }
    std::vector<bool> fin(seen_states + 1, false);
    fin[seen_states - 1] = true;
    return minimal_dfa(Dfa(alphabet, seen_states + 1, std::move(delta), 0, std::move(fin)));
}

Dfa project_bit(const Dfa& d, const Alphabet& target, std::size_t tracks, std::size_t track,
                const DeterminizeOptions& opts) {
    const std::uint64_t below = (std::uint64_t{1} << track) - 1;
    std::vector<Word> images(d.num_symbols());
    for (Symbol a = 0; a < d.num_symbols(); ++a) {
        std::uint64_t base = a >> tracks, bits = a & ((std::uint64_t{1} << tracks) - 1);
        std::uint64_t kept = (bits & below) | ((bits >> (track + 1)) << track);
        images[a] = {static_cast<Symbol>((base << (tracks - 1)) | kept)};
    }
    Morphism pi(d.alphabet(), target, std::move(images));
    return minimal_dfa(morphic_image(d.to_nfa(), pi), opts);
}

struct Track {
    std::string name;
    bool first_order;
};

// A compiled subformula: its automaton reads only the tracks of its free variables, listed as
// ascending context indices, and its language lies inside K for the first-order ones.
struct Compiled {
    Dfa dfa;
    std::vector<std::size_t> tracks;
};

class FormulaCompiler {
public:
    FormulaCompiler(const Alphabet& base, const DeterminizeOptions& opts) : base_(base), opts_(opts) {}

    std::vector<Track> context;

    // Subformulas equal up to renaming of variables compile once.
    Compiled compile(const FormulaPtr& f) {
        std::vector<std::string> bound;
        std::vector<std::size_t> free;
        collect_free(f, bound, free);
        std::sort(free.begin(), free.end());
        free.erase(std::unique(free.begin(), free.end()), free.end());
        std::string key;
        for (auto t : free) key += context[t].first_order ? 'o' : 's';
        key += '|';
        shape(f, bound, free, key);
        if (auto it = shapes_.find(key); it != shapes_.end()) return {it->second, free};
        Compiled c = compile_node(f);
        if (c.tracks == free) shapes_.emplace(std::move(key), c.dfa);
        return c;
    }

    Compiled compile_node(const FormulaPtr& f) {
        switch (f->kind) {
        case FormulaKind::truth: return {constant(0, true), {}};
        case FormulaKind::eq:
        case FormulaKind::set_mem: {
            auto tr = tracks_of({f->var1, f->var2});
            if (f->var1 == f->var2) return {within_k(constant(tr.size(), true), tr), tr};
            auto bx = bit(tr, f->var1), by = bit(tr, f->var2);
            return {within_k(exists_position(tr.size(), [&](Symbol, std::uint64_t bits) {
                        return ((bits >> bx) & 1U) && ((bits >> by) & 1U);
                    }), tr), tr};
        }
        case FormulaKind::letter_at: {
            Symbol letter = base_.at(f->symbol);
            auto tr = tracks_of({f->var1});
            return {within_k(exists_position(tr.size(), [&](Symbol b, std::uint64_t bits) { return b == letter && (bits & 1U); }), tr),
                    tr};
        }
        case FormulaKind::less:
        case FormulaKind::succ: {
            auto tr = tracks_of({f->var1, f->var2});
            if (f->var1 == f->var2) return {constant(tr.size(), false), tr};
            return {within_k(two_marks(tr.size(), bit(tr, f->var1), bit(tr, f->var2), f->kind == FormulaKind::succ), tr), tr};
        }
        case FormulaKind::negation: {
            auto c = compile(f->left);
            return {within_k(complement(c.dfa), c.tracks), c.tracks};
        }
        case FormulaKind::conjunction:
        case FormulaKind::disjunction: {
            auto l = compile(f->left);
            auto r = compile(f->right);
            std::vector<std::size_t> all;
            std::set_union(l.tracks.begin(), l.tracks.end(), r.tracks.begin(), r.tracks.end(), std::back_inserter(all));
            Dfa lifted_l = lift(l, all), lifted_r = lift(r, all);
            if (f->kind == FormulaKind::conjunction)
                return {minimal_dfa(product(lifted_l, lifted_r, ProductMode::intersect)), all};
            return {within_k(product(lifted_l, lifted_r, ProductMode::unite), all), all};
        }
        case FormulaKind::exists_fo:
        case FormulaKind::exists_so: return exists(f, false);
        case FormulaKind::forall_fo:
        case FormulaKind::forall_so: return exists(f, true);
        }
        throw ContractError("unknown formula node");
    }

    const Alphabet& alphabet(std::size_t tracks) {
        if (cache_.size() <= tracks) cache_.resize(tracks + 1);
        if (!cache_[tracks]) cache_[tracks] = context_alphabet(base_, tracks);
        return *cache_[tracks];
    }

    // Automaton over all context tracks, in context order.
    Dfa lift_to_context(const Compiled& c) {
        std::vector<std::size_t> all(context.size());
        std::iota(all.begin(), all.end(), 0);
        return lift(c, all);
    }

private:
    const Alphabet& base_;
    const DeterminizeOptions& opts_;
    std::vector<std::optional<Alphabet>> cache_;
    std::map<std::pair<std::size_t, std::uint64_t>, Dfa> k_cache_;
    bool wrapped_ = false;

    std::size_t index_of(const std::string& var) const {
        for (std::size_t i = context.size(); i-- > 0;)
            if (context[i].name == var) return i;
        throw ContractError("variable '" + var + "' has no track");
    }

    std::unordered_map<std::string, Dfa> shapes_;

    static bool is_atom(FormulaKind k) {
        return k == FormulaKind::truth || k == FormulaKind::eq || k == FormulaKind::less || k == FormulaKind::succ ||
               k == FormulaKind::letter_at || k == FormulaKind::set_mem;
    }

    static bool is_quantifier(FormulaKind k) {
        return k == FormulaKind::exists_fo || k == FormulaKind::forall_fo || k == FormulaKind::exists_so ||
               k == FormulaKind::forall_so;
    }

    void collect_free(const FormulaPtr& f, std::vector<std::string>& bound, std::vector<std::size_t>& out) const {
        auto note = [&](const std::string& v) {
            if (std::find(bound.rbegin(), bound.rend(), v) == bound.rend()) out.push_back(index_of(v));
        };
        if (is_atom(f->kind)) {
            if (f->kind == FormulaKind::truth) return;
            note(f->var1);
            if (f->kind != FormulaKind::letter_at) note(f->var2);
            return;
        }
        if (is_quantifier(f->kind)) {
            bound.push_back(f->var1);
            collect_free(f->left, bound, out);
            bound.pop_back();
            return;
        }
        collect_free(f->left, bound, out);
        if (f->right) collect_free(f->right, bound, out);
    }

    // Bound variables by binder depth, free ones by rank among the local tracks.
    void shape(const FormulaPtr& f, std::vector<std::string>& bound, const std::vector<std::size_t>& free,
               std::string& out) const {
        auto name = [&](const std::string& v) {
            auto it = std::find(bound.rbegin(), bound.rend(), v);
            if (it != bound.rend()) return "b" + std::to_string(bound.rend() - it - 1);
            auto t = index_of(v);
            return "f" + std::to_string(std::find(free.begin(), free.end(), t) - free.begin());
        };
        out += static_cast<char>('A' + static_cast<int>(f->kind));
        if (is_atom(f->kind)) {
            if (f->kind == FormulaKind::truth) return;
            out += name(f->var1);
            if (f->kind == FormulaKind::letter_at) out += "'" + f->symbol + "'";
            else out += "," + name(f->var2);
            out += ';';
            return;
        }
        out += '(';
        if (is_quantifier(f->kind)) {
            bound.push_back(f->var1);
            shape(f->left, bound, free, out);
            bound.pop_back();
        } else {
            shape(f->left, bound, free, out);
            if (f->right) shape(f->right, bound, free, out);
        }
        out += ')';
    }

    std::vector<std::size_t> tracks_of(std::initializer_list<std::string> vars) const {
        std::vector<std::size_t> out;
        for (const auto& v : vars) out.push_back(index_of(v));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    // Bit position of var among the local tracks.
    std::size_t bit(const std::vector<std::size_t>& tracks, const std::string& var) const {
        return static_cast<std::size_t>(std::find(tracks.begin(), tracks.end(), index_of(var)) - tracks.begin());
    }

    Dfa within_k(const Dfa& d, const std::vector<std::size_t>& tracks) {
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < tracks.size(); ++i)
            if (context[tracks[i]].first_order) mask |= std::uint64_t{1} << i;
        if (mask == 0) return minimal_dfa(d);
        auto key = std::pair{tracks.size(), mask};
        auto it = k_cache_.find(key);
        if (it == k_cache_.end()) it = k_cache_.emplace(key, exactly_once(d.alphabet(), tracks.size(), mask)).first;
        return minimal_dfa(product(d, it->second, ProductMode::intersect));
    }

    // Same language with the tracks of `to` (a superset), the extra tracks ignored.
    Dfa lift(const Compiled& c, const std::vector<std::size_t>& to) {
        if (c.tracks == to) return c.dfa;
        const std::size_t from_n = c.tracks.size(), to_n = to.size();
        std::vector<std::size_t> source_bit(from_n);
        for (std::size_t i = 0; i < from_n; ++i)
            source_bit[i] = static_cast<std::size_t>(std::find(to.begin(), to.end(), c.tracks[i]) - to.begin());
        const auto& al = alphabet(to_n);
        const std::size_t k = al.size();
        std::vector<Symbol> restrict_letter(k);
        for (Symbol a = 0; a < k; ++a) {
            std::uint64_t bits = a & ((std::uint64_t{1} << to_n) - 1), kept = 0;
            for (std::size_t i = 0; i < from_n; ++i) kept |= ((bits >> source_bit[i]) & 1U) << i;
            restrict_letter[a] = static_cast<Symbol>(((a >> to_n) << from_n) | kept);
        }
        const std::size_t n = c.dfa.num_states();
        std::vector<State> delta(n * k);
        for (State q = 0; q < n; ++q)
            for (Symbol a = 0; a < k; ++a) delta[q * k + a] = c.dfa.next(q, restrict_letter[a]);
        return Dfa(al, n, std::move(delta), c.dfa.initial(), c.dfa.final_mask());
    }

    Dfa constant(std::size_t tracks, bool value) {
        const auto& al = alphabet(tracks);
        return Dfa(al, 1, std::vector<State>(al.size(), 0), 0, {value});
    }

    // Words with at least one position whose letter satisfies pred.
    template <typename Pred>
    Dfa exists_position(std::size_t tracks, Pred pred) {
        const auto& al = alphabet(tracks);
        const std::size_t k = al.size();
        std::vector<State> delta(2 * k, 1);
        for (Symbol a = 0; a < k; ++a)
            delta[a] = pred(static_cast<Symbol>(a >> tracks), a & ((std::uint64_t{1} << tracks) - 1)) ? 1 : 0;
        return Dfa(al, 2, std::move(delta), 0, {false, true});
    }

    // x < y, or S(x, y) when adjacent; meaningful on words where each of x and y is marked once.
    Dfa two_marks(std::size_t tracks, std::size_t tx, std::size_t ty, bool adjacent) {
        const auto& al = alphabet(tracks);
        const std::size_t k = al.size();
        std::vector<State> delta(3 * k);
        for (Symbol a = 0; a < k; ++a) {
            bool bx = (a >> tx) & 1U, by = (a >> ty) & 1U;
            delta[a] = bx && !by ? 1 : 0;
            delta[k + a] = by ? 2 : (adjacent ? 0 : 1);
            delta[2 * k + a] = 2;
        }
        return Dfa(al, 3, std::move(delta), 0, {false, false, true});
    }

    Compiled exists(const FormulaPtr& f, bool universal) {
        const bool first_order = f->kind == FormulaKind::exists_fo || f->kind == FormulaKind::forall_fo;
        const std::size_t t = context.size();
        context.push_back({f->var1, first_order});
        try {
            Compiled body = compile(f->left);
            const bool occurs = !body.tracks.empty() && body.tracks.back() == t;
            Dfa inner = occurs && universal ? within_k(complement(body.dfa), body.tracks) : body.dfa;
            context.pop_back();
            if (!occurs) {
                // A set always exists, a position only in a nonempty word.
                if (!first_order) return body;
                Dfa nonempty = exists_position(body.tracks.size(), [](Symbol, std::uint64_t) { return true; });
                if (universal) return {within_k(product(body.dfa, complement(nonempty), ProductMode::unite), body.tracks), body.tracks};
                return {minimal_dfa(product(body.dfa, nonempty, ProductMode::intersect)), body.tracks};
            }
            const std::size_t n = body.tracks.size();
            std::vector<std::size_t> rest(body.tracks.begin(), body.tracks.end() - 1);
            Dfa projected = project_bit(inner, alphabet(n - 1), n, n - 1, opts_);
            return {universal ? within_k(complement(projected), rest) : projected, rest};
        } catch (const ResourceError& e) {
            context.erase(context.begin() + static_cast<long>(std::min(t, context.size())), context.end());
            if (wrapped_) throw;
            wrapped_ = true;
            throw ResourceError(std::string(e.what()) + " while compiling subformula: " + print_formula(f));
        }
    }
};

} // namespace

Dfa k_constraint(const TrackAlphabet& tracks) {
    return exactly_once(tracks.alphabet(), tracks.num_tracks(), (std::uint64_t{1} << tracks.fo_tracks().size()) - 1);
}

CompiledFormula compile_formula(const FormulaPtr& f, const Alphabet& alphabet, const FormulaCompileOptions& options) {
    auto fv = free_variables(f);
    std::vector<std::string> order = options.track_order.empty() ? fv : options.track_order;
    {
        auto a = order, b = fv;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b || std::adjacent_find(a.begin(), a.end()) != a.end())
            throw InputError("track order must list each free variable exactly once");
    }
    std::vector<std::string> fo_tracks, so_tracks;
    for (const auto& v : order) (is_set_variable(v) ? so_tracks : fo_tracks).push_back(v);
    TrackAlphabet tracks(alphabet, fo_tracks, so_tracks);

    FormulaCompiler compiler(alphabet, options.determinize);
    for (const auto& v : fo_tracks) compiler.context.push_back({v, true});
    for (const auto& v : so_tracks) compiler.context.push_back({v, false});
    Dfa d = compiler.lift_to_context(compiler.compile(f));
    return {tracks, d.relabel(tracks.alphabet())};
}

CompiledFormula project_track(const CompiledFormula& c, const std::string& var) {
    auto idx = c.tracks.track_of(var);
    if (!idx) throw InputError("no track for variable '" + var + "'");
    auto fo_tracks = c.tracks.fo_tracks();
    auto so_tracks = c.tracks.so_tracks();
    if (*idx < fo_tracks.size()) fo_tracks.erase(fo_tracks.begin() + static_cast<std::ptrdiff_t>(*idx));
    else so_tracks.erase(so_tracks.begin() + static_cast<std::ptrdiff_t>(*idx - fo_tracks.size()));
    TrackAlphabet smaller(c.tracks.base(), fo_tracks, so_tracks);
    Dfa d = project_bit(c.dfa, smaller.alphabet(), c.tracks.num_tracks(), *idx, {});
    d = minimal_dfa(product(d, k_constraint(smaller), ProductMode::intersect));
    return {smaller, d};
}

MsoDecision decide_mso(const FormulaPtr& f, const Alphabet& alphabet, DecideMode mode,
                       const FormulaCompileOptions& options) {
    auto fv = free_variables(f);
    if (!fv.empty()) throw InputError("a sentence is required; '" + fv.front() + "' is free");
    Dfa d = compile_formula(f, alphabet, options).dfa;
    if (mode == DecideMode::valid) d = complement(d);
    auto e = is_empty(d);
    MsoDecision out;
    out.holds = (mode == DecideMode::valid) == e.empty;
    out.witness = e.shortest;
    return out;
}

FormulaPtr dfa_to_mso(const Dfa& d) {
    if (!d.is_complete()) throw ContractError("dfa_to_mso needs a complete automaton");
    const std::size_t n = d.num_states();
    const Alphabet& al = d.alphabet();
    auto set = [](State q) { return "X" + std::to_string(q); };
    auto at_min = [](FormulaPtr body_of_x) {
        return fo::forall1("x", fo::implies(fo::forall1("y", fo::negation(fo::succ("y", "x"))), body_of_x));
    };
    auto at_max = [](FormulaPtr body_of_x) {
        return fo::forall1("x", fo::implies(fo::forall1("y", fo::negation(fo::succ("x", "y"))), body_of_x));
    };

    std::vector<FormulaPtr> clauses;
    for (State q = 0; q < n; ++q)
        for (State r = q + 1; r < n; ++r)
            clauses.push_back(
                fo::negation(fo::exists1("x", fo::conj(fo::set_mem(set(q), "x"), fo::set_mem(set(r), "x")))));
    {
        std::vector<FormulaPtr> some;
        for (State q = 0; q < n; ++q) some.push_back(fo::set_mem(set(q), "x"));
        clauses.push_back(fo::forall1("x", fo::disj_all(some)));
    }
    {
        std::vector<FormulaPtr> moves;
        for (State q = 0; q < n; ++q)
            for (Symbol a = 0; a < al.size(); ++a)
                moves.push_back(fo::conj(fo::conj(fo::set_mem(set(q), "x"), fo::letter_at(al.name(a), "y")),
                                         fo::set_mem(set(d.next(q, a)), "y")));
        clauses.push_back(
            fo::forall1("x", fo::forall1("y", fo::implies(fo::succ("x", "y"), fo::disj_all(moves)))));
    }
    for (Symbol a = 0; a < al.size(); ++a)
        clauses.push_back(fo::implies(at_min(fo::letter_at(al.name(a), "x")),
                                      at_min(fo::set_mem(set(d.next(d.initial(), a)), "x"))));
    {
        std::vector<FormulaPtr> ends;
        for (State q = 0; q < n; ++q)
            if (d.is_final(q)) ends.push_back(at_max(fo::set_mem(set(q), "x")));
        clauses.push_back(fo::disj_all(ends));
    }
    FormulaPtr body = fo::conj_all(clauses);
    for (State q = n; q-- > 0;) body = fo::exists2(set(q), body);
    if (!d.is_final(d.initial())) body = fo::conj(body, fo::exists1("x", fo::truth()));
    return body;
}

} // namespace ratkit

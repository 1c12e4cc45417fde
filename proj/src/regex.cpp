#include "ratkit/regex.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <unordered_map>

#include "ratkit/error.hpp"
#include "ratkit/minimize.hpp"

namespace ratkit {

namespace rx {

namespace {
RegexPtr node(RegexKind k, RegexPtr l = nullptr, RegexPtr r = nullptr) {
    return std::make_shared<const RegexNode>(RegexNode{k, {}, std::move(l), std::move(r), nullptr});
}
} // namespace

RegexPtr empty() {
    static const RegexPtr e = node(RegexKind::empty);
    return e;
}
RegexPtr eps() {
    static const RegexPtr e = node(RegexKind::epsilon);
    return e;
}
RegexPtr letter(std::string symbol) {
    return std::make_shared<const RegexNode>(RegexNode{RegexKind::letter, std::move(symbol), nullptr, nullptr, nullptr});
}
RegexPtr unite(RegexPtr l, RegexPtr r) { return node(RegexKind::unite, std::move(l), std::move(r)); }
RegexPtr concat(RegexPtr l, RegexPtr r) { return node(RegexKind::concat, std::move(l), std::move(r)); }
RegexPtr star(RegexPtr e) { return node(RegexKind::star, std::move(e)); }
RegexPtr intersect(RegexPtr l, RegexPtr r) { return node(RegexKind::intersect, std::move(l), std::move(r)); }
RegexPtr complement(RegexPtr e) { return node(RegexKind::complement, std::move(e)); }
RegexPtr morph(MorphSpec spec, RegexPtr e) {
    return std::make_shared<const RegexNode>(RegexNode{RegexKind::morph, {}, std::move(e), nullptr,
                                                       std::make_shared<const MorphSpec>(std::move(spec))});
}
RegexPtr universe() {
    static const RegexPtr e = complement(empty());
    return e;
}

namespace {
template <class F>
RegexPtr fold(const std::vector<RegexPtr>& es, std::size_t lo, std::size_t hi, F make) {
    if (hi - lo == 1) return es[lo];
    std::size_t mid = lo + (hi - lo) / 2;
    return make(fold(es, lo, mid, make), fold(es, mid, hi, make));
}
} // namespace

RegexPtr unite_all(const std::vector<RegexPtr>& es) { return es.empty() ? empty() : fold(es, 0, es.size(), unite); }
RegexPtr concat_all(const std::vector<RegexPtr>& es) { return es.empty() ? eps() : fold(es, 0, es.size(), concat); }
RegexPtr intersect_all(const std::vector<RegexPtr>& es) {
    return es.empty() ? universe() : fold(es, 0, es.size(), intersect);
}

} // namespace rx

namespace {

const char* kind_operator(RegexKind k) {
    switch (k) {
    case RegexKind::star: return "star (*)";
    case RegexKind::intersect: return "intersection (&)";
    case RegexKind::complement: return "complement (~)";
    case RegexKind::morph: return "morphism (map{...})";
    default: return "?";
    }
}

void check_dialect(const RegexPtr& e, Dialect d) {
    if (!e) throw ContractError("null expression");
    bool bad = false;
    if (d == Dialect::rational)
        bad = e->kind == RegexKind::intersect || e->kind == RegexKind::complement || e->kind == RegexKind::morph;
    if (d == Dialect::star_free) bad = e->kind == RegexKind::star || e->kind == RegexKind::morph;
    if (bad)
        throw InputError(std::string("operator ") + kind_operator(e->kind) + " is not allowed in the " +
                         dialect_name(d) + " dialect");
    if (e->left) check_dialect(e->left, d);
    if (e->right) check_dialect(e->right, d);
}

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

} // namespace

const char* dialect_name(Dialect d) {
    switch (d) {
    case Dialect::rational: return "rational";
    case Dialect::extended: return "extended";
    case Dialect::star_free: return "star-free";
    }
    return "?";
}

Dialect parse_dialect(std::string_view name) {
    if (name == "rational") return Dialect::rational;
    if (name == "extended") return Dialect::extended;
    if (name == "star-free" || name == "starfree") return Dialect::star_free;
    throw InputError("unknown dialect '" + std::string(name) + "' (rational, extended, star-free)");
}

Regex::Regex(RegexPtr root, Dialect dialect) : root_(std::move(root)), dialect_(dialect) {
    check_dialect(root_, dialect_);
}

std::string Regex::to_string() const { return print_regex(root_); }

// ---------------------------------------------------------------- parsing

namespace {

enum class Tok { zero, eps, sym, tilde, star, bar, amp, lparen, rparen, map, rbrace, arrow, comma, end };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line, col;
};

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;
    auto advance = [&](std::size_t k) {
        for (std::size_t j = 0; j < k; ++j) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    auto err = [&](const std::string& msg) -> InputError {
        return InputError("regex " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
    };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        std::size_t l = line, cl = col;
        if (c == '\'') {
            std::size_t j = s.find('\'', i + 1);
            if (j == std::string_view::npos) throw err("unterminated quoted symbol");
            if (j == i + 1) throw err("empty quoted symbol");
            out.push_back({Tok::sym, std::string(s.substr(i + 1, j - i - 1)), l, cl});
            advance(j + 1 - i);
            continue;
        }
        if (ident_char(c)) {
            std::size_t j = i;
            while (j < s.size() && ident_char(s[j])) ++j;
            std::string_view run = s.substr(i, j - i);
            if (run == kEpsilonToken) {
                out.push_back({Tok::eps, "eps", l, cl});
                advance(run.size());
            } else if (run == "map" && j < s.size() && s[j] == '{') {
                out.push_back({Tok::map, "map{", l, cl});
                advance(4);
            } else {
                for (char ch : run) {
                    std::size_t cc = col;
                    out.push_back({ch == '0' ? Tok::zero : Tok::sym, std::string(1, ch), line, cc});
                    advance(1);
                }
            }
            continue;
        }
        Tok k;
        std::size_t width = 1;
        switch (c) {
        case '~': k = Tok::tilde; break;
        case '*': k = Tok::star; break;
        case '|': k = Tok::bar; break;
        case '&': k = Tok::amp; break;
        case '(': k = Tok::lparen; break;
        case ')': k = Tok::rparen; break;
        case '}': k = Tok::rbrace; break;
        case ',': k = Tok::comma; break;
        case '-':
            if (i + 1 < s.size() && s[i + 1] == '>') {
                k = Tok::arrow;
                width = 2;
                break;
            }
            [[fallthrough]];
        default: throw err(std::string("unexpected character '") + c + "'");
        }
        out.push_back({k, std::string(s.substr(i, width)), l, cl});
        advance(width);
    }
    out.push_back({Tok::end, "end of input", line, col});
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    RegexPtr parse() {
        RegexPtr e = expr();
        if (peek().kind != Tok::end) fail("unexpected '" + peek().text + "'");
        return e;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    Token take() { return toks_[pos_++]; }
    [[noreturn]] void fail(const std::string& msg) const {
        throw InputError("regex " + std::to_string(peek().line) + ":" + std::to_string(peek().col) + ": " + msg);
    }
    void expect(Tok k, const char* what) {
        if (peek().kind != k) fail(std::string("expected ") + what + ", got '" + peek().text + "'");
        ++pos_;
    }
    bool starts_atom() const {
        switch (peek().kind) {
        case Tok::zero:
        case Tok::eps:
        case Tok::sym:
        case Tok::tilde:
        case Tok::lparen:
        case Tok::map: return true;
        default: return false;
        }
    }

    RegexPtr expr() {
        RegexPtr e = inter();
        while (peek().kind == Tok::bar) {
            take();
            e = rx::unite(e, inter());
        }
        return e;
    }
    RegexPtr inter() {
        RegexPtr e = cat();
        while (peek().kind == Tok::amp) {
            take();
            e = rx::intersect(e, cat());
        }
        return e;
    }
    RegexPtr cat() {
        RegexPtr e = rep();
        while (starts_atom()) e = rx::concat(e, rep());
        return e;
    }
    RegexPtr rep() {
        RegexPtr e = atom();
        while (peek().kind == Tok::star) {
            take();
            e = rx::star(e);
        }
        return e;
    }
    RegexPtr atom() {
        switch (peek().kind) {
        case Tok::zero: take(); return rx::empty();
        case Tok::eps: take(); return rx::eps();
        case Tok::sym: return rx::letter(take().text);
        case Tok::tilde: take(); return rx::complement(atom());
        case Tok::lparen: {
            take();
            RegexPtr e = expr();
            expect(Tok::rparen, "')'");
            return e;
        }
        case Tok::map: {
            take();
            MorphSpec spec;
            while (true) {
                if (peek().kind != Tok::sym) fail("expected a source symbol in map{...}");
                std::string src = take().text;
                if (std::find(spec.source.begin(), spec.source.end(), src) != spec.source.end())
                    fail("symbol '" + src + "' mapped twice");
                expect(Tok::arrow, "'->'");
                std::vector<std::string> img;
                if (peek().kind == Tok::eps) {
                    take();
                } else {
                    if (peek().kind != Tok::sym) fail("expected an image word");
                    while (peek().kind == Tok::sym) img.push_back(take().text);
                }
                spec.source.push_back(std::move(src));
                spec.images.push_back(std::move(img));
                if (peek().kind == Tok::comma) {
                    take();
                    continue;
                }
                expect(Tok::rbrace, "'}'");
                break;
            }
            expect(Tok::lparen, "'('");
            RegexPtr e = expr();
            expect(Tok::rparen, "')'");
            return rx::morph(std::move(spec), e);
        }
        default: fail("unexpected '" + peek().text + "'");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

} // namespace

Regex parse_regex(std::string_view text, Dialect dialect) {
    return Regex(Parser(lex(text)).parse(), dialect);
}

// ---------------------------------------------------------------- printing

namespace {

int precedence(RegexKind k) {
    switch (k) {
    case RegexKind::unite: return 1;
    case RegexKind::intersect: return 2;
    case RegexKind::concat: return 3;
    case RegexKind::star: return 4;
    default: return 5;
    }
}

struct PrintTok {
    std::string text;
    bool bare_letter; // single identifier character printed as is
    bool ident_edge;  // begins and ends with an identifier character
};

std::string symbol_text(const std::string& s, bool& bare) {
    bare = s.size() == 1 && ident_char(s[0]) && s[0] != '0';
    return bare ? s : "'" + s + "'";
}

void emit(const RegexPtr& e, int min_prec, std::vector<PrintTok>& out) {
    const bool paren = precedence(e->kind) < min_prec;
    if (paren) out.push_back({"(", false, false});
    switch (e->kind) {
    case RegexKind::empty: out.push_back({"0", false, true}); break;
    case RegexKind::epsilon: out.push_back({"eps", false, true}); break;
    case RegexKind::letter: {
        bool bare = false;
        std::string t = symbol_text(e->symbol, bare);
        out.push_back({t, bare, bare});
        break;
    }
    case RegexKind::unite:
        emit(e->left, 1, out);
        out.push_back({"|", false, false});
        emit(e->right, 1, out);
        break;
    case RegexKind::intersect:
        emit(e->left, 2, out);
        out.push_back({"&", false, false});
        emit(e->right, 2, out);
        break;
    case RegexKind::concat:
        emit(e->left, 3, out);
        emit(e->right, 3, out);
        break;
    case RegexKind::star:
        emit(e->left, 4, out);
        out.push_back({"*", false, false});
        break;
    case RegexKind::complement:
        out.push_back({"~", false, false});
        emit(e->left, 5, out);
        break;
    case RegexKind::morph: {
        std::string m = "map{";
        for (std::size_t i = 0; i < e->morph->source.size(); ++i) {
            if (i) m += ", ";
            bool bare = false;
            m += symbol_text(e->morph->source[i], bare) + "->";
            const auto& img = e->morph->images[i];
            if (img.empty()) m += "eps";
            std::string run;
            for (const auto& s : img) {
                std::string t = symbol_text(s, bare);
                if (bare) {
                    run += t;
                    continue;
                }
                if (!run.empty()) m += (run == "eps" ? "ep s" : run);
                run.clear();
                m += t;
            }
            if (!run.empty()) m += (run == "eps" ? "ep s" : run);
        }
        out.push_back({m + "}", false, false});
        out.push_back({"(", false, false});
        emit(e->left, 1, out);
        out.push_back({")", false, false});
        break;
    }
    }
    if (paren) out.push_back({")", false, false});
}

} // namespace

std::string print_regex(const RegexPtr& e) {
    std::vector<PrintTok> toks;
    emit(e, 1, toks);
    // Adjacent bare letters are glued; other identifier-edged neighbours get a space.
    std::string out, run;
    bool prev_ident = false, prev_bare = false;
    auto flush = [&] {
        if (run == "eps" || run == "map") run.insert(2, " ");
        out += run;
        run.clear();
    };
    for (const auto& t : toks) {
        if (t.bare_letter && prev_bare) {
            run += t.text;
        } else {
            flush();
            if (t.ident_edge && prev_ident) out += ' ';
            if (t.bare_letter) {
                run = t.text;
            } else {
                out += t.text;
            }
        }
        prev_ident = t.ident_edge;
        prev_bare = t.bare_letter;
    }
    flush();
    return out;
}

// ---------------------------------------------------------------- compilation

namespace {

class Compiler {
public:
    Compiler(const CompileOptions& o, CompileStats* s) : opt_(o), stats_(s) {}

    Nfa run(const RegexPtr& e, const Alphabet& a) {
        if (stats_) ++stats_->nodes;
        switch (e->kind) {
        case RegexKind::empty: return empty_language(a);
        case RegexKind::epsilon: return epsilon_language(a);
        case RegexKind::letter: return word_language(a, {a.at(e->symbol)});
        case RegexKind::unite: return reduce(union_disjoint(run(e->left, a), run(e->right, a)));
        case RegexKind::concat: return reduce(ratkit::concat(run(e->left, a), run(e->right, a)));
        case RegexKind::star:
            if (stats_) ++stats_->star_calls;
            return reduce(ratkit::star(run(e->left, a)));
        case RegexKind::intersect:
            return reduce(product(run(e->left, a), run(e->right, a), ProductMode::intersect));
        case RegexKind::complement: {
            if (stats_) ++stats_->complement_calls;
            Nfa inner = run(e->left, a);
            return trim(complement(minimal_dfa(inner, opt_.determinize)).to_nfa()).automaton;
        }
        case RegexKind::morph: {
            Alphabet source(e->morph->source);
            std::vector<Word> images;
            for (const auto& img : e->morph->images) {
                Word w;
                for (const auto& s : img) w.push_back(a.at(s));
                images.push_back(std::move(w));
            }
            Morphism phi(source, a, std::move(images));
            return reduce(morphic_image(run(e->left, source), phi));
        }
        }
        throw ContractError("bad expression node");
    }

private:
    Nfa reduce(const Nfa& x) {
        Nfa t = trim(x).automaton;
        if (t.num_states() > opt_.reduce_threshold) {
            t = trim(minimal_dfa(t, opt_.determinize).to_nfa()).automaton;
        }
        return t;
    }

    const CompileOptions& opt_;
    CompileStats* stats_;
};

} // namespace

Nfa compile_regex(const RegexPtr& e, const Alphabet& alphabet, const CompileOptions& options, CompileStats* stats) {
    return Compiler(options, stats).run(e, alphabet);
}

Nfa compile_regex(const Regex& e, const Alphabet& alphabet, const CompileOptions& options, CompileStats* stats) {
    return compile_regex(e.root(), alphabet, options, stats);
}

// ---------------------------------------------------------------- size, symbols, nullable

std::uint64_t regex_size(const RegexPtr& e) {
    std::unordered_map<const RegexNode*, std::uint64_t> memo;
    constexpr std::uint64_t cap = std::uint64_t{1} << 62;
    auto go = [&](auto& self, const RegexPtr& x) -> std::uint64_t {
        if (!x) return 0;
        if (auto it = memo.find(x.get()); it != memo.end()) return it->second;
        std::uint64_t s = 1 + self(self, x->left) + self(self, x->right);
        if (s > cap) s = cap;
        memo[x.get()] = s;
        return s;
    };
    return go(go, e);
}

std::vector<std::string> regex_symbols(const RegexPtr& e) {
    std::vector<std::string> out;
    std::set<const RegexNode*> seen;
    auto add = [&](const std::string& s) {
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    };
    auto go = [&](auto& self, const RegexPtr& x) -> void {
        if (!x || !seen.insert(x.get()).second) return;
        if (x->kind == RegexKind::letter) add(x->symbol);
        if (x->kind == RegexKind::morph) {
            for (const auto& img : x->morph->images)
                for (const auto& s : img) add(s);
            return;
        }
        self(self, x->left);
        self(self, x->right);
    };
    go(go, e);
    return out;
}

bool nullable(const RegexPtr& e) {
    switch (e->kind) {
    case RegexKind::empty: return false;
    case RegexKind::epsilon: return true;
    case RegexKind::letter: return false;
    case RegexKind::unite: return nullable(e->left) || nullable(e->right);
    case RegexKind::concat: return nullable(e->left) && nullable(e->right);
    case RegexKind::star: return true;
    case RegexKind::intersect: return nullable(e->left) && nullable(e->right);
    case RegexKind::complement: return !nullable(e->left);
    case RegexKind::morph: break;
    }
    throw ContractError("nullable is not syntactic for morphism nodes");
}

// ---------------------------------------------------------------- extraction

ExtractResult extract_regex(const Nfa& a) {
    if (a.has_epsilon()) throw ContractError("extract_regex needs an epsilon-free automaton");
    const std::size_t n = a.num_states();
    // cur[p*n+q] = L_{p,q}(P) with P = {j, ..., n-1}; starts at P = empty.
    std::vector<RegexPtr> cur(n * n);
    for (State p = 0; p < n; ++p)
        for (State q = 0; q < n; ++q) {
            RegexPtr e = p == q ? rx::eps() : nullptr;
            for (const auto& t : a.out(p))
                if (t.dst == q) e = e ? rx::unite(e, rx::letter(a.alphabet().name(t.label))) : rx::letter(a.alphabet().name(t.label));
            cur[p * n + q] = e ? e : rx::empty();
        }
    for (std::size_t j = n; j-- > 0;) {
        std::vector<RegexPtr> nxt(n * n);
        const RegexPtr loop = rx::star(cur[j * n + j]);
        for (State p = 0; p < n; ++p)
            for (State q = 0; q < n; ++q)
                nxt[p * n + q] =
                    rx::unite(cur[p * n + q], rx::concat(rx::concat(cur[p * n + j], loop), cur[j * n + q]));
        cur = std::move(nxt);
    }
    RegexPtr result;
    for (State i : a.initials())
        for (State f : a.finals()) result = result ? rx::unite(result, cur[i * n + f]) : cur[i * n + f];
    if (!result) result = rx::empty();
    ExtractResult r{Regex(result, Dialect::rational), regex_size(result)};
    return r;
}

// ---------------------------------------------------------------- simplification

namespace {

class Simplifier {
public:
    RegexPtr run(const RegexPtr& e) {
        if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
        RegexPtr r = step(e);
        memo_[e.get()] = r;
        keep_.push_back(e);
        return r;
    }

private:
    static bool is_universe(const RegexPtr& e) {
        return e->kind == RegexKind::complement && e->left->kind == RegexKind::empty;
    }

    const std::string& printed(const RegexPtr& e) {
        auto it = printed_.find(e.get());
        if (it != printed_.end()) return it->second;
        keep_.push_back(e);
        return printed_[e.get()] = print_regex(e);
    }

    void flatten(const RegexPtr& e, RegexKind k, std::vector<RegexPtr>& out) {
        if (e->kind == k) {
            flatten(e->left, k, out);
            flatten(e->right, k, out);
        } else {
            out.push_back(e);
        }
    }

    // Sorted by printed form, duplicates removed, folded to the right.
    RegexPtr rebuild(std::vector<RegexPtr> ops, RegexKind k) {
        std::vector<std::pair<std::string, RegexPtr>> keyed;
        for (auto& o : ops) keyed.emplace_back(printed(o), o);
        std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first == y.first; }),
                    keyed.end());
        RegexPtr acc = keyed.back().second;
        for (std::size_t i = keyed.size() - 1; i-- > 0;)
            acc = k == RegexKind::unite ? rx::unite(keyed[i].second, acc) : rx::intersect(keyed[i].second, acc);
        return acc;
    }

    RegexPtr step(const RegexPtr& e) {
        switch (e->kind) {
        case RegexKind::empty:
        case RegexKind::epsilon:
        case RegexKind::letter: return e;
        case RegexKind::unite: {
            std::vector<RegexPtr> ops, kept;
            flatten(run(e->left), RegexKind::unite, ops);
            flatten(run(e->right), RegexKind::unite, ops);
            for (auto& o : ops) {
                if (is_universe(o)) return o;
                if (o->kind != RegexKind::empty) kept.push_back(o);
            }
            if (kept.empty()) return rx::empty();
            return rebuild(std::move(kept), RegexKind::unite);
        }
        case RegexKind::intersect: {
            std::vector<RegexPtr> ops, kept;
            flatten(run(e->left), RegexKind::intersect, ops);
            flatten(run(e->right), RegexKind::intersect, ops);
            for (auto& o : ops) {
                if (o->kind == RegexKind::empty) return o;
                if (!is_universe(o)) kept.push_back(o);
            }
            if (kept.empty()) return rx::universe();
            return rebuild(std::move(kept), RegexKind::intersect);
        }
        case RegexKind::concat: {
            RegexPtr l = run(e->left), r = run(e->right);
            if (l->kind == RegexKind::empty || r->kind == RegexKind::empty) return rx::empty();
            if (l->kind == RegexKind::epsilon) return r;
            if (r->kind == RegexKind::epsilon) return l;
            if (is_universe(l) && is_universe(r)) return l;
            if (l == e->left && r == e->right) return e;
            return rx::concat(l, r);
        }
        case RegexKind::star: {
            RegexPtr i = run(e->left);
            if (i->kind == RegexKind::empty || i->kind == RegexKind::epsilon) return rx::eps();
            if (i->kind == RegexKind::star) return i;
            if (i == e->left) return e;
            return rx::star(i);
        }
        case RegexKind::complement: {
            RegexPtr i = run(e->left);
            if (i->kind == RegexKind::complement) return i->left;
            if (i == e->left) return e;
            return rx::complement(i);
        }
        case RegexKind::morph: {
            RegexPtr i = run(e->left);
            if (i == e->left) return e;
            return std::make_shared<const RegexNode>(RegexNode{RegexKind::morph, {}, i, nullptr, e->morph});
        }
        }
        return e;
    }

    std::unordered_map<const RegexNode*, RegexPtr> memo_;
    std::unordered_map<const RegexNode*, std::string> printed_;
    std::vector<RegexPtr> keep_; // keeps memo keys alive
};

} // namespace

RegexPtr simplify(const RegexPtr& e) { return Simplifier().run(e); }

Regex simplify(const Regex& e) { return Regex(simplify(e.root()), e.dialect()); }

} // namespace ratkit

#include "ratkit/rational.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "ratkit/error.hpp"

namespace ratkit {

namespace {

struct PairHash {
    std::size_t operator()(std::uint64_t x) const { return std::hash<std::uint64_t>{}(x * 0x9e3779b97f4a7c15ull); }
};

std::uint64_t key(State p, State q) { return (std::uint64_t{p} << 32) | q; }

bool has_all_moves(const Nfa& a) {
    if (a.initials().empty()) return false;
    for (State q = 0; q < a.num_states(); ++q)
        for (Symbol s = 0; s < a.alphabet().size(); ++s)
            if (a.out(q, s).empty()) return false;
    return true;
}

// Breadth-first exploration of pair states from `starts`; `expand` emits successors.
template <class Expand>
Nfa explore_pairs(const Alphabet& alphabet, const std::vector<std::pair<State, State>>& starts, Expand expand,
                  auto is_final) {
    std::unordered_map<std::uint64_t, State, PairHash> ids;
    std::vector<std::pair<State, State>> order;
    auto id_of = [&](State p, State q) {
        auto [it, fresh] = ids.emplace(key(p, q), static_cast<State>(order.size()));
        if (fresh) order.emplace_back(p, q);
        return it->second;
    };
    std::vector<State> ini;
    for (auto [p, q] : starts) ini.push_back(id_of(p, q));
    std::vector<Transition> ts;
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto [p, q] = order[i];
        expand(p, q, [&](Symbol a, State p2, State q2) { ts.push_back({static_cast<State>(i), a, id_of(p2, q2)}); });
    }
    std::vector<State> fin;
    for (std::size_t i = 0; i < order.size(); ++i)
        if (is_final(order[i].first, order[i].second)) fin.push_back(static_cast<State>(i));
    return Nfa(alphabet, order.size(), std::move(ts), std::move(ini), std::move(fin));
}

} // namespace

void require_same_alphabet(const Alphabet& x, const Alphabet& y, const char* op) {
    if (!(x == y))
        throw ContractError(std::string(op) + ": alphabets differ ({" + x.to_string() + "} vs {" + y.to_string() +
                            "}); use --align-alphabets to coerce");
}

Morphism::Morphism(Alphabet source, Alphabet target, std::vector<Word> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
    if (images_.size() != source_.size()) throw ContractError("morphism needs one image per source symbol");
    for (const auto& w : images_)
        for (Symbol s : w)
            if (s >= target_.size()) throw ContractError("morphism image letter outside the target alphabet");
}

Morphism Morphism::identity(const Alphabet& a) {
    std::vector<Word> im;
    for (Symbol s = 0; s < a.size(); ++s) im.push_back({s});
    return Morphism(a, a, std::move(im));
}

bool Morphism::erasing() const {
    return std::any_of(images_.begin(), images_.end(), [](const Word& w) { return w.empty(); });
}

Word Morphism::apply(const Word& w) const {
    Word out;
    for (Symbol s : w) {
        const Word& im = images_.at(s);
        out.insert(out.end(), im.begin(), im.end());
    }
    return out;
}

std::string Morphism::to_string() const {
    std::string out;
    for (Symbol s = 0; s < source_.size(); ++s) {
        if (s) out += ' ';
        out += source_.name(s) + "->";
        if (images_[s].empty()) {
            out += kEpsilonToken;
        } else {
            for (std::size_t i = 0; i < images_[s].size(); ++i) {
                if (i && !target_.single_char()) out += '.';
                out += target_.name(images_[s][i]);
            }
        }
    }
    return out;
}

Nfa empty_language(const Alphabet& a) { return Nfa(a, 0, {}, {}, {}); }

Nfa epsilon_language(const Alphabet& a) { return Nfa(a, 1, {}, {0}, {0}); }

Nfa universal_language(const Alphabet& a) {
    std::vector<Transition> ts;
    for (Symbol s = 0; s < a.size(); ++s) ts.push_back({0, s, 0});
    return Nfa(a, 1, std::move(ts), {0}, {0});
}

Nfa word_language(const Alphabet& a, const Word& w) {
    check_word(a, w);
    std::vector<Transition> ts;
    for (std::size_t i = 0; i < w.size(); ++i) ts.push_back({static_cast<State>(i), w[i], static_cast<State>(i + 1)});
    return Nfa(a, w.size() + 1, std::move(ts), {0}, {static_cast<State>(w.size())});
}

Dfa complement(const Dfa& d) {
    if (!d.is_complete()) throw ContractError("complement needs a complete deterministic automaton");
    std::vector<bool> fin = d.final_mask();
    fin.flip();
    return Dfa(d.alphabet(), d.num_states(), d.table(), d.initial(), std::move(fin), d.names());
}

Nfa union_disjoint(const Nfa& a1, const Nfa& a2) {
    require_same_alphabet(a1.alphabet(), a2.alphabet(), "union");
    const State off = static_cast<State>(a1.num_states());
    std::vector<Transition> ts(a1.transitions().begin(), a1.transitions().end());
    for (const auto& t : a2.transitions()) ts.push_back({t.src + off, t.label, t.dst + off});
    std::vector<State> ini = a1.initials(), fin = a1.finals();
    for (State q : a2.initials()) ini.push_back(q + off);
    for (State q : a2.finals()) fin.push_back(q + off);
    return Nfa(a1.alphabet(), a1.num_states() + a2.num_states(), std::move(ts), std::move(ini), std::move(fin));
}

Nfa product(const Nfa& x1, const Nfa& x2, ProductMode mode) {
    require_same_alphabet(x1.alphabet(), x2.alphabet(), "product");
    const Nfa a1 = remove_epsilon(x1), a2 = remove_epsilon(x2);
    if (mode == ProductMode::unite && (!has_all_moves(a1) || !has_all_moves(a2)))
        throw ContractError("product in union mode needs complete automata");
    std::vector<std::pair<State, State>> starts;
    for (State p : a1.initials())
        for (State q : a2.initials()) starts.emplace_back(p, q);
    auto expand = [&](State p, State q, auto&& emit) {
        auto o1 = a1.out(p), o2 = a2.out(q);
        std::size_t i = 0, j = 0;
        while (i < o1.size() && j < o2.size()) {
            if (o1[i].label < o2[j].label) {
                ++i;
            } else if (o2[j].label < o1[i].label) {
                ++j;
            } else {
                Symbol s = o1[i].label;
                std::size_t i2 = i, j2 = j;
                while (i2 < o1.size() && o1[i2].label == s) ++i2;
                while (j2 < o2.size() && o2[j2].label == s) ++j2;
                for (std::size_t u = i; u < i2; ++u)
                    for (std::size_t v = j; v < j2; ++v) emit(s, o1[u].dst, o2[v].dst);
                i = i2;
                j = j2;
            }
        }
    };
    auto fin = [&](State p, State q) {
        return mode == ProductMode::intersect ? a1.is_final(p) && a2.is_final(q) : a1.is_final(p) || a2.is_final(q);
    };
    return explore_pairs(a1.alphabet(), starts, expand, fin);
}

Dfa product(const Dfa& d1, const Dfa& d2, ProductMode mode) {
    require_same_alphabet(d1.alphabet(), d2.alphabet(), "product");
    if (mode == ProductMode::unite && (!d1.is_complete() || !d2.is_complete()))
        throw ContractError("product in union mode needs complete automata");
    const std::size_t k = d1.num_symbols();
    std::unordered_map<std::uint64_t, State, PairHash> ids;
    std::vector<std::pair<State, State>> order{{d1.initial(), d2.initial()}};
    ids.emplace(key(d1.initial(), d2.initial()), 0);
    std::vector<State> delta;
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto [p, q] = order[i];
        for (Symbol a = 0; a < k; ++a) {
            State p2 = d1.next(p, a), q2 = d2.next(q, a);
            if (p2 == kNoState || q2 == kNoState) {
                delta.push_back(kNoState);
                continue;
            }
            auto [it, fresh] = ids.emplace(key(p2, q2), static_cast<State>(order.size()));
            if (fresh) order.emplace_back(p2, q2);
            delta.push_back(it->second);
        }
    }
    std::vector<bool> fin;
    for (auto [p, q] : order)
        fin.push_back(mode == ProductMode::intersect ? d1.is_final(p) && d2.is_final(q)
                                                     : d1.is_final(p) || d2.is_final(q));
    return Dfa(d1.alphabet(), order.size(), std::move(delta), 0, std::move(fin));
}

Nfa concat(const Nfa& a1, const Nfa& a2) {
    require_same_alphabet(a1.alphabet(), a2.alphabet(), "concat");
    const State off = static_cast<State>(a1.num_states());
    std::vector<Transition> ts(a1.transitions().begin(), a1.transitions().end());
    for (const auto& t : a2.transitions()) ts.push_back({t.src + off, t.label, t.dst + off});
    for (State f : a1.finals())
        for (State i : a2.initials()) ts.push_back({f, kEpsilon, i + off});
    std::vector<State> fin;
    for (State f : a2.finals()) fin.push_back(f + off);
    return remove_epsilon(
        Nfa(a1.alphabet(), a1.num_states() + a2.num_states(), std::move(ts), a1.initials(), std::move(fin)));
}

Nfa star(const Nfa& a) {
    const State j = static_cast<State>(a.num_states());
    std::vector<Transition> ts(a.transitions().begin(), a.transitions().end());
    for (State f : a.finals())
        for (State i : a.initials()) ts.push_back({f, kEpsilon, i});
    std::vector<State> ini = a.initials(), fin = a.finals();
    ini.push_back(j);
    fin.push_back(j);
    return remove_epsilon(Nfa(a.alphabet(), a.num_states() + 1, std::move(ts), std::move(ini), std::move(fin)));
}

Nfa morphic_image(const Nfa& a, const Morphism& phi) {
    require_same_alphabet(a.alphabet(), phi.source(), "morphic_image");
    std::size_t n = a.num_states();
    std::vector<Transition> ts;
    for (const auto& t : a.transitions()) {
        if (t.label == kEpsilon) {
            ts.push_back(t);
            continue;
        }
        const Word& im = phi.image(t.label);
        if (im.empty()) {
            ts.push_back({t.src, kEpsilon, t.dst});
            continue;
        }
        State prev = t.src;
        for (std::size_t i = 0; i < im.size(); ++i) {
            State to = (i + 1 == im.size()) ? t.dst : static_cast<State>(n++);
            ts.push_back({prev, im[i], to});
            prev = to;
        }
    }
    return remove_epsilon(Nfa(phi.target(), n, std::move(ts), a.initials(), a.finals()));
}

Nfa inverse_morphic_image(const Nfa& input, const Morphism& phi) {
    require_same_alphabet(input.alphabet(), phi.target(), "inverse_morphic_image");
    const Nfa a = remove_epsilon(input);
    const std::size_t n = a.num_states();
    std::vector<Transition> ts;
    for (State p = 0; p < n; ++p) {
        for (Symbol x = 0; x < phi.source().size(); ++x) {
            StateSet cur(n);
            cur.insert(p);
            for (Symbol b : phi.image(x)) {
                StateSet nxt(n);
                cur.for_each([&](State q) {
                    for (const auto& t : a.out(q, b)) nxt.insert(t.dst);
                });
                cur = std::move(nxt);
            }
            cur.for_each([&](State q) { ts.push_back({p, x, q}); });
        }
    }
    return Nfa(phi.source(), n, std::move(ts), a.initials(), a.finals(), a.names());
}

Nfa quotient(const Nfa& x, const Nfa& y, QuotientSide side) {
    require_same_alphabet(x.alphabet(), y.alphabet(), "quotient");
    const Nfa a = remove_epsilon(x), k = remove_epsilon(y);
    const std::size_t n = a.num_states(), m = k.num_states();
    std::vector<bool> mark(n * m, false);
    std::vector<std::size_t> stack;
    auto push = [&](State p, State q) {
        std::size_t idx = p * m + q;
        if (!mark[idx]) {
            mark[idx] = true;
            stack.push_back(idx);
        }
    };
    if (side == QuotientSide::left) {
        // Pairs reachable from I x I_K; a-states paired with a final K-state start the quotient.
        for (State p : a.initials())
            for (State q : k.initials()) push(p, q);
        while (!stack.empty()) {
            std::size_t idx = stack.back();
            stack.pop_back();
            State p = static_cast<State>(idx / m), q = static_cast<State>(idx % m);
            for (const auto& t1 : a.out(p))
                for (const auto& t2 : k.out(q, t1.label)) push(t1.dst, t2.dst);
        }
        std::vector<State> ini;
        for (State p = 0; p < n; ++p)
            for (State f : k.finals())
                if (mark[p * m + f]) {
                    ini.push_back(p);
                    break;
                }
        std::vector<Transition> ts(a.transitions().begin(), a.transitions().end());
        return Nfa(a.alphabet(), n, std::move(ts), std::move(ini), a.finals(), a.names());
    }
    // Pairs co-reachable to F x F_K; a-states paired with an initial K-state end the quotient.
    std::vector<std::vector<Transition>> rev_a(n), rev_k(m);
    for (const auto& t : a.transitions()) rev_a[t.dst].push_back(t);
    for (const auto& t : k.transitions()) rev_k[t.dst].push_back(t);
    for (State p : a.finals())
        for (State q : k.finals()) push(p, q);
    while (!stack.empty()) {
        std::size_t idx = stack.back();
        stack.pop_back();
        State p = static_cast<State>(idx / m), q = static_cast<State>(idx % m);
        for (const auto& t1 : rev_a[p])
            for (const auto& t2 : rev_k[q])
                if (t1.label == t2.label) push(t1.src, t2.src);
    }
    std::vector<State> fin;
    for (State p = 0; p < n; ++p)
        for (State i : k.initials())
            if (mark[p * m + i]) {
                fin.push_back(p);
                break;
            }
    std::vector<Transition> ts(a.transitions().begin(), a.transitions().end());
    return Nfa(a.alphabet(), n, std::move(ts), a.initials(), std::move(fin), a.names());
}

Nfa closure_unary(const Nfa& a, ClosureKind kind) {
    switch (kind) {
    case ClosureKind::prefixes:
        return quotient(a, universal_language(a.alphabet()), QuotientSide::right);
    case ClosureKind::suffixes:
        return quotient(a, universal_language(a.alphabet()), QuotientSide::left);
    case ClosureKind::factors:
        return closure_unary(closure_unary(a, ClosureKind::prefixes), ClosureKind::suffixes);
    case ClosureKind::mirror: {
        std::vector<Transition> ts;
        for (const auto& t : a.transitions()) ts.push_back({t.dst, t.label, t.src});
        return Nfa(a.alphabet(), a.num_states(), std::move(ts), a.finals(), a.initials(), a.names());
    }
    case ClosureKind::subwords: {
        std::vector<Transition> ts(a.transitions().begin(), a.transitions().end());
        for (const auto& t : a.transitions()) ts.push_back({t.src, kEpsilon, t.dst});
        return remove_epsilon(Nfa(a.alphabet(), a.num_states(), std::move(ts), a.initials(), a.finals(), a.names()));
    }
    }
    throw ContractError("unknown closure kind");
}

Nfa shuffle(const Nfa& x1, const Nfa& x2) {
    require_same_alphabet(x1.alphabet(), x2.alphabet(), "shuffle");
    const Nfa a1 = remove_epsilon(x1), a2 = remove_epsilon(x2);
    std::vector<std::pair<State, State>> starts;
    for (State p : a1.initials())
        for (State q : a2.initials()) starts.emplace_back(p, q);
    auto expand = [&](State p, State q, auto&& emit) {
        for (const auto& t : a1.out(p)) emit(t.label, t.dst, q);
        for (const auto& t : a2.out(q)) emit(t.label, p, t.dst);
    };
    auto fin = [&](State p, State q) { return a1.is_final(p) && a2.is_final(q); };
    return explore_pairs(a1.alphabet(), starts, expand, fin);
}

Decision decide_inclusion(const Nfa& a1, const Nfa& a2, const DeterminizeOptions& options) {
    require_same_alphabet(a1.alphabet(), a2.alphabet(), "inclusion");
    DeterminizeOptions o = options;
    o.prune_coaccessible = false;
    Dfa other = complement(complete(determinize(a2, o).dfa));
    EmptinessResult e = is_empty(product(a1, other.to_nfa(), ProductMode::intersect));
    if (e.empty) return {true, std::nullopt};
    return {false, e.shortest};
}

Decision decide_equivalence(const Nfa& a1, const Nfa& a2, const DeterminizeOptions& options) {
    Decision d1 = decide_inclusion(a1, a2, options);
    Decision d2 = decide_inclusion(a2, a1, options);
    if (d1.holds && d2.holds) return {true, std::nullopt};
    if (d1.holds) return d2;
    if (d2.holds) return d1;
    return shortlex_less(*d2.counterexample, *d1.counterexample) ? d2 : d1;
}

Nfa widen_alphabet(const Nfa& a, const Alphabet& wider) {
    std::vector<Symbol> map(a.alphabet().size());
    for (Symbol s = 0; s < a.alphabet().size(); ++s) {
        auto t = wider.find(a.alphabet().name(s));
        if (!t) throw ContractError("widen_alphabet: symbol '" + a.alphabet().name(s) + "' missing");
        map[s] = *t;
    }
    std::vector<Transition> ts;
    for (const auto& t : a.transitions()) ts.push_back({t.src, t.label == kEpsilon ? kEpsilon : map[t.label], t.dst});
    return Nfa(wider, a.num_states(), std::move(ts), a.initials(), a.finals(), a.names());
}

std::pair<Nfa, Nfa> align_alphabets(const Nfa& a1, const Nfa& a2) {
    if (a1.alphabet() == a2.alphabet()) return {a1, a2};
    std::vector<std::string> names = a1.alphabet().names();
    for (const auto& s : a2.alphabet().names())
        if (!a1.alphabet().find(s)) names.push_back(s);
    Alphabet u(std::move(names));
    return {widen_alphabet(a1, u), widen_alphabet(a2, u)};
}

} // namespace ratkit

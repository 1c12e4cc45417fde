#include "ratkit/corpus.hpp"

#include "ratkit/error.hpp"

namespace ratkit {

namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

} // namespace

Nfa random_nfa(Rng& rng, const Alphabet& alphabet, const NfaShape& shape) {
    if (shape.max_states == 0) throw ContractError("random_nfa needs at least one state");
    const std::size_t n = uniform(rng, 1, shape.max_states);
    std::vector<Transition> ts;
    for (State p = 0; p < n; ++p)
        for (Symbol a = 0; a < alphabet.size(); ++a)
            for (State q = 0; q < n; ++q)
                if (coin(rng, shape.edge_probability)) ts.push_back({p, a, q});
    std::vector<State> initials{0}, finals;
    for (State q = 1; q < n; ++q)
        if (coin(rng, shape.extra_initial_probability)) initials.push_back(q);
    for (State q = 0; q < n; ++q)
        if (coin(rng, shape.final_probability)) finals.push_back(q);
    return Nfa(alphabet, n, std::move(ts), std::move(initials), std::move(finals));
}

Dfa random_dfa(Rng& rng, const Alphabet& alphabet, std::size_t max_states, double final_probability) {
    if (max_states == 0) throw ContractError("random_dfa needs at least one state");
    const std::size_t n = uniform(rng, 1, max_states);
    std::vector<State> delta(n * alphabet.size());
    for (auto& q : delta) q = static_cast<State>(uniform(rng, 0, n - 1));
    std::vector<bool> finals(n);
    for (std::size_t q = 0; q < n; ++q) finals[q] = coin(rng, final_probability);
    return Dfa(alphabet, n, std::move(delta), 0, std::move(finals));
}

namespace {

RegexPtr grow_regex(Rng& rng, const Alphabet& alphabet, std::size_t size, Dialect dialect) {
    if (size == 1) {
        double r = std::uniform_real_distribution<double>(0, 1)(rng);
        if (r < 0.75) return rx::letter(alphabet.name(static_cast<Symbol>(uniform(rng, 0, alphabet.size() - 1))));
        return r < 0.9 ? rx::eps() : rx::empty();
    }
    std::vector<RegexKind> ops;
    if (dialect != Dialect::star_free) ops.push_back(RegexKind::star);
    if (dialect != Dialect::rational) ops.push_back(RegexKind::complement);
    if (size >= 3) {
        ops.push_back(RegexKind::unite);
        ops.push_back(RegexKind::concat);
        ops.push_back(RegexKind::concat);
        if (dialect != Dialect::rational) ops.push_back(RegexKind::intersect);
    }
    if (ops.empty()) return grow_regex(rng, alphabet, 1, dialect);
    RegexKind op = ops[uniform(rng, 0, ops.size() - 1)];
    if (op == RegexKind::star) return rx::star(grow_regex(rng, alphabet, size - 1, dialect));
    if (op == RegexKind::complement) return rx::complement(grow_regex(rng, alphabet, size - 1, dialect));
    std::size_t left = uniform(rng, 1, size - 2);
    auto l = grow_regex(rng, alphabet, left, dialect);
    auto r = grow_regex(rng, alphabet, size - 1 - left, dialect);
    if (op == RegexKind::unite) return rx::unite(l, r);
    if (op == RegexKind::concat) return rx::concat(l, r);
    return rx::intersect(l, r);
}

class SentenceGrower {
public:
    SentenceGrower(Rng& rng, const Alphabet& alphabet, bool first_order_only)
        : rng_(rng), alphabet_(alphabet), first_order_only_(first_order_only) {}

    FormulaPtr grow(std::size_t depth, std::size_t budget) {
        bool must_quantify = fo_.empty();
        if (depth > 0 && budget >= 2 && (must_quantify || coin(rng_, 0.4))) return quantifier(depth, budget);
        if (fo_.empty()) return coin(rng_, 0.5) ? fo::truth() : fo::falsity();
        if (budget >= 3 && coin(rng_, 0.5)) {
            std::size_t left = uniform(rng_, 1, budget - 2);
            auto l = grow(depth, left);
            auto r = grow(depth, budget - 1 - left);
            return coin(rng_, 0.5) ? fo::conj(l, r) : fo::disj(l, r);
        }
        if (budget >= 2 && coin(rng_, 0.3)) return fo::negation(grow(depth, budget - 1));
        return atom();
    }

private:
    Rng& rng_;
    const Alphabet& alphabet_;
    bool first_order_only_;
    std::vector<std::string> fo_, so_;
    std::size_t fresh_fo_ = 0, fresh_so_ = 0;

    const std::string& pick(const std::vector<std::string>& vs) { return vs[uniform(rng_, 0, vs.size() - 1)]; }

    FormulaPtr quantifier(std::size_t depth, std::size_t budget) {
        bool set = !first_order_only_ && !fo_.empty() && coin(rng_, 0.35);
        bool universal = coin(rng_, 0.5);
        if (set) {
            std::string v = "X" + std::to_string(fresh_so_++);
            so_.push_back(v);
            auto body = grow(depth - 1, budget - 1);
            so_.pop_back();
            return universal ? fo::forall2(v, body) : fo::exists2(v, body);
        }
        static const char* names[] = {"x", "y", "z", "t", "u", "v", "w"};
        std::string v = fresh_fo_ < 7 ? names[fresh_fo_] : "x" + std::to_string(fresh_fo_);
        ++fresh_fo_;
        fo_.push_back(v);
        auto body = grow(depth - 1, budget - 1);
        fo_.pop_back();
        return universal ? fo::forall1(v, body) : fo::exists1(v, body);
    }

    // Innermost variable half of the time, so fresh bindings get used.
    const std::string& recent() { return coin(rng_, 0.5) ? fo_.back() : pick(fo_); }

    std::pair<std::string, std::string> two() {
        std::string x = recent();
        if (fo_.size() < 2) return {x, x};
        std::string y;
        do y = pick(fo_);
        while (y == x);
        if (coin(rng_, 0.5)) std::swap(x, y);
        return {x, y};
    }

    FormulaPtr atom() {
        std::size_t kinds = so_.empty() ? 4 : 5;
        switch (uniform(rng_, 0, kinds - 1)) {
        case 0:
            return fo::letter_at(alphabet_.name(static_cast<Symbol>(uniform(rng_, 0, alphabet_.size() - 1))),
                                 recent());
        case 1: {
            auto [x, y] = two();
            return fo::less(x, y);
        }
        case 2: {
            auto [x, y] = two();
            return fo::succ(x, y);
        }
        case 3: {
            auto [x, y] = two();
            return fo::eq(x, y);
        }
        default: return fo::set_mem(pick(so_), recent());
        }
    }
};

} // namespace

RegexPtr random_regex(Rng& rng, const Alphabet& alphabet, std::size_t max_nodes, Dialect dialect) {
    if (max_nodes == 0) throw ContractError("random_regex needs at least one node");
    return grow_regex(rng, alphabet, uniform(rng, 1, max_nodes), dialect);
}

FormulaPtr random_sentence(Rng& rng, const Alphabet& alphabet, std::size_t max_depth, bool first_order_only) {
    SentenceGrower g(rng, alphabet, first_order_only);
    return g.grow(max_depth, uniform(rng, 4, 4 + 3 * max_depth));
}

Word random_word(Rng& rng, const Alphabet& alphabet, std::size_t max_len) {
    Word w(uniform(rng, 0, max_len));
    for (auto& s : w) s = static_cast<Symbol>(uniform(rng, 0, alphabet.size() - 1));
    return w;
}

} // namespace ratkit

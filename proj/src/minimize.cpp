#include "ratkit/minimize.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "ratkit/error.hpp"

namespace ratkit {

namespace {

struct VectorHash {
    std::size_t operator()(const std::vector<State>& v) const {
        std::size_t h = 0x9e3779b97f4a7c15ull;
        for (State x : v) h = (h ^ x) * 0x100000001b3ull;
        return h;
    }
};

// Accessible states of d in BFS order.
std::vector<State> accessible_states(const Dfa& d) {
    std::vector<State> order{d.initial()};
    std::vector<bool> seen(d.num_states(), false);
    seen[d.initial()] = true;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (Symbol a = 0; a < d.num_symbols(); ++a) {
            State t = d.next(order[i], a);
            if (!seen[t]) {
                seen[t] = true;
                order.push_back(t);
            }
        }
    return order;
}

// Class id per input state (kNoState off `states`), by Moore refinement restricted to `states`.
std::vector<State> moore_classes(const Dfa& d, const std::vector<State>& states, std::size_t& rounds) {
    const std::size_t k = d.num_symbols();
    std::vector<State> block(d.num_states(), kNoState);
    std::size_t count = 0;
    {
        State fin_id = kNoState, non_id = kNoState;
        for (State q : states) {
            State& id = d.is_final(q) ? fin_id : non_id;
            if (id == kNoState) id = static_cast<State>(count++);
            block[q] = id;
        }
    }
    rounds = 0;
    std::vector<State> sig(k + 1);
    while (true) {
        std::unordered_map<std::vector<State>, State, VectorHash> ids;
        std::vector<State> next(d.num_states(), kNoState);
        for (State q : states) {
            sig[0] = block[q];
            for (Symbol a = 0; a < k; ++a) sig[a + 1] = block[d.next(q, a)];
            auto [it, fresh] = ids.emplace(sig, static_cast<State>(ids.size()));
            next[q] = it->second;
        }
        block = std::move(next);
        if (ids.size() == count) break;
        count = ids.size();
        ++rounds;
    }
    return block;
}

struct MarkTable {
    std::size_t n;
    std::vector<int> pass;      // -1 when unmarked
    std::vector<Symbol> letter; // letter that caused the marking (passes >= 1)
    int& at(State p, State q) { return pass[p * n + q]; }
};

// Marks pairs over all states of d; pass[p][q] is the length of a shortest distinguishing word.
MarkTable mark_pairs(const Dfa& d, std::size_t& passes) {
    const std::size_t n = d.num_states(), k = d.num_symbols();
    MarkTable t{n, std::vector<int>(n * n, -1), std::vector<Symbol>(n * n, 0)};
    for (State p = 0; p < n; ++p)
        for (State q = 0; q < n; ++q)
            if (d.is_final(p) != d.is_final(q)) t.at(p, q) = 0;
    passes = 0;
    for (int round = 1;; ++round) {
        std::vector<std::pair<std::size_t, Symbol>> fresh;
        for (State p = 0; p < n; ++p)
            for (State q = p + 1; q < n; ++q) {
                if (t.at(p, q) >= 0) continue;
                for (Symbol a = 0; a < k; ++a) {
                    int m = t.at(d.next(p, a), d.next(q, a));
                    if (m >= 0 && m < round) {
                        fresh.push_back({p * n + q, a});
                        break;
                    }
                }
            }
        if (fresh.empty()) break;
        ++passes;
        for (auto [idx, a] : fresh) {
            State p = static_cast<State>(idx / n), q = static_cast<State>(idx % n);
            t.at(p, q) = t.at(q, p) = round;
            t.letter[p * n + q] = t.letter[q * n + p] = a;
        }
    }
    return t;
}

MinimizeResult quotient(const Dfa& d, const std::vector<State>& cls, std::size_t passes) {
    const std::size_t k = d.num_symbols();
    // One representative per class, classes numbered by BFS from the initial class.
    std::map<State, State> out_id;
    std::vector<State> rep;
    out_id[cls[d.initial()]] = 0;
    rep.push_back(d.initial());
    std::vector<State> delta;
    std::vector<bool> fin;
    for (std::size_t i = 0; i < rep.size(); ++i) {
        fin.push_back(d.is_final(rep[i]));
        for (Symbol a = 0; a < k; ++a) {
            State t = d.next(rep[i], a);
            auto [it, fresh] = out_id.emplace(cls[t], static_cast<State>(rep.size()));
            if (fresh) rep.push_back(t);
            delta.push_back(it->second);
        }
    }
    MinimizeResult r{Dfa(d.alphabet(), rep.size(), std::move(delta), 0, std::move(fin)), {}, {}, passes};
    r.partition.blocks.resize(rep.size());
    r.partition.block_of.assign(d.num_states(), kNoState);
    r.state_map.assign(d.num_states(), kNoState);
    for (State q = 0; q < d.num_states(); ++q) {
        if (cls[q] == kNoState) continue;
        State o = out_id.at(cls[q]);
        r.partition.blocks[o].push_back(q);
        r.partition.block_of[q] = o;
        r.state_map[q] = o;
    }
    return r;
}

} // namespace

MinimizeResult minimize(const Dfa& d, MinimizeAlgorithm algorithm) {
    if (!d.is_complete()) throw ContractError("minimize needs a complete automaton");
    std::vector<State> acc = accessible_states(d);
    std::sort(acc.begin(), acc.end());
    if (algorithm == MinimizeAlgorithm::moore) {
        std::size_t rounds = 0;
        auto cls = moore_classes(d, acc, rounds);
        return quotient(d, cls, rounds);
    }
    // Pair marking on the accessible part; classes are the unmarked pairs.
    std::vector<State> remap(d.num_states(), kNoState);
    for (std::size_t i = 0; i < acc.size(); ++i) remap[acc[i]] = static_cast<State>(i);
    std::vector<State> delta;
    std::vector<bool> fin;
    for (State q : acc) {
        fin.push_back(d.is_final(q));
        for (Symbol a = 0; a < d.num_symbols(); ++a) delta.push_back(remap[d.next(q, a)]);
    }
    Dfa sub(d.alphabet(), acc.size(), std::move(delta), remap[d.initial()], std::move(fin));
    std::size_t passes = 0;
    MarkTable t = mark_pairs(sub, passes);
    std::vector<State> cls(d.num_states(), kNoState);
    for (std::size_t i = 0; i < acc.size(); ++i) {
        State c = static_cast<State>(i);
        for (std::size_t j = 0; j < i; ++j)
            if (t.at(static_cast<State>(j), static_cast<State>(i)) < 0) {
                c = cls[acc[j]];
                break;
            }
        cls[acc[i]] = c;
    }
    return quotient(d, cls, passes);
}

Dfa minimal_dfa(const Nfa& a, const DeterminizeOptions& options) {
    DeterminizeOptions o = options;
    o.prune_coaccessible = false;
    return minimize(determinize(a, o).dfa).dfa;
}

Dfa minimal_dfa(const Dfa& d) { return minimize(complete(d)).dfa; }

Distinction equivalent_states(const Dfa& d, State p, State q) {
    if (!d.is_complete()) throw ContractError("equivalent_states needs a complete automaton");
    if (p >= d.num_states() || q >= d.num_states()) throw ContractError("state id out of range");
    if (p == q) return {};
    std::size_t passes = 0;
    MarkTable t = mark_pairs(d, passes);
    if (t.at(p, q) < 0) return {};
    Word w;
    while (t.at(p, q) > 0) {
        Symbol a = t.letter[p * t.n + q];
        w.push_back(a);
        p = d.next(p, a);
        q = d.next(q, a);
    }
    return {false, std::move(w)};
}

std::vector<std::vector<Word>> nerode_classes(const Dfa& d, std::size_t max_len) {
    if (!d.is_complete()) throw ContractError("nerode_classes needs a complete automaton");
    MinimizeResult m = minimize(d);
    std::vector<std::vector<Word>> groups(m.dfa.num_states());
    const std::size_t k = d.num_symbols();
    std::size_t total = 1, layer = 1;
    for (std::size_t i = 0; i < max_len; ++i) {
        layer *= k;
        total += layer;
        if (total > 4'000'000) throw ResourceError("too many words to sample for Nerode classes");
    }
    std::vector<std::pair<Word, State>> level{{Word{}, m.dfa.initial()}};
    for (std::size_t len = 0;; ++len) {
        for (auto& [w, q] : level) groups[q].push_back(w);
        if (len == max_len) break;
        std::vector<std::pair<Word, State>> next;
        next.reserve(level.size() * k);
        for (auto& [w, q] : level)
            for (Symbol a = 0; a < k; ++a) {
                Word v = w;
                v.push_back(a);
                next.emplace_back(std::move(v), m.dfa.next(q, a));
            }
        level = std::move(next);
    }
    std::erase_if(groups, [](const auto& g) { return g.empty(); });
    return groups;
}

} // namespace ratkit

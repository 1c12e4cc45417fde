#include "ratkit/core.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "ratkit/error.hpp"

namespace ratkit {

namespace {

std::vector<State> epsilon_closure_of(const Nfa& a, State q) {
    std::vector<State> out{q};
    std::vector<bool> seen(a.num_states(), false);
    seen[q] = true;
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (const auto& t : a.out(out[i], kEpsilon)) {
            if (!seen[t.dst]) {
                seen[t.dst] = true;
                out.push_back(t.dst);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Backward reachability from the finals.
std::vector<bool> coaccessible_mask(const Nfa& a) {
    std::vector<std::vector<State>> preds(a.num_states());
    for (const auto& t : a.transitions()) preds[t.dst].push_back(t.src);
    std::vector<bool> mark(a.num_states(), false);
    std::vector<State> stack;
    for (State f : a.finals()) {
        mark[f] = true;
        stack.push_back(f);
    }
    while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        for (State p : preds[q]) {
            if (!mark[p]) {
                mark[p] = true;
                stack.push_back(p);
            }
        }
    }
    return mark;
}

std::string fresh_sink_name(const std::vector<std::string>& names) {
    std::string base = "sink";
    std::string cand = base;
    for (int i = 1; std::find(names.begin(), names.end(), cand) != names.end(); ++i)
        cand = base + std::to_string(i);
    return cand;
}

} // namespace

bool shortlex_less(const Word& x, const Word& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
}

AcceptResult accepts_nfa(const Nfa& a, const Word& w) {
    check_word(a.alphabet(), w);
    const std::size_t n = a.num_states();
    struct Parent {
        State prev = kNoState;
        Symbol label = kEpsilon;
        bool same_layer = false;
    };
    std::vector<std::vector<Parent>> parents;
    std::vector<std::vector<bool>> in_layer;
    std::vector<std::vector<State>> order;

    auto close = [&](std::size_t layer) {
        auto& ord = order[layer];
        for (std::size_t i = 0; i < ord.size(); ++i) {
            for (const auto& t : a.out(ord[i], kEpsilon)) {
                if (!in_layer[layer][t.dst]) {
                    in_layer[layer][t.dst] = true;
                    parents[layer][t.dst] = {ord[i], kEpsilon, true};
                    ord.push_back(t.dst);
                }
            }
        }
    };

    parents.emplace_back(n);
    in_layer.emplace_back(n, false);
    order.emplace_back();
    for (State q : a.initials()) {
        in_layer[0][q] = true;
        order[0].push_back(q);
    }
    close(0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        parents.emplace_back(n);
        in_layer.emplace_back(n, false);
        order.emplace_back();
        auto prev = order[i];
        std::sort(prev.begin(), prev.end());
        for (State p : prev) {
            for (const auto& t : a.out(p, w[i])) {
                if (!in_layer[i + 1][t.dst]) {
                    in_layer[i + 1][t.dst] = true;
                    parents[i + 1][t.dst] = {p, w[i], false};
                    order[i + 1].push_back(t.dst);
                }
            }
        }
        close(i + 1);
        if (order[i + 1].empty()) return {};
    }
    State end = kNoState;
    for (State f : a.finals()) {
        if (in_layer[w.size()][f]) {
            end = f;
            break;
        }
    }
    if (end == kNoState) return {};

    PathWitness path;
    std::size_t layer = w.size();
    State q = end;
    path.states.push_back(q);
    while (true) {
        const Parent& par = parents[layer][q];
        if (par.prev == kNoState) break;
        path.labels.push_back(par.label);
        q = par.prev;
        path.states.push_back(q);
        if (!par.same_layer) --layer;
    }
    std::reverse(path.states.begin(), path.states.end());
    std::reverse(path.labels.begin(), path.labels.end());
    return {true, std::move(path)};
}

RunResult run_dfa(const Dfa& d, const Word& w) {
    State q = d.run(w);
    return {q, q != kNoState && d.is_final(q)};
}

Nfa complete(const Nfa& a) {
    const std::size_t k = a.alphabet().size();
    std::vector<Transition> extra;
    const State sink = static_cast<State>(a.num_states());
    for (State q = 0; q < a.num_states(); ++q)
        for (Symbol s = 0; s < k; ++s)
            if (a.out(q, s).empty()) extra.push_back({q, s, sink});
    if (extra.empty()) return a;
    for (Symbol s = 0; s < k; ++s) extra.push_back({sink, s, sink});
    std::vector<Transition> ts(a.transitions().begin(), a.transitions().end());
    ts.insert(ts.end(), extra.begin(), extra.end());
    std::vector<std::string> names = a.names();
    if (!names.empty()) names.push_back(fresh_sink_name(names));
    return Nfa(a.alphabet(), a.num_states() + 1, std::move(ts), a.initials(), a.finals(), std::move(names));
}

Dfa complete(const Dfa& d) {
    if (d.is_complete()) return d;
    const std::size_t n = d.num_states(), k = d.num_symbols();
    const State sink = static_cast<State>(n);
    std::vector<State> delta(d.table());
    for (auto& t : delta)
        if (t == kNoState) t = sink;
    delta.insert(delta.end(), k, sink);
    std::vector<bool> fin = d.final_mask();
    fin.push_back(false);
    std::vector<std::string> names = d.names();
    if (!names.empty()) names.push_back(fresh_sink_name(names));
    return Dfa(d.alphabet(), n + 1, std::move(delta), d.initial(), std::move(fin), std::move(names));
}

TrimResult trim(const Nfa& a) {
    const std::size_t n = a.num_states();
    TrimResult r;
    // Q_{k+1} = Q_k plus the targets of moves leaving Q_k, until nothing changes.
    std::vector<bool> acc(n, false);
    for (State q : a.initials()) acc[q] = true;
    while (true) {
        std::vector<bool> nxt = acc;
        bool changed = false;
        for (const auto& t : a.transitions()) {
            if (acc[t.src] && !nxt[t.dst]) {
                nxt[t.dst] = true;
                changed = true;
            }
        }
        if (!changed) break;
        ++r.rounds;
        acc = std::move(nxt);
    }
    std::vector<bool> coacc = coaccessible_mask(a);
    std::vector<State> remap(n, kNoState);
    std::vector<std::string> names;
    for (State q = 0; q < n; ++q) {
        if (acc[q]) r.accessible.push_back(q);
        if (coacc[q]) r.coaccessible.push_back(q);
        if (acc[q] && coacc[q]) {
            remap[q] = static_cast<State>(r.kept.size());
            r.kept.push_back(q);
            if (a.has_names()) names.push_back(a.names()[q]);
        }
    }
    std::vector<Transition> ts;
    for (const auto& t : a.transitions())
        if (remap[t.src] != kNoState && remap[t.dst] != kNoState) ts.push_back({remap[t.src], t.label, remap[t.dst]});
    std::vector<State> ini, fin;
    for (State q : a.initials())
        if (remap[q] != kNoState) ini.push_back(remap[q]);
    for (State q : a.finals())
        if (remap[q] != kNoState) fin.push_back(remap[q]);
    r.automaton = Nfa(a.alphabet(), r.kept.size(), std::move(ts), std::move(ini), std::move(fin), std::move(names));
    return r;
}

EmptinessResult is_empty(const Nfa& a) {
    const std::size_t n = a.num_states();
    struct Parent {
        State prev = kNoState;
        Symbol label = kEpsilon;
    };
    std::vector<Parent> parent(n);
    std::vector<bool> seen(n, false);
    std::vector<State> layer;

    // Adds q and its epsilon successors right after it, keeping the layer in shortlex order of words.
    auto add = [&](State q, Parent par) {
        if (seen[q]) return;
        seen[q] = true;
        parent[q] = par;
        std::size_t start = layer.size();
        layer.push_back(q);
        for (std::size_t i = start; i < layer.size(); ++i) {
            for (const auto& t : a.out(layer[i], kEpsilon)) {
                if (!seen[t.dst]) {
                    seen[t.dst] = true;
                    parent[t.dst] = {layer[i], kEpsilon};
                    layer.push_back(t.dst);
                }
            }
        }
    };
    auto witness = [&](State f) {
        Word w;
        for (State q = f; parent[q].prev != kNoState; q = parent[q].prev)
            if (parent[q].label != kEpsilon) w.push_back(parent[q].label);
        std::reverse(w.begin(), w.end());
        return w;
    };

    // out(p) lists labels in increasing order, so each layer stays sorted by its shortlex-least words.
    for (State q : a.initials()) add(q, {});
    while (!layer.empty()) {
        for (State q : layer)
            if (a.is_final(q)) return {false, witness(q)};
        std::vector<State> prev = std::move(layer);
        layer.clear();
        for (State p : prev)
            for (const auto& t : a.out(p))
                if (t.label != kEpsilon) add(t.dst, {p, t.label});
    }
    return {true, std::nullopt};
}

EmptinessResult is_empty(const Dfa& d) { return is_empty(d.to_nfa()); }

Nfa remove_epsilon(const Nfa& a) {
    if (!a.has_epsilon()) return a;
    const std::size_t n = a.num_states();
    std::vector<std::vector<State>> closure(n);
    for (State q = 0; q < n; ++q) closure[q] = epsilon_closure_of(a, q);
    std::vector<Transition> ts;
    for (const auto& t : a.transitions()) {
        if (t.label == kEpsilon) continue;
        for (State r : closure[t.dst]) ts.push_back({t.src, t.label, r});
    }
    std::vector<State> ini;
    for (State p : a.initials()) ini.insert(ini.end(), closure[p].begin(), closure[p].end());
    return Nfa(a.alphabet(), n, std::move(ts), std::move(ini), a.finals(), a.names());
}

std::string format_subset(const StateSet& s, const Nfa& origin) {
    std::string out = "{";
    bool first = true;
    s.for_each([&](State q) {
        if (!first) out += ',';
        first = false;
        out += origin.state_name(q);
    });
    return out + "}";
}

std::string format_path(const PathWitness& p, const Nfa& a) {
    std::string out;
    for (std::size_t i = 0; i < p.states.size(); ++i) {
        if (i) {
            Symbol s = p.labels[i - 1];
            out += " -" + (s == kEpsilon ? std::string(kEpsilonToken) : a.alphabet().name(s)) + "-> ";
        }
        out += a.state_name(p.states[i]);
    }
    return out;
}

Dfa subset_automaton(const Nfa& a, std::size_t max_states) {
    if (a.has_epsilon()) throw ContractError("subset_automaton needs an epsilon-free automaton");
    const std::size_t n = a.num_states();
    if (n > max_states)
        throw ResourceError("subset automaton of " + std::to_string(n) + " states exceeds the cap of " +
                            std::to_string(max_states));
    const std::size_t k = a.alphabet().size();
    std::vector<std::uint32_t> succ(n * k, 0);
    for (const auto& t : a.transitions()) succ[t.src * k + t.label] |= 1u << t.dst;
    const std::size_t total = std::size_t{1} << n;
    std::vector<State> delta(total * k);
    std::vector<bool> fin(total, false);
    std::uint32_t fmask = 0, imask = 0;
    for (State f : a.finals()) fmask |= 1u << f;
    for (State q : a.initials()) imask |= 1u << q;
    std::vector<std::string> names(total);
    for (std::size_t p = 0; p < total; ++p) {
        fin[p] = (p & fmask) != 0;
        StateSet s(n);
        for (std::size_t q = 0; q < n; ++q)
            if (p >> q & 1u) s.insert(static_cast<State>(q));
        names[p] = format_subset(s, a);
        for (Symbol x = 0; x < k; ++x) {
            std::uint32_t to = 0;
            for (std::size_t q = 0; q < n; ++q)
                if (p >> q & 1u) to |= succ[q * k + x];
            delta[p * k + x] = to;
        }
    }
    return Dfa(a.alphabet(), total, std::move(delta), imask, std::move(fin), std::move(names));
}

DeterminizeResult determinize(const Nfa& input, const DeterminizeOptions& options) {
    const Nfa a = remove_epsilon(input);
    const std::size_t n = a.num_states(), k = a.alphabet().size();
    std::unordered_map<StateSet, State, StateSetHash> ids;
    std::vector<StateSet> subsets;
    std::vector<State> delta;

    StateSet start(n);
    for (State q : a.initials()) start.insert(q);
    ids.emplace(start, 0);
    subsets.push_back(start);
    std::vector<StateSet> buckets(k, StateSet(n));
    for (std::size_t cur = 0; cur < subsets.size(); ++cur) {
        for (auto& b : buckets) b = StateSet(n);
        subsets[cur].for_each([&](State q) {
            for (const auto& t : a.out(q)) buckets[t.label].insert(t.dst);
        });
        for (Symbol x = 0; x < k; ++x) {
            auto [it, fresh] = ids.emplace(buckets[x], static_cast<State>(subsets.size()));
            if (fresh) {
                if (subsets.size() >= options.state_cap)
                    throw ResourceError("determinization exceeded the cap of " + std::to_string(options.state_cap) +
                                        " states (" + std::to_string(subsets.size()) + " built)");
                subsets.push_back(buckets[x]);
            }
            delta.push_back(it->second);
        }
    }
    StateSet finals(n);
    for (State f : a.finals()) finals.insert(f);
    std::vector<bool> fin(subsets.size());
    for (std::size_t i = 0; i < subsets.size(); ++i) fin[i] = subsets[i].intersects(finals);

    auto name_all = [&](const std::vector<StateSet>& sets) {
        std::vector<std::string> names;
        names.reserve(sets.size());
        for (const auto& s : sets) names.push_back(format_subset(s, a));
        return names;
    };

    if (!options.prune_coaccessible) {
        Dfa d(a.alphabet(), subsets.size(), std::move(delta), 0, std::move(fin), name_all(subsets));
        return {std::move(d), std::move(subsets)};
    }
    // Drop states from which no final state is reachable; the result may be partial.
    const std::size_t m = subsets.size();
    std::vector<std::vector<State>> preds(m);
    for (State q = 0; q < m; ++q)
        for (Symbol x = 0; x < k; ++x) preds[delta[q * k + x]].push_back(q);
    std::vector<bool> live(m, false);
    std::vector<State> stack;
    for (State q = 0; q < m; ++q)
        if (fin[q]) {
            live[q] = true;
            stack.push_back(q);
        }
    while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        for (State p : preds[q])
            if (!live[p]) {
                live[p] = true;
                stack.push_back(p);
            }
    }
    if (!live[0]) {
        Dfa d(a.alphabet(), 1, std::vector<State>(k, kNoState), 0, {false}, name_all({subsets[0]}));
        return {std::move(d), {subsets[0]}};
    }
    std::vector<State> remap(m, kNoState);
    std::vector<StateSet> kept;
    for (State q = 0; q < m; ++q)
        if (live[q]) {
            remap[q] = static_cast<State>(kept.size());
            kept.push_back(subsets[q]);
        }
    std::vector<State> d2;
    std::vector<bool> f2;
    for (State q = 0; q < m; ++q) {
        if (!live[q]) continue;
        f2.push_back(fin[q]);
        for (Symbol x = 0; x < k; ++x) d2.push_back(remap[delta[q * k + x]]);
    }
    Dfa d(a.alphabet(), kept.size(), std::move(d2), 0, std::move(f2), name_all(kept));
    return {std::move(d), std::move(kept)};
}

std::vector<Word> enumerate_language(const Nfa& input, std::size_t max_len, std::size_t cap) {
    if (max_len > cap)
        throw ContractError("enumeration length " + std::to_string(max_len) + " exceeds the cap of " +
                            std::to_string(cap));
    const Nfa a = remove_epsilon(input);
    const std::size_t n = a.num_states(), k = a.alphabet().size();
    std::vector<bool> live = coaccessible_mask(a);
    std::vector<Word> result;
    struct Item {
        Word word;
        StateSet states;
    };
    std::vector<Item> level;
    StateSet start(n);
    for (State q : a.initials())
        if (live[q]) start.insert(q);
    if (start.empty()) return result;
    level.push_back({{}, start});
    for (std::size_t len = 0;; ++len) {
        for (const auto& it : level) {
            bool acc = false;
            it.states.for_each([&](State q) { acc = acc || a.is_final(q); });
            if (acc) result.push_back(it.word);
        }
        if (len == max_len) break;
        std::vector<Item> next;
        for (const auto& it : level) {
            std::vector<StateSet> buckets(k, StateSet(n));
            it.states.for_each([&](State q) {
                for (const auto& t : a.out(q))
                    if (live[t.dst]) buckets[t.label].insert(t.dst);
            });
            for (Symbol x = 0; x < k; ++x) {
                if (buckets[x].empty()) continue;
                Word w = it.word;
                w.push_back(x);
                next.push_back({std::move(w), std::move(buckets[x])});
            }
        }
        if (next.empty()) break;
        level = std::move(next);
    }
    return result;
}

std::vector<Word> enumerate_language(const Dfa& d, std::size_t max_len, std::size_t cap) {
    return enumerate_language(d.to_nfa(), max_len, cap);
}

Dfa canonical_form(const Dfa& d) {
    const std::size_t k = d.num_symbols();
    std::vector<State> order{d.initial()};
    std::vector<State> id(d.num_states(), kNoState);
    id[d.initial()] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (Symbol x = 0; x < k; ++x) {
            State t = d.next(order[i], x);
            if (t != kNoState && id[t] == kNoState) {
                id[t] = static_cast<State>(order.size());
                order.push_back(t);
            }
        }
    }
    std::vector<State> delta;
    std::vector<bool> fin;
    std::vector<std::string> names;
    for (State q : order) {
        for (Symbol x = 0; x < k; ++x) {
            State t = d.next(q, x);
            delta.push_back(t == kNoState ? kNoState : id[t]);
        }
        fin.push_back(d.is_final(q));
        if (d.has_names()) names.push_back(d.names()[q]);
    }
    return Dfa(d.alphabet(), order.size(), std::move(delta), 0, std::move(fin), std::move(names));
}

Dfa accessible_part(const Dfa& d) { return canonical_form(d); }

std::optional<std::vector<State>> dfa_isomorphic(const Dfa& d1, const Dfa& d2) {
    if (!(d1.alphabet() == d2.alphabet())) throw ContractError("automata have different alphabets");
    if (!d1.is_complete() || !d2.is_complete()) throw ContractError("dfa_isomorphic needs complete automata");
    if (d1.num_states() != d2.num_states()) return std::nullopt;
    const std::size_t n = d1.num_states(), k = d1.num_symbols();
    std::vector<State> f(n, kNoState), g(n, kNoState);
    std::deque<State> queue{d1.initial()};
    f[d1.initial()] = d2.initial();
    g[d2.initial()] = d1.initial();
    std::size_t visited = 1;
    while (!queue.empty()) {
        State p = queue.front();
        queue.pop_front();
        if (d1.is_final(p) != d2.is_final(f[p])) return std::nullopt;
        for (Symbol x = 0; x < k; ++x) {
            State p1 = d1.next(p, x), p2 = d2.next(f[p], x);
            if (f[p1] == kNoState && g[p2] == kNoState) {
                f[p1] = p2;
                g[p2] = p1;
                ++visited;
                queue.push_back(p1);
            } else if (f[p1] != p2) {
                return std::nullopt;
            }
        }
    }
    if (visited != n) throw ContractError("dfa_isomorphic needs accessible automata");
    return f;
}

} // namespace ratkit

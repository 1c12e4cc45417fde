#include "ratkit/monoid.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>

#include "ratkit/error.hpp"
#include "ratkit/minimize.hpp"

namespace ratkit {

namespace {

constexpr std::size_t kAssociativityCheckCap = 256;

struct MapHash {
    std::size_t operator()(const std::vector<State>& v) const {
        std::size_t h = 1469598103934665603ULL;
        for (State s : v) h = (h ^ s) * 1099511628211ULL;
        return h;
    }
};

} // namespace

Element FiniteMonoid::multiply(Element x, Element y) const {
    if (!table_.empty()) return table_[static_cast<std::size_t>(x) * size() + y];
    for (Symbol a : reps_.at(y)) x = right(x, a);
    return x;
}

Element FiniteMonoid::power(Element x, std::uint64_t k) const {
    Element result = identity_;
    while (k > 0) {
        if (k & 1U) result = multiply(result, x);
        x = multiply(x, x);
        k >>= 1U;
    }
    return result;
}

Element FiniteMonoid::element_of(const Word& w) const {
    check_word(alphabet(), w);
    Element x = identity_;
    for (Symbol a : w) x = right(x, a);
    return x;
}

std::string FiniteMonoid::label(Element e) const {
    if (e == identity_) return "1";
    return alphabet().spell(representative(e));
}

void FiniteMonoid::fill_table() {
    const std::size_t n = size();
    if (n > kFullTableCap) return;
    // Walk elements in shortlex order of representatives so each parent comes first.
    std::vector<Element> order(n);
    for (Element e = 0; e < n; ++e) order[e] = e;
    std::sort(order.begin(), order.end(), [&](Element x, Element y) { return shortlex_less(reps_[x], reps_[y]); });
    std::vector<Element> parent(n, identity_);
    std::vector<Symbol> last(n, 0);
    for (Element e : order) {
        if (reps_[e].empty()) continue;
        Word prefix(reps_[e].begin(), reps_[e].end() - 1);
        Element p = identity_;
        for (Symbol a : prefix) p = right(p, a);
        parent[e] = p;
        last[e] = reps_[e].back();
    }
    table_.assign(n * n, 0);
    for (Element x = 0; x < n; ++x) {
        for (Element y : order) {
            table_[x * n + y] = reps_[y].empty() ? x : right(table_[x * n + parent[y]], last[y]);
        }
    }
}

FiniteMonoid FiniteMonoid::from_table(std::size_t size, std::vector<Element> table, Element identity,
                                      LetterImages generators) {
    if (size == 0) throw InputError("a monoid has at least one element");
    if (table.size() != size * size) throw InputError("multiplication table must have size*size entries");
    if (identity >= size) throw InputError("identity is not an element");
    for (Element e : table)
        if (e >= size) throw InputError("table entry " + std::to_string(e) + " is not an element");
    if (generators.images.size() != generators.alphabet.size())
        throw InputError("every letter needs a generator image");
    for (Element g : generators.images)
        if (g >= size) throw InputError("generator image " + std::to_string(g) + " is not an element");
    auto mul = [&](Element x, Element y) { return table[static_cast<std::size_t>(x) * size + y]; };
    for (Element x = 0; x < size; ++x)
        if (mul(identity, x) != x || mul(x, identity) != x)
            throw InputError("identity law fails at element " + std::to_string(x));
    if (size <= kAssociativityCheckCap)
        for (Element x = 0; x < size; ++x)
            for (Element y = 0; y < size; ++y)
                for (Element z = 0; z < size; ++z)
                    if (mul(mul(x, y), z) != mul(x, mul(y, z)))
                        throw InputError("table is not associative at (" + std::to_string(x) + ", " +
                                         std::to_string(y) + ", " + std::to_string(z) + ")");

    FiniteMonoid m;
    m.gens_ = std::move(generators);
    m.identity_ = identity;
    const std::size_t k = m.alphabet().size();
    m.right_.resize(size * k);
    for (Element x = 0; x < size; ++x)
        for (Symbol a = 0; a < k; ++a) m.right_[x * k + a] = mul(x, m.gens_.images[a]);
    std::vector<std::optional<Word>> reps(size);
    reps[identity] = Word{};
    std::vector<Element> queue{identity};
    for (std::size_t i = 0; i < queue.size(); ++i) {
        for (Symbol a = 0; a < k; ++a) {
            Element y = m.right_[queue[i] * k + a];
            if (reps[y]) continue;
            Word w = *reps[queue[i]];
            w.push_back(a);
            reps[y] = std::move(w);
            queue.push_back(y);
        }
    }
    if (queue.size() != size)
        throw InputError("generators reach " + std::to_string(queue.size()) + " of " + std::to_string(size) +
                         " elements");
    for (auto& r : reps) m.reps_.push_back(std::move(*r));
    m.table_ = std::move(table);
    return m;
}

TransitionMonoid transition_monoid(const Dfa& d, std::size_t cap) {
    if (!d.is_complete()) throw ContractError("transition monoid needs a complete automaton");
    const std::size_t n = d.num_states(), k = d.num_symbols();
    TransitionMonoid out;
    FiniteMonoid& m = out.monoid;
    std::unordered_map<std::vector<State>, Element, MapHash> ids;
    std::vector<State> id_map(n);
    for (State q = 0; q < n; ++q) id_map[q] = q;
    ids.emplace(id_map, 0);
    out.maps.push_back(id_map);
    m.reps_.push_back({});
    // Breadth-first over words: every element first found through its shortlex-least word.
    for (std::size_t i = 0; i < out.maps.size(); ++i) {
        for (Symbol a = 0; a < k; ++a) {
            std::vector<State> next(n);
            for (State q = 0; q < n; ++q) next[q] = d.next(out.maps[i][q], a);
            auto [it, fresh] = ids.emplace(next, static_cast<Element>(out.maps.size()));
            if (fresh) {
                if (out.maps.size() >= cap)
                    throw ResourceError("transition monoid exceeds the cap of " + std::to_string(cap) + " elements");
                Word w = m.reps_[i];
                w.push_back(a);
                m.reps_.push_back(std::move(w));
                out.maps.push_back(std::move(next));
            }
            m.right_.push_back(it->second);
        }
    }
    m.identity_ = 0;
    m.gens_.alphabet = d.alphabet();
    for (Symbol a = 0; a < k; ++a) m.gens_.images.push_back(m.right_[a]);
    m.fill_table();
    return out;
}

SyntacticMonoid syntactic_monoid(const Dfa& d, std::size_t cap) {
    SyntacticMonoid s;
    s.minimal = minimal_dfa(d);
    s.transitions = transition_monoid(s.minimal, cap);
    return s;
}

SyntacticMonoid syntactic_monoid(const Nfa& a, std::size_t cap, const DeterminizeOptions& options) {
    return syntactic_monoid(minimal_dfa(a, options), cap);
}

Aperiodicity is_aperiodic(const FiniteMonoid& m) {
    Aperiodicity out;
    const std::uint64_t n = m.size();
    for (Element x = 0; x < n; ++x) {
        if (m.power(x, n - 1) == m.power(x, n)) continue;
        out.aperiodic = false;
        out.violating = x;
        // Powers x, x^2, ... until the first repeat: index i, period p.
        std::vector<Element> powers{x};
        std::map<Element, std::size_t> seen{{x, 1}};
        std::size_t index = 0, period = 0;
        for (std::size_t e = 2;; ++e) {
            Element next = m.multiply(powers.back(), x);
            if (auto it = seen.find(next); it != seen.end()) {
                index = it->second;
                period = e - index;
                break;
            }
            seen.emplace(next, e);
            powers.push_back(next);
        }
        for (std::size_t e = index; e < index + period; ++e) out.group.push_back(powers[e - 1]);
        // x^j with j >= index and j = 1 mod period generates the group and is not idempotent.
        std::size_t j = index + ((1 + period - index % period) % period);
        out.witness = powers[j - 1];
        return out;
    }
    return out;
}

Dfa monoid_recognizes(const FiniteMonoid& m, const LetterImages& phi, const std::vector<Element>& accepting) {
    const std::size_t n = m.size(), k = phi.alphabet.size();
    if (phi.images.size() != k) throw ContractError("every letter needs an image");
    for (Element g : phi.images)
        if (g >= n) throw InputError("letter image " + std::to_string(g) + " is not an element");
    std::vector<bool> fin(n, false);
    for (Element x : accepting) {
        if (x >= n) throw InputError("accepting element " + std::to_string(x) + " is not an element");
        fin[x] = true;
    }
    std::vector<State> delta(n * k);
    for (Element x = 0; x < n; ++x)
        for (Symbol a = 0; a < k; ++a) delta[x * k + a] = m.multiply(x, phi.images[a]);
    return Dfa(phi.alphabet, n, std::move(delta), m.identity(), std::move(fin));
}

Submonoid generated_submonoid(const FiniteMonoid& m, const LetterImages& phi) {
    Submonoid out;
    std::vector<bool> seen(m.size(), false);
    seen[m.identity()] = true;
    out.elements.push_back(m.identity());
    out.representatives.push_back({});
    for (std::size_t i = 0; i < out.elements.size(); ++i) {
        for (Symbol a = 0; a < phi.alphabet.size(); ++a) {
            Element y = m.multiply(out.elements[i], phi.images.at(a));
            if (seen[y]) continue;
            seen[y] = true;
            Word w = out.representatives[i];
            w.push_back(a);
            out.elements.push_back(y);
            out.representatives.push_back(std::move(w));
        }
    }
    return out;
}

DivisionWitness division_witness(const FiniteMonoid& m, const LetterImages& phi, const std::vector<Element>& accepting) {
    DivisionWitness out;
    out.source = generated_submonoid(m, phi);
    out.target = syntactic_monoid(monoid_recognizes(m, phi, accepting));
    const FiniteMonoid& target = out.target.monoid();
    std::unordered_map<Element, std::size_t> position;
    for (std::size_t i = 0; i < out.source.elements.size(); ++i) {
        position[out.source.elements[i]] = i;
        out.images.push_back(target.element_of(out.source.representatives[i]));
    }
    for (std::size_t i = 0; i < out.source.elements.size(); ++i)
        for (std::size_t j = 0; j < out.source.elements.size(); ++j) {
            Element xy = m.multiply(out.source.elements[i], out.source.elements[j]);
            if (out.images[position.at(xy)] != target.multiply(out.images[i], out.images[j]))
                throw ContractError("the letter images do not recognize the language through a morphism");
        }
    std::vector<bool> hit(target.size(), false);
    for (Element e : out.images) hit[e] = true;
    out.surjective = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    return out;
}

namespace {

// Index and period of the power sequence, plus idempotency; preserved by isomorphisms.
std::tuple<std::size_t, std::size_t, bool> signature(const FiniteMonoid& m, Element x) {
    std::map<Element, std::size_t> seen{{x, 1}};
    Element cur = x;
    for (std::size_t e = 2;; ++e) {
        cur = m.multiply(cur, x);
        if (auto it = seen.find(cur); it != seen.end()) return {it->second, e - it->second, m.is_idempotent(x)};
        seen.emplace(cur, e);
    }
}

} // namespace

bool monoid_isomorphic(const FiniteMonoid& m1, const FiniteMonoid& m2, std::size_t cap) {
    if (m1.size() > cap || m2.size() > cap)
        throw ResourceError("isomorphism search is limited to " + std::to_string(cap) + " elements");
    if (m1.size() != m2.size()) return false;
    const std::size_t n = m1.size();
    std::vector<Element> gens;
    for (Element g : m1.generators().images)
        if (g != m1.identity() && std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);

    std::vector<std::tuple<std::size_t, std::size_t, bool>> sig2(n);
    std::map<std::tuple<std::size_t, std::size_t, bool>, std::size_t> hist1, hist2;
    for (Element x = 0; x < n; ++x) {
        sig2[x] = signature(m2, x);
        ++hist2[sig2[x]];
        ++hist1[signature(m1, x)];
    }
    if (hist1 != hist2) return false;

    std::vector<Element> image(gens.size());
    // Closure of the assigned generators; fails on an inconsistent or non-injective map.
    auto consistent = [&](std::size_t assigned) {
        std::vector<Element> f(n, kNoState), inverse(n, kNoState);
        f[m1.identity()] = m2.identity();
        inverse[m2.identity()] = m1.identity();
        std::vector<Element> queue{m1.identity()};
        for (std::size_t i = 0; i < queue.size(); ++i) {
            for (std::size_t g = 0; g < assigned; ++g) {
                Element y = m1.multiply(queue[i], gens[g]);
                Element fy = m2.multiply(f[queue[i]], image[g]);
                if (f[y] != kNoState) {
                    if (f[y] != fy) return false;
                    continue;
                }
                if (inverse[fy] != kNoState) return false;
                f[y] = fy;
                inverse[fy] = y;
                queue.push_back(y);
            }
        }
        return true;
    };
    std::function<bool(std::size_t)> search = [&](std::size_t g) {
        if (g == gens.size()) return true; // generators reach all of m1 and the map is injective
        auto want = signature(m1, gens[g]);
        for (Element c = 0; c < n; ++c) {
            if (c == m2.identity() || sig2[c] != want) continue;
            image[g] = c;
            if (consistent(g + 1) && search(g + 1)) return true;
        }
        return false;
    };
    return search(0);
}

bool check_monoid_laws(const FiniteMonoid& m) {
    const std::size_t n = m.size();
    for (Element x = 0; x < n; ++x)
        if (m.multiply(m.identity(), x) != x || m.multiply(x, m.identity()) != x) return false;
    for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y) {
            Element xy = m.multiply(x, y);
            for (Element z = 0; z < n; ++z)
                if (m.multiply(xy, z) != m.multiply(x, m.multiply(y, z))) return false;
        }
    return true;
}

} // namespace ratkit

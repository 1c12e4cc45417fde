#include <catch_amalgamated.hpp>

#include <map>

#include "oracles.hpp"
#include "ratkit/corpus.hpp"
#include "ratkit/error.hpp"
#include "ratkit/minimize.hpp"
#include "ratkit/rational.hpp"

using namespace ratkit;

namespace {

const Alphabet& ab() {
    static const Alphabet a({"a", "b"});
    return a;
}

// Blocks as sets of declared state names.
std::vector<std::vector<std::string>> named_blocks(const MinimizeResult& r, const Dfa& d) {
    std::vector<std::vector<std::string>> out;
    for (const auto& b : r.partition.blocks) {
        out.emplace_back();
        for (auto q : b) out.back().push_back(d.state_name(q));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Residual signature of a state: which words of length <= k it accepts.
std::vector<bool> signature(const Dfa& d, State q, std::size_t k) {
    std::vector<bool> sig;
    for (const auto& w : oracle::all_words(d.num_symbols(), k)) {
        State r = d.run(w, q);
        sig.push_back(r != kNoState && d.is_final(r));
    }
    return sig;
}

} // namespace

TEST_CASE("six states merge into three classes", "[minimize]") {
    auto d = Dfa::from_nfa(oracle::fixture("six_state_min.aut"));
    for (auto alg : {MinimizeAlgorithm::pair_marking, MinimizeAlgorithm::moore}) {
        auto r = minimize(d, alg);
        CHECK(r.dfa.num_states() == 3);
        CHECK(named_blocks(r, d) ==
              std::vector<std::vector<std::string>>{{"1", "2", "3"}, {"4", "5"}, {"6"}});
    }
}

TEST_CASE("the a-chain is already minimal", "[minimize]") {
    auto d = Dfa::from_nfa(oracle::fixture("a_chain.aut"));
    auto r = minimize(d, MinimizeAlgorithm::pair_marking);
    CHECK(r.dfa.num_states() == 6);
    CHECK(dfa_isomorphic(r.dfa, canonical_form(d)));
    auto sep = equivalent_states(d, 0, 1);
    CHECK_FALSE(sep.equivalent);
    REQUIRE(sep.witness);
    CHECK(d.alphabet().format_word(*sep.witness) == "aaaa");
}

TEST_CASE("pair marking and Moore agree on random automata", "[minimize]") {
    Rng rng(51);
    for (int i = 0; i < 200; ++i) {
        auto d = random_dfa(rng, ab(), 7);
        auto p = minimize(d, MinimizeAlgorithm::pair_marking);
        auto m = minimize(d, MinimizeAlgorithm::moore);
        REQUIRE(dfa_isomorphic(p.dfa, m.dfa));
        CHECK(p.partition.block_of == m.partition.block_of);
    }
}

TEST_CASE("minimal automata are minimal and equivalent", "[minimize]") {
    Rng rng(52);
    for (int i = 0; i < 60; ++i) {
        auto d = random_dfa(rng, ab(), 6);
        auto r = minimize(d);
        // every pair of output states is separated by some word of length < |Q|
        std::size_t n = r.dfa.num_states();
        std::set<std::vector<bool>> sigs;
        for (State q = 0; q < n; ++q) sigs.insert(signature(r.dfa, q, n));
        CHECK(sigs.size() == n);
        for (const auto& w : oracle::all_words(2, 7)) REQUIRE(r.dfa.accepts(w) == d.accepts(w));
        // merged states have equal residuals
        for (const auto& b : r.partition.blocks)
            for (auto q : b) REQUIRE(signature(d, q, 6) == signature(d, b.front(), 6));
    }
}

TEST_CASE("equivalent_states witnesses are shortest", "[minimize]") {
    Rng rng(53);
    for (int i = 0; i < 40; ++i) {
        auto d = random_dfa(rng, ab(), 5);
        for (State p = 0; p < d.num_states(); ++p)
            for (State q = 0; q < d.num_states(); ++q) {
                auto r = equivalent_states(d, p, q);
                std::optional<Word> first;
                for (const auto& w : oracle::all_words(2, 5))
                    if (d.is_final(d.run(w, p)) != d.is_final(d.run(w, q))) {
                        first = w;
                        break;
                    }
                REQUIRE(r.equivalent == !first);
                if (first) CHECK(r.witness->size() == first->size());
            }
    }
}

TEST_CASE("blowup automata need exponentially many states", "[minimize]") {
    for (std::size_t n = 3; n <= 6; ++n) {
        // A* a A^(n-2) over n states
        std::vector<Transition> t{{0, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        for (State q = 1; q + 1 < n; ++q) {
            t.push_back({q, 0, q + 1});
            t.push_back({q, 1, q + 1});
        }
        Nfa a(ab(), n, t, {0}, {static_cast<State>(n - 1)});
        auto m = minimal_dfa(a);
        CHECK(m.num_states() >= (std::size_t{1} << (n - 1)));
    }
    CHECK(minimal_dfa(oracle::fixture("blowup4.aut")).num_states() == 8);
}

TEST_CASE("Nerode classes group words by residual", "[minimize]") {
    auto d = Dfa::from_nfa(oracle::fixture("contains_ab_dfa.aut"));
    auto classes = nerode_classes(d, 3);
    auto m = minimal_dfa(d);
    CHECK(classes.size() == m.num_states());
    std::size_t total = 0;
    for (const auto& c : classes) {
        total += c.size();
        for (const auto& w : c) CHECK(m.run(w) == m.run(c.front()));
    }
    CHECK(total == oracle::all_words(2, 3).size());
}

TEST_CASE("minimize requires a complete automaton", "[minimize]") {
    Dfa partial(ab(), 1, {0, kNoState}, 0, {true});
    CHECK_THROWS_AS(minimize(partial), ContractError);
    CHECK(minimal_dfa(partial).num_states() == 2);
}

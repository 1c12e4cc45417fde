#include <catch_amalgamated.hpp>

#include <algorithm>

#include "oracles.hpp"
#include "ratkit/corpus.hpp"
#include "ratkit/error.hpp"

using namespace ratkit;

namespace {

StateSet subset_of(std::initializer_list<State> qs, std::size_t universe) {
    StateSet s(universe);
    for (auto q : qs) s.insert(q);
    return s;
}

std::string reverse_binary(unsigned n) {
    if (n == 0) return "0";
    std::string out;
    for (; n; n >>= 1) out += (n & 1) ? '1' : '0';
    return out;
}

} // namespace

TEST_CASE("coffee machine accepts 27 words of length at most five", "[automata_core]") {
    auto coffee = oracle::fixture("coffee.aut");
    auto words = enumerate_language(coffee, 5);
    CHECK(words.size() == 27);
    std::size_t brute = 0;
    for (const auto& w : oracle::all_words(coffee.alphabet().size(), 5)) brute += oracle::nfa_accepts(coffee, w);
    CHECK(brute == 27);
    CHECK(std::is_sorted(words.begin(), words.end(), shortlex_less));
}

TEST_CASE("reverse binary multiples of three", "[automata_core]") {
    auto mod3 = Dfa::from_nfa(oracle::fixture("mod3_reverse_binary.aut"));
    for (unsigned n = 0; n <= 200; ++n) {
        auto w = mod3.alphabet().parse_word(reverse_binary(n));
        INFO("n = " << n);
        CHECK(mod3.accepts(w) == (n % 3 == 0));
    }
    CHECK_FALSE(mod3.accepts(mod3.alphabet().parse_word(reverse_binary(19))));
    CHECK(mod3.accepts(mod3.alphabet().parse_word(reverse_binary(93))));
}

TEST_CASE("determinizing the contains-ab automaton", "[automata_core]") {
    auto nfa = oracle::fixture("contains_ab_nfa.aut");
    auto det = determinize(nfa);
    REQUIRE(det.dfa.num_states() == 4);
    std::vector<StateSet> expected{subset_of({0}, 3), subset_of({0, 1}, 3), subset_of({0, 2}, 3),
                                   subset_of({0, 1, 2}, 3)};
    for (const auto& s : expected) CHECK(std::count(det.subsets.begin(), det.subsets.end(), s) == 1);
    CHECK(subset_automaton(nfa).num_states() == 8);
    CHECK(det.dfa.is_complete());
}

TEST_CASE("acceptance with witnesses agrees with set simulation", "[automata_core]") {
    Rng rng(11);
    Alphabet ab({"a", "b"});
    for (int i = 0; i < 40; ++i) {
        auto a = random_nfa(rng, ab);
        for (const auto& w : oracle::all_words(2, 5)) {
            auto r = accepts_nfa(a, w);
            REQUIRE(r.accepted == oracle::nfa_accepts(a, w));
            if (!r.accepted) continue;
            const auto& p = *r.witness;
            REQUIRE(p.states.size() == p.labels.size() + 1);
            CHECK(a.is_initial(p.states.front()));
            CHECK(a.is_final(p.states.back()));
            Word read;
            for (auto l : p.labels)
                if (l != kEpsilon) read.push_back(l);
            CHECK(read == w);
        }
    }
}

TEST_CASE("determinize, complete and trim preserve the language", "[automata_core]") {
    Rng rng(12);
    Alphabet ab({"a", "b"});
    for (int i = 0; i < 40; ++i) {
        auto a = random_nfa(rng, ab);
        auto d = determinize(a).dfa;
        auto t = trim(a).automaton;
        auto c = complete(a);
        for (const auto& w : oracle::all_words(2, 6)) {
            bool in = oracle::nfa_accepts(a, w);
            REQUIRE(d.accepts(w) == in);
            REQUIRE(oracle::nfa_accepts(t, w) == in);
            REQUIRE(oracle::nfa_accepts(c, w) == in);
        }
        CHECK(is_empty(t).empty == t.finals().empty());
    }
}

TEST_CASE("epsilon removal", "[automata_core]") {
    Alphabet ab({"a", "b"});
    // (a | eps) b*
    Nfa a(ab, 3, {{0, 0, 1}, {0, kEpsilon, 1}, {1, kEpsilon, 2}, {2, 1, 2}}, {0}, {2});
    auto e = remove_epsilon(a);
    CHECK_FALSE(e.has_epsilon());
    for (const auto& w : oracle::all_words(2, 5)) CHECK(oracle::nfa_accepts(e, w) == oracle::nfa_accepts(a, w));
}

TEST_CASE("emptiness reports a shortest word", "[automata_core]") {
    Rng rng(13);
    Alphabet ab({"a", "b"});
    for (int i = 0; i < 60; ++i) {
        auto a = random_nfa(rng, ab);
        auto r = is_empty(a);
        std::optional<Word> first;
        for (const auto& w : oracle::all_words(2, 6))
            if (oracle::nfa_accepts(a, w)) {
                first = w;
                break;
            }
        if (r.empty) {
            CHECK_FALSE(first);
        } else {
            REQUIRE(r.shortest);
            CHECK(oracle::nfa_accepts(a, *r.shortest));
            if (first) CHECK(r.shortest->size() == first->size());
        }
    }
}

TEST_CASE("canonical forms identify isomorphic automata", "[automata_core]") {
    Rng rng(14);
    Alphabet ab({"a", "b"});
    for (int i = 0; i < 30; ++i) {
        auto d = accessible_part(random_dfa(rng, ab, 5));
        // reverse the numbering of the non-initial states
        std::size_t n = d.num_states();
        std::vector<State> perm(n);
        for (State q = 0; q < n; ++q) perm[q] = q == 0 ? 0 : static_cast<State>(n - q);
        std::vector<State> delta(n * 2);
        std::vector<bool> fin(n);
        for (State q = 0; q < n; ++q) {
            for (Symbol s = 0; s < 2; ++s) delta[perm[q] * 2 + s] = perm[d.next(q, s)];
            fin[perm[q]] = d.is_final(q);
        }
        Dfa shuffled(ab, n, delta, 0, fin);
        CHECK(canonical_form(shuffled).table() == canonical_form(d).table());
        auto iso = dfa_isomorphic(d, shuffled);
        REQUIRE(iso);
        for (State q = 0; q < n; ++q) CHECK((*iso)[q] == perm[q]);
    }
}

TEST_CASE("malformed automaton text is an input error", "[automata_core]") {
    CHECK_THROWS_AS(parse_aut("alphabet: a\nstates: 2\ninitial: 0\nfinal: 1\n0 b 1\n"), InputError);
    CHECK_THROWS_AS(parse_aut("alphabet: a\nstates: 2\ninitial: 5\n"), InputError);
    auto a = oracle::fixture("coffee.aut");
    auto again = parse_aut(format_aut(a));
    CHECK(std::vector<Transition>(again.transitions().begin(), again.transitions().end()) ==
          std::vector<Transition>(a.transitions().begin(), a.transitions().end()));
    CHECK(again.names() == a.names());
}

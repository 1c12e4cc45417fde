#include <catch_amalgamated.hpp>

#include <map>

#include "oracles.hpp"
#include "ratkit/corpus.hpp"
#include "ratkit/error.hpp"
#include "ratkit/formats.hpp"
#include "ratkit/minimize.hpp"
#include "ratkit/monoid.hpp"

using namespace ratkit;

namespace {

const Alphabet& ab() {
    static const Alphabet a({"a", "b"});
    return a;
}

Dfa fixture_dfa(const std::string& name) { return Dfa::from_nfa(oracle::fixture(name)); }

// x^k = x^(k+1) for some k, checked by repeated multiplication.
bool brute_aperiodic(const FiniteMonoid& m) {
    for (Element x = 0; x < m.size(); ++x) {
        Element p = x;
        bool ok = false;
        for (std::size_t k = 0; k <= m.size() && !ok; ++k) {
            Element next = m.multiply(p, x);
            ok = next == p;
            p = next;
        }
        if (!ok) return false;
    }
    return true;
}

} // namespace

TEST_CASE("monoid of (ab)* matches its multiplication table", "[monoid]") {
    auto tm = transition_monoid(fixture_dfa("ab_star_monoid6.aut"));
    const auto& m = tm.monoid;
    REQUIRE(m.size() == 6);
    // element names and their representatives; 0 is the zero
    std::map<std::string, std::string> word_of{{"1", ""}, {"α", "a"}, {"β", "b"}, {"αβ", "ab"}, {"βα", "ba"}, {"0", "aa"}};
    std::vector<std::string> order{"1", "α", "β", "αβ", "βα", "0"};
    std::vector<std::vector<std::string>> table{
        {"1", "α", "β", "αβ", "βα", "0"},  {"α", "0", "αβ", "0", "α", "0"},  {"β", "βα", "0", "β", "0", "0"},
        {"αβ", "α", "0", "αβ", "0", "0"}, {"βα", "0", "β", "0", "βα", "0"}, {"0", "0", "0", "0", "0", "0"},
    };
    auto elem = [&](const std::string& name) { return m.element_of(ab().parse_word(word_of.at(name))); };
    std::set<Element> distinct;
    for (const auto& n : order) distinct.insert(elem(n));
    CHECK(distinct.size() == 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            INFO(order[i] << " . " << order[j]);
            CHECK(m.multiply(elem(order[i]), elem(order[j])) == elem(table[i][j]));
        }
    CHECK(check_monoid_laws(m));
    CHECK(m.identity() == elem("1"));
    CHECK(m.label(m.identity()) == "1");
}

TEST_CASE("permutation and full transformation monoids on five points", "[monoid]") {
    CHECK(transition_monoid(fixture_dfa("cycle5_120.aut")).monoid.size() == 120);
    auto full = transition_monoid(fixture_dfa("cycle5_3125.aut"));
    CHECK(full.monoid.size() == 3125);
    CHECK(full.monoid.has_table());
    // spot-check products through the maps
    Rng rng(61);
    std::uniform_int_distribution<Element> pick(0, 3124);
    for (int i = 0; i < 200; ++i) {
        Element x = pick(rng), y = pick(rng);
        auto xy = full.monoid.multiply(x, y);
        for (State q = 0; q < 5; ++q) REQUIRE(full.maps[xy][q] == full.maps[y][full.maps[x][q]]);
    }
}

TEST_CASE("transition monoids of random automata", "[monoid]") {
    Rng rng(62);
    for (int i = 0; i < 40; ++i) {
        auto d = random_dfa(rng, ab(), 4);
        auto tm = transition_monoid(d);
        const auto& m = tm.monoid;
        CHECK(check_monoid_laws(m));
        CHECK(is_aperiodic(m).aperiodic == brute_aperiodic(m));
        for (const auto& w : oracle::all_words(2, 5)) {
            auto e = m.element_of(w);
            for (State q = 0; q < d.num_states(); ++q) REQUIRE(tm.maps[e][q] == d.run(w, q));
        }
        // representatives are shortlex least
        for (Element e = 0; e < m.size(); ++e)
            for (const auto& w : oracle::all_words(2, m.representative(e).size()))
                if (m.element_of(w) == e) {
                    CHECK(w == m.representative(e));
                    break;
                }
    }
}

TEST_CASE("syntactic monoid is the transition monoid of the minimal automaton", "[monoid]") {
    auto sm = syntactic_monoid(oracle::fixture("contains_ab_nfa.aut"));
    CHECK(sm.minimal.num_states() == 3);
    CHECK(monoid_isomorphic(sm.monoid(), transition_monoid(sm.minimal).monoid));
    auto abstar = syntactic_monoid(fixture_dfa("ab_star_monoid6.aut"));
    CHECK(abstar.monoid().size() == 6);
    CHECK(monoid_isomorphic(abstar.monoid(), syntactic_monoid(fixture_dfa("group_witness.aut")).monoid()));
}

TEST_CASE("aperiodicity and its witness", "[monoid]") {
    CHECK(is_aperiodic(syntactic_monoid(fixture_dfa("ab_star_monoid6.aut")).monoid()).aperiodic);
    auto tm = transition_monoid(fixture_dfa("group_witness.aut"));
    auto ap = is_aperiodic(tm.monoid);
    CHECK_FALSE(ap.aperiodic);
    REQUIRE(ap.witness);
    auto label = tm.monoid.label(*ap.witness);
    CHECK((label == "aa" || label == "aaa"));
    CHECK_FALSE(tm.monoid.is_idempotent(*ap.witness));
    CHECK(ap.group.size() == 2);
}

TEST_CASE("monoids recognize exactly the preimage of the accepting set", "[monoid]") {
    auto mon = parse_monoid(read_text_file(oracle::data("nonsyntactic.mon")));
    CHECK(check_monoid_laws(mon));
    Alphabet ab2({"a", "b"});
    LetterImages phi{ab2, {1, 3}};
    auto d = monoid_recognizes(mon, phi, {2, 3});
    for (const auto& w : oracle::all_words(2, 5)) {
        Element e = mon.identity();
        for (auto x : w) e = mon.multiply(e, phi.images[x]);
        REQUIRE(d.accepts(w) == (e == 2 || e == 3));
    }
    auto sub = generated_submonoid(mon, phi);
    CHECK(sub.elements.size() == 3);
}

TEST_CASE("the four-element monoid is never syntactic", "[monoid]") {
    auto mon = parse_monoid(read_text_file(oracle::data("nonsyntactic.mon")));
    Alphabet abc({"a", "b", "c"});
    for (std::size_t k = 1; k <= 3; ++k) {
        Alphabet sigma(std::vector<std::string>(abc.names().begin(), abc.names().begin() + static_cast<long>(k)));
        std::size_t images = std::size_t{1} << (2 * k);
        for (std::size_t code = 0; code < images; ++code) {
            LetterImages phi{sigma, {}};
            for (std::size_t i = 0; i < k; ++i) phi.images.push_back(static_cast<Element>(code >> (2 * i) & 3));
            for (std::uint32_t x = 0; x < 16; ++x) {
                std::vector<Element> accept;
                for (Element e = 0; e < 4; ++e)
                    if (x >> e & 1) accept.push_back(e);
                auto sm = syntactic_monoid(monoid_recognizes(mon, phi, accept));
                REQUIRE(sm.monoid().size() < 4);
            }
        }
    }
}

TEST_CASE("division witnesses", "[monoid]") {
    auto tm = transition_monoid(fixture_dfa("ab_star_monoid6.aut"));
    const auto& m = tm.monoid;
    // (ab)* itself: the identity and ab
    auto dw = division_witness(m, m.generators(), {m.identity(), m.element_of(ab().parse_word("ab"))});
    CHECK(dw.surjective);
    CHECK(dw.images.size() == dw.source.elements.size());
    CHECK(dw.target.monoid().size() == 6);
    for (std::size_t i = 0; i < dw.source.elements.size(); ++i)
        for (std::size_t j = 0; j < dw.source.elements.size(); ++j) {
            auto xy = m.multiply(dw.source.elements[i], dw.source.elements[j]);
            auto pos = std::find(dw.source.elements.begin(), dw.source.elements.end(), xy) - dw.source.elements.begin();
            REQUIRE(dw.images[static_cast<std::size_t>(pos)] ==
                    dw.target.monoid().multiply(dw.images[i], dw.images[j]));
        }
}

TEST_CASE("isomorphism is exact", "[monoid]") {
    auto a = transition_monoid(fixture_dfa("ab_star_monoid6.aut")).monoid;
    auto b = transition_monoid(fixture_dfa("contains_ab_dfa.aut")).monoid;
    CHECK(monoid_isomorphic(a, a));
    CHECK_FALSE(monoid_isomorphic(a, b));
    auto big = transition_monoid(fixture_dfa("cycle5_3125.aut")).monoid;
    CHECK_THROWS_AS(monoid_isomorphic(big, big), ResourceError);
}

TEST_CASE("monoid tables round trip and are validated", "[monoid]") {
    auto m = transition_monoid(fixture_dfa("ab_star_monoid6.aut")).monoid;
    auto again = parse_monoid(format_monoid(m));
    CHECK(again.table() == m.table());
    // 1.0 should be 1
    CHECK_THROWS_AS(parse_monoid("size: 2\nidentity: 0\ngen: a -> 1\n0 1\n0 0\n"), InputError);
    CHECK_THROWS_AS(parse_monoid("size: 2\nidentity: 0\ngen: a -> 1\n0 1\n"), InputError);
}

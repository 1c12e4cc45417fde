#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "ratkit/corpus.hpp"
#include "ratkit/error.hpp"
#include "ratkit/formats.hpp"
#include "ratkit/minimize.hpp"
#include "ratkit/rational.hpp"
#include "ratkit/starfree.hpp"

using namespace ratkit;

namespace {

const Alphabet& ab() {
    static const Alphabet a({"a", "b"});
    return a;
}

Dfa fixture_dfa(const std::string& name) { return Dfa::from_nfa(oracle::fixture(name)); }

Word slice(const Word& w, std::size_t from, std::size_t to) { return Word(w.begin() + static_cast<long>(from), w.begin() + static_cast<long>(to)); }

} // namespace

TEST_CASE("first-order definability", "[starfree]") {
    auto even = parse_mso(read_text_file(oracle::data("evenlen.mso")));
    auto even_dfa = compile_formula(even.formula, even.alphabet).dfa;
    auto r = is_fo_definable(even_dfa);
    CHECK_FALSE(r.definable);
    CHECK(r.monoid_size == 2);
    CHECK(is_fo_definable(fixture_dfa("ab_star_monoid6.aut")).definable);
    CHECK(is_fo_definable(oracle::fixture("contains_ab_nfa.aut")).definable);
    CHECK(is_fo_definable(fixture_dfa("group_witness.aut")).definable);
}

TEST_CASE("(ab)* extracts to the expected star-free language", "[starfree]") {
    auto d = fixture_dfa("ab_star_monoid6.aut");
    auto r = extract_starfree(d);
    CHECK(r.language.dialect() == Dialect::star_free);
    auto expected = parse_regex("eps | (a~0 & ~0b & ~(~0(aa|bb)~0))", Dialect::star_free);
    CHECK(decide_equivalence(compile_regex(r.language, ab()), compile_regex(expected, ab())).holds);
    for (const auto& w : oracle::all_words(2, 7))
        REQUIRE(oracle::regex_matches(r.language.root(), ab(), w) == d.accepts(w));
    // pair expressions denote the transition languages
    std::size_t n = d.num_states();
    REQUIRE(r.pairs.size() == n * n);
    for (State q = 0; q < n; ++q)
        for (State q2 = 0; q2 < n; ++q2)
            for (const auto& w : oracle::all_words(2, 5))
                REQUIRE(oracle::regex_matches(r.pairs[q * n + q2], ab(), w) == (d.run(w, q) == q2));
}

TEST_CASE("extraction on random aperiodic automata", "[starfree]") {
    Rng rng(71);
    int done = 0;
    while (done < 12) {
        auto d = minimal_dfa(random_dfa(rng, ab(), 3));
        if (!is_aperiodic(transition_monoid(d).monoid).aperiodic) continue;
        ++done;
        auto r = extract_starfree(d);
        for (const auto& w : oracle::all_words(2, 6))
            REQUIRE(oracle::regex_matches(r.language.root(), ab(), w) == d.accepts(w));
        auto f = starfree_to_fo(r.language);
        CHECK(fragment(f).is_fo_order());
        CHECK(decide_equivalence(compile_formula(f, ab()).nfa(), d.to_nfa()).holds);
    }
}

TEST_CASE("extraction rejects groups and partial automata", "[starfree]") {
    CHECK_THROWS_AS(extract_starfree(fixture_dfa("group_witness.aut")), ContractError);
    Dfa partial(ab(), 1, {0, kNoState}, 0, {true});
    CHECK_THROWS_AS(extract_starfree(partial), ContractError);
}

TEST_CASE("derivation trace", "[starfree]") {
    auto r = extract_starfree(fixture_dfa("ab_star_monoid6.aut"));
    CHECK(r.trace.kind == DerivationNode::Kind::split);
    CHECK(r.trace.states == 3);
    CHECK(r.trace.children.size() == 2);
    auto text = format_derivation(r.trace);
    CHECK(text.find("split") != std::string::npos);
}

TEST_CASE("relativization restricts quantifiers to a side of x", "[starfree]") {
    Rng rng(72);
    for (int i = 0; i < 30; ++i) {
        auto f = random_sentence(rng, ab(), 3, true);
        auto below = relativize(f, "p", RelativizeMode::below);
        auto above = relativize(f, "p", RelativizeMode::strictly_above);
        auto upto = relativize(f, "p", RelativizeMode::at_or_below);
        CHECK(free_variables(below) == std::vector<std::string>{"p"});
        for (const auto& w : oracle::all_words(2, 5))
            for (std::size_t p = 0; p < w.size(); ++p) {
                auto at = [&](const FormulaPtr& g) {
                    oracle::FormulaEvaluator ev(ab(), w);
                    ev.fo["p"] = p;
                    return ev.holds(g);
                };
                REQUIRE(at(below) == oracle::sentence_holds(f, ab(), slice(w, 0, p)));
                REQUIRE(at(above) == oracle::sentence_holds(f, ab(), slice(w, p + 1, w.size())));
                REQUIRE(at(upto) == oracle::sentence_holds(f, ab(), slice(w, 0, p + 1)));
            }
    }
    CHECK_THROWS_AS(relativize(parse_formula("ex1 x. a(x)", ab()), "x", RelativizeMode::below), ContractError);
}

TEST_CASE("star-free expressions become first-order sentences", "[starfree]") {
    Rng rng(73);
    for (int i = 0; i < 60; ++i) {
        auto e = random_regex(rng, ab(), 8, Dialect::star_free);
        auto f = starfree_to_fo(e);
        CHECK(fragment(f).is_fo_order());
        for (const auto& w : oracle::all_words(2, 5))
            REQUIRE(oracle::sentence_holds(f, ab(), w) == oracle::regex_matches(e, ab(), w));
    }
    CHECK_THROWS_AS(starfree_to_fo(parse_regex("a*", Dialect::rational)), InputError);
}

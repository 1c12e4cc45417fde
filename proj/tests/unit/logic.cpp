#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "ratkit/corpus.hpp"
#include "ratkit/error.hpp"
#include "ratkit/formats.hpp"
#include "ratkit/minimize.hpp"
#include "ratkit/rational.hpp"

using namespace ratkit;

namespace {

const Alphabet& ab() {
    static const Alphabet a({"a", "b"});
    return a;
}

} // namespace

TEST_CASE("printing and parsing sentences", "[logic]") {
    Rng rng(41);
    for (int i = 0; i < 100; ++i) {
        auto f = random_sentence(rng, ab(), 4);
        auto text = print_formula(f);
        auto back = parse_formula(text, ab());
        REQUIRE(print_formula(back) == text);
        CHECK(free_variables(back).empty());
        CHECK(quantifier_depth(back) <= 4);
    }
}

TEST_CASE("syntax errors carry a position", "[logic]") {
    try {
        parse_formula("ex1 x. (a(x) &", ab());
        FAIL("no error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find(':') != std::string::npos);
    }
    CHECK_THROWS_AS(parse_formula("ex1 x. c(x)", ab()), InputError);
}

TEST_CASE("library evaluation agrees with the reference semantics", "[logic]") {
    Rng rng(42);
    for (int i = 0; i < 60; ++i) {
        auto f = random_sentence(rng, ab(), 3);
        for (const auto& w : oracle::all_words(2, 5))
            REQUIRE(eval_formula(w, {}, f, ab()) == oracle::sentence_holds(f, ab(), w));
    }
}

TEST_CASE("compiled sentences agree with the reference semantics", "[logic]") {
    Rng rng(43);
    for (int i = 0; i < 40; ++i) {
        auto f = random_sentence(rng, ab(), 3);
        auto c = compile_formula(f, ab());
        INFO(print_formula(f));
        for (const auto& w : oracle::all_words(2, 6)) REQUIRE(c.dfa.accepts(w) == oracle::sentence_holds(f, ab(), w));
    }
}

TEST_CASE("free variables become tracks", "[logic]") {
    auto f = parse_formula("x < y & a(x) & X(y) & !b(y)", ab());
    CHECK(free_variables(f) == std::vector<std::string>{"x", "y", "X"});
    auto c = compile_formula(f, ab());
    CHECK(c.tracks.fo_tracks() == std::vector<std::string>{"x", "y"});
    CHECK(c.tracks.so_tracks() == std::vector<std::string>{"X"});
    for (const auto& u : oracle::all_words(2, 4)) {
        for (std::size_t x = 0; x < u.size(); ++x)
            for (std::size_t y = 0; y < u.size(); ++y)
                for (std::uint32_t mask = 0; mask < (1u << u.size()); ++mask) {
                    Valuation v;
                    v.fo = {{"x", x}, {"y", y}};
                    oracle::FormulaEvaluator ev(ab(), u);
                    ev.fo = v.fo;
                    for (std::size_t p = 0; p < u.size(); ++p)
                        if (mask >> p & 1) {
                            v.so["X"].push_back(p);
                            ev.so["X"].insert(p);
                        }
                    v.so["X"];
                    ev.so["X"];
                    auto t = c.tracks.encode_word(u, v);
                    REQUIRE(c.dfa.accepts(t) == ev.holds(f));
                    auto decoded = c.tracks.decode_word(t);
                    REQUIRE(decoded);
                    CHECK(decoded->first == u);
                }
    }
    // with first-order tracks the empty word is never a model
    CHECK_FALSE(c.dfa.accepts(Word{}));
}

TEST_CASE("explicit track order", "[logic]") {
    auto f = parse_formula("x < y", ab());
    FormulaCompileOptions opts;
    opts.track_order = {"y", "x"};
    auto c = compile_formula(f, ab(), opts);
    CHECK(c.tracks.fo_tracks() == std::vector<std::string>{"y", "x"});
    opts.track_order = {"y"};
    CHECK_THROWS_AS(compile_formula(f, ab(), opts), InputError);
}

TEST_CASE("even length is satisfiable by the empty word and refuted by a", "[logic]") {
    auto mso = parse_mso(read_text_file(oracle::data("evenlen.mso")));
    auto sat = decide_mso(mso.formula, mso.alphabet, DecideMode::satisfiable);
    CHECK(sat.holds);
    REQUIRE(sat.witness);
    CHECK(sat.witness->empty());
    auto valid = decide_mso(mso.formula, mso.alphabet, DecideMode::valid);
    CHECK_FALSE(valid.holds);
    REQUIRE(valid.witness);
    CHECK(mso.alphabet.format_word(*valid.witness) == "a");
    auto c = compile_formula(mso.formula, mso.alphabet);
    for (const auto& w : oracle::all_words(2, 7)) CHECK(c.dfa.accepts(w) == (w.size() % 2 == 0));
}

TEST_CASE("automata translate to existential sentences and back", "[logic]") {
    Rng rng(44);
    for (int i = 0; i < 15; ++i) {
        auto d = random_dfa(rng, ab(), 3);
        auto f = dfa_to_mso(d);
        CHECK(free_variables(f).empty());
        auto back = compile_formula(f, ab());
        CHECK(decide_equivalence(back.nfa(), d.to_nfa()).holds);
        for (const auto& w : oracle::all_words(2, 4)) REQUIRE(oracle::sentence_holds(f, ab(), w) == d.accepts(w));
    }
}

TEST_CASE("successor and order rewrites keep the meaning", "[logic]") {
    Rng rng(45);
    for (int i = 0; i < 40; ++i) {
        auto f = random_sentence(rng, ab(), 3);
        auto no_succ = rewrite_successor_in_order(f);
        auto no_order = rewrite_order_in_mso_s(f);
        CHECK_FALSE(fragment(no_succ).uses_successor);
        CHECK_FALSE(fragment(no_order).uses_order);
        for (const auto& w : oracle::all_words(2, 4)) {
            bool truth = oracle::sentence_holds(f, ab(), w);
            REQUIRE(oracle::sentence_holds(no_succ, ab(), w) == truth);
            REQUIRE(oracle::sentence_holds(no_order, ab(), w) == truth);
        }
    }
}

TEST_CASE("K constraint and projection", "[logic]") {
    TrackAlphabet tracks(ab(), {"x"}, {"X"});
    auto k = k_constraint(tracks);
    CHECK_FALSE(k.accepts(Word{}));
    Word one{tracks.encode(0, 0b01), tracks.encode(1, 0b10)};
    Word two{tracks.encode(0, 0b01), tracks.encode(1, 0b01)};
    CHECK(k.accepts(one));
    CHECK_FALSE(k.accepts(two));

    auto f = parse_formula("a(x) & X(x)", ab());
    auto c = compile_formula(f, ab());
    auto p = project_track(c, "X");
    CHECK(p.tracks.fo_tracks() == std::vector<std::string>{"x"});
    CHECK(p.tracks.so_tracks().empty());
    auto g = compile_formula(parse_formula("a(x)", ab()), ab());
    CHECK(decide_equivalence(p.nfa(), g.nfa()).holds);
}

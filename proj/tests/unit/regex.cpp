#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "ratkit/corpus.hpp"
#include "ratkit/error.hpp"
#include "ratkit/minimize.hpp"

using namespace ratkit;

namespace {

const Alphabet& ab() {
    static const Alphabet a({"a", "b"});
    return a;
}

void require_same_language(const Nfa& a, const RegexPtr& e, std::size_t max_len = 6) {
    for (const auto& w : oracle::all_words(a.alphabet().size(), max_len)) {
        INFO(print_regex(e) << " on " << a.alphabet().format_word(w));
        REQUIRE(oracle::nfa_accepts(a, w) == oracle::regex_matches(e, a.alphabet(), w));
    }
}

} // namespace

TEST_CASE("parser precedence and printing", "[regex]") {
    auto e = parse_regex("ab*|~(a&b)", Dialect::extended);
    CHECK(e.root()->kind == RegexKind::unite);
    CHECK(e.root()->left->kind == RegexKind::concat);
    CHECK(e.root()->left->right->kind == RegexKind::star);
    CHECK(e.root()->right->kind == RegexKind::complement);
    auto again = parse_regex(e.to_string(), Dialect::extended);
    CHECK(print_regex(again.root()) == e.to_string());
}

TEST_CASE("dialects reject foreign operators", "[regex]") {
    CHECK_THROWS_AS(parse_regex("~a", Dialect::rational), InputError);
    CHECK_THROWS_AS(parse_regex("a*", Dialect::star_free), InputError);
    CHECK_NOTHROW(parse_regex("~0a~0 & ~(~0b~0)", Dialect::star_free));
    CHECK_THROWS_AS(parse_regex("(a|b", Dialect::rational), InputError);
}

TEST_CASE("compiled expressions match the direct semantics", "[regex]") {
    Rng rng(31);
    for (auto dialect : {Dialect::rational, Dialect::extended, Dialect::star_free}) {
        for (int i = 0; i < 60; ++i) {
            auto e = random_regex(rng, ab(), 8, dialect);
            require_same_language(compile_regex(e, ab()), e);
        }
    }
}

TEST_CASE("printing and parsing preserve the language", "[regex]") {
    Rng rng(32);
    for (int i = 0; i < 60; ++i) {
        auto e = random_regex(rng, ab(), 10, Dialect::extended);
        auto back = parse_regex(print_regex(e), Dialect::extended);
        for (const auto& w : oracle::all_words(2, 5))
            REQUIRE(oracle::regex_matches(e, ab(), w) == oracle::regex_matches(back.root(), ab(), w));
    }
}

TEST_CASE("state elimination recovers the language", "[regex]") {
    Rng rng(33);
    for (int i = 0; i < 40; ++i) {
        auto a = random_nfa(rng, ab());
        auto r = extract_regex(a);
        CHECK(r.expression.dialect() == Dialect::rational);
        CHECK(r.size == regex_size(r.expression.root()));
        require_same_language(a, r.expression.root());
        require_same_language(a, simplify(r.expression.root()));
    }
}

TEST_CASE("simplify and nullable agree with the semantics", "[regex]") {
    Rng rng(34);
    for (int i = 0; i < 100; ++i) {
        auto e = random_regex(rng, ab(), 12, Dialect::extended);
        auto s = simplify(e);
        CHECK(regex_size(s) <= regex_size(e));
        CHECK(nullable(e) == oracle::regex_matches(e, ab(), Word{}));
        for (const auto& w : oracle::all_words(2, 5))
            REQUIRE(oracle::regex_matches(e, ab(), w) == oracle::regex_matches(s, ab(), w));
    }
}

TEST_CASE("complement is relative to the whole alphabet", "[regex]") {
    Alphabet abc({"a", "b", "c"});
    auto e = parse_regex("~(a*)", Dialect::extended);
    auto n = compile_regex(e, abc);
    CHECK(oracle::nfa_accepts(n, abc.parse_word("c")));
    CHECK_FALSE(oracle::nfa_accepts(n, abc.parse_word("aa")));
    CHECK_THROWS_AS(compile_regex(parse_regex("d", Dialect::rational), abc), InputError);
}

TEST_CASE("quoted multi-character symbols", "[regex]") {
    Alphabet coins({"tea", "0", "x"});
    auto e = parse_regex("'tea' '0'* x", Dialect::rational);
    CHECK(regex_symbols(e.root()) == std::vector<std::string>{"tea", "0", "x"});
    auto n = compile_regex(e, coins);
    CHECK(oracle::nfa_accepts(n, coins.parse_word("tea 0 0 x")));
    CHECK_FALSE(oracle::nfa_accepts(n, coins.parse_word("tea")));
    auto back = parse_regex(e.to_string(), Dialect::rational);
    CHECK(back.to_string() == e.to_string());
}

TEST_CASE("morphism nodes compile to images", "[regex]") {
    Alphabet abc({"a", "b", "c"});
    auto e = parse_regex("map{a->bc, b->eps}((ab)*)", Dialect::extended);
    auto n = compile_regex(e, abc);
    for (const char* w : {"", "bc", "bcbc"}) CHECK(oracle::nfa_accepts(n, abc.parse_word(w)));
    for (const char* w : {"b", "a", "cb"}) CHECK_FALSE(oracle::nfa_accepts(n, abc.parse_word(w)));
}

TEST_CASE("regex of the minimal automaton is the same language", "[regex]") {
    auto e = parse_regex("(a|b)*ab(a|b)*", Dialect::rational);
    auto m = minimal_dfa(compile_regex(e, ab()));
    CHECK(m.num_states() == 3);
    require_same_language(m.to_nfa(), e.root(), 7);
}

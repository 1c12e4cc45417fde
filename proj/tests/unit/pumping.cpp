#include <catch_amalgamated.hpp>

#include <numeric>

#include "oracles.hpp"
#include "ratkit/corpus.hpp"
#include "ratkit/error.hpp"
#include "ratkit/minimize.hpp"
#include "ratkit/pumping.hpp"

using namespace ratkit;

namespace {

const Alphabet& ab() {
    static const Alphabet a({"a", "b"});
    return a;
}

std::vector<std::size_t> iota_positions(std::size_t n) {
    std::vector<std::size_t> p(n + 1);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

Word pumped(const PumpSplit& s, std::size_t m) {
    Word w = s.u1;
    for (std::size_t i = 0; i < m; ++i) w.insert(w.end(), s.u2.begin(), s.u2.end());
    w.insert(w.end(), s.u3.begin(), s.u3.end());
    return w;
}

bool count_balanced(const Word& w) { return 2 * static_cast<std::size_t>(std::count(w.begin(), w.end(), 0)) == w.size(); }

bool is_anbn(const Word& w) {
    std::size_t n = w.size() / 2;
    if (w.size() % 2) return false;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] != (i < n ? 0u : 1u)) return false;
    return true;
}

} // namespace

TEST_CASE("splitting accepted words of the contains-ab automaton", "[pumping]") {
    auto d = Dfa::from_nfa(oracle::fixture("contains_ab_dfa.aut"));
    auto w = ab().parse_word("aabab");
    auto positions = iota_positions(4);
    auto s = pump_split(d, w, positions);
    CHECK(s.j < s.k);
    CHECK(s.u1.size() == positions[s.j]);
    CHECK(s.u1.size() + s.u2.size() == positions[s.k]);
    CHECK_FALSE(s.u2.empty());
    for (std::size_t m = 0; m <= 5; ++m) CHECK(d.accepts(pumped(s, m)));
}

TEST_CASE("every state repeats in a one-state automaton", "[pumping]") {
    Alphabet a({"a"});
    Dfa all(a, 1, {0}, 0, {true});
    std::vector<std::size_t> pos{0, 1, 2};
    auto s = pump_split(all, a.parse_word("aa"), pos);
    CHECK(s.j == 0);
    CHECK(s.k == 1);
    CHECK(a.format_word(s.u2) == "a");
}

TEST_CASE("all-zero words pump in the multiples-of-three automaton", "[pumping]") {
    auto nfa = oracle::fixture("mod3_reverse_binary.aut");
    auto w = nfa.alphabet().parse_word("000000");
    auto s = pump_split(nfa, w, iota_positions(6));
    for (std::size_t m = 0; m <= 5; ++m) CHECK(oracle::nfa_accepts(nfa, pumped(s, m)));
}

TEST_CASE("split preconditions", "[pumping]") {
    auto d = Dfa::from_nfa(oracle::fixture("contains_ab_dfa.aut"));
    CHECK_THROWS_AS(pump_split(d, ab().parse_word("bbbb"), iota_positions(4)), ContractError);
    CHECK_THROWS_AS(pump_split(d, ab().parse_word("abab"), iota_positions(2)), ContractError);
    std::vector<std::size_t> unsorted{0, 2, 1, 3, 4};
    CHECK_THROWS_AS(pump_split(d, ab().parse_word("abab"), unsorted), ContractError);
}

TEST_CASE("split soundness on random automata", "[pumping]") {
    Rng rng(81);
    for (int i = 0; i < 60; ++i) {
        auto a = random_nfa(rng, ab());
        std::size_t n = a.num_states();
        auto words = enumerate_language(a, n + 3);
        for (const auto& w : words) {
            if (w.size() < n) continue;
            auto s = pump_split(a, w, iota_positions(w.size()));
            for (std::size_t m = 0; m <= 5; ++m) REQUIRE(oracle::nfa_accepts(a, pumped(s, m)));
        }
    }
}

TEST_CASE("pump verification rows", "[pumping]") {
    auto anbn = builtin_predicate("anbn");
    std::vector<std::uint64_t> exps{0, 1, 2};
    auto rows = verify_pump(anbn, ab().parse_word("a"), ab().parse_word("a"), ab().parse_word("bb"), exps);
    REQUIRE(rows.size() == 3);
    CHECK_FALSE(rows[0].member);
    CHECK(rows[1].member);
    CHECK_FALSE(rows[2].member);
    CHECK(ab().format_word(rows[2].word) == "aaabb");

    auto contains = automaton_predicate(oracle::fixture("contains_ab_nfa.aut"));
    auto all = verify_pump(contains, ab().parse_word("a"), ab().parse_word("ab"), ab().parse_word("b"), exps);
    for (const auto& r : all) CHECK(r.member);

    auto constant = verify_pump(anbn, ab().parse_word("a"), Word{}, ab().parse_word("b"), exps);
    for (const auto& r : constant) CHECK(r.member);
}

TEST_CASE("built-in predicates", "[pumping]") {
    auto anbn = builtin_predicate("anbn");
    auto eq = builtin_predicate("equal-count");
    for (const auto& w : oracle::all_words(2, 8)) {
        REQUIRE(anbn.contains(w) == is_anbn(w));
        REQUIRE(eq.contains(w) == count_balanced(w));
    }
    auto mixed = builtin_predicate("abcd-mixed");
    const auto& abcd = mixed.alphabet;
    CHECK(mixed.contains(abcd.parse_word("ababcdcd")));
    CHECK(mixed.contains(abcd.parse_word("dbcca")));
    CHECK(mixed.contains(abcd.parse_word("dac")));
    CHECK_FALSE(mixed.contains(abcd.parse_word("abcdcd")));
    CHECK_THROWS_AS(builtin_predicate("primes"), InputError);
}

TEST_CASE("counter programs", "[pumping]") {
    auto prog = parse_counter_program(read_text_file(oracle::data("anbn.prog")), "anbn");
    auto eq = parse_counter_program(read_text_file(oracle::data("equal_count.prog")));
    for (const auto& w : oracle::all_words(2, 9)) {
        REQUIRE(prog.contains(w) == is_anbn(w));
        REQUIRE(eq.contains(w) == count_balanced(w));
    }
    CHECK_THROWS_AS(parse_counter_program("alphabet: a\non a: jump x\n"), InputError);
    CHECK_THROWS_AS(parse_counter_program("on a: inc x\n"), InputError);
}

TEST_CASE("refuting a^n b^n and equal counts", "[pumping]") {
    auto anbn = builtin_predicate("anbn");
    auto eq = builtin_predicate("equal-count");

    auto r1 = refute_rationality(anbn, PumpVariant::simple, 4);
    CHECK(r1.status == RefuteStatus::refuted);
    REQUIRE(r1.certificate);
    CHECK(check_certificate(*r1.certificate, anbn).ok);
    CHECK(r1.certificate->word.size() >= 4);

    RefuteOptions only;
    only.candidates = {ab().parse_word("aaaabbbb")};
    auto r1b = refute_rationality(anbn, PumpVariant::simple, 4, only);
    REQUIRE(r1b.certificate);
    CHECK(check_certificate(*r1b.certificate, anbn).ok);

    auto r2 = refute_rationality(eq, PumpVariant::prefix_bounded, 4);
    REQUIRE(r2.certificate);
    CHECK(ab().format_word(r2.certificate->word) == "aaaabbbb");
    CHECK(check_certificate(*r2.certificate, eq).ok);
    CHECK(r2.certificate->positions == std::vector<std::size_t>{0, 1, 2, 3, 4});

    auto r3 = refute_rationality(eq, PumpVariant::simple, 2);
    CHECK(r3.status == RefuteStatus::no_refutation);
    CHECK_FALSE(r3.certificate);
}

TEST_CASE("generalized refutation of the mixed language", "[pumping]") {
    auto mixed = builtin_predicate("abcd-mixed");
    auto r = refute_rationality(mixed, PumpVariant::generalized, 2);
    REQUIRE(r.certificate);
    CHECK(check_certificate(*r.certificate, mixed).ok);
    CHECK_FALSE(r.certificate->layout.empty());
}

TEST_CASE("search budget gives an inconclusive answer", "[pumping]") {
    RefuteOptions tight;
    tight.max_calls = 10;
    auto r = refute_rationality(builtin_predicate("equal-count"), PumpVariant::simple, 4, tight);
    CHECK(r.status == RefuteStatus::inconclusive);
}

TEST_CASE("certificates round trip and tampering is caught", "[pumping]") {
    auto anbn = builtin_predicate("anbn");
    auto r = refute_rationality(anbn, PumpVariant::simple, 4);
    REQUIRE(r.certificate);
    auto text = format_certificate(*r.certificate);
    auto back = parse_certificate(text);
    CHECK(format_certificate(back) == text);
    CHECK(check_certificate(back, anbn).ok);

    auto flipped = back;
    flipped.rows.front().outcomes.back().second = !flipped.rows.front().outcomes.back().second;
    CHECK_FALSE(check_certificate(flipped, anbn).ok);
    auto dropped = back;
    dropped.rows.pop_back();
    CHECK_FALSE(check_certificate(dropped, anbn).ok);
    auto outsider = back;
    outsider.word = ab().parse_word("abab");
    CHECK_FALSE(check_certificate(outsider, anbn).ok);
}

TEST_CASE("rational languages are never refuted", "[pumping]") {
    Rng rng(82);
    for (int i = 0; i < 20; ++i) {
        auto d = minimal_dfa(random_dfa(rng, ab(), 4));
        auto p = automaton_predicate(d.to_nfa(), "corpus");
        RefuteOptions opts;
        opts.search_len = 4;
        for (auto v : {PumpVariant::simple, PumpVariant::prefix_bounded, PumpVariant::suffix_bounded})
            CHECK_FALSE(refute_rationality(p, v, d.num_states(), opts).certificate);
    }
}

#include <catch_amalgamated.hpp>

#include <json.hpp>
#include <sstream>

#include "oracles.hpp"
#include "ratkit/cli.hpp"
#include "ratkit/pumping.hpp"

using namespace ratkit;

namespace {

struct Run {
    int code = 0;
    std::string out, err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out, err;
    int code = run_cli(args, in, out, err);
    return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::string fx(const std::string& name) { return oracle::data(name); }

} // namespace

TEST_CASE("enumerating the coffee machine", "[cli]") {
    auto r = run({"enum", fx("coffee.aut"), "--maxlen", "5"});
    CHECK(r.code == 0);
    CHECK(count_lines(r.out) == 27);
}

TEST_CASE("decision commands use exit codes", "[cli]") {
    CHECK(run({"eq", fx("contains_ab_nfa.aut"), fx("contains_ab_dfa.aut")}).code == 0);
    auto ne = run({"eq", fx("contains_ab_nfa.aut"), fx("bstar_astar.aut")});
    CHECK(ne.code == 1);
    CHECK_FALSE(ne.out.empty());
    CHECK(run({"incl", fx("contains_aaa_8.aut"), fx("contains_aaa_4.aut")}).code == 0);
    CHECK(run({"fo-definable", fx("evenlen.mso")}).code == 1);
    CHECK(run({"fo-definable", fx("ab_star_monoid6.aut")}).code == 0);
    CHECK(run({"empty", fx("coffee.aut")}).code == 1);
}

TEST_CASE("errors map to exit codes", "[cli]") {
    auto missing = run({"det", "/nonexistent.aut"});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("rational-kit:") != std::string::npos);
    CHECK(run({"det", "-"}, "alphabet: a\nstates: x\n").code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"det", fx("blowup4.aut"), "--det-cap", "3"}).code == 3);
    CHECK(run({"starfree", "extract", fx("group_witness.aut")}).code == 0);
    CHECK(run({"monoid", "aperiodic", fx("group_witness.aut")}).code == 1);
}

TEST_CASE("pipelines parse their own output", "[cli]") {
    auto det = run({"det", fx("contains_ab_nfa.aut")});
    REQUIRE(det.code == 0);
    auto min = run({"min", "-"}, det.out);
    REQUIRE(min.code == 0);
    CHECK(min.out.find("# class") != std::string::npos);
    auto back = run({"eq", "-", fx("contains_ab_nfa.aut")}, min.out);
    CHECK(back.code == 0);
    auto comp = run({"complement", fx("contains_ab_dfa.aut")});
    REQUIRE(comp.code == 0);
    CHECK(run({"eq", "-", fx("bstar_astar.aut")}, comp.out).code == 0);
}

TEST_CASE("minimization output lists classes", "[cli]") {
    auto r = run({"--json", "min", fx("six_state_min.aut")});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["classes"].size() == 3);
    CHECK(j["automaton"]["states"] == 3);
}

TEST_CASE("json output", "[cli]") {
    auto r = run({"--json", "enum", fx("coffee.aut"), "--maxlen", "5"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["count"] == 27);
    auto e = run({"--json", "eq", fx("contains_ab_nfa.aut"), fx("bstar_astar.aut")});
    auto je = nlohmann::json::parse(e.out);
    CHECK(je["equivalent"] == false);
}

TEST_CASE("expressions and logic", "[cli]") {
    auto c = run({"regex", "compile", "(a|b)*ab(a|b)*"});
    REQUIRE(c.code == 0);
    CHECK(run({"eq", "-", fx("contains_ab_nfa.aut")}, c.out).code == 0);
    auto sat = run({"mso", "sat", fx("evenlen.mso")});
    CHECK(sat.code == 0);
    CHECK(sat.out.find("eps") != std::string::npos);
    auto valid = run({"mso", "valid", fx("evenlen.mso")});
    CHECK(valid.code == 1);
    CHECK(run({"mso", "eval", fx("evenlen.mso"), "--word", "abab"}).code == 0);
    CHECK(run({"mso", "eval", fx("evenlen.mso"), "--word", "aba"}).code == 1);
    auto sf = run({"starfree", "extract", fx("ab_star_monoid6.aut")});
    CHECK(sf.code == 0);
    auto fo = run({"starfree", "to-fo", "~0ab~0"});
    CHECK(fo.code == 0);
    CHECK(run({"regex", "compile", "~0ab~0 & ~(~0bb~0)", "--dialect", "star-free"}).code == 0);
    CHECK(run({"regex", "compile", "(ab)*", "--dialect", "star-free"}).code == 2);
}

TEST_CASE("monoid commands", "[cli]") {
    auto of = run({"monoid", "of", fx("ab_star_monoid6.aut")});
    REQUIRE(of.code == 0);
    CHECK(of.out.find("size: 6") != std::string::npos);
    auto iso = run({"monoid", "iso", fx("ab_star_monoid6.aut"), fx("group_witness.aut")});
    CHECK(iso.code == 1);
    auto rec = run({"monoid", "recognize", fx("nonsyntactic.mon"), "--accept", "1"});
    CHECK(rec.code == 0);
}

TEST_CASE("pumping commands", "[cli]") {
    auto refute = run({"pump", "refute", "--predicate", "anbn", "--variant", "simple", "-n", "4"});
    CHECK(refute.code == 1);
    auto cert = parse_certificate(refute.out);
    CHECK(check_certificate(cert, builtin_predicate("anbn")).ok);
    auto replay = run({"pump", "verify", "--predicate", "anbn", "--cert", "-"}, refute.out);
    CHECK(replay.code == 0);
    auto none = run({"pump", "refute", "--predicate", "equal-count", "--variant", "simple", "-n", "2"});
    CHECK(none.code == 0);
    CHECK(none.out.find("no refutation found") != std::string::npos);
    auto prog = run({"pump", "refute", "--program", fx("equal_count.prog"), "--variant", "prefix_bounded", "-n", "4"});
    CHECK(prog.code == 1);
    auto split = run({"pump", "split", fx("contains_ab_dfa.aut"), "--word", "aabab"});
    CHECK(split.code == 0);
}

TEST_CASE("generators are deterministic per seed", "[cli]") {
    for (std::string what : {"nfa", "dfa", "regex", "mso", "word"}) {
        auto x = run({"gen", what, "--seed", "7"});
        auto y = run({"gen", what, "--seed", "7"});
        REQUIRE(x.code == 0);
        CHECK(x.out == y.out);
    }
    auto nfa = run({"gen", "nfa", "--seed", "3"});
    CHECK(run({"trim", "-"}, nfa.out).code == 0);
}

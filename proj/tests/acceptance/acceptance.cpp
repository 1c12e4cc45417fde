// One PASS/FAIL line per acceptance check; exit status 1 when any check fails.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>

#include "oracles.hpp"
#include "ratkit/corpus.hpp"
#include "ratkit/error.hpp"
#include "ratkit/formats.hpp"
#include "ratkit/minimize.hpp"
#include "ratkit/monoid.hpp"
#include "ratkit/pumping.hpp"
#include "ratkit/rational.hpp"
#include "ratkit/starfree.hpp"

using namespace ratkit;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail.str("");
            detail << "failed: " << what;
        }
    }
};

const Alphabet& ab() {
    static const Alphabet a({"a", "b"});
    return a;
}

Dfa fixture_dfa(const std::string& name) { return Dfa::from_nfa(oracle::fixture(name)); }

std::string reverse_binary(unsigned n) {
    if (n == 0) return "0";
    std::string out;
    for (; n; n >>= 1) out += (n & 1) ? '1' : '0';
    return out;
}

void coffee_words(Outcome& o) {
    auto coffee = oracle::fixture("coffee.aut");
    auto words = enumerate_language(coffee, 5);
    std::size_t brute = 0;
    for (const auto& w : oracle::all_words(coffee.alphabet().size(), 5)) brute += oracle::nfa_accepts(coffee, w);
    o.require(words.size() == 27, "enumerate gave " + std::to_string(words.size()));
    o.require(brute == 27, "brute force gave " + std::to_string(brute));
    if (o.pass) o.detail << "27 accepted words of length <= 5";
}

void mod3_reverse_binary(Outcome& o) {
    auto d = fixture_dfa("mod3_reverse_binary.aut");
    for (unsigned n = 0; n <= 200; ++n)
        o.require(d.accepts(d.alphabet().parse_word(reverse_binary(n))) == (n % 3 == 0), "n = " + std::to_string(n));
    o.require(!d.accepts(d.alphabet().parse_word(reverse_binary(19))), "19 accepted");
    o.require(d.accepts(d.alphabet().parse_word(reverse_binary(93))), "93 rejected");
    if (o.pass) o.detail << "n = 0..200 accepted iff 3 | n; 19 rejected, 93 accepted";
}

void contains_ab_subsets(Outcome& o) {
    auto nfa = oracle::fixture("contains_ab_nfa.aut");
    auto det = determinize(nfa);
    std::vector<std::string> names;
    for (const auto& s : det.subsets) names.push_back(format_subset(s, nfa));
    std::sort(names.begin(), names.end());
    std::vector<std::string> expected{"{1,2,3}", "{1,2}", "{1,3}", "{1}"};
    std::sort(expected.begin(), expected.end());
    o.require(det.dfa.num_states() == 4, "accessible states: " + std::to_string(det.dfa.num_states()));
    o.require(names == expected, "unexpected subsets");
    auto full = subset_automaton(nfa).num_states();
    o.require(full == 8, "full subset automaton: " + std::to_string(full));
    if (o.pass) {
        o.detail << "accessible";
        for (const auto& n : names) o.detail << " " << n;
        o.detail << "; full construction 8 states";
    }
}

void blowup(Outcome& o) {
    std::ostringstream sizes;
    for (std::size_t n = 3; n <= 6; ++n) {
        std::vector<Transition> t{{0, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        for (State q = 1; q + 1 < n; ++q) {
            t.push_back({q, 0, q + 1});
            t.push_back({q, 1, q + 1});
        }
        Nfa a(ab(), n, t, {0}, {static_cast<State>(n - 1)});
        auto m = minimal_dfa(a).num_states();
        o.require(m >= (std::size_t{1} << (n - 1)), "n = " + std::to_string(n) + " gives " + std::to_string(m));
        sizes << " n=" << n << ":" << m;
    }
    if (o.pass) o.detail << "minimal states" << sizes.str();
}

void minimization(Outcome& o) {
    auto d = fixture_dfa("six_state_min.aut");
    for (auto alg : {MinimizeAlgorithm::pair_marking, MinimizeAlgorithm::moore}) {
        auto r = minimize(d, alg);
        std::vector<std::vector<std::string>> blocks;
        for (const auto& b : r.partition.blocks) {
            blocks.emplace_back();
            for (auto q : b) blocks.back().push_back(d.state_name(q));
        }
        std::sort(blocks.begin(), blocks.end());
        o.require(blocks == std::vector<std::vector<std::string>>{{"1", "2", "3"}, {"4", "5"}, {"6"}},
                  "six-state classes");
    }
    auto chain = fixture_dfa("a_chain.aut");
    auto cm = minimize(chain, MinimizeAlgorithm::pair_marking);
    o.require(cm.dfa.num_states() == 6 && dfa_isomorphic(cm.dfa, canonical_form(chain)).has_value(), "a-chain changed");
    Rng rng(2024);
    for (int i = 0; i < 200; ++i) {
        auto r = random_dfa(rng, ab(), 8);
        auto p = minimize(r, MinimizeAlgorithm::pair_marking).dfa;
        auto m = minimize(r, MinimizeAlgorithm::moore).dfa;
        o.require(dfa_isomorphic(p, m).has_value(), "pair marking and Moore differ on random automaton " + std::to_string(i));
    }
    if (o.pass) o.detail << "classes {1,2,3} {4,5} {6}; a-chain unchanged; 200 random automata agree";
}

void monoid_tables(Outcome& o) {
    auto m = transition_monoid(fixture_dfa("ab_star_monoid6.aut")).monoid;
    o.require(m.size() == 6, "(ab)* monoid has " + std::to_string(m.size()) + " elements");
    if (m.size() == 6) {
        std::map<std::string, std::string> word_of{{"1", ""}, {"α", "a"}, {"β", "b"}, {"αβ", "ab"}, {"βα", "ba"}, {"0", "aa"}};
        std::vector<std::string> order{"1", "α", "β", "αβ", "βα", "0"};
        std::vector<std::vector<std::string>> table{
            {"1", "α", "β", "αβ", "βα", "0"},  {"α", "0", "αβ", "0", "α", "0"},  {"β", "βα", "0", "β", "0", "0"},
            {"αβ", "α", "0", "αβ", "0", "0"}, {"βα", "0", "β", "0", "βα", "0"}, {"0", "0", "0", "0", "0", "0"},
        };
        auto elem = [&](const std::string& name) { return m.element_of(ab().parse_word(word_of.at(name))); };
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j)
                o.require(m.multiply(elem(order[i]), elem(order[j])) == elem(table[i][j]),
                          "cell " + order[i] + "." + order[j]);
    }
    auto s120 = transition_monoid(fixture_dfa("cycle5_120.aut")).monoid.size();
    auto s3125 = transition_monoid(fixture_dfa("cycle5_3125.aut")).monoid.size();
    o.require(s120 == 120, "permutation monoid has " + std::to_string(s120));
    o.require(s3125 == 3125, "transformation monoid has " + std::to_string(s3125));
    if (o.pass) o.detail << "6 elements, 36 cells match; 120; 3125";
}

void aperiodicity(Outcome& o) {
    o.require(is_aperiodic(syntactic_monoid(fixture_dfa("ab_star_monoid6.aut")).monoid()).aperiodic,
              "M((ab)*) not aperiodic");
    auto tm = transition_monoid(fixture_dfa("group_witness.aut")).monoid;
    auto ap = is_aperiodic(tm);
    o.require(!ap.aperiodic && ap.witness.has_value(), "group automaton reported aperiodic");
    std::string label = ap.witness ? tm.label(*ap.witness) : "";
    o.require(label == "aa" || label == "aaa", "witness " + label);
    auto even = parse_mso(read_text_file(oracle::data("evenlen.mso")));
    o.require(!is_fo_definable(compile_formula(even.formula, even.alphabet).dfa).definable, "even length definable");
    o.require(is_fo_definable(fixture_dfa("ab_star_monoid6.aut")).definable, "(ab)* not definable");
    o.require(is_fo_definable(oracle::fixture("contains_ab_nfa.aut")).definable, "A*abA* not definable");
    if (o.pass) o.detail << "group witness " << label << "; even length not FO, (ab)* and A*abA* FO";
}

void round_trips(Outcome& o) {
    Rng rng(8);
    auto words = oracle::all_words(2, 6);
    for (int i = 0; i < 100; ++i) {
        auto e = random_regex(rng, ab(), 8, Dialect::rational);
        auto nfa = compile_regex(e, ab());
        auto back = extract_regex(remove_epsilon(nfa)).expression.root();
        for (const auto& w : words) {
            bool truth = oracle::regex_matches(e, ab(), w);
            o.require(oracle::nfa_accepts(nfa, w) == truth, "regex compile " + print_regex(e));
            o.require(oracle::regex_matches(back, ab(), w) == truth, "regex extract " + print_regex(e));
        }
    }
    std::size_t largest = 0;
    for (int i = 0; i < 100; ++i) {
        auto a = random_nfa(rng, ab(), NfaShape{5});
        auto d = minimal_dfa(a);
        largest = std::max(largest, d.num_states());
        auto back = compile_formula(dfa_to_mso(d), ab()).dfa;
        for (const auto& w : words) o.require(back.accepts(w) == oracle::nfa_accepts(a, w), "automaton via MSO " + std::to_string(i));
    }
    for (int i = 0; i < 30; ++i) {
        auto f = random_sentence(rng, ab(), 4);
        auto d = compile_formula(f, ab()).dfa;
        for (const auto& w : words) o.require(d.accepts(w) == oracle::sentence_holds(f, ab(), w), "sentence " + print_formula(f));
    }
    if (o.pass) o.detail << "100 expressions, 100 automata (largest minimal DFA " << largest << "), 30 sentences agree on words <= 6";
}

void starfree_cycle(Outcome& o) {
    Rng rng(9);
    int done = 0, tried = 0;
    std::uint64_t largest = 0;
    std::vector<int> by_states(5, 0);
    std::size_t d_states = 0;
    while (done < 50 && tried < 10000) {
        ++tried;
        auto d = random_dfa(rng, ab(), 4);
        // skip the trivial languages 0 and A*, which dominate small random samples
        auto minimal_size = minimal_dfa(d).num_states();
        if (minimal_size < 2 || !is_aperiodic(transition_monoid(d).monoid).aperiodic) continue;
        ++done;
        ++by_states[minimal_size];
        d_states += d.num_states();
        auto sf = extract_starfree(d);
        largest = std::max(largest, regex_size(sf.language.root()));
        o.require(decide_equivalence(compile_regex(sf.language, ab()), d.to_nfa()).holds, "extraction " + std::to_string(done));
        auto f = starfree_to_fo(sf.language);
        o.require(fragment(f).is_fo_order(), "sentence outside FO(<)");
        o.require(decide_equivalence(compile_formula(f, ab()).nfa(), d.to_nfa()).holds, "FO sentence " + std::to_string(done));
        o.require(is_aperiodic(syntactic_monoid(d).monoid()).aperiodic, "syntactic monoid not aperiodic");
    }
    o.require(done == 50, "only " + std::to_string(done) + " aperiodic automata generated");
    if (o.pass) {
        o.detail << "50 aperiodic automata, " << d_states << " states in total (minimal sizes";
        for (std::size_t n = 1; n < by_states.size(); ++n) o.detail << " " << n << ":" << by_states[n];
        o.detail << "); largest expression " << largest << " nodes";
    }
}

void abstar_expression(Outcome& o) {
    auto sf = extract_starfree(fixture_dfa("ab_star_monoid6.aut"));
    auto expected = parse_regex("eps | (a~0 & ~0b & ~(~0(aa|bb)~0))", Dialect::star_free);
    auto eq = decide_equivalence(compile_regex(sf.language, ab()), compile_regex(expected, ab()));
    o.require(eq.holds, "extracted expression differs on " + (eq.counterexample ? ab().format_word(*eq.counterexample) : ""));
    for (const auto& w : oracle::all_words(2, 8))
        o.require(oracle::regex_matches(sf.language.root(), ab(), w) == oracle::regex_matches(expected.root(), ab(), w),
                  "oracle disagreement");
    if (o.pass) o.detail << sf.language.to_string();
}

void pumping(Outcome& o) {
    auto anbn = builtin_predicate("anbn");
    auto eq = builtin_predicate("equal-count");
    auto r1 = refute_rationality(anbn, PumpVariant::simple, 4);
    o.require(r1.certificate && check_certificate(*r1.certificate, anbn).ok, "a^n b^n simple N=4");
    auto r2 = refute_rationality(eq, PumpVariant::prefix_bounded, 4);
    o.require(r2.certificate && check_certificate(*r2.certificate, eq).ok, "equal-count prefix_bounded N=4");
    o.require(r2.certificate && ab().format_word(r2.certificate->word) == "aaaabbbb", "equal-count word");
    auto r3 = refute_rationality(eq, PumpVariant::simple, 2);
    o.require(r3.status == RefuteStatus::no_refutation, std::string("equal-count simple N=2: ") + refute_status_name(r3.status));
    if (o.pass)
        o.detail << "a^n b^n certificate on " << ab().format_word(r1.certificate->word) << ", equal-count on "
                 << ab().format_word(r2.certificate->word) << ", equal-count N=2: no refutation found";
}

void never_syntactic(Outcome& o) {
    auto mon = parse_monoid(read_text_file(oracle::data("nonsyntactic.mon")));
    Alphabet abc({"a", "b", "c"});
    std::size_t checked = 0, largest = 0;
    for (std::size_t k = 1; k <= 3; ++k) {
        Alphabet sigma(std::vector<std::string>(abc.names().begin(), abc.names().begin() + static_cast<long>(k)));
        for (std::size_t code = 0; code < (std::size_t{1} << (2 * k)); ++code) {
            LetterImages phi{sigma, {}};
            for (std::size_t i = 0; i < k; ++i) phi.images.push_back(static_cast<Element>(code >> (2 * i) & 3));
            for (std::uint32_t x = 0; x < 16; ++x) {
                std::vector<Element> accept;
                for (Element e = 0; e < 4; ++e)
                    if (x >> e & 1) accept.push_back(e);
                auto size = syntactic_monoid(monoid_recognizes(mon, phi, accept)).monoid().size();
                largest = std::max(largest, size);
                o.require(size < 4, "syntactic monoid of size 4");
                ++checked;
            }
        }
    }
    if (o.pass) o.detail << checked << " recognized languages, largest syntactic monoid " << largest;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> checks{
        {"coffee machine word count", coffee_words},
        {"reverse binary multiples of three", mod3_reverse_binary},
        {"subset construction of A*abA*", contains_ab_subsets},
        {"determinization blowup", blowup},
        {"minimization classes and algorithm agreement", minimization},
        {"transition monoid tables and sizes", monoid_tables},
        {"aperiodicity and first-order definability", aperiodicity},
        {"expression, automaton and sentence round trips", round_trips},
        {"star-free extraction cycle", starfree_cycle},
        {"star-free expression of (ab)*", abstar_expression},
        {"pumping certificates", pumping},
        {"four-element monoid is never syntactic", never_syntactic},
    };
    int failures = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        Outcome o;
        auto start = std::chrono::steady_clock::now();
        try {
            checks[i].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail.str("");
            o.detail << "exception: " << e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1 < 10 ? " " : "") << i + 1 << " " << checks[i].first
                  << ": " << o.detail.str() << " (" << std::fixed << std::setprecision(1) << secs << " s)" << std::endl;
    }
    std::cout << (failures ? "FAILED " : "ALL PASSED ") << checks.size() - static_cast<std::size_t>(failures) << "/"
              << checks.size() << std::endl;
    return failures ? 1 : 0;
}

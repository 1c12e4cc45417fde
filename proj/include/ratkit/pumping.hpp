#pragma once
// Pumping lemmas: factorizations read off accepting runs, pump checks against a membership
// predicate, and searches for certificates that a language is not recognized by small automata.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ratkit/automaton.hpp"

namespace ratkit {

struct MembershipPredicate {
    std::string name;
    Alphabet alphabet;
    std::function<bool(const Word&)> contains;
};

// "anbn" (a^n b^n), "equal-count" (as many a as b), "abcd-mixed"
// ((ab)^n (cd)^n together with every word containing aa, bb, cc, dd or ac).
MembershipPredicate builtin_predicate(std::string_view name);
const std::vector<std::string>& builtin_predicate_names();

// Counter programs (inc, dec, test, accept); see docs/predicates.md.
MembershipPredicate parse_counter_program(std::string_view text, std::string name = "program");
MembershipPredicate automaton_predicate(const Nfa& a, std::string name = "automaton");

struct PumpSplit {
    std::size_t j = 0, k = 0; // indices into the positions
    Word u1, u2, u3;          // |u1| = positions[j], |u1 u2| = positions[k]
    std::vector<State> sampled; // run states at the positions
};

// positions: strictly increasing, within 0..|w|, more of them than the automaton has states.
// ContractError when w is rejected or the preconditions fail.
PumpSplit pump_split(const Nfa& a, const Word& w, std::span<const std::size_t> positions);
PumpSplit pump_split(const Dfa& d, const Word& w, std::span<const std::size_t> positions);

struct PumpOutcome {
    std::uint64_t exponent = 0;
    Word word;
    bool member = false;
};

std::vector<PumpOutcome> verify_pump(const MembershipPredicate& p, const Word& u1, const Word& u2, const Word& u3,
                                     std::span<const std::uint64_t> exponents);

enum class PumpVariant { simple, prefix_bounded, suffix_bounded, generalized };
const char* variant_name(PumpVariant v);
PumpVariant parse_variant(std::string_view name); // InputError on unknown names

struct CertificateRow {
    std::size_t j = 0, k = 0; // indices into the positions
    std::vector<std::pair<std::uint64_t, bool>> outcomes; // exponents tried, in order; the last one fails
};

// Every factorization at the certificate's positions fails to pump: no automaton with n_bound
// states (read per variant) accepts the language.
struct PumpCertificate {
    std::string predicate;
    Alphabet alphabet;
    PumpVariant variant = PumpVariant::simple;
    std::size_t n_bound = 0;
    Word word;
    std::vector<std::size_t> positions;
    std::string layout; // how the positions were chosen
    std::vector<CertificateRow> rows; // one per pair j < k, in order
};

// The cut positions a variant requires for word length n (generalized: not determined).
std::vector<std::size_t> variant_positions(PumpVariant v, std::size_t n_bound, std::size_t length);

struct RefuteOptions {
    std::vector<std::uint64_t> exponents{0, 2};
    std::size_t search_len = 8;          // candidate words have length n_bound .. n_bound + search_len
    std::size_t max_calls = 2'000'000;   // predicate evaluations before giving up
    std::vector<Word> candidates;        // when non-empty, only these words are tried
};

enum class RefuteStatus { refuted, no_refutation, inconclusive };
const char* refute_status_name(RefuteStatus s);

struct RefuteResult {
    RefuteStatus status = RefuteStatus::no_refutation;
    std::optional<PumpCertificate> certificate;
    std::size_t words_tried = 0;
    std::size_t predicate_calls = 0;
};

RefuteResult refute_rationality(const MembershipPredicate& p, PumpVariant variant, std::size_t n_bound,
                                const RefuteOptions& options = {});

struct CertificateCheck {
    bool ok = true;
    std::vector<std::string> problems;
};

// Replays every row against the predicate and checks the table shape.
CertificateCheck check_certificate(const PumpCertificate& c, const MembershipPredicate& p);

// .cert text block.
std::string format_certificate(const PumpCertificate& c);
PumpCertificate parse_certificate(std::string_view text);

} // namespace ratkit

#include "ratkit/pumping.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "ratkit/core.hpp"
#include "ratkit/error.hpp"
#include "ratkit/text.hpp"

namespace ratkit {

// ---------------------------------------------------------------- predicates

namespace {

bool is_anbn(const Word& w) {
    // symbols: a = 0, b = 1
    const std::size_t n = w.size();
    if (n % 2) return false;
    for (std::size_t i = 0; i < n; ++i)
        if (w[i] != (i < n / 2 ? 0u : 1u)) return false;
    return true;
}

bool is_equal_count(const Word& w) {
    return std::count(w.begin(), w.end(), 0u) * 2 == static_cast<std::ptrdiff_t>(w.size());
}

bool is_abcd_mixed(const Word& w) {
    // a b c d = 0 1 2 3
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        Symbol x = w[i], y = w[i + 1];
        if (x == y || (x == 0 && y == 2)) return true;
    }
    const std::size_t n = w.size();
    if (n % 4) return false;
    for (std::size_t i = 0; i < n; ++i) {
        Symbol want = (i < n / 2 ? 0u : 2u) + static_cast<Symbol>(i % 2);
        if (w[i] != want) return false;
    }
    return true;
}

} // namespace

const std::vector<std::string>& builtin_predicate_names() {
    static const std::vector<std::string> names{"anbn", "equal-count", "abcd-mixed"};
    return names;
}

MembershipPredicate builtin_predicate(std::string_view name) {
    if (name == "anbn") return {"anbn", Alphabet({"a", "b"}), is_anbn};
    if (name == "equal-count") return {"equal-count", Alphabet({"a", "b"}), is_equal_count};
    if (name == "abcd-mixed") return {"abcd-mixed", Alphabet({"a", "b", "c", "d"}), is_abcd_mixed};
    throw InputError("unknown predicate '" + std::string(name) + "' (built-ins: anbn, equal-count, abcd-mixed)");
}

MembershipPredicate automaton_predicate(const Nfa& a, std::string name) {
    return {std::move(name), a.alphabet(), [a](const Word& w) { return accepts_nfa(a, w).accepted; }};
}

namespace {

struct Instruction {
    enum class Op { inc, dec, test, accept } op;
    std::size_t counter = 0;
    enum class Cmp { eq, ne, lt, le, gt, ge } cmp = Cmp::eq;
    bool against_counter = false;
    std::size_t other = 0;
    std::int64_t literal = 0;
};

using Rule = std::vector<Instruction>;

struct CounterProgram {
    std::size_t counters = 0;
    std::vector<std::vector<Rule>> on_letter; // per symbol
    std::vector<Rule> at_end;

    bool run(const Word& w) const {
        std::vector<std::int64_t> value(counters, 0);
        bool accepted = false;
        auto exec = [&](const std::vector<Rule>& rules) {
            for (const Rule& rule : rules)
                for (const Instruction& ins : rule) {
                    if (ins.op == Instruction::Op::inc) ++value[ins.counter];
                    else if (ins.op == Instruction::Op::dec) --value[ins.counter];
                    else if (ins.op == Instruction::Op::accept) {
                        accepted = true;
                        return;
                    } else if (!holds(ins, value)) break;
                }
        };
        for (Symbol s : w) {
            exec(on_letter[s]);
            if (accepted) return true;
        }
        exec(at_end);
        return accepted;
    }

    static bool holds(const Instruction& ins, const std::vector<std::int64_t>& value) {
        std::int64_t x = value[ins.counter], y = ins.against_counter ? value[ins.other] : ins.literal;
        switch (ins.cmp) {
        case Instruction::Cmp::eq: return x == y;
        case Instruction::Cmp::ne: return x != y;
        case Instruction::Cmp::lt: return x < y;
        case Instruction::Cmp::le: return x <= y;
        case Instruction::Cmp::gt: return x > y;
        case Instruction::Cmp::ge: return x >= y;
        }
        return false;
    }
};

bool is_counter_name(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; });
}

} // namespace

MembershipPredicate parse_counter_program(std::string_view text, std::string name) {
    auto prog = std::make_shared<CounterProgram>();
    std::optional<Alphabet> alphabet;
    std::map<std::string, std::size_t, std::less<>> counters;
    auto lines = split_lines(text);
    auto fail = [&](std::size_t line, const std::string& msg) -> InputError {
        return InputError("line " + std::to_string(line + 1) + ": " + msg);
    };
    auto counter = [&](std::string_view s, std::size_t line) {
        if (!is_counter_name(s)) throw fail(line, "invalid counter name '" + std::string(s) + "'");
        auto [it, fresh] = counters.emplace(std::string(s), counters.size());
        return it->second;
    };
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        std::string_view line = strip_comment(lines[ln]);
        if (line.empty()) continue;
        if (starts_with_key(line, "alphabet")) {
            if (alphabet) throw fail(ln, "duplicate alphabet line");
            std::vector<std::string> syms;
            for (auto t : tokens(line.substr(line.find(':') + 1))) syms.emplace_back(t);
            alphabet = Alphabet(std::move(syms));
            prog->on_letter.assign(alphabet->size(), {});
            continue;
        }
        if (starts_with_key(line, "counters")) {
            for (auto t : tokens(line.substr(line.find(':') + 1))) counter(t, ln);
            continue;
        }
        std::size_t colon = line.find(':');
        if (colon == std::string_view::npos) throw fail(ln, "expected 'on <letter>:' or 'at end:'");
        auto head = tokens(line.substr(0, colon));
        std::vector<Rule>* target = nullptr;
        if (head.size() == 2 && head[0] == "on") {
            if (!alphabet) throw fail(ln, "'alphabet:' must come before the rules");
            auto s = alphabet->find(head[1]);
            if (!s) throw fail(ln, "unknown letter '" + std::string(head[1]) + "'");
            target = &prog->on_letter[*s];
        } else if (head.size() == 2 && head[0] == "at" && head[1] == "end") {
            target = &prog->at_end;
        } else {
            throw fail(ln, "expected 'on <letter>:' or 'at end:'");
        }
        Rule rule;
        std::string_view body = line.substr(colon + 1);
        while (!body.empty()) {
            std::size_t semi = body.find(';');
            auto toks = tokens(body.substr(0, semi));
            body = semi == std::string_view::npos ? std::string_view{} : body.substr(semi + 1);
            if (toks.empty()) continue;
            Instruction ins{};
            if ((toks[0] == "inc" || toks[0] == "dec") && toks.size() == 2) {
                ins.op = toks[0] == "inc" ? Instruction::Op::inc : Instruction::Op::dec;
                ins.counter = counter(toks[1], ln);
            } else if (toks[0] == "accept" && toks.size() == 1) {
                ins.op = Instruction::Op::accept;
            } else if (toks[0] == "test" && toks.size() == 4) {
                ins.op = Instruction::Op::test;
                ins.counter = counter(toks[1], ln);
                static const std::pair<std::string_view, Instruction::Cmp> ops[] = {
                    {"=", Instruction::Cmp::eq}, {"!=", Instruction::Cmp::ne}, {"<", Instruction::Cmp::lt},
                    {"<=", Instruction::Cmp::le}, {">", Instruction::Cmp::gt}, {">=", Instruction::Cmp::ge}};
                auto op = std::find_if(std::begin(ops), std::end(ops), [&](auto& o) { return o.first == toks[2]; });
                if (op == std::end(ops)) throw fail(ln, "unknown comparison '" + std::string(toks[2]) + "'");
                ins.cmp = op->second;
                std::string_view rhs = toks[3];
                auto [ptr, ec] = std::from_chars(rhs.data(), rhs.data() + rhs.size(), ins.literal);
                if (ec != std::errc{} || ptr != rhs.data() + rhs.size()) {
                    ins.against_counter = true;
                    ins.other = counter(rhs, ln);
                }
            } else {
                std::string shown;
                for (auto t : toks) shown += (shown.empty() ? "" : " ") + std::string(t);
                throw fail(ln, "bad instruction '" + shown + "' (expected inc X, dec X, test X op Y, accept)");
            }
            rule.push_back(ins);
        }
        target->push_back(std::move(rule));
    }
    if (!alphabet) throw InputError("counter program has no 'alphabet:' line");
    prog->counters = counters.size();
    return {std::move(name), *alphabet, [prog](const Word& w) { return prog->run(w); }};
}

// ---------------------------------------------------------------- split and verify

namespace {

void check_positions(std::span<const std::size_t> positions, std::size_t length) {
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (positions[i] > length) throw ContractError("position " + std::to_string(positions[i]) + " exceeds the word length");
        if (i && positions[i] <= positions[i - 1]) throw ContractError("positions must be strictly increasing");
    }
}

Word slice(const Word& w, std::size_t from, std::size_t to) {
    return Word(w.begin() + static_cast<std::ptrdiff_t>(from), w.begin() + static_cast<std::ptrdiff_t>(to));
}

Word pumped(const Word& u1, const Word& u2, const Word& u3, std::uint64_t m) {
    Word out = u1;
    for (std::uint64_t i = 0; i < m; ++i) out.insert(out.end(), u2.begin(), u2.end());
    out.insert(out.end(), u3.begin(), u3.end());
    return out;
}

} // namespace

PumpSplit pump_split(const Nfa& a, const Word& w, std::span<const std::size_t> positions) {
    check_word(a.alphabet(), w);
    if (positions.size() < a.num_states() + 1)
        throw ContractError("need more positions (" + std::to_string(positions.size()) + ") than states (" +
                            std::to_string(a.num_states()) + ")");
    check_positions(positions, w.size());
    auto run = accepts_nfa(a, w);
    if (!run.accepted) throw ContractError("the word " + a.alphabet().format_word(w) + " is not accepted");
    // after[i]: the path state right after the i-th letter.
    std::vector<State> after{run.witness->states.front()};
    for (std::size_t t = 0; t < run.witness->labels.size(); ++t)
        if (run.witness->labels[t] != kEpsilon) after.push_back(run.witness->states[t + 1]);
    PumpSplit out;
    for (std::size_t p : positions) out.sampled.push_back(after[p]);
    for (std::size_t k = 1; k < positions.size(); ++k)
        for (std::size_t j = 0; j < k; ++j)
            if (out.sampled[j] == out.sampled[k]) {
                out.j = j;
                out.k = k;
                out.u1 = slice(w, 0, positions[j]);
                out.u2 = slice(w, positions[j], positions[k]);
                out.u3 = slice(w, positions[k], w.size());
                return out;
            }
    throw ContractError("no repeated state among the sampled positions");
}

PumpSplit pump_split(const Dfa& d, const Word& w, std::span<const std::size_t> positions) {
    return pump_split(d.to_nfa(), w, positions);
}

std::vector<PumpOutcome> verify_pump(const MembershipPredicate& p, const Word& u1, const Word& u2, const Word& u3,
                                     std::span<const std::uint64_t> exponents) {
    std::vector<PumpOutcome> out;
    for (std::uint64_t m : exponents) {
        Word w = pumped(u1, u2, u3, m);
        bool member = p.contains(w);
        out.push_back({m, std::move(w), member});
    }
    return out;
}

// ---------------------------------------------------------------- refutation

const char* variant_name(PumpVariant v) {
    switch (v) {
    case PumpVariant::simple: return "simple";
    case PumpVariant::prefix_bounded: return "prefix_bounded";
    case PumpVariant::suffix_bounded: return "suffix_bounded";
    case PumpVariant::generalized: return "generalized";
    }
    return "?";
}

PumpVariant parse_variant(std::string_view name) {
    for (auto v : {PumpVariant::simple, PumpVariant::prefix_bounded, PumpVariant::suffix_bounded, PumpVariant::generalized})
        if (name == variant_name(v)) return v;
    throw InputError("unknown pumping variant '" + std::string(name) +
                     "' (simple, prefix_bounded, suffix_bounded, generalized)");
}

const char* refute_status_name(RefuteStatus s) {
    switch (s) {
    case RefuteStatus::refuted: return "refuted";
    case RefuteStatus::no_refutation: return "no refutation found";
    case RefuteStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

std::vector<std::size_t> variant_positions(PumpVariant v, std::size_t n_bound, std::size_t length) {
    std::vector<std::size_t> out;
    switch (v) {
    case PumpVariant::simple:
        for (std::size_t i = 0; i <= length; ++i) out.push_back(i);
        break;
    case PumpVariant::prefix_bounded:
        for (std::size_t i = 0; i <= std::min(n_bound, length); ++i) out.push_back(i);
        break;
    case PumpVariant::suffix_bounded:
        for (std::size_t i = length - std::min(n_bound, length); i <= length; ++i) out.push_back(i);
        break;
    case PumpVariant::generalized: break;
    }
    return out;
}

namespace {

class BudgetExceeded {};

class Searcher {
public:
    Searcher(const MembershipPredicate& p, const RefuteOptions& o) : pred_(p), opts_(o) {}

    std::size_t calls() const { return calls_; }

    bool member(const Word& w) {
        if (auto it = cache_.find(w); it != cache_.end()) return it->second;
        if (calls_ >= opts_.max_calls) throw BudgetExceeded{};
        ++calls_;
        return cache_.emplace(w, pred_.contains(w)).first->second;
    }

    // Rows for every pair, or nothing when some pair pumps for all tried exponents.
    std::optional<std::vector<CertificateRow>> table(const Word& w, const std::vector<std::size_t>& pos) {
        std::vector<CertificateRow> rows;
        for (std::size_t j = 0; j < pos.size(); ++j)
            for (std::size_t k = j + 1; k < pos.size(); ++k) {
                Word u1 = slice(w, 0, pos[j]), u2 = slice(w, pos[j], pos[k]), u3 = slice(w, pos[k], w.size());
                CertificateRow row{j, k, {}};
                bool failed = false;
                for (std::uint64_t m : opts_.exponents) {
                    bool in = member(pumped(u1, u2, u3, m));
                    row.outcomes.emplace_back(m, in);
                    if (!in) {
                        failed = true;
                        break;
                    }
                }
                if (!failed) return std::nullopt;
                rows.push_back(std::move(row));
            }
        return rows;
    }

private:
    const MembershipPredicate& pred_;
    const RefuteOptions& opts_;
    std::map<Word, bool> cache_;
    std::size_t calls_ = 0;
};

// Position layouts tried for the generalized variant: blocks at either end, then evenly spaced.
std::vector<std::pair<std::string, std::vector<std::size_t>>> layouts(std::size_t n_bound, std::size_t length) {
    std::vector<std::pair<std::string, std::vector<std::size_t>>> out;
    if (length < n_bound) return out;
    out.emplace_back("prefix block", variant_positions(PumpVariant::prefix_bounded, n_bound, length));
    if (length > n_bound) out.emplace_back("suffix block", variant_positions(PumpVariant::suffix_bounded, n_bound, length));
    for (std::size_t stride = 2; stride * n_bound <= length; ++stride)
        for (std::size_t offset = 0; offset + stride * n_bound <= length; ++offset) {
            std::vector<std::size_t> pos;
            for (std::size_t j = 0; j <= n_bound; ++j) pos.push_back(offset + stride * j);
            out.emplace_back("spread stride " + std::to_string(stride) + " offset " + std::to_string(offset),
                             std::move(pos));
        }
    return out;
}

} // namespace

RefuteResult refute_rationality(const MembershipPredicate& p, PumpVariant variant, std::size_t n_bound,
                                const RefuteOptions& options) {
    if (n_bound == 0) throw ContractError("n_bound must be positive");
    if (options.exponents.empty()) throw ContractError("at least one exponent is needed");
    RefuteResult out;
    Searcher search(p, options);
    auto attempt = [&](const Word& w) -> bool {
        if (w.size() < n_bound || !search.member(w)) return false;
        ++out.words_tried;
        std::vector<std::pair<std::string, std::vector<std::size_t>>> tries;
        if (variant == PumpVariant::generalized) tries = layouts(n_bound, w.size());
        else tries.emplace_back(variant_name(variant), variant_positions(variant, n_bound, w.size()));
        for (auto& [layout, pos] : tries) {
            if (auto rows = search.table(w, pos)) {
                out.certificate = PumpCertificate{p.name, p.alphabet, variant, n_bound, w, pos, layout, std::move(*rows)};
                return true;
            }
        }
        return false;
    };
    try {
        bool found = false;
        if (!options.candidates.empty()) {
            for (const Word& w : options.candidates) {
                check_word(p.alphabet, w);
                if ((found = attempt(w))) break;
            }
        } else {
            const std::size_t k = p.alphabet.size();
            for (std::size_t len = n_bound; len <= n_bound + options.search_len && !found; ++len) {
                Word w(len, 0);
                while (true) {
                    if ((found = attempt(w))) break;
                    std::size_t i = len;
                    while (i > 0 && w[i - 1] + 1 == k) w[--i] = 0;
                    if (i == 0) break;
                    ++w[i - 1];
                }
            }
        }
        out.status = found ? RefuteStatus::refuted : RefuteStatus::no_refutation;
    } catch (const BudgetExceeded&) {
        out.status = RefuteStatus::inconclusive;
    }
    out.predicate_calls = search.calls();
    return out;
}

CertificateCheck check_certificate(const PumpCertificate& c, const MembershipPredicate& p) {
    CertificateCheck out;
    auto problem = [&](std::string s) {
        out.ok = false;
        out.problems.push_back(std::move(s));
    };
    if (!(c.alphabet == p.alphabet)) problem("certificate alphabet differs from the predicate's");
    if (!p.contains(c.word)) problem("the word is not in the language");
    if (c.word.size() < c.n_bound) problem("the word is shorter than n_bound");
    for (std::size_t i = 0; i < c.positions.size(); ++i)
        if (c.positions[i] > c.word.size() || (i && c.positions[i] <= c.positions[i - 1]))
            problem("positions are not strictly increasing within the word");
    if (c.variant == PumpVariant::generalized) {
        if (c.positions.size() != c.n_bound + 1) problem("generalized certificates need n_bound + 1 positions");
    } else if (c.positions != variant_positions(c.variant, c.n_bound, c.word.size())) {
        problem(std::string("positions do not match the ") + variant_name(c.variant) + " variant");
    }
    if (!out.ok) return out;
    const std::size_t np = c.positions.size();
    if (c.rows.size() != np * (np ? np - 1 : 0) / 2) problem("the table does not have one row per pair");
    std::size_t r = 0;
    for (std::size_t j = 0; j < np; ++j)
        for (std::size_t k = j + 1; k < np && r < c.rows.size(); ++k, ++r) {
            const CertificateRow& row = c.rows[r];
            std::string at = "row " + std::to_string(j) + " " + std::to_string(k) + ": ";
            if (row.j != j || row.k != k) {
                problem(at + "rows out of order");
                continue;
            }
            Word u1 = slice(c.word, 0, c.positions[j]);
            Word u2 = slice(c.word, c.positions[j], c.positions[k]);
            Word u3 = slice(c.word, c.positions[k], c.word.size());
            if (row.outcomes.empty() || row.outcomes.back().second) problem(at + "no failing exponent");
            for (auto [m, recorded] : row.outcomes)
                if (p.contains(pumped(u1, u2, u3, m)) != recorded)
                    problem(at + "membership for exponent " + std::to_string(m) + " does not replay");
        }
    return out;
}

// ---------------------------------------------------------------- .cert format

std::string format_certificate(const PumpCertificate& c) {
    std::ostringstream os;
    os << "predicate: " << c.predicate << "\n";
    os << "alphabet: " << c.alphabet.to_string() << "\n";
    os << "variant: " << variant_name(c.variant) << "\n";
    os << "n_bound: " << c.n_bound << "\n";
    os << "word: " << c.alphabet.format_word(c.word) << "\n";
    os << "layout: " << c.layout << "\n";
    os << "positions:";
    for (auto p : c.positions) os << " " << p;
    os << "\n";
    for (const auto& row : c.rows) {
        os << "row: " << row.j << " " << row.k;
        for (auto [m, in] : row.outcomes) os << " " << m << (in ? ":in" : ":out");
        Word u1 = slice(c.word, 0, c.positions[row.j]);
        Word u2 = slice(c.word, c.positions[row.j], c.positions[row.k]);
        Word u3 = slice(c.word, c.positions[row.k], c.word.size());
        os << "  # " << c.alphabet.format_word(u1) << " | " << c.alphabet.format_word(u2) << " | "
           << c.alphabet.format_word(u3) << "\n";
    }
    return os.str();
}

PumpCertificate parse_certificate(std::string_view text) {
    PumpCertificate c;
    auto lines = split_lines(text);
    std::optional<std::string> word_text;
    bool have_alphabet = false, have_variant = false, have_bound = false;
    auto number = [](std::string_view s, std::size_t ln) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw InputError("line " + std::to_string(ln + 1) + ": expected a number, got '" + std::string(s) + "'");
        return v;
    };
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        std::string_view line = strip_comment(lines[ln]);
        if (line.empty()) continue;
        std::size_t colon = line.find(':');
        if (colon == std::string_view::npos) throw InputError("line " + std::to_string(ln + 1) + ": expected 'key: value'");
        std::string_view key = trim(line.substr(0, colon)), value = trim(line.substr(colon + 1));
        if (key == "predicate") c.predicate = std::string(value);
        else if (key == "alphabet") {
            std::vector<std::string> syms;
            for (auto t : tokens(value)) syms.emplace_back(t);
            c.alphabet = Alphabet(std::move(syms));
            have_alphabet = true;
        } else if (key == "variant") {
            c.variant = parse_variant(value);
            have_variant = true;
        } else if (key == "n_bound") {
            c.n_bound = number(value, ln);
            have_bound = true;
        } else if (key == "word") word_text = std::string(value);
        else if (key == "layout") c.layout = std::string(value);
        else if (key == "positions") {
            for (auto t : tokens(value)) c.positions.push_back(number(t, ln));
        } else if (key == "row") {
            auto toks = tokens(value);
            if (toks.size() < 3) throw InputError("line " + std::to_string(ln + 1) + ": row needs j, k and outcomes");
            CertificateRow row{number(toks[0], ln), number(toks[1], ln), {}};
            for (std::size_t i = 2; i < toks.size(); ++i) {
                std::string_view t = toks[i];
                std::size_t sep = t.find(':');
                std::string_view verdict = sep == std::string_view::npos ? "" : t.substr(sep + 1);
                if (verdict != "in" && verdict != "out")
                    throw InputError("line " + std::to_string(ln + 1) + ": outcome must be m:in or m:out");
                row.outcomes.emplace_back(number(t.substr(0, sep), ln), verdict == "in");
            }
            c.rows.push_back(std::move(row));
        } else {
            throw InputError("line " + std::to_string(ln + 1) + ": unknown key '" + std::string(key) + "'");
        }
    }
    if (!have_alphabet || !have_variant || !have_bound || !word_text)
        throw InputError("certificate needs alphabet, variant, n_bound and word lines");
    c.word = c.alphabet.parse_word(*word_text);
    for (const auto& row : c.rows)
        if (row.j >= row.k || row.k >= c.positions.size())
            throw InputError("row " + std::to_string(row.j) + " " + std::to_string(row.k) + " is outside the positions");
    return c;
}

} // namespace ratkit

#include "ratkit/aut_format.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "ratkit/error.hpp"
#include "ratkit/text.hpp"

namespace ratkit {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw InputError("line " + std::to_string(line) + ": " + msg);
}

State parse_state(std::string_view tok, std::size_t n, std::size_t line) {
    State v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) fail(line, "expected a state id, got '" + std::string(tok) + "'");
    if (v >= n) fail(line, "state id " + std::string(tok) + " out of range (states: " + std::to_string(n) + ")");
    return v;
}

} // namespace

Nfa parse_aut(std::string_view text) {
    const char* keys[] = {"alphabet", "states", "names", "initial", "final"};
    std::size_t next_key = 0;
    std::optional<Alphabet> alphabet;
    std::size_t n = 0;
    bool have_states = false, have_initial = false, have_final = false;
    std::vector<std::string> names;
    std::vector<State> initials, finals;
    std::vector<Transition> ts;
    std::set<Transition> seen;

    std::size_t lineno = 0;
    for (const auto& raw : split_lines(text)) {
        ++lineno;
        std::string_view line = strip_comment(raw);
        if (line.empty()) continue;
        auto colon = line.find(':');
        if (colon != std::string_view::npos) {
            std::string key(trim(line.substr(0, colon)));
            auto rest = tokens(line.substr(colon + 1));
            std::size_t idx = next_key;
            while (idx < 5 && key != keys[idx]) ++idx;
            if (idx == 5) {
                bool known = false;
                for (auto* k : keys) known = known || key == k;
                fail(lineno, known ? "section '" + key + "' out of order" : "unknown section '" + key + "'");
            }
            if (!ts.empty()) fail(lineno, "section '" + key + "' after transitions");
            if (idx > 0 && !alphabet) fail(lineno, "'alphabet:' must come first");
            if (idx > 1 && !have_states) fail(lineno, "'states:' must precede '" + key + "'");
            next_key = idx + 1;
            switch (idx) {
            case 0:
                try {
                    alphabet = Alphabet(std::vector<std::string>(rest.begin(), rest.end()));
                } catch (const InputError& e) {
                    fail(lineno, e.what());
                }
                break;
            case 1:
                if (rest.size() != 1) fail(lineno, "'states:' takes one number");
                {
                    auto [ptr, ec] = std::from_chars(rest[0].data(), rest[0].data() + rest[0].size(), n);
                    if (ec != std::errc{} || ptr != rest[0].data() + rest[0].size())
                        fail(lineno, "invalid state count '" + std::string(rest[0]) + "'");
                }
                have_states = true;
                break;
            case 2: {
                if (rest.size() != n) fail(lineno, "expected " + std::to_string(n) + " names");
                std::set<std::string_view> uniq(rest.begin(), rest.end());
                if (uniq.size() != rest.size()) fail(lineno, "duplicate state name");
                names.assign(rest.begin(), rest.end());
                break;
            }
            case 3:
                for (auto tok : rest) initials.push_back(parse_state(tok, n, lineno));
                have_initial = true;
                break;
            case 4:
                for (auto tok : rest) finals.push_back(parse_state(tok, n, lineno));
                have_final = true;
                break;
            }
            continue;
        }
        if (!alphabet || !have_states) fail(lineno, "transition before the header");
        auto tok = tokens(line);
        if (tok.size() != 3) fail(lineno, "expected 'source label target'");
        Transition t{parse_state(tok[0], n, lineno), 0, parse_state(tok[2], n, lineno)};
        if (tok[1] == kEpsilonToken) {
            t.label = kEpsilon;
        } else if (auto s = alphabet->find(tok[1])) {
            t.label = *s;
        } else {
            fail(lineno, "unknown symbol '" + std::string(tok[1]) + "'");
        }
        if (!seen.insert(t).second) fail(lineno, "duplicate transition");
        ts.push_back(t);
    }
    if (!alphabet) throw InputError("missing 'alphabet:' line");
    if (!have_states) throw InputError("missing 'states:' line");
    if (!have_initial) throw InputError("missing 'initial:' line");
    if (!have_final) throw InputError("missing 'final:' line");
    return Nfa(*alphabet, n, std::move(ts), std::move(initials), std::move(finals), std::move(names));
}

std::string format_aut(const Nfa& a) {
    std::ostringstream out;
    out << "alphabet: " << a.alphabet().to_string() << '\n';
    out << "states: " << a.num_states() << '\n';
    if (a.has_names()) {
        out << "names:";
        for (const auto& nm : a.names()) out << ' ' << nm;
        out << '\n';
    }
    out << "initial:";
    for (State q : a.initials()) out << ' ' << q;
    out << "\nfinal:";
    for (State q : a.finals()) out << ' ' << q;
    out << '\n';
    for (const auto& t : a.transitions()) {
        out << t.src << ' ' << (t.label == kEpsilon ? std::string(kEpsilonToken) : a.alphabet().name(t.label)) << ' '
            << t.dst << '\n';
    }
    return out.str();
}

std::string format_aut(const Dfa& d) { return format_aut(d.to_nfa()); }

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Nfa read_aut_file(const std::string& path) {
    try {
        return parse_aut(read_text_file(path));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

} // namespace ratkit

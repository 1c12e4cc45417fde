#include "ratkit/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "ratkit/aut_format.hpp"
#include "ratkit/corpus.hpp"
#include "ratkit/error.hpp"
#include "ratkit/formats.hpp"
#include "ratkit/minimize.hpp"
#include "ratkit/monoid.hpp"
#include "ratkit/pumping.hpp"
#include "ratkit/regex.hpp"
#include "ratkit/starfree.hpp"
#include "ratkit/text.hpp"

namespace ratkit {

namespace {

using json = nlohmann::ordered_json;

struct Options {
    bool json = false;
    bool align = false;
    std::size_t det_cap = 1'000'000;
    std::size_t monoid_cap = kMonoidCap;
    std::size_t starfree_cap = kStarFreeNodeCap;
    std::uint64_t seed = 1;

    // positional inputs and subcommand options
    std::string input, input2;
    std::string mode = "intersect", side = "left", kind = "prefixes", map, algorithm = "moore";
    std::size_t maxlen = 5;
    bool full = false, trace = false, from_file = false, raw = false, no_validate = false;
    std::string alphabet, dialect = "extended", word, positions, track_order, images, accept;
    std::vector<std::string> assignments, words;
    std::string predicate, program, automaton, cert, variant = "simple", exponents, out_file;
    std::string u1 = "eps", u2 = "eps", u3 = "eps";
    std::size_t n_bound = 4, search_len = 8, max_calls = 2'000'000;
    std::size_t states = 5, nodes = 8, depth = 4;
    bool fo_only = false;
    std::string what;
};

class Runner {
public:
    Runner(const Options& o, std::istream& in, std::ostream& out) : o_(o), in_(in), out_(out) {}

    // ------------------------------------------------------------ input

    std::string text(const std::string& path) {
        if (path != "-") return read_text_file(path);
        std::ostringstream ss;
        ss << in_.rdbuf();
        return ss.str();
    }

    Nfa nfa(const std::string& path) {
        try {
            return parse_aut(text(path));
        } catch (const InputError& e) {
            throw InputError(path + ": " + e.what());
        }
    }

    DeterminizeOptions det() const { return {o_.det_cap, false}; }

    // Deterministic complete version of an input automaton.
    Dfa dfa(const Nfa& a) {
        if (a.is_complete() && a.num_states() > 0) return Dfa::from_nfa(a);
        return complete(determinize(a, det()).dfa);
    }
    Dfa dfa(const std::string& path) { return dfa(nfa(path)); }

    std::pair<Nfa, Nfa> pair(const std::string& p1, const std::string& p2) {
        Nfa a = nfa(p1), b = nfa(p2);
        if (a.alphabet() == b.alphabet()) return {a, b};
        if (!o_.align)
            throw InputError("alphabets differ (" + a.alphabet().to_string() + " vs " + b.alphabet().to_string() +
                             "); pass --align-alphabets to use their union");
        return align_alphabets(a, b);
    }

    std::optional<Alphabet> alphabet_option() const {
        if (o_.alphabet.empty()) return std::nullopt;
        std::vector<std::string> names;
        for (auto t : tokens(o_.alphabet)) names.emplace_back(t);
        return Alphabet(std::move(names));
    }

    Regex regex(Dialect dialect) {
        std::string src = o_.from_file ? text(o_.input) : o_.input;
        return parse_regex(trim(src), dialect);
    }

    Alphabet regex_alphabet(const Regex& e) {
        if (auto a = alphabet_option()) return *a;
        auto syms = regex_symbols(e.root());
        if (syms.empty()) throw InputError("the expression uses no letters; pass --alphabet");
        // sorted, so that expressions over the same letters get the same alphabet
        std::sort(syms.begin(), syms.end());
        return Alphabet(std::move(syms));
    }

    FiniteMonoid monoid(const std::string& path) {
        if (path.size() >= 4 && path.substr(path.size() - 4) == ".aut")
            return transition_monoid(dfa(path), o_.monoid_cap).monoid;
        try {
            return parse_monoid(text(path));
        } catch (const InputError& e) {
            throw InputError(path + ": " + e.what());
        }
    }

    MembershipPredicate predicate() {
        int given = !o_.predicate.empty() + !o_.program.empty() + !o_.automaton.empty();
        if (given != 1) throw InputError("give exactly one of --predicate, --program, --automaton");
        if (!o_.predicate.empty()) return builtin_predicate(o_.predicate);
        if (!o_.program.empty()) return parse_counter_program(text(o_.program), o_.program);
        return automaton_predicate(nfa(o_.automaton), o_.automaton);
    }

    std::vector<std::uint64_t> exponents(const std::string& s, std::vector<std::uint64_t> fallback) {
        if (s.empty()) return fallback;
        std::vector<std::uint64_t> out;
        for (auto t : tokens(s)) out.push_back(number(t));
        return out;
    }

    static std::uint64_t number(std::string_view t) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc{} || ptr != t.data() + t.size()) throw InputError("expected a number, got '" + std::string(t) + "'");
        return v;
    }

    // ------------------------------------------------------------ output

    static json aut_json(const Nfa& a) {
        json j;
        j["alphabet"] = a.alphabet().names();
        j["states"] = a.num_states();
        if (a.has_names()) j["names"] = a.names();
        j["initial"] = a.initials();
        j["final"] = a.finals();
        json ts = json::array();
        for (const auto& t : a.transitions())
            ts.push_back({t.src, t.label == kEpsilon ? std::string(kEpsilonToken) : a.alphabet().name(t.label), t.dst});
        j["transitions"] = ts;
        return j;
    }

    int automaton(const Nfa& a) {
        if (o_.json) out_ << json{{"automaton", aut_json(a)}}.dump(2) << "\n";
        else out_ << format_aut(a);
        return 0;
    }
    int automaton(const Dfa& d) { return automaton(d.to_nfa()); }

    int emit(const json& j, const std::string& txt, int code = 0) {
        if (o_.json) out_ << j.dump(2) << "\n";
        else out_ << txt;
        return code;
    }

    static std::string word_text(const Alphabet& a, const Word& w) { return a.format_word(w); }

    int decision(const Decision& d, const Alphabet& a, const char* what) {
        json j{{what, d.holds}};
        std::string t = d.holds ? "true\n" : "false\n";
        if (d.counterexample) {
            j["counterexample"] = word_text(a, *d.counterexample);
            t += "counterexample: " + word_text(a, *d.counterexample) + "\n";
        }
        return emit(j, t, d.holds ? 0 : 1);
    }

    // ------------------------------------------------------------ automata

    int cmd_det() {
        Nfa a = nfa(o_.input);
        if (o_.full) {
            Dfa s = subset_automaton(a);
            return automaton(s);
        }
        auto r = determinize(a, det());
        const Nfa plain = remove_epsilon(a);
        std::vector<std::string> names;
        for (const auto& s : r.subsets) names.push_back(format_subset(s, plain));
        Dfa named = r.dfa.with_names(names);
        if (o_.trace && !o_.json)
            for (State q = 0; q < named.num_states(); ++q) out_ << "# state " << q << " = " << names[q] << "\n";
        return automaton(named);
    }

    int cmd_min() {
        Nfa a = nfa(o_.input);
        Dfa d = dfa(a);
        bool direct = a.is_complete() && a.num_states() > 0;
        auto r = minimize(d, o_.algorithm == "pair-marking" ? MinimizeAlgorithm::pair_marking : MinimizeAlgorithm::moore);
        // Class members are named after input states when the input was already complete and deterministic.
        auto member = [&](State q) { return direct ? a.state_name(q) : std::to_string(q); };
        json classes = json::array();
        std::string lines;
        for (std::size_t k = 0; k < r.partition.blocks.size(); ++k) {
            json blk = json::array();
            lines += "# class " + std::to_string(k) + ":";
            for (State q : r.partition.blocks[k]) {
                blk.push_back(member(q));
                lines += " " + member(q);
            }
            lines += "\n";
            classes.push_back(blk);
        }
        if (o_.json) return emit(json{{"automaton", aut_json(r.dfa.to_nfa())}, {"classes", classes}, {"passes", r.passes}}, "");
        out_ << format_aut(r.dfa) << lines;
        return 0;
    }

    int cmd_enum() {
        Nfa a = nfa(o_.input);
        auto words = enumerate_language(a, o_.maxlen, std::max<std::size_t>(kEnumerateCap, o_.maxlen));
        json j = json::array();
        std::string t;
        for (const auto& w : words) {
            j.push_back(word_text(a.alphabet(), w));
            t += word_text(a.alphabet(), w) + "\n";
        }
        return emit(json{{"words", j}, {"count", words.size()}}, t);
    }

    int cmd_empty() {
        Nfa a = nfa(o_.input);
        auto r = is_empty(a);
        json j{{"empty", r.empty}};
        std::string t = r.empty ? "true\n" : "false\n";
        if (r.shortest) {
            j["shortest"] = word_text(a.alphabet(), *r.shortest);
            t += "shortest: " + word_text(a.alphabet(), *r.shortest) + "\n";
        }
        return emit(j, t, r.empty ? 0 : 1);
    }

    int cmd_morph(bool inverse) {
        Nfa a = nfa(o_.input);
        std::string spec = o_.map.find("->") == std::string::npos ? text(o_.map) : o_.map;
        if (inverse) {
            Morphism m = parse_morphism(spec, nullptr, &a.alphabet());
            return automaton(inverse_morphic_image(a, m));
        }
        Morphism m = parse_morphism(spec, &a.alphabet(), nullptr);
        return automaton(morphic_image(a, m));
    }

    // ------------------------------------------------------------ regex

    int cmd_regex_compile() {
        Regex e = regex(parse_dialect(o_.dialect));
        CompileOptions opts;
        opts.determinize = det();
        return automaton(compile_regex(e, regex_alphabet(e), opts));
    }

    int cmd_regex_extract() {
        Nfa a = remove_epsilon(nfa(o_.input));
        auto r = extract_regex(a);
        Regex e = o_.raw ? r.expression : simplify(r.expression);
        return emit(json{{"expression", e.to_string()}, {"size", regex_size(e.root())}}, e.to_string() + "\n");
    }

    int cmd_regex_simplify() {
        Regex e = simplify(regex(parse_dialect(o_.dialect)));
        return emit(json{{"expression", e.to_string()}, {"size", regex_size(e.root())}}, e.to_string() + "\n");
    }

    // ------------------------------------------------------------ logic

    MsoFile mso(const std::string& path) {
        try {
            return parse_mso(text(path));
        } catch (const InputError& e) {
            throw InputError(path + ": " + e.what());
        }
    }

    FormulaCompileOptions formula_options() const {
        FormulaCompileOptions f;
        f.determinize = det();
        for (auto t : tokens(o_.track_order)) f.track_order.emplace_back(t);
        return f;
    }

    int cmd_mso_compile() {
        auto m = mso(o_.input);
        auto c = compile_formula(m.formula, m.alphabet, formula_options());
        return automaton(c.dfa);
    }

    int cmd_mso_eval() {
        auto m = mso(o_.input);
        Word w = m.alphabet.parse_word(o_.word);
        Valuation v;
        for (const auto& as : o_.assignments) {
            auto eqpos = as.find('=');
            if (eqpos == std::string::npos) throw InputError("assignment '" + as + "' is not var=value");
            std::string var = as.substr(0, eqpos), val = as.substr(eqpos + 1);
            if (is_set_variable(var)) {
                std::vector<std::size_t> pos;
                for (char& c : val)
                    if (c == ',') c = ' ';
                for (auto t : tokens(val)) pos.push_back(number(t));
                v.so[var] = pos;
            } else {
                v.fo[var] = number(val);
            }
        }
        bool r = eval_formula(w, v, m.formula, m.alphabet);
        return emit(json{{"holds", r}}, r ? "true\n" : "false\n", r ? 0 : 1);
    }

    int cmd_mso_decide(DecideMode mode) {
        auto m = mso(o_.input);
        auto r = decide_mso(m.formula, m.alphabet, mode, formula_options());
        json j{{mode == DecideMode::valid ? "valid" : "satisfiable", r.holds}};
        std::string t = r.holds ? "true\n" : "false\n";
        if (r.witness) {
            const char* label = mode == DecideMode::valid ? "counterexample" : "witness";
            j[label] = word_text(m.alphabet, *r.witness);
            t += std::string(label) + ": " + word_text(m.alphabet, *r.witness) + "\n";
        }
        return emit(j, t, r.holds ? 0 : 1);
    }

    int cmd_mso_from_dfa() {
        Dfa d = dfa(o_.input);
        auto f = dfa_to_mso(d);
        return emit(json{{"alphabet", d.alphabet().names()}, {"formula", print_formula(f)}}, format_mso(d.alphabet(), f));
    }

    // ------------------------------------------------------------ monoids

    static json monoid_json(const FiniteMonoid& m) {
        json j;
        j["size"] = m.size();
        j["identity"] = m.identity();
        json gens = json::object();
        for (Symbol a = 0; a < m.alphabet().size(); ++a) gens[m.alphabet().name(a)] = m.generator(a);
        j["generators"] = gens;
        json labels = json::array();
        for (Element e = 0; e < m.size(); ++e) labels.push_back(m.label(e));
        j["labels"] = labels;
        if (m.has_table()) {
            json rows = json::array();
            for (Element x = 0; x < m.size(); ++x)
                rows.push_back(std::vector<Element>(m.table().begin() + x * m.size(), m.table().begin() + (x + 1) * m.size()));
            j["table"] = rows;
        }
        return j;
    }

    int show_monoid(const FiniteMonoid& m) {
        if (o_.json) return emit(json{{"monoid", monoid_json(m)}}, "");
        std::string labels;
        for (Element e = 0; e < m.size(); ++e) labels += "# element " + std::to_string(e) + " = " + m.label(e) + "\n";
        if (m.has_table()) out_ << format_monoid(m) << labels;
        else out_ << "size: " << m.size() << "\n# no table stored above " << kFullTableCap << " elements\n";
        return 0;
    }

    LetterImages images(const FiniteMonoid& m) {
        if (o_.images.empty()) return m.generators();
        std::vector<std::string> names;
        std::vector<Element> ims;
        for (auto t : tokens(o_.images)) {
            auto arrow = t.find("->");
            if (arrow == std::string_view::npos) throw InputError("letter image '" + std::string(t) + "' is not letter->element");
            names.emplace_back(t.substr(0, arrow));
            Element e = static_cast<Element>(number(t.substr(arrow + 2)));
            if (e >= m.size()) throw InputError("element " + std::to_string(e) + " is outside the monoid");
            ims.push_back(e);
        }
        return {Alphabet(std::move(names)), std::move(ims)};
    }

    std::vector<Element> accepting(const FiniteMonoid& m) {
        std::vector<Element> out;
        for (auto t : tokens(o_.accept)) {
            Element e = static_cast<Element>(number(t));
            if (e >= m.size()) throw InputError("element " + std::to_string(e) + " is outside the monoid");
            out.push_back(e);
        }
        return out;
    }

    int cmd_monoid_aperiodic() {
        FiniteMonoid m = monoid(o_.input);
        auto ap = is_aperiodic(m);
        json j{{"aperiodic", ap.aperiodic}, {"size", m.size()}};
        std::string t = ap.aperiodic ? "true\n" : "false\n";
        if (!ap.aperiodic) {
            json g = json::array();
            std::string gt;
            for (Element e : ap.group) {
                g.push_back(m.label(e));
                gt += (gt.empty() ? "" : ", ") + m.label(e);
            }
            j["violating"] = m.label(*ap.violating);
            j["witness"] = m.label(*ap.witness);
            j["group"] = g;
            t += "violating element: " + m.label(*ap.violating) + "\nwitness: " + m.label(*ap.witness) + "\ngroup: {" + gt + "}\n";
        }
        return emit(j, t, ap.aperiodic ? 0 : 1);
    }

    int cmd_monoid_recognize() {
        FiniteMonoid m = monoid(o_.input);
        return automaton(monoid_recognizes(m, images(m), accepting(m)));
    }

    int cmd_monoid_divide() {
        FiniteMonoid m = monoid(o_.input);
        auto w = division_witness(m, images(m), accepting(m));
        const FiniteMonoid& target = w.target.monoid();
        json rows = json::array();
        std::string t = "source size: " + std::to_string(w.source.elements.size()) +
                        "\ntarget size: " + std::to_string(target.size()) + "\n";
        for (std::size_t i = 0; i < w.source.elements.size(); ++i) {
            rows.push_back({m.label(w.source.elements[i]), target.label(w.images[i])});
            t += m.label(w.source.elements[i]) + " -> " + target.label(w.images[i]) + "\n";
        }
        t += std::string("surjective: ") + (w.surjective ? "true" : "false") + "\n";
        return emit(json{{"source_size", w.source.elements.size()}, {"target_size", target.size()}, {"map", rows},
                         {"surjective", w.surjective}},
                    t, w.surjective ? 0 : 1);
    }

    int cmd_monoid_iso() {
        bool r = monoid_isomorphic(monoid(o_.input), monoid(o_.input2));
        return emit(json{{"isomorphic", r}}, r ? "true\n" : "false\n", r ? 0 : 1);
    }

    // ------------------------------------------------------------ first-order, star-free

    Dfa language_dfa(const std::string& path) {
        if (path.size() >= 4 && path.substr(path.size() - 4) == ".mso") {
            auto m = mso(path);
            return compile_formula(m.formula, m.alphabet, formula_options()).dfa;
        }
        return dfa(path);
    }

    int cmd_fo_definable() {
        Dfa d = language_dfa(o_.input);
        auto r = is_fo_definable(d, o_.monoid_cap);
        const FiniteMonoid& m = r.syntactic.monoid();
        json j{{"fo_definable", r.definable}, {"monoid_size", r.monoid_size}};
        std::string t = std::string(r.definable ? "true" : "false") + "\nsyntactic monoid: " +
                        std::to_string(r.monoid_size) + " elements\n";
        if (!r.definable) {
            std::string g;
            json gj = json::array();
            for (Element e : r.aperiodicity.group) {
                g += (g.empty() ? "" : ", ") + m.label(e);
                gj.push_back(m.label(e));
            }
            t += "not aperiodic: the powers of " + m.label(*r.aperiodicity.violating) + " contain the group {" + g +
                 "}; witness " + m.label(*r.aperiodicity.witness) + "\n";
            j["violating"] = m.label(*r.aperiodicity.violating);
            j["witness"] = m.label(*r.aperiodicity.witness);
            j["group"] = gj;
        }
        return emit(j, t, r.definable ? 0 : 1);
    }

    int cmd_starfree_extract() {
        Dfa d = minimal_dfa(language_dfa(o_.input));
        StarFreeOptions opts;
        opts.node_cap = o_.starfree_cap;
        opts.validate = !o_.no_validate;
        auto r = extract_starfree(d, opts);
        std::string expr = r.language.to_string();
        json j{{"expression", expr}, {"size", regex_size(r.language.root())}};
        std::string t = expr + "\n";
        if (o_.trace) {
            std::string tr = format_derivation(r.trace);
            j["trace"] = tr;
            t += tr;
        }
        return emit(j, t);
    }

    int cmd_starfree_to_fo() {
        Regex e = regex(Dialect::star_free);
        Alphabet a = regex_alphabet(e);
        auto f = starfree_to_fo(e);
        return emit(json{{"alphabet", a.names()}, {"formula", print_formula(f)}}, format_mso(a, f));
    }

    // ------------------------------------------------------------ pumping

    int cmd_pump_split() {
        Nfa a = nfa(o_.input);
        Word w = a.alphabet().parse_word(o_.word);
        std::vector<std::size_t> pos;
        for (auto t : tokens(o_.positions)) pos.push_back(number(t));
        if (pos.empty())
            for (std::size_t i = 0; i <= std::min(w.size(), a.num_states()); ++i) pos.push_back(i);
        auto s = pump_split(a, w, pos);
        const Alphabet& al = a.alphabet();
        json checks = json::array();
        std::string t = "j: " + std::to_string(s.j) + "\nk: " + std::to_string(s.k) + "\nu1: " + word_text(al, s.u1) +
                        "\nu2: " + word_text(al, s.u2) + "\nu3: " + word_text(al, s.u3) + "\n";
        bool all = true;
        for (std::uint64_t m = 0; m <= 5; ++m) {
            Word p = s.u1;
            for (std::uint64_t i = 0; i < m; ++i) p.insert(p.end(), s.u2.begin(), s.u2.end());
            p.insert(p.end(), s.u3.begin(), s.u3.end());
            bool in = accepts_nfa(a, p).accepted;
            all = all && in;
            checks.push_back({{"exponent", m}, {"accepted", in}});
            t += "m=" + std::to_string(m) + ": " + (in ? "accepted" : "rejected") + "\n";
        }
        return emit(json{{"j", s.j}, {"k", s.k}, {"u1", word_text(al, s.u1)}, {"u2", word_text(al, s.u2)},
                         {"u3", word_text(al, s.u3)}, {"checks", checks}},
                    t, all ? 0 : 1);
    }

    int cmd_pump_verify() {
        MembershipPredicate p = predicate();
        if (!o_.cert.empty()) {
            PumpCertificate c = parse_certificate(text(o_.cert));
            auto chk = check_certificate(c, p);
            std::string t = chk.ok ? "certificate replays clean\n" : "certificate rejected\n";
            for (const auto& pr : chk.problems) t += "  " + pr + "\n";
            return emit(json{{"ok", chk.ok}, {"problems", chk.problems}}, t, chk.ok ? 0 : 1);
        }
        const Alphabet& al = p.alphabet;
        auto ex = exponents(o_.exponents, {0, 1, 2});
        auto rows = verify_pump(p, al.parse_word(o_.u1), al.parse_word(o_.u2), al.parse_word(o_.u3), ex);
        json j = json::array();
        std::string t;
        bool all = true;
        for (const auto& r : rows) {
            all = all && r.member;
            j.push_back({{"exponent", r.exponent}, {"word", word_text(al, r.word)}, {"member", r.member}});
            t += "m=" + std::to_string(r.exponent) + " " + word_text(al, r.word) + ": " + (r.member ? "in" : "out") + "\n";
        }
        return emit(json{{"outcomes", j}}, t, all ? 0 : 1);
    }

    int cmd_pump_refute() {
        MembershipPredicate p = predicate();
        RefuteOptions opts;
        opts.exponents = exponents(o_.exponents, {0, 2});
        opts.search_len = o_.search_len;
        opts.max_calls = o_.max_calls;
        for (const auto& w : o_.words) opts.candidates.push_back(p.alphabet.parse_word(w));
        PumpVariant v = parse_variant(o_.variant);
        auto r = refute_rationality(p, v, o_.n_bound, opts);
        int code = r.status == RefuteStatus::refuted ? 1 : r.status == RefuteStatus::inconclusive ? 3 : 0;
        json j{{"status", refute_status_name(r.status)}, {"words_tried", r.words_tried}, {"predicate_calls", r.predicate_calls}};
        std::string t = "# " + std::string(refute_status_name(r.status)) + "\n";
        if (r.certificate) {
            std::string cert = format_certificate(*r.certificate);
            if (v == PumpVariant::generalized) t += "# positions chosen by a layout heuristic\n";
            t += cert;
            j["certificate"] = cert;
            if (!o_.out_file.empty()) {
                std::ofstream f(o_.out_file);
                if (!f) throw InputError("cannot write '" + o_.out_file + "'");
                f << cert;
            }
        }
        return emit(j, t, code);
    }

    // ------------------------------------------------------------ corpus

    int cmd_gen() {
        Rng rng(o_.seed);
        Alphabet al = alphabet_option().value_or(Alphabet({"a", "b"}));
        if (o_.what == "nfa") {
            NfaShape shape;
            shape.max_states = o_.states;
            return automaton(random_nfa(rng, al, shape));
        }
        if (o_.what == "dfa") return automaton(random_dfa(rng, al, o_.states));
        if (o_.what == "regex") {
            Regex e(random_regex(rng, al, o_.nodes, parse_dialect(o_.dialect)), parse_dialect(o_.dialect));
            return emit(json{{"expression", e.to_string()}}, e.to_string() + "\n");
        }
        if (o_.what == "mso") {
            auto f = random_sentence(rng, al, o_.depth, o_.fo_only);
            return emit(json{{"alphabet", al.names()}, {"formula", print_formula(f)}}, format_mso(al, f));
        }
        Word w = random_word(rng, al, o_.maxlen);
        return emit(json{{"word", word_text(al, w)}}, word_text(al, w) + "\n");
    }

    const Options& o_;
    std::istream& in_;
    std::ostream& out_;
};

} // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Finite automata, rational expressions, MSO logic, syntactic monoids and pumping certificates",
                 "rational-kit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--json", o.json, "Print JSON instead of text");
    app.add_flag("--align-alphabets", o.align, "Run binary operations over the union of the two alphabets");
    app.add_option("--det-cap", o.det_cap, "Largest determinized automaton")->check(CLI::PositiveNumber);
    app.add_option("--monoid-cap", o.monoid_cap, "Largest monoid")->check(CLI::PositiveNumber);
    app.add_option("--starfree-cap", o.starfree_cap, "Largest star-free expression tree")->check(CLI::PositiveNumber);

    Runner r(o, in, out);
    std::vector<std::pair<CLI::App*, std::function<int()>>> leaves;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc, std::function<int()> fn) {
        CLI::App* s = parent->add_subcommand(name, desc);
        leaves.emplace_back(s, std::move(fn));
        return s;
    };
    auto one = [&](CLI::App* s) { s->add_option("automaton", o.input, "Automaton file (.aut, '-' for stdin)")->required(); };
    auto two = [&](CLI::App* s) {
        s->add_option("first", o.input, "First automaton")->required();
        s->add_option("second", o.input2, "Second automaton")->required();
    };

    auto* s = leaf(&app, "det", "Subset construction (accessible part)", [&] { return r.cmd_det(); });
    one(s);
    s->add_flag("--full", o.full, "Full subset automaton over all subsets");
    s->add_flag("--trace", o.trace, "List the subset of each state");
    s = leaf(&app, "min", "Minimal automaton and the partition of input states", [&] { return r.cmd_min(); });
    one(s);
    s->add_option("--algorithm", o.algorithm)->check(CLI::IsMember({"moore", "pair-marking"}));
    one(leaf(&app, "trim", "Keep accessible and coaccessible states", [&] { return r.automaton(trim(r.nfa(o.input)).automaton); }));
    one(leaf(&app, "complete", "Add a sink state", [&] { return r.automaton(complete(r.nfa(o.input))); }));
    one(leaf(&app, "complement", "Complement (determinizes and completes first)",
             [&] { return r.automaton(complement(r.dfa(o.input))); }));
    s = leaf(&app, "product", "Product automaton", [&] {
        auto [a, b] = r.pair(o.input, o.input2);
        if (o.mode == "unite") return r.automaton(product(r.dfa(a), r.dfa(b), ProductMode::unite));
        return r.automaton(product(a, b, ProductMode::intersect));
    });
    two(s);
    s->add_option("--mode", o.mode)->check(CLI::IsMember({"intersect", "unite"}));
    two(leaf(&app, "concat", "Concatenation", [&] {
        auto [a, b] = r.pair(o.input, o.input2);
        return r.automaton(concat(a, b));
    }));
    one(leaf(&app, "star", "Kleene star", [&] { return r.automaton(star(r.nfa(o.input))); }));
    two(leaf(&app, "shuffle", "Shuffle product", [&] {
        auto [a, b] = r.pair(o.input, o.input2);
        return r.automaton(shuffle(a, b));
    }));
    s = leaf(&app, "morph", "Image under a morphism", [&] { return r.cmd_morph(false); });
    one(s);
    s->add_option("--map", o.map, "'a->bc b->eps' or a .mor file")->required();
    s = leaf(&app, "invmorph", "Inverse image under a morphism", [&] { return r.cmd_morph(true); });
    one(s);
    s->add_option("--map", o.map, "'a->bc b->eps' or a .mor file")->required();
    s = leaf(&app, "quotient", "Quotient by the language of a second automaton", [&] {
        auto [a, k] = r.pair(o.input, o.input2);
        return r.automaton(quotient(a, k, o.side == "left" ? QuotientSide::left : QuotientSide::right));
    });
    two(s);
    s->add_option("--side", o.side)->check(CLI::IsMember({"left", "right"}));
    s = leaf(&app, "closure", "Prefix, suffix, factor, mirror or subword closure", [&] {
        static const std::map<std::string, ClosureKind> kinds{{"prefixes", ClosureKind::prefixes},
                                                              {"suffixes", ClosureKind::suffixes},
                                                              {"factors", ClosureKind::factors},
                                                              {"mirror", ClosureKind::mirror},
                                                              {"subwords", ClosureKind::subwords}};
        return r.automaton(closure_unary(r.nfa(o.input), kinds.at(o.kind)));
    });
    one(s);
    s->add_option("--kind", o.kind)->check(CLI::IsMember({"prefixes", "suffixes", "factors", "mirror", "subwords"}));
    two(leaf(&app, "eq", "Language equivalence", [&] {
        auto [a, b] = r.pair(o.input, o.input2);
        return r.decision(decide_equivalence(a, b, r.det()), a.alphabet(), "equivalent");
    }));
    two(leaf(&app, "incl", "Language inclusion of the first in the second", [&] {
        auto [a, b] = r.pair(o.input, o.input2);
        return r.decision(decide_inclusion(a, b, r.det()), a.alphabet(), "included");
    }));
    one(leaf(&app, "empty", "Emptiness (exit 0 when empty)", [&] { return r.cmd_empty(); }));
    s = leaf(&app, "enum", "Accepted words up to a length, shortlex", [&] { return r.cmd_enum(); });
    one(s);
    s->add_option("--maxlen", o.maxlen, "Longest word");

    auto* rx_cmd = app.add_subcommand("regex", "Rational and extended expressions");
    rx_cmd->require_subcommand(1);
    auto regex_input = [&](CLI::App* c) {
        c->add_option("expression", o.input, "Expression text (or a file with --file)")->required();
        c->add_flag("-f,--file", o.from_file, "Read the expression from a file");
        c->add_option("--alphabet", o.alphabet, "Alphabet, e.g. 'a b' (default: letters of the expression)");
    };
    s = leaf(rx_cmd, "compile", "Expression to automaton", [&] { return r.cmd_regex_compile(); });
    regex_input(s);
    s->add_option("--dialect", o.dialect)->check(CLI::IsMember({"rational", "extended", "star-free"}));
    s = leaf(rx_cmd, "extract", "Automaton to expression", [&] { return r.cmd_regex_extract(); });
    one(s);
    s->add_flag("--raw", o.raw, "Skip simplification");
    s = leaf(rx_cmd, "simplify", "Algebraic simplification", [&] { return r.cmd_regex_simplify(); });
    regex_input(s);
    s->add_option("--dialect", o.dialect)->check(CLI::IsMember({"rational", "extended", "star-free"}));

    auto* mso_cmd = app.add_subcommand("mso", "Monadic second-order logic");
    mso_cmd->require_subcommand(1);
    auto mso_input = [&](CLI::App* c) {
        c->add_option("formula", o.input, ".mso file")->required();
        c->add_option("--track-order", o.track_order, "Order of the free-variable tracks");
    };
    mso_input(leaf(mso_cmd, "compile", "Formula to automaton", [&] { return r.cmd_mso_compile(); }));
    s = leaf(mso_cmd, "eval", "Evaluate on a word", [&] { return r.cmd_mso_eval(); });
    mso_input(s);
    s->add_option("--word", o.word, "Word ('eps' for the empty word)")->required();
    s->add_option("--set", o.assignments, "Free variable value: x=2 or X=0,3");
    mso_input(leaf(mso_cmd, "valid", "Validity with a counterexample", [&] { return r.cmd_mso_decide(DecideMode::valid); }));
    mso_input(leaf(mso_cmd, "sat", "Satisfiability with a witness", [&] { return r.cmd_mso_decide(DecideMode::satisfiable); }));
    one(leaf(mso_cmd, "from-dfa", "Sentence describing the runs of an automaton", [&] { return r.cmd_mso_from_dfa(); }));

    auto* mon = app.add_subcommand("monoid", "Transition and syntactic monoids");
    mon->require_subcommand(1);
    one(leaf(mon, "of", "Transition monoid", [&] { return r.show_monoid(transition_monoid(r.dfa(o.input), o.monoid_cap).monoid); }));
    one(leaf(mon, "syntactic", "Syntactic monoid",
             [&] { return r.show_monoid(syntactic_monoid(r.dfa(o.input), o.monoid_cap).monoid()); }));
    auto monoid_input = [&](CLI::App* c) { c->add_option("monoid", o.input, ".mon file, or .aut for its transition monoid")->required(); };
    monoid_input(leaf(mon, "aperiodic", "Aperiodicity with a group witness", [&] { return r.cmd_monoid_aperiodic(); }));
    auto morphism_opts = [&](CLI::App* c) {
        monoid_input(c);
        c->add_option("--images", o.images, "Letter images 'a->1 b->2' (default: the generators)");
        c->add_option("--accept", o.accept, "Accepting elements, e.g. '0 3'");
    };
    morphism_opts(leaf(mon, "recognize", "Automaton of the recognized language", [&] { return r.cmd_monoid_recognize(); }));
    morphism_opts(leaf(mon, "divide", "Division of the syntactic monoid", [&] { return r.cmd_monoid_divide(); }));
    s = leaf(mon, "iso", "Isomorphism test", [&] { return r.cmd_monoid_iso(); });
    s->add_option("first", o.input)->required();
    s->add_option("second", o.input2)->required();

    s = leaf(&app, "fo-definable", "First-order definability (aperiodic syntactic monoid)", [&] { return r.cmd_fo_definable(); });
    s->add_option("language", o.input, ".aut or .mso file")->required();

    auto* sf = app.add_subcommand("starfree", "Star-free expressions");
    sf->require_subcommand(1);
    s = leaf(sf, "extract", "Star-free expression of an aperiodic language", [&] { return r.cmd_starfree_extract(); });
    s->add_option("language", o.input, ".aut or .mso file")->required();
    s->add_flag("--trace", o.trace, "Print the derivation");
    s->add_flag("--no-validate", o.no_validate, "Skip the equivalence check of the result");
    s = leaf(sf, "to-fo", "First-order sentence of a star-free expression", [&] { return r.cmd_starfree_to_fo(); });
    regex_input(s);

    auto* pump = app.add_subcommand("pump", "Pumping lemmas");
    pump->require_subcommand(1);
    auto pred_opts = [&](CLI::App* c) {
        c->add_option("--predicate", o.predicate, "Built-in predicate: anbn, equal-count, abcd-mixed");
        c->add_option("--program", o.program, "Counter program file");
        c->add_option("--automaton", o.automaton, "Automaton file as predicate");
    };
    s = leaf(pump, "split", "Factorization from an accepting run", [&] { return r.cmd_pump_split(); });
    one(s);
    s->add_option("--word", o.word)->required();
    s->add_option("--positions", o.positions, "Cut positions (default 0..number of states)");
    s = leaf(pump, "verify", "Pump a factorization, or replay a certificate", [&] { return r.cmd_pump_verify(); });
    pred_opts(s);
    s->add_option("--cert", o.cert, ".cert file to replay");
    s->add_option("--u1", o.u1);
    s->add_option("--u2", o.u2);
    s->add_option("--u3", o.u3);
    s->add_option("--exponents", o.exponents, "Exponents, e.g. '0 1 2'");
    s = leaf(pump, "refute", "Search for a non-rationality certificate", [&] { return r.cmd_pump_refute(); });
    pred_opts(s);
    s->add_option("--variant", o.variant)->check(CLI::IsMember({"simple", "prefix_bounded", "suffix_bounded", "generalized"}));
    s->add_option("-n,--n-bound", o.n_bound, "State bound N")->check(CLI::PositiveNumber);
    s->add_option("--search-len", o.search_len, "Try words up to N + this length");
    s->add_option("--max-calls", o.max_calls, "Predicate evaluations before giving up");
    s->add_option("--exponents", o.exponents, "Exponents tried per factorization (default '0 2')");
    s->add_option("--word", o.words, "Candidate word (repeatable); replaces the search");
    s->add_option("-o,--output", o.out_file, "Also write the certificate here");

    s = leaf(&app, "gen", "Seeded random instance", [&] { return r.cmd_gen(); });
    s->add_option("what", o.what)->required()->check(CLI::IsMember({"nfa", "dfa", "regex", "mso", "word"}));
    s->add_option("--seed", o.seed);
    s->add_option("--alphabet", o.alphabet);
    s->add_option("--states", o.states)->check(CLI::PositiveNumber);
    s->add_option("--nodes", o.nodes)->check(CLI::PositiveNumber);
    s->add_option("--depth", o.depth);
    s->add_option("--maxlen", o.maxlen);
    s->add_option("--dialect", o.dialect)->check(CLI::IsMember({"rational", "extended", "star-free"}));
    s->add_flag("--first-order", o.fo_only);

    std::vector<const char*> argv{"rational-kit"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    try {
        for (auto& [cmd, fn] : leaves)
            if (cmd->parsed()) return fn();
        err << "rational-kit: no command\n";
        return 2;
    } catch (const ResourceError& e) {
        err << "rational-kit: resource limit: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "rational-kit: error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "rational-kit: error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace ratkit

#include "ratkit/formats.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "ratkit/error.hpp"
#include "ratkit/text.hpp"

namespace ratkit {

namespace {

InputError line_error(std::size_t ln, const std::string& msg) {
    return InputError("line " + std::to_string(ln + 1) + ": " + msg);
}

std::vector<std::string> names_after_colon(std::string_view line) {
    std::vector<std::string> out;
    for (auto t : tokens(line.substr(line.find(':') + 1))) out.emplace_back(t);
    return out;
}

std::uint64_t parse_number(std::string_view s, std::size_t ln) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw line_error(ln, "expected a number, got '" + std::string(s) + "'");
    return v;
}

// Image spelling: '.'-separated symbols, or one symbol per character.
std::vector<std::string> image_symbols(std::string_view img, const Alphabet* target) {
    std::vector<std::string> out;
    if (img == kEpsilonToken) return out;
    bool dotted = img.find('.') != std::string_view::npos || (target && !target->single_char());
    if (dotted) {
        std::size_t start = 0;
        while (start <= img.size()) {
            std::size_t dot = img.find('.', start);
            if (dot == std::string_view::npos) dot = img.size();
            out.emplace_back(img.substr(start, dot - start));
            start = dot + 1;
        }
    } else {
        for (char c : img) out.emplace_back(1, c);
    }
    return out;
}

} // namespace

Morphism parse_morphism(std::string_view text, const Alphabet* source_hint, const Alphabet* target_hint) {
    std::optional<Alphabet> source, target;
    if (source_hint) source = *source_hint;
    if (target_hint) target = *target_hint;
    std::vector<std::pair<std::string, std::vector<std::string>>> pairs;
    std::size_t map_line = 0;
    bool have_map = false;
    auto lines = split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        std::string_view line = strip_comment(lines[ln]);
        if (line.empty()) continue;
        std::string_view body;
        if (starts_with_key(line, "source")) {
            source = Alphabet(names_after_colon(line));
            continue;
        }
        if (starts_with_key(line, "target")) {
            target = Alphabet(names_after_colon(line));
            continue;
        }
        if (starts_with_key(line, "morphism")) body = line.substr(line.find(':') + 1);
        else if (line.find("->") != std::string_view::npos) body = line;
        else throw line_error(ln, "expected 'source:', 'target:' or 'morphism:'");
        if (have_map) throw line_error(ln, "duplicate morphism line");
        have_map = true;
        map_line = ln;
        for (auto tok : tokens(body)) {
            std::size_t arrow = tok.find("->");
            if (arrow == std::string_view::npos || arrow == 0)
                throw line_error(ln, "expected 'letter->image', got '" + std::string(tok) + "'");
            pairs.emplace_back(std::string(tok.substr(0, arrow)), image_symbols(tok.substr(arrow + 2), target ? &*target : nullptr));
        }
    }
    if (!have_map) throw InputError("no morphism given");
    if (!source) {
        std::vector<std::string> names;
        for (auto& [s, img] : pairs) names.push_back(s);
        source = Alphabet(std::move(names));
    }
    if (!target) {
        std::vector<std::string> names;
        for (auto& [s, img] : pairs)
            for (auto& x : img)
                if (std::find(names.begin(), names.end(), x) == names.end()) names.push_back(x);
        if (names.empty()) throw line_error(map_line, "cannot infer a target alphabet from erasing images; add 'target:'");
        target = Alphabet(std::move(names));
    }
    std::vector<std::optional<Word>> images(source->size());
    for (auto& [s, img] : pairs) {
        auto sym = source->find(s);
        if (!sym) throw line_error(map_line, "letter '" + s + "' is not in the source alphabet " + source->to_string());
        if (images[*sym]) throw line_error(map_line, "letter '" + s + "' is mapped twice");
        Word w;
        for (auto& x : img) {
            auto t = target->find(x);
            if (!t) throw line_error(map_line, "image letter '" + x + "' is not in the target alphabet " + target->to_string());
            w.push_back(*t);
        }
        images[*sym] = std::move(w);
    }
    std::vector<Word> out;
    for (Symbol s = 0; s < source->size(); ++s) {
        if (!images[s]) throw line_error(map_line, "no image for letter '" + source->name(s) + "'");
        out.push_back(std::move(*images[s]));
    }
    return Morphism(*source, *target, std::move(out));
}

std::string format_morphism(const Morphism& m) {
    return "source: " + m.source().to_string() + "\ntarget: " + m.target().to_string() + "\nmorphism: " + m.to_string() + "\n";
}

MsoFile parse_mso(std::string_view text) {
    auto lines = split_lines(text);
    std::optional<Alphabet> alphabet;
    std::string body;
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        std::string_view line = strip_comment(lines[ln]);
        if (!alphabet && !line.empty()) {
            if (!starts_with_key(line, "alphabet")) throw line_error(ln, "an .mso file starts with 'alphabet: ...'");
            alphabet = Alphabet(names_after_colon(line));
            body += "\n"; // keep line numbers of formula diagnostics
            continue;
        }
        body += std::string(lines[ln]) + "\n";
    }
    if (!alphabet) throw InputError("empty .mso file");
    return {*alphabet, parse_formula(body, *alphabet)};
}

std::string format_mso(const Alphabet& alphabet, const FormulaPtr& f) {
    return "alphabet: " + alphabet.to_string() + "\n" + print_formula(f) + "\n";
}

FiniteMonoid parse_monoid(std::string_view text) {
    std::optional<std::size_t> size;
    std::optional<Element> identity;
    std::vector<std::string> gen_names;
    std::vector<Element> gen_images;
    std::vector<Element> table;
    std::size_t rows = 0;
    auto lines = split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        std::string_view line = strip_comment(lines[ln]);
        if (line.empty()) continue;
        if (starts_with_key(line, "size")) {
            size = parse_number(trim(line.substr(line.find(':') + 1)), ln);
            if (*size == 0 || *size > kMonoidCap) throw line_error(ln, "size must be within 1.." + std::to_string(kMonoidCap));
            if (*size > kFullTableCap) throw ResourceError("monoid tables are limited to " + std::to_string(kFullTableCap) + " elements");
            continue;
        }
        if (!size) throw line_error(ln, "'size:' must come first");
        if (starts_with_key(line, "identity")) {
            identity = static_cast<Element>(parse_number(trim(line.substr(line.find(':') + 1)), ln));
            continue;
        }
        if (starts_with_key(line, "gen")) {
            std::string_view rest = line.substr(line.find(':') + 1);
            std::size_t arrow = rest.find("->");
            if (arrow == std::string_view::npos) throw line_error(ln, "expected 'gen: letter -> element'");
            gen_names.emplace_back(trim(rest.substr(0, arrow)));
            gen_images.push_back(static_cast<Element>(parse_number(trim(rest.substr(arrow + 2)), ln)));
            continue;
        }
        auto toks = tokens(line);
        if (toks.size() != *size) throw line_error(ln, "table row needs " + std::to_string(*size) + " entries");
        if (rows == *size) throw line_error(ln, "too many table rows");
        for (auto t : toks) table.push_back(static_cast<Element>(parse_number(t, ln)));
        ++rows;
    }
    if (!size || !identity) throw InputError("monoid needs 'size:' and 'identity:' lines");
    if (rows != *size) throw InputError("monoid table has " + std::to_string(rows) + " rows, expected " + std::to_string(*size));
    if (gen_names.empty()) throw InputError("monoid needs at least one 'gen:' line");
    return FiniteMonoid::from_table(*size, std::move(table), *identity,
                                    LetterImages{Alphabet(std::move(gen_names)), std::move(gen_images)});
}

std::string format_monoid(const FiniteMonoid& m) {
    if (!m.has_table()) throw ResourceError("monoid of size " + std::to_string(m.size()) + " has no stored table");
    std::ostringstream os;
    os << "size: " << m.size() << "\nidentity: " << m.identity() << "\n";
    for (Symbol a = 0; a < m.alphabet().size(); ++a) os << "gen: " << m.alphabet().name(a) << " -> " << m.generator(a) << "\n";
    for (Element x = 0; x < m.size(); ++x) {
        for (Element y = 0; y < m.size(); ++y) os << (y ? " " : "") << m.table()[x * m.size() + y];
        os << "\n";
    }
    return os.str();
}

} // namespace ratkit

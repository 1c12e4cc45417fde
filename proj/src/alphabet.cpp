#include "ratkit/alphabet.hpp"

#include <cctype>

#include "ratkit/error.hpp"

namespace ratkit {

namespace {

bool valid_symbol_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '#') return false;
    }
    return true;
}

} // namespace

Alphabet::Alphabet() : impl_(std::make_shared<const Impl>()) {}

Alphabet::Alphabet(std::vector<std::string> symbols) {
    if (symbols.empty()) throw InputError("alphabet must not be empty");
    auto impl = std::make_shared<Impl>();
    for (auto& s : symbols) {
        if (!valid_symbol_name(s)) throw InputError("invalid symbol name '" + s + "'");
        if (s == kEpsilonToken) throw InputError("'eps' is reserved and cannot be an alphabet symbol");
        auto [it, fresh] = impl->index.emplace(s, static_cast<Symbol>(impl->names.size()));
        if (!fresh) throw InputError("duplicate symbol '" + s + "'");
        if (s.size() != 1) impl->single_char = false;
        impl->names.push_back(std::move(s));
    }
    impl_ = std::move(impl);
}

std::optional<Symbol> Alphabet::find(std::string_view name) const {
    auto it = impl_->index.find(std::string(name));
    if (it == impl_->index.end()) return std::nullopt;
    return it->second;
}

Symbol Alphabet::at(std::string_view name) const {
    if (auto s = find(name)) return *s;
    throw InputError("unknown symbol '" + std::string(name) + "' (alphabet: " + to_string() + ")");
}

Word Alphabet::parse_word(std::string_view text) const {
    Word w;
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j > i) tokens.push_back(text.substr(i, j - i));
        i = j;
    }
    if (tokens.size() == 1 && tokens[0] == kEpsilonToken) return w;
    for (auto tok : tokens) {
        if (auto s = find(tok)) {
            w.push_back(*s);
        } else if (single_char() && tok.size() > 1) {
            for (char c : tok) w.push_back(at(std::string_view(&c, 1)));
        } else {
            at(tok); // throws
        }
    }
    return w;
}

std::string Alphabet::format_word(const Word& w) const {
    if (w.empty()) return std::string(kEpsilonToken);
    return spell(w);
}

std::string Alphabet::spell(const Word& w) const {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i > 0 && !single_char()) out += ' ';
        out += name(w[i]);
    }
    return out;
}

std::string Alphabet::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < size(); ++i) {
        if (i) out += ' ';
        out += impl_->names[i];
    }
    return out;
}

void check_word(const Alphabet& alphabet, const Word& w) {
    for (Symbol s : w) {
        if (s >= alphabet.size()) throw InputError("word contains a symbol id outside the alphabet");
    }
}

} // namespace ratkit

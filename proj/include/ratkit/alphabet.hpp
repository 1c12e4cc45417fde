#pragma once
// Finite alphabets of named symbols. Symbols are referred to by their index.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ratkit {

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;

// Label used for epsilon transitions; never a valid symbol index.
inline constexpr Symbol kEpsilon = 0xFFFFFFFFu;

// Reserved spelling of the empty word in every text format.
inline constexpr std::string_view kEpsilonToken = "eps";

class Alphabet {
public:
    Alphabet();
    explicit Alphabet(std::vector<std::string> symbols);

    std::size_t size() const { return impl_->names.size(); }
    bool empty() const { return impl_->names.empty(); }
    const std::string& name(Symbol s) const { return impl_->names.at(s); }
    const std::vector<std::string>& names() const { return impl_->names; }

    std::optional<Symbol> find(std::string_view name) const;
    // Throws InputError naming the symbol when it is not in the alphabet.
    Symbol at(std::string_view name) const;

    // True when every symbol is one character, so words can be written without separators.
    bool single_char() const { return impl_->single_char; }

    // Accepts "eps", whitespace separated symbols, or a contiguous string when single_char().
    Word parse_word(std::string_view text) const;
    // Inverse of parse_word; the empty word prints as "eps".
    std::string format_word(const Word& w) const;
    // Like format_word, but the empty word prints as "" and multi-char symbols are space separated.
    std::string spell(const Word& w) const;

    std::string to_string() const; // "a b c"

    friend bool operator==(const Alphabet& x, const Alphabet& y) {
        return x.impl_ == y.impl_ || x.impl_->names == y.impl_->names;
    }

private:
    struct Impl {
        std::vector<std::string> names;
        std::unordered_map<std::string, Symbol> index;
        bool single_char = true;
    };
    std::shared_ptr<const Impl> impl_;
};

// Checks that every symbol of w is below alphabet.size().
void check_word(const Alphabet& alphabet, const Word& w);

} // namespace ratkit

#pragma once
// Dense bitset over state ids, hashable so it can key subset maps.

#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

namespace ratkit {

using State = std::uint32_t;
inline constexpr State kNoState = 0xFFFFFFFFu;

class StateSet {
public:
    StateSet() = default;
    explicit StateSet(std::size_t universe) : bits_((universe + 63) / 64, 0), universe_(universe) {}

    std::size_t universe() const { return universe_; }
    bool contains(State q) const { return (bits_[q >> 6] >> (q & 63)) & 1u; }
    void insert(State q) { bits_[q >> 6] |= std::uint64_t{1} << (q & 63); }
    void erase(State q) { bits_[q >> 6] &= ~(std::uint64_t{1} << (q & 63)); }

    bool empty() const {
        for (auto w : bits_)
            if (w) return false;
        return true;
    }
    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : bits_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }
    void unite(const StateSet& o) {
        for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
    }
    bool intersects(const StateSet& o) const {
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i] & o.bits_[i]) return true;
        return false;
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t i = 0; i < bits_.size(); ++i) {
            auto w = bits_[i];
            while (w) {
                int b = std::countr_zero(w);
                f(static_cast<State>(i * 64 + static_cast<std::size_t>(b)));
                w &= w - 1;
            }
        }
    }
    std::vector<State> to_vector() const {
        std::vector<State> out;
        for_each([&](State q) { out.push_back(q); });
        return out;
    }

    std::size_t hash() const {
        std::size_t h = 0xcbf29ce484222325ull;
        for (auto w : bits_) h = (h ^ w) * 0x100000001b3ull + (h >> 29);
        return h;
    }
    friend bool operator==(const StateSet&, const StateSet&) = default;

private:
    std::vector<std::uint64_t> bits_;
    std::size_t universe_ = 0;
};

struct StateSetHash {
    std::size_t operator()(const StateSet& s) const { return s.hash(); }
};

} // namespace ratkit

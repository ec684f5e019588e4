#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "sgm/core.hpp"

namespace sgm {

// Fixed-width bitset. Width is set at construction and never changes;
// intersection counting is the hot path (s2 scoring).
class Bitset {
public:
    Bitset() = default;

    explicit Bitset(std::size_t nbits, bool ones = false)
        : nbits_(nbits), words_((nbits + 63) / 64, ones ? ~std::uint64_t{0} : 0) {
        if (ones) trim();
    }

    std::size_t size() const { return nbits_; }

    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    Bitset& operator&=(const Bitset& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
        return *this;
    }

    bool operator==(const Bitset& o) const = default;

    // popcount(*this & o) without materializing the intersection
    std::size_t count_and(const Bitset& o) const {
        std::size_t c = 0;
        for (std::size_t k = 0; k < words_.size(); ++k)
            c += static_cast<std::size_t>(std::popcount(words_[k] & o.words_[k]));
        return c;
    }

    std::vector<std::uint32_t> to_indices() const {
        std::vector<std::uint32_t> out;
        for (std::size_t i = 0; i < nbits_; ++i)
            if (test(i)) out.push_back(static_cast<std::uint32_t>(i));
        return out;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    void trim() {
        if (nbits_ % 64 != 0 && !words_.empty())
            words_.back() &= (std::uint64_t{1} << (nbits_ % 64)) - 1;
    }

    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace sgm

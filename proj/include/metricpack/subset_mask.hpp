#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace metricpack {

// A subset of the point indices of a FiniteMetricSpace, bound to a fixed
// universe size. Indices iterate in ascending order.
class SubsetMask {
public:
    SubsetMask() = default;

    explicit SubsetMask(std::size_t universe)
        : n_(universe), words_((universe + 63) / 64, 0) {}

    static SubsetMask full(std::size_t universe) {
        SubsetMask m(universe);
        if (universe == 0) return m;
        for (auto& w : m.words_) w = ~std::uint64_t{0};
        const std::size_t tail = universe & 63;
        if (tail != 0) m.words_.back() = (std::uint64_t{1} << tail) - 1;
        return m;
    }

    static SubsetMask from_indices(std::size_t universe, std::initializer_list<std::size_t> idx) {
        SubsetMask m(universe);
        for (std::size_t i : idx) m.set(i);
        return m;
    }

    static SubsetMask from_indices(std::size_t universe, const std::vector<std::size_t>& idx) {
        SubsetMask m(universe);
        for (std::size_t i : idx) m.set(i);
        return m;
    }

    std::size_t universe() const { return n_; }

    bool test(std::size_t i) const {
        check(i);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i) {
        check(i);
        words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }

    void reset(std::size_t i) {
        check(i);
        words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool empty() const {
        for (auto w : words_)
            if (w != 0) return false;
        return true;
    }

    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w != 0) {
                const int b = std::countr_zero(w);
                out.push_back((wi << 6) + static_cast<std::size_t>(b));
                w &= w - 1;
            }
        }
        return out;
    }

    bool is_subset_of(const SubsetMask& other) const {
        if (n_ != other.n_) return false;
        for (std::size_t i = 0; i < words_.size(); ++i)
            if ((words_[i] & ~other.words_[i]) != 0) return false;
        return true;
    }

    bool operator==(const SubsetMask&) const = default;

private:
    void check(std::size_t i) const {
        if (i >= n_) throw std::out_of_range("SubsetMask: index beyond universe");
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace metricpack

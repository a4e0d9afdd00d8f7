#pragma once

// Arithmetic over GF(2^q), q in {1, 4, 8, 16}.
//
// Elements are stored as the integer value of their polynomial over GF(2)
// (bit k is the coefficient of x^k). For q <= 8 the context precomputes
// log/antilog tables plus a full product table used by the bulk row
// operations; for q = 16 multiplication is a direct carry-less multiply
// followed by reduction.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncdiss/errors.hpp"

namespace ncdiss {

using Element = std::uint16_t;

namespace gf_detail {

inline constexpr std::array<unsigned, 4> supported_widths{1, 4, 8, 16};

// Built-in reduction polynomials, bit q set.
//   q=1:  x + 1
//   q=4:  x^4 + x + 1
//   q=8:  x^8 + x^4 + x^3 + x + 1
//   q=16: x^16 + x^12 + x^3 + x + 1
inline constexpr std::uint32_t default_polynomial(unsigned q) {
    switch (q) {
        case 1: return 0x3;
        case 4: return 0x13;
        case 8: return 0x11B;
        case 16: return 0x1100B;
        default: return 0;
    }
}

inline constexpr int degree(std::uint32_t p) {
    int d = -1;
    while (p != 0) {
        p >>= 1;
        ++d;
    }
    return d;
}

// Remainder of a modulo b over GF(2)[x].
inline constexpr std::uint32_t poly_mod(std::uint32_t a, std::uint32_t b) {
    const int db = degree(b);
    for (int da = degree(a); da >= db; da = degree(a)) {
        a ^= b << (da - db);
    }
    return a;
}

// Schoolbook carry-less multiply of two reduced elements followed by reduction.
inline constexpr Element clmul_reduce(std::uint32_t a, std::uint32_t b, std::uint32_t poly, unsigned q) {
    std::uint32_t acc = 0;
    for (unsigned bit = 0; bit < q; ++bit) {
        if ((b >> bit) & 1u) acc ^= a << bit;
    }
    return static_cast<Element>(poly_mod(acc, poly));
}

// Trial division by every polynomial of degree 1..deg/2.
inline constexpr bool is_irreducible(std::uint32_t poly, unsigned q) {
    if (degree(poly) != static_cast<int>(q)) return false;
    for (std::uint32_t d = 2; degree(d) <= static_cast<int>(q) / 2; ++d) {
        if (poly_mod(poly, d) == 0) return false;
    }
    return true;
}

}  // namespace gf_detail

/// Immutable description of GF(2^q) with its arithmetic tables.
///
/// Safe to share between threads once constructed. The bulk operations
/// (`axpy`, `scale`) do not validate their inputs; use `element()` when a
/// value comes from outside the library.
class FieldContext {
public:
    explicit FieldContext(unsigned q = 8) : FieldContext(q, gf_detail::default_polynomial(q)) {}

    FieldContext(unsigned q, std::uint32_t reduction_polynomial) : q_(q), poly_(reduction_polynomial) {
        bool supported = false;
        for (unsigned w : gf_detail::supported_widths) supported = supported || w == q;
        if (!supported) {
            throw config_error("unsupported field width q=" + std::to_string(q) +
                               " (expected 1, 4, 8 or 16)");
        }
        if (!gf_detail::is_irreducible(poly_, q_)) {
            throw config_error("reduction polynomial is not irreducible of degree " + std::to_string(q));
        }
        order_ = std::uint32_t{1} << q_;
        if (q_ <= 8) build_tables();
    }

    unsigned bits() const noexcept { return q_; }
    std::uint32_t order() const noexcept { return order_; }
    std::uint32_t polynomial() const noexcept { return poly_; }
    bool contains(std::uint32_t v) const noexcept { return v < order_; }

    Element element(std::uint32_t v) const {
        if (!contains(v)) {
            throw std::out_of_range("value " + std::to_string(v) + " outside GF(2^" + std::to_string(q_) + ")");
        }
        return static_cast<Element>(v);
    }

    static constexpr Element add(Element a, Element b) noexcept { return a ^ b; }

    Element mul(Element a, Element b) const noexcept {
        if (a == 0 || b == 0) return 0;
        if (q_ <= 8) return exp_[log_[a] + log_[b]];
        return gf_detail::clmul_reduce(a, b, poly_, q_);
    }

    Element inv(Element a) const {
        if (a == 0) throw inversion_of_zero();
        if (q_ <= 8) return exp_[(order_ - 1 - log_[a]) % (order_ - 1)];
        // a^(2^q - 2) by square-and-multiply
        Element result = 1;
        Element base = a;
        for (std::uint32_t e = order_ - 2; e != 0; e >>= 1) {
            if (e & 1u) result = mul(result, base);
            base = mul(base, base);
        }
        return result;
    }

    // dst[j] += c * src[j]
    void axpy(std::span<Element> dst, Element c, std::span<const Element> src) const noexcept {
        if (c == 0) return;
        if (c == 1) {
            for (std::size_t j = 0; j < dst.size(); ++j) dst[j] ^= src[j];
            return;
        }
        if (q_ <= 8) {
            const Element* row = &product_[static_cast<std::size_t>(c) * order_];
            for (std::size_t j = 0; j < dst.size(); ++j) dst[j] ^= row[src[j]];
            return;
        }
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] ^= mul(c, src[j]);
    }

    void scale(std::span<Element> v, Element c) const noexcept {
        if (c == 1) return;
        if (q_ <= 8) {
            const Element* row = &product_[static_cast<std::size_t>(c) * order_];
            for (auto& x : v) x = row[x];
            return;
        }
        for (auto& x : v) x = mul(c, x);
    }

private:
    void build_tables() {
        const std::uint32_t group = order_ - 1;
        // smallest generator of the multiplicative group
        Element generator = 0;
        for (std::uint32_t g = 1; g < order_ && generator == 0; ++g) {
            std::uint32_t x = 1;
            std::uint32_t k = 0;
            do {
                x = gf_detail::clmul_reduce(x, g, poly_, q_);
                ++k;
            } while (x != 1);
            if (k == group) generator = static_cast<Element>(g);
        }
        exp_.assign(2 * group, 0);
        log_.assign(order_, 0);
        std::uint32_t x = 1;
        for (std::uint32_t k = 0; k < group; ++k) {
            exp_[k] = exp_[k + group] = static_cast<Element>(x);
            log_[x] = static_cast<Element>(k);
            x = gf_detail::clmul_reduce(x, generator, poly_, q_);
        }
        product_.assign(static_cast<std::size_t>(order_) * order_, 0);
        for (std::uint32_t a = 1; a < order_; ++a) {
            for (std::uint32_t b = 1; b < order_; ++b) {
                product_[a * order_ + b] = exp_[log_[a] + log_[b]];
            }
        }
    }

    unsigned q_;
    std::uint32_t poly_;
    std::uint32_t order_ = 0;
    std::vector<Element> exp_;
    std::vector<Element> log_;
    std::vector<Element> product_;
};

}  // namespace ncdiss

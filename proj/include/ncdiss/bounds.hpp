#pragma once

// Analytic upper bound on the mean stopping time of coded dissemination.
//
// For stage i (total dimension gain i(N-1)) the probability that two nodes
// hold the same subspace is bounded by
//
//   sum_{k=1}^{N-1} min(i/k, (N-i)/(N-k-1)) * A(k) / B
//   A(k) = sum_j (-1)^j C(N-1, j) C(N(i-j+1) - (i+2+k), N-2)
//   B    = sum_j (-1)^j C(N, j)   C(N(i-j+1) - (i+1),   N-1)
//
// and the mean stopping time by
//
//   2N(N-1) / sum_{u!=v} P_uv * (sum_{i=1}^{N-1} 1/(1 - p_i) + N).
//
// C(a, b) = 0 whenever a < 0, b < 0 or b > a, which makes both j-sums
// finite. The k = N-1 term has a zero denominator in its second min
// argument; it is read as +infinity. Everything up to the final
// conversion to double is exact.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ncdiss/errors.hpp"
#include "ncdiss/radio.hpp"

namespace ncdiss {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt binom(std::int64_t a, std::int64_t b) {
    if (a < 0 || b < 0 || b > a) return 0;
    if (b > a - b) b = a - b;
    BigInt result = 1;
    for (std::int64_t k = 1; k <= b; ++k) {
        result *= a - b + k;
        result /= k;
    }
    return result;
}

struct CollisionBound {
    Rational exact;
    double raw = 0.0;  // +infinity when the denominator sum vanishes
    bool degenerate = false;
};

/// Evaluates the same-subspace bound for every stage of one network size.
/// Columns C(a, N-2) and C(a, N-1) are built once by the recurrence
/// C(a+1, b) = C(a, b) (a+1) / (a+1-b), so each stage costs O(N^2)
/// big-integer multiply-adds.
class CollisionBoundTable {
public:
    explicit CollisionBoundTable(std::size_t n) : n_(static_cast<std::int64_t>(n)) {
        if (n < 2) throw std::invalid_argument("collision bound needs N >= 2");
        // largest top argument: N(i+1) - (i+1) at i = N-1, j = 0
        const std::int64_t top = n_ * n_;
        col_minus2_ = binomial_column(n_ - 2, top);
        col_minus1_ = binomial_column(n_ - 1, top);
        row_n_.reserve(n + 1);
        row_n_minus1_.reserve(n + 1);
        for (std::int64_t j = 0; j <= n_; ++j) {
            row_n_.push_back(binom(n_, j));
            row_n_minus1_.push_back(binom(n_ - 1, j));
        }
    }

    std::size_t size() const noexcept { return static_cast<std::size_t>(n_); }

    CollisionBound stage(std::size_t stage_index) const {
        const auto i = static_cast<std::int64_t>(stage_index);
        if (i < 1 || i > n_ - 1) {
            throw std::out_of_range("stage index " + std::to_string(stage_index) + " outside 1.." +
                                    std::to_string(n_ - 1));
        }
        CollisionBound out;
        BigInt denominator = 0;
        for (std::int64_t j = 0; j <= n_; ++j) {
            const BigInt term = row_n_[j] * column(col_minus1_, n_ * (i - j + 1) - (i + 1));
            if (j % 2 == 0) {
                denominator += term;
            } else {
                denominator -= term;
            }
        }
        if (denominator == 0) {
            out.degenerate = true;
            out.raw = std::numeric_limits<double>::infinity();
            return out;
        }
        Rational total = 0;
        for (std::int64_t k = 1; k <= n_ - 1; ++k) {
            BigInt numerator = 0;
            for (std::int64_t j = 0; j <= n_ - 1; ++j) {
                const BigInt term = row_n_minus1_[j] * column(col_minus2_, n_ * (i - j + 1) - (i + 2 + k));
                if (j % 2 == 0) {
                    numerator += term;
                } else {
                    numerator -= term;
                }
            }
            if (numerator == 0) continue;
            Rational weight(i, k);
            if (n_ - k - 1 > 0) {
                const Rational other(n_ - i, n_ - k - 1);
                if (other < weight) weight = other;
            }
            total += weight * Rational(numerator, denominator);
        }
        out.exact = total;
        out.raw = static_cast<double>(total);
        out.degenerate = total >= 1;
        return out;
    }

private:
    // entries C(a, b) for a = 0..top
    static std::vector<BigInt> binomial_column(std::int64_t b, std::int64_t top) {
        std::vector<BigInt> col(static_cast<std::size_t>(top + 1), 0);
        if (b > top) return col;
        col[static_cast<std::size_t>(b)] = 1;
        for (std::int64_t a = b; a < top; ++a) {
            col[static_cast<std::size_t>(a + 1)] = col[static_cast<std::size_t>(a)] * (a + 1) / (a + 1 - b);
        }
        return col;
    }

    static const BigInt& column(const std::vector<BigInt>& col, std::int64_t a) {
        static const BigInt zero = 0;
        if (a < 0 || a >= static_cast<std::int64_t>(col.size())) return zero;
        return col[static_cast<std::size_t>(a)];
    }

    std::int64_t n_;
    std::vector<BigInt> col_minus2_;
    std::vector<BigInt> col_minus1_;
    std::vector<BigInt> row_n_;
    std::vector<BigInt> row_n_minus1_;
};

inline CollisionBound p_same_subspace_bound(std::size_t n, std::size_t stage_index) {
    if (n < 2) throw std::out_of_range("collision bound needs N >= 2");
    if (stage_index < 1 || stage_index > n - 1) {
        throw std::out_of_range("stage index " + std::to_string(stage_index) + " outside 1.." +
                                std::to_string(n - 1));
    }
    return CollisionBoundTable(n).stage(stage_index);
}

struct BoundInput {
    std::size_t n = 0;
    double sum_reception = 0.0;  // sum over u != v of P_uv
};

struct BoundResult {
    double value = 0.0;  // slots; +infinity when degenerate
    bool degenerate = false;
    std::vector<CollisionBound> per_stage;  // p_1 .. p_{N-1}
};

inline BoundResult expected_stopping_bound(const BoundInput& input) {
    if (input.n < 2) throw std::invalid_argument("stopping-time bound needs N >= 2");
    if (!(input.sum_reception > 0.0)) {
        throw disconnected_network("stopping-time bound needs sum of P_uv > 0");
    }
    const CollisionBoundTable table(input.n);
    BoundResult out;
    out.per_stage.reserve(input.n - 1);
    Rational stages = 0;
    for (std::size_t i = 1; i < input.n; ++i) {
        out.per_stage.push_back(table.stage(i));
        const auto& p = out.per_stage.back();
        if (p.degenerate) {
            out.degenerate = true;
        } else {
            stages += 1 / (1 - p.exact);
        }
    }
    if (out.degenerate) {
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    const auto n = static_cast<double>(input.n);
    const double prefactor = 2.0 * n * (n - 1.0) / input.sum_reception;
    out.value = prefactor * static_cast<double>(stages + static_cast<long long>(input.n));
    return out;
}

inline BoundResult expected_stopping_bound(const ReceptionMatrix& matrix) {
    return expected_stopping_bound(BoundInput{matrix.size(), matrix.off_diagonal_sum()});
}

}  // namespace ncdiss

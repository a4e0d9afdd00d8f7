#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ncdiss/bounds.hpp"

using namespace ncdiss;

namespace {

// Direct long-double evaluation of the same-subspace bound with its own
// binomial and generous j limits; independent of CollisionBoundTable.
long double naive_binom(long long a, long long b) {
    if (a < 0 || b < 0 || b > a) return 0;
    long double r = 1;
    for (long long k = 1; k <= b; ++k) r = r * static_cast<long double>(a - b + k) / static_cast<long double>(k);
    return r;
}

long double naive_collision(int n, int i) {
    long double den = 0;
    for (int j = 0; j < 3 * n; ++j) {
        den += (j % 2 ? -1 : 1) * naive_binom(n, j) * naive_binom(static_cast<long long>(n) * (i - j + 1) - (i + 1), n - 1);
    }
    long double total = 0;
    for (int k = 1; k <= n - 1; ++k) {
        long double num = 0;
        for (int j = 0; j < 3 * n; ++j) {
            num += (j % 2 ? -1 : 1) * naive_binom(n - 1, j) *
                   naive_binom(static_cast<long long>(n) * (i - j + 1) - (i + 2 + k), n - 2);
        }
        long double weight = static_cast<long double>(i) / k;
        if (n - k - 1 > 0) weight = std::min(weight, static_cast<long double>(n - i) / (n - k - 1));
        total += weight * num / den;
    }
    return total;
}

}  // namespace

TEST(Bounds, Binomial) {
    EXPECT_EQ(binom(5, 2), 10);
    EXPECT_EQ(binom(3, 0), 1);
    EXPECT_EQ(binom(-2, 0), 0);
    EXPECT_EQ(binom(3, 4), 0);
    EXPECT_EQ(binom(3, -1), 0);
    EXPECT_EQ(binom(0, 0), 1);
    EXPECT_EQ(binom(900, 29), BigInt("3376583754549225797833615433837171766210141287747664000"));  // Python math.comb
}

TEST(Bounds, CollisionHandEvaluations) {
    const auto n2 = p_same_subspace_bound(2, 1);
    EXPECT_EQ(n2.exact, Rational(1, 2));
    EXPECT_FALSE(n2.degenerate);
    EXPECT_EQ(p_same_subspace_bound(3, 1).exact, Rational(5, 12));
    EXPECT_EQ(p_same_subspace_bound(3, 2).exact, Rational(5, 6));
}

TEST(Bounds, CollisionFrozenExactValues) {
    // exact rational evaluation with an independent Python Fraction script
    const CollisionBoundTable t4(4);
    EXPECT_EQ(t4.stage(1).exact, Rational(47, 120));
    EXPECT_EQ(t4.stage(2).exact, Rational(23, 33));
    EXPECT_EQ(t4.stage(3).exact, Rational(7, 8));
    const CollisionBoundTable t5(5);
    EXPECT_EQ(t5.stage(1).exact, Rational(319, 840));
    EXPECT_EQ(t5.stage(2).exact, Rational(1201, 1920));
    EXPECT_EQ(t5.stage(3).exact, Rational(2957, 3840));
    EXPECT_EQ(t5.stage(4).exact, Rational(92, 105));
}

TEST(Bounds, CollisionMatchesNaiveEvaluation) {
    for (int n = 2; n <= 12; ++n) {
        const CollisionBoundTable table(n);
        for (int i = 1; i < n; ++i) {
            const auto p = table.stage(i);
            EXPECT_NEAR(p.raw, static_cast<double>(naive_collision(n, i)), 1e-9) << n << "," << i;
            EXPECT_GE(p.raw, 0.0);
            EXPECT_FALSE(p.degenerate);
            EXPECT_EQ(p.exact, p_same_subspace_bound(n, i).exact);
        }
    }
}

TEST(Bounds, CollisionNonDegenerateUpTo80) {
    for (int n : {23, 30, 35, 80}) {
        const CollisionBoundTable table(n);
        for (int i = 1; i < n; ++i) {
            const auto p = table.stage(i);
            EXPECT_GE(p.raw, 0.0);
            EXPECT_LT(p.raw, 1.0);
        }
    }
}

TEST(Bounds, CollisionRangeErrors) {
    EXPECT_THROW(p_same_subspace_bound(3, 0), std::out_of_range);
    EXPECT_THROW(p_same_subspace_bound(3, 3), std::out_of_range);
    EXPECT_THROW(p_same_subspace_bound(1, 1), std::out_of_range);
}

TEST(Bounds, StoppingBoundTwoNodes) {
    const auto b = expected_stopping_bound(complete_graph(2, 1.0));
    EXPECT_FALSE(b.degenerate);
    EXPECT_EQ(b.value, 8.0);
    ASSERT_EQ(b.per_stage.size(), 1u);
}

TEST(Bounds, StoppingBoundThreeNodes) {
    // (2*3*2 / 6) * (1/(1-5/12) + 1/(1-5/6) + 3) = 2 * (12/7 + 6 + 3)
    const auto b = expected_stopping_bound(complete_graph(3, 1.0));
    EXPECT_NEAR(b.value, 2.0 * (12.0 / 7.0 + 9.0), 1e-12);
}

TEST(Bounds, StoppingBoundErrors) {
    EXPECT_THROW(expected_stopping_bound(complete_graph(3, 0.0)), disconnected_network);
    EXPECT_THROW(expected_stopping_bound(BoundInput{1, 1.0}), std::invalid_argument);
}

TEST(Bounds, HalvesWhenReceptionDoubles) {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> prob(0.01, 0.5);
    for (int n : {2, 3, 6, 10}) {
        ReceptionMatrix m(n), doubled(n);
        for (int u = 0; u < n; ++u) {
            for (int v = 0; v < n; ++v) {
                const double p = prob(gen);
                m.set(u, v, p);
                doubled.set(u, v, 2 * p);
            }
        }
        const auto a = expected_stopping_bound(m);
        const auto b = expected_stopping_bound(doubled);
        EXPECT_EQ(b.value, a.value / 2) << n;
    }
}

TEST(Bounds, AtLeastNWhenFinite) {
    for (int n = 2; n <= 20; ++n) {
        for (double p : {0.1, 0.5, 1.0}) {
            const auto b = expected_stopping_bound(complete_graph(n, p));
            ASSERT_FALSE(b.degenerate);
            EXPECT_GE(b.value, n);
        }
    }
}

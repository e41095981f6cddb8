#include <gtest/gtest.h>

#include <qlog/numbers.hpp>

#include "support.hpp"

using namespace qlog;

namespace {

std::vector<long long> to_ll(const std::vector<BigInt>& v) {
    std::vector<long long> out;
    for (const auto& x : v) out.push_back(x.convert_to<long long>());
    return out;
}

ContinuedFraction golden_cf(std::size_t depth) {
    return cf_expand(QuadraticSurd{-1, 5, 2}, depth);
}

}  // namespace

TEST(Rational, Reduced) {
    Rational r(6, -4);
    EXPECT_EQ(r.n, -3);
    EXPECT_EQ(r.m, 2);
    EXPECT_THROW(Rational(1, 0), InvalidArgument);
}

TEST(CfExpand, Half) {
    auto cf = cf_expand(Rational(1, 2));
    EXPECT_EQ(cf.a0, 0);
    EXPECT_EQ(to_ll(cf.quotients), (std::vector<long long>{2}));
}

TEST(CfExpand, CanonicalLastQuotient) {
    for (auto [n, m] : std::vector<std::pair<long long, long long>>{{3, 7}, {13, 21}, {355, 113}, {1, 3}}) {
        auto cf = cf_expand(Rational(n, m));
        ASSERT_FALSE(cf.quotients.empty());
        EXPECT_GE(cf.quotients.back(), 2);
        for (const auto& a : cf.quotients) EXPECT_GE(a, 1);
        EXPECT_EQ(cf_value(cf, cf.depth()), Rational(n, m));
    }
}

TEST(CfExpand, GoldenAllOnes) {
    auto cf = golden_cf(40);
    EXPECT_EQ(cf.a0, 0);
    EXPECT_EQ(cf.period, 1u);
    for (std::size_t k = 1; k <= 40; ++k) EXPECT_EQ(cf.quotient(k), 1);
}

TEST(CfExpand, SqrtThreeMinusOnePeriod) {
    auto cf = cf_expand(QuadraticSurd{-1, 3, 1}, 20);
    EXPECT_EQ(cf.a0, 0);
    EXPECT_EQ(cf.period, 2u);
    for (std::size_t k = 1; k <= 20; ++k) EXPECT_EQ(cf.quotient(k), k % 2 ? 1 : 2);
}

TEST(CfExpand, FloatSampleMatchesExact) {
    Real x = (boost::multiprecision::sqrt(Real(5)) - 1) / 2;
    auto cf = cf_expand(RealSample{x, Real(1e-90)}, 60);
    for (std::size_t k = 1; k <= 60; ++k) EXPECT_EQ(cf.quotient(k), 1);
    EXPECT_THROW(cf_expand(RealSample{x, Real(1e-10)}, 60), PrecisionExhausted);
}

TEST(Convergents, FibonacciDenominators) {
    auto c = convergents(golden_cf(10), 4);
    std::vector<long long> m;
    for (auto& x : c) m.push_back(x.m.convert_to<long long>());
    EXPECT_EQ(m, (std::vector<long long>{1, 1, 2, 3, 5}));
}

TEST(Convergents, SeedCase) {
    auto cf = cf_expand(Rational(22, 7));
    auto c = convergents(cf, 0);
    EXPECT_EQ(c[0].n, 3);
    EXPECT_EQ(c[0].m, 1);
}

TEST(Convergents, SqrtThreeMinusOneIndexFive) {
    auto cf = cf_expand(QuadraticSurd{-1, 3, 1}, 10);
    auto c = convergents(cf, 5);
    // [0; 1, 2, 1, 2, 1] evaluated directly
    auto direct = cf_value(cf_from_quotients(0, {1, 2, 1, 2, 1}, true), 5);
    EXPECT_EQ(c[5].n, direct.n);
    EXPECT_EQ(c[5].m, direct.m);
    EXPECT_EQ(c[5].n, 11);
    EXPECT_EQ(c[5].m, 15);
}

TEST(IsConvergent, Examples) {
    auto cf = golden_cf(40);
    EXPECT_TRUE(is_convergent(cf, Rational(3, 5), 20));
    EXPECT_FALSE(is_convergent(cf, Rational(1, 3), 20));
}

TEST(IsConvergent, LegendreCriterion) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; ++t) {
        auto x = test::random_dyadic(rng);
        auto cf = cf_expand(x);
        for (long long m = 1; m <= 200; ++m) {
            BigInt n = floor_div(x.n * m + x.m / 2, x.m);
            // |x - n/m| < 1/(2 m^2)  <=>  2 m |m x - n| < 1
            BigInt num = boost::multiprecision::abs(x.n * m - n * x.m);
            if (2 * m * num < x.m && boost::multiprecision::gcd(n, BigInt(m)) == 1) {
                EXPECT_TRUE(is_convergent(cf, Rational(n, BigInt(m)), cf.depth()));
            }
        }
    }
}

TEST(Convergents, DeterminantIdentity) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t) {
        auto cf = cf_expand(test::random_dyadic(rng));
        auto c = convergents(cf, cf.depth());
        for (std::size_t k = 1; k < c.size(); ++k) {
            BigInt det = c[k].m * c[k - 1].n - c[k].n * c[k - 1].m;
            EXPECT_EQ(det, k % 2 ? -1 : 1) << "k=" << k;
        }
    }
}

TEST(Convergents, BetaSandwichRandomReals) {
    std::mt19937_64 rng(2024);
    int failures = 0;
    for (int t = 0; t < 1000; ++t) {
        auto x = test::random_dyadic(rng);
        auto cf = cf_expand(x, 40);
        ASSERT_GE(cf.depth(), 31u);
        auto c = convergents(cf, 31);
        for (std::size_t k = 0; k <= 30; ++k) {
            // exact rational arithmetic: beta_k = |m_k x - n_k|
            BigInt bnum = boost::multiprecision::abs(c[k].m * x.n - c[k].n * x.m);
            BigInt m1 = c[k + 1].m;
            bool lower = 2 * bnum * m1 > x.m;
            bool upper = bnum * m1 < x.m;
            if (!lower || !upper) ++failures;
        }
    }
    EXPECT_EQ(failures, 0);
}

TEST(Convergents, BestApproximation) {
    std::mt19937_64 rng(99);
    int failures = 0;
    for (int t = 0; t < 100; ++t) {
        auto x = test::random_dyadic(rng);
        auto cf = cf_expand(x, 40);
        auto c = convergents(cf, 20);
        for (std::size_t k = 1; k <= 20 && c[k].m <= 10000; ++k) {
            BigInt best = boost::multiprecision::abs(c[k].m * x.n - c[k].n * x.m);
            long long mk = c[k].m.convert_to<long long>();
            for (long long m = 1; m <= mk; ++m) {
                BigInt n = floor_div(x.n * m + x.m / 2, x.m);
                for (BigInt nn = n - 1; nn <= n + 1; ++nn) {
                    if (m == mk && nn == c[k].n) continue;
                    if (!(boost::multiprecision::abs(BigInt(m) * x.n - nn * x.m) > best)) ++failures;
                }
            }
        }
    }
    EXPECT_EQ(failures, 0);
}

TEST(Arithmetic, Mobius) {
    EXPECT_EQ(mobius(1), 1);
    EXPECT_EQ(mobius(4), 0);
    EXPECT_EQ(mobius(6), 1);
    EXPECT_EQ(mobius(30), -1);
    for (long long n = 1; n <= 10000; ++n) {
        long long s = 0;
        for (long long d : divisors(n)) s += mobius(d);
        ASSERT_EQ(s, n == 1 ? 1 : 0) << n;
    }
}

TEST(Arithmetic, Totient) {
    EXPECT_EQ(totient(1), 1);
    EXPECT_EQ(totient(12), 4);
    for (long long n = 1; n <= 200; ++n) {
        long long c = 0;
        for (long long k = 1; k <= n; ++k) c += std::gcd(k, n) == 1;
        ASSERT_EQ(totient(n), c);
    }
    const long long M = 2000;
    double s = 0;
    for (long long m = 1; m <= M; ++m) s += static_cast<double>(totient(m));
    EXPECT_NEAR(s / (3.0 * M * M / (pi * pi)), 1.0, 2e-3);
}

TEST(Roots, PrimitiveRoots) {
    auto r1 = primitive_roots(1);
    ASSERT_EQ(r1.size(), 1u);
    EXPECT_NEAR(std::abs(r1[0].value - 1.0), 0, 1e-16);
    auto r4 = primitive_roots(4);
    ASSERT_EQ(r4.size(), 2u);
    EXPECT_NEAR(std::abs(r4[0].value - I), 0, 1e-15);
    EXPECT_NEAR(std::abs(r4[1].value + I), 0, 1e-15);
    auto r6 = primitive_roots(6);
    ASSERT_EQ(r6.size(), 2u);
    EXPECT_NEAR(std::abs(r6[0].value - std::exp(I * pi / 3.0)), 0, 1e-15);
    EXPECT_NEAR(std::abs(r6[1].value - std::exp(5.0 * I * pi / 3.0)), 0, 1e-15);
    for (long long m = 1; m <= 60; ++m) {
        auto r = primitive_roots(m);
        ASSERT_EQ(static_cast<long long>(r.size()), totient(m));
        for (auto& x : r) {
            EXPECT_EQ(x.order(), m);
            EXPECT_EQ(x.frac().m, m);
            EXPECT_NEAR(std::abs(x.value), 1.0, 1e-15);
        }
    }
}

TEST(Roots, FareyOrder) {
    auto f = farey_roots(12);
    for (std::size_t i = 1; i < f.size(); ++i)
        EXPECT_TRUE(f[i - 1].m < f[i].m || (f[i - 1].m == f[i].m && f[i - 1].n < f[i].n));
}

TEST(Arithmetic, RamanujanSum) {
    for (long long n = -5; n <= 5; ++n) EXPECT_EQ(ramanujan_sum(1, n), 1);
    for (long long m = 1; m <= 50; ++m) {
        EXPECT_EQ(ramanujan_sum(m, 1), mobius(m));
        EXPECT_EQ(ramanujan_sum(m, 3 * m), totient(m));
        auto roots = primitive_roots(m);
        for (long long n = -50; n <= 50; ++n) {
            CSum s;
            for (auto& r : roots) s += unit_root(r.n * n, m);
            ASSERT_EQ(ramanujan_sum(m, n), std::llround(s.value().real())) << m << " " << n;
        }
    }
}

#include <gtest/gtest.h>

#include <random>

#include <boost/math/special_functions/expint.hpp>

#include <qlog/borel.hpp>

#include "support.hpp"

using namespace qlog;

namespace {

FormalSeries1 random_formal(std::mt19937_64& rng, std::size_t N, bool constant = true) {
    std::uniform_real_distribution<double> u(-1, 1);
    FormalSeries1 s;
    s.a.resize(N + 1);
    for (std::size_t n = 0; n <= N; ++n) s.a[n] = cplx(u(rng), u(rng));
    if (!constant) s.a[0] = 0;
    return s;
}

BorelGerm germ_of(const FormalSeries1& s) {
    auto [a0, g] = formal_borel(s);
    g.delta = a0;
    return g;
}

BorelGerm exp_germ(cplx a, std::size_t N = 20) {
    BorelGerm g;
    cplx t = 1;
    for (std::size_t n = 0; n < N; ++n) {
        g.b.push_back(t);
        t *= a / static_cast<double>(n + 1);
    }
    g.eval = [a](cplx xi) { return std::exp(a * xi); };
    g.growth = Growth{std::abs(a), 1};
    return g;
}

void expect_same(const BorelGerm& a, const BorelGerm& b, double tol) {
    ASSERT_EQ(a.b.size(), b.b.size());
    EXPECT_NEAR(std::abs(a.delta - b.delta), 0, tol);
    for (std::size_t n = 0; n < a.b.size(); ++n) EXPECT_NEAR(std::abs(a.b[n] - b.b[n]), 0, tol) << n;
}

// w-polynomials truncated at degree N, w = 1/x
std::vector<cplx> poly_mul(const std::vector<cplx>& p, const std::vector<cplx>& q, std::size_t N) {
    std::vector<cplx> r(N + 1, 0.0);
    for (std::size_t i = 0; i <= N && i < p.size(); ++i)
        for (std::size_t j = 0; i + j <= N && j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
}

}  // namespace

TEST(FormalBorel, Examples) {
    auto [a0, g] = formal_borel(FormalSeries1{{0, 1}, {}});
    EXPECT_EQ(a0, cplx(0));
    ASSERT_EQ(g.b.size(), 1u);
    EXPECT_EQ(g.b[0], cplx(1));

    FormalSeries1 euler;
    euler.a.push_back(0);
    double f = 1;
    for (int n = 0; n < 20; ++n) {
        euler.a.push_back(f);
        f *= n + 1;
    }
    auto [e0, eg] = formal_borel(euler);
    EXPECT_EQ(e0, cplx(0));
    for (auto c : eg.b) EXPECT_NEAR(std::abs(c - 1.0), 0, 1e-15);

    auto [c0, cg] = formal_borel(FormalSeries1{{cplx(2, 1), 3}, {}});
    EXPECT_EQ(c0, cplx(2, 1));
}

TEST(FormalBorel, GevreyCertificateGivesRadius) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    const double c0 = 2, c1 = 3;
    FormalSeries1 s;
    s.gevrey1 = std::make_pair(c0, c1);
    for (int n = 0; n <= 40; ++n)
        s.a.push_back(0.9 * c0 * std::pow(c1, n) * std::tgamma(n + 1.0) * std::polar(1.0, 6 * u(rng)));
    ASSERT_TRUE(s.certificate_holds());
    auto [a0, g] = formal_borel(s);
    // |b_n| r^n stays bounded for r < 1/c1
    double r = 0.99 / c1, mx = 0;
    for (std::size_t n = 0; n < g.b.size(); ++n) mx = std::max(mx, std::abs(g.b[n]) * std::pow(r, static_cast<double>(n)));
    EXPECT_LE(mx, c0 * c1 * 41);
    s.a[5] *= 2;
    EXPECT_FALSE(s.certificate_holds());
}

TEST(FormalBorel, InverseRoundTrip) {
    std::mt19937_64 rng(4);
    auto s = random_formal(rng, 12);
    auto [a0, g] = formal_borel(s);
    auto t = inverse_borel(a0, g);
    ASSERT_EQ(t.a.size(), s.a.size());
    for (std::size_t n = 0; n < s.a.size(); ++n) EXPECT_NEAR(std::abs(s.a[n] - t.a[n]), 0, 1e-12 * std::tgamma(n + 1.0));
}

TEST(Convolve, UnitAndOneStarOne) {
    std::mt19937_64 rng(5);
    auto g = germ_of(random_formal(rng, 10, false));
    BorelGerm unit;
    unit.delta = 1;
    expect_same(convolve(unit, g, g.b.size()), g, 1e-15);
    expect_same(convolve(g, unit, g.b.size()), g, 1e-15);

    BorelGerm one;
    one.b = {1};
    auto h = convolve(one, one, 4);
    EXPECT_EQ(h.b[0], cplx(0));
    EXPECT_NEAR(std::abs(h.b[1] - 1.0), 0, 1e-16);
    EXPECT_EQ(h.b[2], cplx(0));
}

TEST(Convolve, MatchesFormalProduct) {
    std::mt19937_64 rng(6);
    for (int k = 0; k < 10; ++k) {
        const std::size_t N = 12;
        auto f = random_formal(rng, N), g = random_formal(rng, N);
        auto h = convolve(germ_of(f), germ_of(g), N);
        auto oracle = germ_of(formal_multiply(f, g, N));
        for (std::size_t n = 0; n < N; ++n)
            EXPECT_NEAR(std::abs(h.b[n] - oracle.b[n]), 0, 1e-13 * std::max(1.0, std::abs(oracle.b[n]))) << n;
        EXPECT_NEAR(std::abs(h.delta - oracle.delta), 0, 1e-15);
    }
}

TEST(Convolve, CommutativeAndAssociative) {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 10; ++k) {
        const std::size_t N = 10;
        auto a = germ_of(random_formal(rng, N)), b = germ_of(random_formal(rng, N)), c = germ_of(random_formal(rng, N));
        expect_same(convolve(a, b, N), convolve(b, a, N), 1e-14);
        expect_same(convolve(convolve(a, b, N), c, N), convolve(a, convolve(b, c, N), N), 1e-13);
    }
}

TEST(TranslateDilate, Identities) {
    std::mt19937_64 rng(8);
    auto g = germ_of(random_formal(rng, 14, false));
    expect_same(borel_translate(g, 0), g, 0);
    expect_same(borel_dilate(g, 1), g, 0);
    expect_same(borel_translate(borel_translate(g, cplx(0.7, -0.3)), cplx(-0.7, 0.3)), g, 1e-13);
    expect_same(borel_dilate(borel_dilate(g, cplx(2, 1)), 1.0 / cplx(2, 1)), g, 1e-14);
    EXPECT_THROW(borel_dilate(g, 0), InvalidArgument);
}

TEST(TranslateDilate, DilateMatchesSubstitution) {
    std::mt19937_64 rng(9);
    auto s = random_formal(rng, 12, false);
    cplx lam(1.5, -0.5);
    FormalSeries1 t = s;
    for (std::size_t n = 0; n < t.a.size(); ++n) t.a[n] *= std::pow(lam, -static_cast<int>(n));
    expect_same(borel_dilate(germ_of(s), lam), germ_of(t), 1e-14);
}

TEST(CompositionConvolution, ZeroIsIdentity) {
    std::mt19937_64 rng(10);
    auto g = germ_of(random_formal(rng, 12, false));
    BorelGerm zero;
    zero.b.assign(12, 0.0);
    expect_same(composition_convolution(g, zero, 12, 20), g, 0);
}

TEST(CompositionConvolution, ConstantIsTranslate) {
    std::mt19937_64 rng(11);
    auto g = germ_of(random_formal(rng, 12, false));
    BorelGerm L;
    L.delta = cplx(0.4, 0.2);
    expect_same(composition_convolution(g, L, 12, 60), borel_translate(g, L.delta), 1e-13);
    EXPECT_THROW(composition_convolution(g, L, 12, 3), NotConverged);
}

TEST(CompositionConvolution, MatchesFormalSubstitution) {
    std::mt19937_64 rng(12);
    const std::size_t N = 8;
    auto phi = random_formal(rng, N, false);
    auto L = random_formal(rng, N, false);
    // phi(x + L(x)) in w = 1/x: u = w / (1 + w L), phi = sum a_n u^n
    std::vector<cplx> wl(N + 1, 0.0);
    for (std::size_t n = 1; n < N; ++n) wl[n + 1] = L.a[n];
    std::vector<cplx> inv(N + 1, 0.0), p(N + 1, 0.0);
    p[0] = 1;
    for (std::size_t k = 0; k <= N; ++k) {
        double sgn = k % 2 ? -1.0 : 1.0;
        for (std::size_t i = 0; i <= N; ++i) inv[i] += sgn * p[i];
        p = poly_mul(p, wl, N);
    }
    std::vector<cplx> w(N + 1, 0.0);
    w[1] = 1;
    auto u = poly_mul(w, inv, N);
    std::vector<cplx> out(N + 1, 0.0), un(N + 1, 0.0);
    un[0] = 1;
    for (std::size_t n = 0; n <= N; ++n) {
        for (std::size_t i = 0; i <= N; ++i) out[i] += phi.a[n] * un[i];
        un = poly_mul(un, u, N);
    }
    auto oracle = germ_of(FormalSeries1{out, {}});
    auto got = composition_convolution(germ_of(phi), germ_of(L), N, 20);
    expect_same(got, oracle, 1e-13);
}

TEST(Laplace, Elementary) {
    BorelGerm one;
    one.b = {1};
    one.eval = [](cplx) { return cplx(1); };
    one.growth = Growth{0, 1};
    for (cplx x : {cplx(1), cplx(2, 1), cplx(0.5, -3)}) {
        auto r = laplace_ray(one, 0, x);
        EXPECT_NEAR(std::abs(r.value - 1.0 / x), 0, 1e-11);
    }
    BorelGerm xi;
    xi.b = {0, 1};
    xi.eval = [](cplx s) { return s; };
    xi.growth = Growth{1, 1};
    auto r = laplace_ray(xi, 0, 3);
    EXPECT_NEAR(std::abs(r.value - 1.0 / 9), 0, 1e-11);
    EXPECT_LE(std::abs(r.value - 1.0 / 9), r.error + 1e-15);
}

TEST(Laplace, ExponentialIntegral) {
    BorelGerm g;
    g.eval = [](cplx s) { return 1.0 / (1.0 + s); };
    g.growth = Growth{0, 1};
    g.singular = {-1};
    auto r = laplace_ray(g, 0, 5, {1e-12, 1e-8, 1});
    double oracle = std::exp(5.0) * boost::math::expint(1, 5.0);
    EXPECT_NEAR(r.value.real(), oracle, 1e-9);
    EXPECT_NEAR(r.value.imag(), 0, 1e-12);
    EXPECT_THROW(laplace_ray(g, pi, -5), RayHitsSingularity);
}

TEST(Laplace, Errors) {
    auto g = exp_germ(2);
    EXPECT_THROW(laplace_ray(g, 0, 1.5), DampingInsufficient);
    BorelGerm bare;
    bare.b = {1};
    EXPECT_THROW(laplace_ray(bare, 0, 1), InvalidArgument);
}

TEST(Laplace, RoundTripForConvergentSeries) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 10; ++k) {
        cplx a(u(rng), u(rng));
        auto g = exp_germ(a, 40);
        for (cplx xi : {cplx(0.01), cplx(0, 0.02), cplx(-0.03, 0.01), cplx(0.05, 0.05), cplx(0.1)})
            EXPECT_NEAR(std::abs(g.taylor(xi) - g.eval(xi)), 0, 1e-15);
        cplx x(4 + u(rng), 2 * u(rng));
        // direct sum of sum a^n x^{-n-1}
        auto s = inverse_borel(0, g);
        cplx direct = 0;
        for (std::size_t n = s.a.size(); n-- > 1;) direct = (direct + s.a[n]) / x;
        auto r = laplace_ray(g, 0, x);
        EXPECT_NEAR(std::abs(r.value - 1.0 / (x - a)), 0, 1e-9);
        EXPECT_NEAR(std::abs(r.value - direct), 0, 1e-9);
    }
}

TEST(Laplace, TranslationRule) {
    auto g = exp_germ(cplx(0.3, 0.4));
    for (cplx b : {cplx(0.5), cplx(-0.2, 0.3), cplx(0, 1)}) {
        for (cplx x : {cplx(3), cplx(2.5, -1)}) {
            auto l = laplace_ray(borel_translate(g, b), 0, x);
            auto r = laplace_ray(g, 0, x + b);
            EXPECT_LE(std::abs(l.value - r.value), l.error + r.error);
        }
    }
}

TEST(Laplace, RotatedRayAgrees) {
    BorelGerm g;
    g.eval = [](cplx s) { return 1.0 / (1.0 + s); };
    g.growth = Growth{0, 1};
    g.singular = {-1};
    cplx x(4, 1);
    auto a = laplace_ray(g, 0, x);
    auto b = laplace_ray(g, -0.2, x);
    EXPECT_LE(std::abs(a.value - b.value), a.error + b.error + 1e-14);
}

TEST(Laplace, TaylorRemainderEnvelope) {
    // f(x) = Laplace of 1/(1+xi) ~ sum (-1)^n n! x^{-n-1}; remainders at t = 1/x
    BorelGerm g;
    g.eval = [](cplx s) { return 1.0 / (1.0 + s); };
    g.growth = Growth{0, 1};
    g.singular = {-1};
    const double t = 0.1;
    double f = laplace_ray(g, 0, 1 / t, {1e-15, 1e-8, 1}).value.real();
    std::vector<double> logr;
    double partial = 0;
    for (int N = 1; N <= 12; ++N) {
        partial += (N % 2 ? 1.0 : -1.0) * std::tgamma(N) * std::pow(t, N);
        double R = std::abs(f - partial);
        logr.push_back(std::log(R) - std::lgamma(N + 1.0) - N * std::log(t));
    }
    // fit log c0 + N log c1 and take c0 from the worst point
    Eigen::MatrixXd A(12, 2);
    Eigen::VectorXd y(12);
    for (int i = 0; i < 12; ++i) {
        A(i, 0) = 1;
        A(i, 1) = i + 1;
        y(i) = logr[static_cast<std::size_t>(i)];
    }
    Eigen::Vector2d beta = A.colPivHouseholderQr().solve(y);
    double c1 = std::exp(beta(1));
    double shift = (y - A * beta).maxCoeff();
    double c0 = std::exp(beta(0) + shift);
    EXPECT_GT(c1, 0.5);
    EXPECT_LT(c1, 1.5);
    EXPECT_LT(c0, 1.0);
    for (int N = 1; N <= 12; ++N)
        EXPECT_LE(logr[static_cast<std::size_t>(N - 1)], std::log(c0) + N * std::log(c1) + 1e-12);
}

TEST(Gevrey, Examples) {
    std::vector<double> fact, fact2, geo;
    for (int k = 0; k <= 60; ++k) {
        fact.push_back(std::lgamma(k + 1.0));
        fact2.push_back(std::lgamma(2 * k + 1.0));
        geo.push_back(k * std::log(3.0));
    }
    EXPECT_NEAR(gevrey_order_fit_log(fact, 10, 60).tau, 1, 0.05);
    EXPECT_NEAR(gevrey_order_fit_log(fact2, 10, 60).tau, 2, 0.05);
    EXPECT_NEAR(gevrey_order_fit_log(geo, 10, 60).tau, 0, 1e-10);
    std::vector<cplx> c(30, 1.0);
    c[15] = 0;
    EXPECT_THROW(gevrey_order_fit(c, 5, 20), DegenerateFit);
    EXPECT_THROW(gevrey_order_fit_log(fact, 10, 12), DegenerateFit);
}

TEST(Gevrey, BandCoversNoisyTau) {
    std::mt19937_64 rng(14);
    std::normal_distribution<double> n(0, 0.3);
    std::vector<double> la;
    for (int k = 0; k <= 80; ++k) la.push_back(1.5 * std::lgamma(k + 1.0) + n(rng));
    auto f = gevrey_order_fit_log(la, 10, 80);
    EXPECT_NEAR(f.tau, 1.5, 0.06);
    EXPECT_GT(f.band, 0);
}

TEST(Carleman, Examples) {
    EXPECT_TRUE(carleman_gevrey(1).quasianalytic);
    EXPECT_TRUE(carleman_gevrey(0.5).quasianalytic);
    EXPECT_FALSE(carleman_gevrey(2).quasianalytic);
    EXPECT_TRUE(carleman_gevrey(2).decided);
    auto v = carleman_table(std::vector<double>(50, 1.0));
    EXPECT_FALSE(v.decided);
    for (double b : v.beta) EXPECT_DOUBLE_EQ(b, 1);
    for (std::size_t i = 0; i < v.partial_sums.size(); ++i) EXPECT_DOUBLE_EQ(v.partial_sums[i], static_cast<double>(i + 1));
    EXPECT_FALSE(v.note.empty());
    EXPECT_THROW(carleman_table({1, 0, 2}), InvalidArgument);
}

TEST(Carleman, BetaIsMonotoneInfimum) {
    std::vector<double> M;
    for (int n = 1; n <= 40; ++n) M.push_back(std::exp(std::lgamma(n + 1.0)) * (n % 3 ? 1.0 : 0.01));
    auto v = carleman_table(M);
    for (std::size_t i = 0; i + 1 < v.beta.size(); ++i) {
        EXPECT_LE(v.beta[i], v.beta[i + 1]);
        EXPECT_LE(v.beta[i], std::pow(M[i], 1.0 / static_cast<double>(i + 1)) * (1 + 1e-15));
    }
}

TEST(Pade, GeometricIsExact) {
    auto P = pade(std::vector<double>{1, 1}, 0);
    ASSERT_EQ(P.num.size(), 1u);
    ASSERT_EQ(P.den.size(), 2u);
    EXPECT_DOUBLE_EQ(P.num[0], 1);
    EXPECT_DOUBLE_EQ(P.den[0], 1);
    EXPECT_DOUBLE_EQ(P.den[1], -1);
    for (double q : {0.3, -2.0, 5.0}) EXPECT_NEAR(pade_eval(P, q), 1 / (1 - q), 1e-15);
}

TEST(Pade, ExponentialMatchesClosedForm) {
    // [m/n] of e^q: P_j = (m+n-j)! m! / ((m+n)! j! (m-j)!), Q_j = (-1)^j (m+n-j)! n! / ((m+n)! j! (n-j)!)
    const int N = 3, m = N, n = N + 1;
    std::vector<MpReal> c;
    MpReal f = 1;
    for (int k = 0; k <= 2 * N + 1; ++k) {
        c.push_back(1 / f);
        f *= k + 1;
    }
    auto P = pade(c, N);
    auto fac = [](int k) { return boost::math::factorial<MpReal>(static_cast<unsigned>(k)); };
    for (int j = 0; j <= m; ++j) {
        MpReal e = fac(m + n - j) * fac(m) / (fac(m + n) * fac(j) * fac(m - j));
        EXPECT_LT(static_cast<double>(abs(P.num[static_cast<std::size_t>(j)] - e)), 1e-70);
    }
    for (int j = 0; j <= n; ++j) {
        MpReal e = (j % 2 ? -1 : 1) * fac(m + n - j) * fac(n) / (fac(m + n) * fac(j) * fac(n - j));
        EXPECT_LT(static_cast<double>(abs(P.den[static_cast<std::size_t>(j)] - e)), 1e-70);
    }
    EXPECT_LT(P.residual, 1e-70);
    EXPECT_NEAR(static_cast<double>(pade_eval(P, MpReal(1))), std::exp(1.0), 1e-4);
}

TEST(Pade, TaylorOfApproximantMatchesInput) {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> u(-1, 1);
    const int N = 6;
    std::vector<double> c;
    for (int k = 0; k <= 2 * N + 1; ++k) c.push_back(u(rng));
    auto P = pade(c, N);
    // series of num / den by long division
    std::vector<double> s(static_cast<std::size_t>(2 * N + 2), 0.0);
    for (int k = 0; k <= 2 * N + 1; ++k) {
        double v = k <= N ? P.num[static_cast<std::size_t>(k)] : 0.0;
        for (int j = 1; j <= std::min(k, N + 1); ++j) v -= P.den[static_cast<std::size_t>(j)] * s[static_cast<std::size_t>(k - j)];
        s[static_cast<std::size_t>(k)] = v;
    }
    double scale = 0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    for (int k = 0; k <= 2 * N + 1; ++k)
        EXPECT_NEAR(s[static_cast<std::size_t>(k)], c[static_cast<std::size_t>(k)], 1e-9 * scale + P.residual * scale);
}

TEST(Pade, SingularSystem) {
    EXPECT_THROW(pade(std::vector<double>{1, 0, 0, 0}, 1), SingularSystem);
    EXPECT_THROW(pade(std::vector<double>{1, 2}, 1), InvalidArgument);
}

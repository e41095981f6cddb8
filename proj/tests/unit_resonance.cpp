#include <gtest/gtest.h>

#include <qlog/resonance.hpp>

#include "support.hpp"

using namespace qlog;

namespace {

long long mod(long long a, long long m) { return ((a % m) + m) % m; }

}  // namespace

TEST(Resonance, BezoutAndInverse) {
    for (long long m0 = 1; m0 <= 40; ++m0)
        for (long long n0 = 0; n0 < m0; ++n0) {
            if (std::gcd(n0, m0) != 1) continue;
            auto r = make_resonance(n0, m0);
            EXPECT_EQ(r.m0 * r.m0_prime + r.n0 * r.n0_prime, 1) << n0 << "/" << m0;
            if (m0 > 1) {
                EXPECT_EQ(mod(r.n0 * r.n0_prime, m0), 1);
            }
            EXPECT_NEAR(std::abs(r.Lambda0 - std::polar(1.0, two_pi * n0 / m0)), 0, 4e-15);
            EXPECT_NEAR(std::abs(r.Omega - cplx(0, two_pi * n0 / m0)), 0, 1e-15);
        }
    EXPECT_THROW(make_resonance(2, 4), InvalidArgument);
    EXPECT_THROW(make_resonance(3, 3), InvalidArgument);
    EXPECT_THROW(make_resonance(0, 0), InvalidArgument);
}

TEST(MovingPoles, LocationAndResidue) {
    auto r1 = make_resonance(0, 1);
    auto p = moving_pole(r1, std::exp(-1.0), 1, 0);
    EXPECT_NEAR(std::abs(p.location - cplx(0, two_pi)), 0, 1e-14);
    // the residue of the closed form is +1/m0 e^{2 pi i a b n0'/m0}
    EXPECT_NEAR(std::abs(p.residue - 1.0), 0, 1e-15);
    for (long long m0 : {2, 3, 5, 7})
        for (long long n0 = 1; n0 < m0; ++n0) {
            if (std::gcd(n0, m0) != 1) continue;
            auto r = make_resonance(n0, m0);
            for (long long a : {-3, -1, 1, 2})
                for (long long b : {-2, 0, 1, 4}) {
                    auto mp = moving_pole(r, cplx(0.4, 0.2), a, b);
                    EXPECT_NEAR(std::abs(mp.residue), 1.0 / static_cast<double>(m0), 1e-15);
                    cplx e = unit_root(mod(a * b * r.n0_prime, m0), m0) / static_cast<double>(m0);
                    EXPECT_NEAR(std::abs(mp.residue - e), 0, 1e-15);
                }
        }
    EXPECT_THROW(moving_pole(r1, 0.5, 0, 1), InvalidArgument);
}

TEST(MovingPoles, LinearInLogZ) {
    auto r = make_resonance(1, 3);
    cplx z1(0.5, 0.1), z2(0.3, -0.2);
    for (long long a : {1, -2})
        for (long long b : {0, 3}) {
            cplx lhs = pole_location(r, z1 * z2, a, b) - pole_location(r, z1, a, b) - pole_location(r, z2, a, b) +
                       pole_location(r, 1.0, a, b);
            EXPECT_NEAR(std::abs(lhs), 0, 1e-12);
        }
}

TEST(AsymCoeffs, SingleExtraPole) {
    auto res = make_resonance(1, 4);
    auto L1 = primitive_roots(5)[1];
    auto a = bwd_single(L1, 1);
    auto ac = asym_coeffs(a, res, 12, 0.3);
    EXPECT_EQ(ac.residue, cplx(0));
    cplx w = 1.0 / (res.Lambda0 - L1.value);
    for (int n = 0; n <= 12; ++n) {
        cplx e = (n % 2 ? -1.0 : 1.0) * std::pow(w, n + 1);
        EXPECT_NEAR(std::abs(ac.A[static_cast<std::size_t>(n)] - e), 0, 1e-13 * std::abs(e));
    }
    auto own = asym_coeffs(bwd_single(PrimitiveRoot{1, 4, res.Lambda0}, cplx(2, 1)), res, 3, 0.3);
    EXPECT_EQ(own.residue, cplx(2, 1));
    for (auto v : own.A) EXPECT_EQ(v, cplx(0));
}

TEST(AsymCoeffs, ResidueIsLogTwo) {
    auto res = make_resonance(0, 1);
    auto ac = asym_coeffs(bwd_from_solution(delta_series(64), 1, 0.5, 0), res, 10, 0.5);
    EXPECT_NEAR(std::abs(ac.residue - std::log(2.0)), 0, 1e-15);
    for (double t : ac.tail) EXPECT_TRUE(std::isfinite(t));
}

TEST(AsymCoeffs, GevreyOneGrowth) {
    auto res = make_resonance(0, 1);
    auto ac = asym_coeffs(bwd_from_solution(delta_series(64), 1, 0.5, 0), res, 40, 0.5);
    auto f = gevrey_order_fit(ac.A, 10, 40);
    EXPECT_GT(f.tau, 0.8);
    EXPECT_LT(f.tau, 1.2);
}

TEST(AsymCoeffs, RemainderEnvelopeAlongRay) {
    auto res = make_resonance(0, 1);
    const cplx z = 0.5;
    auto ac = asym_coeffs(bwd_from_solution(delta_series(64), 1, 0.5, 0), res, 40, z);
    auto remainders = [&](double t, int Nmax) {
        cplx q = 1.0 + t;
        cplx F = eval_f_delta(make_point(q, z), 1e-15).value - ac.residue / (q - 1.0);
        std::vector<double> R;
        cplx s = 0;
        for (int N = 1; N <= Nmax; ++N) {
            s += ac.A[static_cast<std::size_t>(N - 1)] * std::pow(t, N - 1);
            R.push_back(std::abs(F - s));
        }
        return R;
    };
    // envelope c0 c1^N N! t^N fitted above the rounding floor
    const double t = 0.1;
    auto R = remainders(t, 16);
    Eigen::MatrixXd A(16, 2);
    Eigen::VectorXd y(16);
    for (int i = 0; i < 16; ++i) {
        int N = i + 1;
        A(i, 0) = 1;
        A(i, 1) = N;
        y(i) = std::log(R[static_cast<std::size_t>(i)]) - std::lgamma(N + 1.0) - N * std::log(t);
    }
    Eigen::Vector2d beta = A.colPivHouseholderQr().solve(y);
    double c1 = std::exp(beta(1));
    double c0 = std::exp(beta(0) + (y - A * beta).maxCoeff());
    EXPECT_LT(c1, 2.0);
    for (int N = 1; N <= 16; ++N)
        EXPECT_LE(R[static_cast<std::size_t>(N - 1)], c0 * std::pow(c1, N) * std::tgamma(N + 1.0) * std::pow(t, N) * (1 + 1e-9));
    auto R5 = remainders(0.05, 40);
    EXPECT_LT(*std::min_element(R5.begin(), R5.end()), 1e-13);
}

TEST(PsiHat, AtZero) {
    auto g = delta_series(64);
    cplx z(0.4, 0.1);
    auto r1 = make_resonance(0, 1);
    EXPECT_NEAR(std::abs(psi_hat(r1, g, 0, z) + 0.5 * z / (1.0 - z)), 0, 1e-15);
    for (auto [n0, m0] : {std::pair{1LL, 2LL}, {1LL, 3LL}, {2LL, 5LL}}) {
        auto r = make_resonance(n0, m0);
        cplx e = 0;
        for (long long k = 0; k < m0; ++k) {
            cplx w = std::exp(cplx(std::log(z)) + static_cast<double>(k) * r.Omega);
            e += (static_cast<double>(k) / static_cast<double>(m0) - 0.5) * w / (1.0 - w);
        }
        EXPECT_NEAR(std::abs(psi_hat(r, g, 0, z) - e), 0, 1e-14);
    }
}

TEST(PsiHat, Errors) {
    auto r = make_resonance(0, 1);
    auto g = delta_series(64);
    EXPECT_THROW(psi_hat(r, g, 0.1, 0), InvalidArgument);
    EXPECT_THROW(psi_hat(r, g, 0.1, 1.5), DiskExceeded);
    EXPECT_THROW(psi_hat(r, g, pole_location(r, 0.5, 1, 0), 0.5), PoleProximity);
}

TEST(PsiHat, LinearGrowthAlongRay) {
    auto g = delta_series(64);
    for (long long m0 : {1, 2}) {
        auto r = make_resonance(m0 - 1, m0);
        cplx z = 0.5;
        double psi1 = std::abs(psi_hat(r, g, 0, z));
        std::vector<double> ratio;
        for (int k = 1; k <= 20; ++k) {
            double x = 2.0 * k;
            ratio.push_back(std::abs(psi_hat(r, g, x, z)) / (1 + x));
        }
        double first = *std::max_element(ratio.begin(), ratio.begin() + 10);
        double last = *std::max_element(ratio.begin() + 10, ratio.end());
        EXPECT_LE(last, 2 * first + psi1);
        double C = 0;
        for (int k = 1; k <= 20; ++k) C = std::max(C, (ratio[static_cast<std::size_t>(k - 1)] * (1 + 2.0 * k) - psi1) / (2.0 * k));
        EXPECT_LT(C, 10);
    }
}

TEST(PoleResidue, Lattice) {
    for (long long m0 : {1, 2, 3}) {
        auto r = make_resonance(m0 == 1 ? 0 : 1, m0);
        int count = 0;
        for (long long a : {1, -1, 2})
            for (long long b : {0, 1}) {
                auto c = pole_residue_check(r, 0.5, a, b);
                EXPECT_NEAR(std::abs(c.estimate - c.expected), 0, 1e-5) << m0 << " " << a << " " << b;
                EXPECT_NEAR(std::abs(c.estimate), 1.0 / static_cast<double>(m0), 1e-5);
                ++count;
            }
        EXPECT_EQ(count, 6);
    }
}

TEST(PoleResidue, Examples) {
    auto c = pole_residue_check(make_resonance(0, 1), 0.5, 1, 0);
    EXPECT_NEAR(std::abs(c.estimate - 1.0), 0, 1e-6);
    for (long long n0 : {1, 2}) {
        auto r = make_resonance(n0, 3);
        auto e = pole_residue_check(r, 0.5, 1, 1);
        cplx want = std::polar(1.0 / 3, two_pi * static_cast<double>(mod(r.n0_prime, 3)) / 3);
        EXPECT_NEAR(std::abs(e.estimate - want), 0, 1e-6);
    }
    EXPECT_THROW(pole_residue_check(make_resonance(0, 1), 0.5, 1, 0, 5.0), PoleCluster);
}

TEST(Resum, BothSidesOfTheCircle) {
    auto r = make_resonance(0, 1);
    auto g = delta_series(64);
    for (double eta : {0.05, -0.05}) {
        auto v = resum(r, g, eta, 0.5, 1e-12);
        auto d = eval_f_delta(make_point(std::exp(eta), 0.5), 1e-13);
        EXPECT_NEAR(std::abs(v.value - d.value), 0, 1e-6) << eta;
        EXPECT_NEAR(std::abs(v.value - d.value), 0, 1e-10) << eta;
    }
    EXPECT_THROW(resum(r, g, cplx(0, 0.1), 0.5), InvalidArgument);
}

TEST(Resum, OtherResonance) {
    auto r = make_resonance(1, 2);
    auto g = delta_series(64);
    for (cplx eta : {cplx(0.08, 0.02), cplx(-0.08, 0.01)}) {
        auto v = resum(r, g, eta, 0.4, 1e-11);
        auto d = eval_f_delta(make_point(r.Lambda0 * std::exp(eta), 0.4), 1e-13);
        EXPECT_NEAR(std::abs(v.value - d.value), 0, 1e-8);
    }
}

TEST(Resum, ConstantTermAsEtaShrinks) {
    auto r = make_resonance(0, 1);
    auto g = delta_series(64);
    // eta f - L_1(z) = O(eta): halving eta roughly halves the gap
    double prev = inf;
    for (double eta : {0.2, 0.1, 0.05, 0.025}) {
        auto v = resum(r, g, eta, 0.5, 1e-12);
        double d = std::abs(eta * v.value - std::log(2.0));
        if (std::isfinite(prev)) {
            EXPECT_LT(d, 0.6 * prev);
        }
        prev = d;
    }
}

TEST(Resum, DifferenceEquation) {
    // eta f(q, q z) - eta f(q, z) = eta delta(z) for the resummed values
    auto g = delta_series(64);
    for (auto [n0, m0] : {std::pair{0LL, 1LL}, {1LL, 2LL}}) {
        auto r = make_resonance(n0, m0);
        for (cplx eta : {cplx(0.06), cplx(-0.06, 0.01)}) {
            cplx z(0.3, 0.1);
            cplx q = r.Lambda0 * std::exp(eta);
            auto a = resum(r, g, eta, q * z, 1e-12);
            auto b = resum(r, g, eta, z, 1e-12);
            EXPECT_NEAR(std::abs(eta * (a.value - b.value) - eta * z / (1.0 - z)), 0,
                        std::abs(eta) * (a.error + b.error) + 1e-12);
        }
    }
}

TEST(CrossResonance, LimitIsLm) {
    auto res = make_resonance(0, 1);
    cplx z = 0.5;
    for (auto target : {PrimitiveRoot{1, 2, cplx(-1, 0)}, primitive_roots(3)[0], primitive_roots(5)[1]}) {
        auto lim = cross_resonance_limit(res, target, z);
        cplx want = l_m_value(target.m, z) / (two_pi * I);
        EXPECT_NEAR(std::abs(lim.value - want), 0, 1e-6) << target.m;
        auto nt = nontangential_residue(bwd_from_solution(delta_series(64), 1, 0.5, 0), target, z);
        EXPECT_NEAR(std::abs(lim.value - nt.value / (two_pi * I * target.value)), 0, 1e-6);
    }
    EXPECT_THROW(cross_resonance_limit(res, primitive_roots(1)[0], z), InvalidArgument);
}

TEST(CrossResonance, ContributingIndices) {
    // the terms surviving h -> n/m are a = j M with M = m0 n - n0 m
    auto res = make_resonance(1, 3);
    PrimitiveRoot target{1, 2, cplx(-1, 0)};
    long long M = res.m0 * target.n - res.n0 * target.m;
    EXPECT_EQ(M, 1);
    auto lim = cross_resonance_limit(res, target, 0.4);
    EXPECT_NEAR(std::abs(lim.value - l_m_value(2, 0.4) / (two_pi * I)), 0, 1e-6);
}

TEST(Chain, LSeries) {
    auto L = l_of_t_coeffs(8);
    EXPECT_DOUBLE_EQ(L[0], 0.5);
    EXPECT_NEAR(L[1], -1.0 / 12, 1e-16);
    EXPECT_NEAR(L[2], 1.0 / 24, 1e-16);
    for (double t : {0.1, -0.2, 0.05}) {
        double s = 0;
        for (int n = 0; n <= 8; ++n) s += L[static_cast<std::size_t>(n)] * std::pow(t, n);
        EXPECT_NEAR(s, 1 / std::log1p(t) - 1 / t, 1e-7);
    }
}

TEST(Chain, LOmegaVanishesAtZero) {
    // L_omega(t) = -e^{-omega/2} + (1 + t L(t)) e^{-omega L(t)}
    auto L = l_of_t_coeffs(10);
    for (cplx w : {cplx(0.3), cplx(0, 1), cplx(-1, 2)}) {
        auto Lw = [&](double t) {
            double l = 0;
            for (int n = 10; n >= 0; --n) l = l * t + L[static_cast<std::size_t>(n)];
            return -std::exp(-w / 2.0) + (1 + t * l) * std::exp(-w * l);
        };
        EXPECT_NEAR(std::abs(Lw(0)), 0, 1e-16);
        double r1 = std::abs(Lw(1e-3)), r2 = std::abs(Lw(5e-4));
        EXPECT_NEAR(r1 / r2, 2, 0.01);
    }
}

TEST(Chain, TwoRoutesAgree) {
    auto rep = eta_t_chain_check(make_resonance(0, 1), 0.5, 10);
    EXPECT_LT(rep.max_phi_diff, 1e-8);
    EXPECT_LT(rep.max_psi_diff, 1e-8);
    ASSERT_EQ(rep.phi_direct.size(), 10u);
    EXPECT_THROW(eta_t_chain_check(make_resonance(0, 1), 0.5, 17), InvalidArgument);
}

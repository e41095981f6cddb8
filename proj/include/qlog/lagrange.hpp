#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "numbers.hpp"

namespace qlog {

struct Certificate {
    bool holds = true;
    std::size_t depth = 0;                // last index checked
    std::optional<std::size_t> violation;  // first violating k
};

// Root alpha = (-b + eps sqrt(disc)) / (2a) of a X^2 + b X + c, with alpha in (0,1).
struct QuadraticIrrational {
    BigInt a, b, c;
    int eps = 1;
    BigInt disc;
    Real alpha, alpha_bar;
    ContinuedFraction cf;

    double alpha_d() const { return alpha.convert_to<double>(); }
    double alpha_bar_d() const { return alpha_bar.convert_to<double>(); }
    QuadraticSurd surd() const {
        return eps > 0 ? QuadraticSurd{-b, disc, 2 * a} : QuadraticSurd{b, disc, -2 * a};
    }
};

inline QuadraticIrrational make_quadratic(BigInt a, BigInt b, BigInt c, int eps, std::size_t cf_depth = 64) {
    if (a < 1) throw InvalidArgument("leading coefficient must be >= 1");
    if (eps != 1 && eps != -1) throw InvalidArgument("eps must be +1 or -1");
    QuadraticIrrational q;
    q.a = a;
    q.b = b;
    q.c = c;
    q.eps = eps;
    q.disc = b * b - 4 * a * c;
    if (q.disc < 2) throw InvalidArgument("discriminant must be >= 2");
    BigInt r = isqrt(q.disc);
    if (r * r == q.disc) throw InvalidArgument("polynomial is reducible over the rationals");
    Real sd = boost::multiprecision::sqrt(Real(q.disc));
    q.alpha = (Real(-b) + eps * sd) / Real(2 * a);
    q.alpha_bar = (Real(-b) - eps * sd) / Real(2 * a);
    if (!(q.alpha > 0 && q.alpha < 1)) throw InvalidArgument("selected root is not in (0,1)");
    q.cf = cf_expand(q.surd(), cf_depth);
    return q;
}

// Picks the sign so that the root lies in (0,1).
inline QuadraticIrrational make_quadratic(BigInt a, BigInt b, BigInt c) {
    for (int eps : {1, -1}) {
        try {
            return make_quadratic(a, b, c, eps);
        } catch (const InvalidArgument& e) {
            if (std::string(e.what()).find("(0,1)") == std::string::npos) throw;
        }
    }
    throw InvalidArgument("no root of the polynomial lies in (0,1)");
}

inline QuadraticIrrational golden_quadratic() { return make_quadratic(1, 1, -1, 1); }
inline QuadraticIrrational sqrt3_minus_1() { return make_quadratic(1, 2, -2, 1); }

inline BigInt form_value(const QuadraticIrrational& q, const BigInt& N, const BigInt& D) {
    return q.a * N * N + q.b * N * D + q.c * D * D;
}

struct PairND {
    long long D = 0;
    long long N = 0;
    long long F = 0;
};

struct SpectralData {
    double nu_plus = 0, nu_minus = 0;
    double kappa_plus = 0, kappa_minus = 0;
    long long r_plus = 0, r_minus = 0;
    std::vector<PairND> a_seq_plus, a_seq_minus;
    double kappa_prime_plus = 0, kappa_prime_minus = 0;
    double delta0 = 0;
    long long d_max = 0;
    long long d_warm = 0;

    // Side with the smaller kappa; ties go to +.
    int eps_side() const { return kappa_plus <= kappa_minus ? 1 : -1; }
    double nu(int side) const { return side > 0 ? nu_plus : nu_minus; }
    double kappa(int side) const { return side > 0 ? kappa_plus : kappa_minus; }
    long long r(int side) const { return side > 0 ? r_plus : r_minus; }
    const std::vector<PairND>& a_seq(int side) const { return side > 0 ? a_seq_plus : a_seq_minus; }
};

namespace detail {
inline long long isqrt64(unsigned long long n) {
    auto r = static_cast<unsigned long long>(std::sqrt(static_cast<double>(n)));
    while (static_cast<unsigned __int128>(r) * r > n) --r;
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
    return static_cast<long long>(r);
}
inline long long floor_div64(long long a, long long b) {
    long long q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}
}  // namespace detail

// Exact floor(alpha * D) for small coefficients.
inline long long floor_alpha_times(const QuadraticIrrational& q, long long D) {
    long long a = q.a.convert_to<long long>(), b = q.b.convert_to<long long>();
    auto X = static_cast<unsigned long long>(q.disc.convert_to<long long>()) *
             static_cast<unsigned long long>(D) * static_cast<unsigned long long>(D);
    long long s = detail::isqrt64(X);
    if (q.eps > 0) return detail::floor_div64(-b * D + s, 2 * a);
    return detail::floor_div64(-b * D - s - 1, 2 * a);
}

inline long long form_value64(const QuadraticIrrational& q, long long N, long long D) {
    __int128 a = q.a.convert_to<long long>(), b = q.b.convert_to<long long>(), c = q.c.convert_to<long long>();
    __int128 v = a * N * N + b * static_cast<__int128>(N) * D + c * static_cast<__int128>(D) * D;
    return static_cast<long long>(v);
}

// Signed Z * D = N - alpha D computed from the exact form value (no cancellation).
inline double z_times_d(const QuadraticIrrational& q, long long N, long long D) {
    double F = static_cast<double>(form_value64(q, N, D));
    double a = q.a.convert_to<double>();
    return F / (a * (static_cast<double>(N) - q.alpha_bar_d() * static_cast<double>(D)));
}

inline SpectralData spectral_constants(const QuadraticIrrational& q, long long D_max) {
    if (D_max < 10) throw InvalidArgument("D_max too small");
    if (boost::multiprecision::abs(q.a) > 1000000 || boost::multiprecision::abs(q.b) > 1000000 ||
        boost::multiprecision::abs(q.c) > 1000000 || D_max > 100000000)
        throw InvalidArgument("coefficients or window too large for 64-bit scan");
    const double al = q.alpha_d(), alb = q.alpha_bar_d();
    const double gap = std::abs(al - alb);
    const long long warm = static_cast<long long>(std::cbrt(static_cast<double>(D_max)));
    std::map<long long, std::vector<PairND>> cls[2];  // 0: minus, 1: plus
    for (long long D = 1; D <= D_max; ++D) {
        long long Nm = floor_alpha_times(q, D);
        for (int s = 0; s < 2; ++s) {
            long long N = Nm + s;
            double x = static_cast<double>(N) / static_cast<double>(D);
            if (std::abs(x - alb) < 0.9 * gap) continue;
            long long F = form_value64(q, N, D);
            cls[s][F < 0 ? -F : F].push_back({D, N, F});
        }
    }
    SpectralData sd;
    sd.d_max = D_max;
    sd.d_warm = warm;
    const double sqrt_disc = std::sqrt(q.disc.convert_to<double>());
    for (int s = 0; s < 2; ++s) {
        bool found = false;
        for (auto& [absF, pairs] : cls[s]) {
            std::vector<long long> beyond;
            for (auto& p : pairs)
                if (p.D > warm) beyond.push_back(p.D);
            std::sort(beyond.begin(), beyond.end());
            beyond.erase(std::unique(beyond.begin(), beyond.end()), beyond.end());
            if (beyond.size() >= 5) {
                double nu = static_cast<double>(absF) / sqrt_disc;
                if (s == 1) {
                    sd.r_plus = absF;
                    sd.nu_plus = nu;
                    sd.a_seq_plus = pairs;
                } else {
                    sd.r_minus = absF;
                    sd.nu_minus = nu;
                    sd.a_seq_minus = pairs;
                }
                found = true;
                break;
            }
        }
        if (!found)
            throw WindowTooSmall(std::string("fewer than 5 recurring elements on the ") + (s ? "+" : "-") +
                                 " side; increase D_max");
    }
    sd.kappa_plus = std::sqrt(sd.nu_plus);
    sd.kappa_minus = std::sqrt(sd.nu_minus);
    const double a = q.a.convert_to<double>();
    double d0 = gap / 10.0;
    auto nu_prime = [&](long long r, double d) { return (static_cast<double>(r) + 1.0) / (a * (gap + d)); };
    while (!(nu_prime(sd.r_plus, d0) > sd.nu_plus && nu_prime(sd.r_minus, d0) > sd.nu_minus)) d0 /= 2;
    sd.delta0 = d0;
    sd.kappa_prime_plus = std::sqrt(nu_prime(sd.r_plus, d0));
    sd.kappa_prime_minus = std::sqrt(nu_prime(sd.r_minus, d0));
    return sd;
}

// m_{k+1} < gamma^{-1} m_k^{tau-1} for k <= k_max.
inline Certificate dc_membership(const ContinuedFraction& cf, double gamma, double tau, std::size_t k_max) {
    if (!(gamma > 0) || tau < 2) throw InvalidArgument("need gamma > 0 and tau >= 2");
    Certificate cert;
    std::size_t kmax = k_max;
    if (!cf.periodic() && cf.depth() < kmax + 1) {
        if (cf.finite) {
            // a rational is never Diophantine: the next denominator is infinite
            cert.holds = false;
            cert.violation = cf.depth();
            cert.depth = cf.depth();
            return cert;
        }
        throw PrecisionExhausted("expansion too short for k_max");
    }
    auto conv = convergents(cf, kmax + 1);
    for (std::size_t k = 0; k <= kmax; ++k) {
        double lhs = log_abs(conv[k + 1].m);
        double rhs = -std::log(gamma) + (tau - 1) * log_abs(conv[k].m);
        cert.depth = k;
        if (!(lhs < rhs)) {
            cert.holds = false;
            cert.violation = k;
            return cert;
        }
    }
    return cert;
}

}  // namespace qlog

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "borel.hpp"
#include "numbers.hpp"
#include "resonance.hpp"
#include "series.hpp"

namespace qlog {

using CoefficientRule = std::function<double(long long)>;

inline double gammel_default_rule(long long m) { return m >= 2 ? std::exp(-static_cast<double>(m)) : 0.0; }

struct GammelSeries {
    CoefficientRule A = gammel_default_rule;
    TruncatedPowerSeries g;
    double analytic_radius = 0;     // 1 / limsup |A_m|^{1/m}
    bool default_rule = true;
    bool within_hypotheses = true;  // analytic_radius > 1
    std::string note;
};

namespace detail {
// n sum_j mu(j) A_{nj}, j up to nj <= M
inline double mobius_coefficient(const CoefficientRule& A, long long n, long long M) {
    RSum s;
    for (long long j = 1; n * j <= M; ++j) {
        int mu = mobius(j);
        if (mu != 0) s += mu * A(n * j);
    }
    return static_cast<double>(n) * s.value();
}

// n sum_j mu(j) e^{-nj} - [n = 1] e^{-1}
inline double default_g_coefficient(long long n) {
    if (n < 1) return 0;
    RSum s;
    double x = static_cast<double>(n);
    for (long long j = 1; static_cast<double>(j - 1) * x < 50; ++j) {
        int mu = mobius(j);
        if (mu != 0) s += mu * std::exp(-x * static_cast<double>(j));
    }
    if (n == 1) s += -std::exp(-1.0);
    return x * s.value();
}

inline cplx gammel_g_closed(cplx z) {
    CSum s;
    s += -std::exp(-1.0) * z;
    for (long long j = 1; j < 60; ++j) {
        int mu = mobius(j);
        if (mu == 0) continue;
        double e = std::exp(-static_cast<double>(j));
        cplx d = 1.0 - z * e;
        s += z * static_cast<double>(mu) * e / (d * d);
    }
    return s.value();
}
}  // namespace detail

// g with A_m = (g . L_m)(1), by Moebius inversion g_n = n sum_j mu(j) A_{nj}.
inline GammelSeries build_g(const CoefficientRule& A, std::size_t N, bool default_rule = false) {
    const long long M = 20000;
    RSum s1, s2;
    for (long long m = 1; m <= 2 * M; ++m) {
        double t = static_cast<double>(m) * std::abs(A(m));
        (m <= M ? s1 : s2) += t;
    }
    double S = s1.value() + s2.value();
    if (!std::isfinite(S) || s2.value() > 1e-10 * std::max(S, 1e-300))
        throw NotSummable("sum of m |A_m| does not converge within tolerance");
    GammelSeries out;
    out.A = A;
    out.default_rule = default_rule;
    // limsup |A_m|^{1/m} from (|A_{2m}| / |A_m|)^{1/m} at the largest representable m
    double lim = 0;
    for (long long m : {2000LL, 1000LL, 500LL, 250LL, 125LL, 60LL}) {
        double a1 = std::abs(A(m)), a2 = std::abs(A(2 * m));
        if (a1 > 0 && a2 > 0) {
            lim = std::exp((std::log(a2) - std::log(a1)) / static_cast<double>(m));
            break;
        }
    }
    out.analytic_radius = lim > 0 ? 1 / lim : inf;
    out.within_hypotheses = out.analytic_radius > 1.05;
    TruncatedPowerSeries& g = out.g;
    g.c.assign(N + 1, 0.0);
    if (default_rule) {
        for (std::size_t n = 1; n <= N; ++n) g.c[n] = detail::default_g_coefficient(static_cast<long long>(n));
        g.rule = [](long long n) { return cplx(detail::default_g_coefficient(n)); };
    } else {
        for (std::size_t n = 1; n <= N; ++n) g.c[n] = detail::mobius_coefficient(A, static_cast<long long>(n), 2 * M);
        g.rule = [A](long long n) { return cplx(n >= 1 ? detail::mobius_coefficient(A, n, 2 * M) : 0.0); };
    }
    if (default_rule) {
        // |g_n| <= 1.6 n e^{-n}; certified on |z| <= 2.5
        const double rho = 2.5;
        g.radius = rho;
        g.cert = 1.6 / (std::exp(1.0) * std::log(std::exp(1.0) / rho));
        g.closed = detail::gammel_g_closed;
        out.note = "analytic radius e; tail certificates use radius 2.5";
    } else if (out.within_hypotheses) {
        const double rho = 1 + 0.85 * (std::min(out.analytic_radius, 10.0) - 1);
        g.radius = rho;
        double c = 0;
        for (std::size_t n = 1; n <= N; ++n) c = std::max(c, std::abs(g.c[n]) * std::pow(rho, static_cast<double>(n)));
        g.cert = 2 * c;
        out.note = "certificate estimated from the stored coefficients";
    } else {
        g.radius = 1;
        double c = 0;
        for (std::size_t n = 1; n <= N; ++n) c = std::max(c, std::abs(g.c[n]));
        g.cert = c;
        out.note = "limsup |A_m|^{1/m} = 1: outside the hypotheses of resonance continuation";
    }
    return out;
}

inline GammelSeries build_g(std::size_t N = 64) { return build_g(gammel_default_rule, N, true); }

struct GammelConstant {
    double value = 0;
    double tail = 0;
};

// sum_{m=2}^{M} e^{-m} phi(m), tail from phi(m) < m.
inline GammelConstant gammel_constant(long long M_max = 80) {
    if (M_max < 60) throw InvalidArgument("M_max must be >= 60");
    const MpReal e1 = exp(MpReal(-1));
    MpReal s = 0, em = e1;
    for (long long m = 2; m <= M_max; ++m) {
        em *= e1;
        s += em * totient(m);
    }
    double M = static_cast<double>(M_max);
    double e = std::exp(-1.0);
    // sum_{m>M} m e^{-m} = e^{-M-1}((M+1) - M e^{-1}) / (1 - e^{-1})^2
    double tail = std::exp(-(M + 1)) * ((M + 1) - M * e) / ((1 - e) * (1 - e));
    return {s.convert_to<double>(), tail};
}

// c_n = -sum_m A_m c_m(n+1) for the default rule at 256 bits.
inline std::vector<MpReal> g_taylor_of_G(int N) {
    if (N < 0) throw InvalidArgument("N must be >= 0");
    const long long M = 200;  // M e^{-M} < 2^{-270}
    std::vector<MpReal> e(static_cast<std::size_t>(M) + 1);
    for (long long m = 2; m <= M; ++m) e[static_cast<std::size_t>(m)] = exp(MpReal(-m));
    std::vector<MpReal> c(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) {
        MpReal s = 0;
        for (long long m = 2; m <= M; ++m) s -= e[static_cast<std::size_t>(m)] * ramanujan_sum(m, n + 1);
        c[static_cast<std::size_t>(n)] = s;
    }
    return c;
}

// Oracle: -sum_m A_m sum_{Lambda in R_m^*} Lambda^{-n-1} by root enumeration.
inline std::vector<cplx> g_taylor_of_G_enum(int N, long long M = 60) {
    std::vector<CSum> acc(static_cast<std::size_t>(N) + 1);
    for (long long m = 2; m <= M; ++m) {
        double a = std::exp(-static_cast<double>(m));
        for (const auto& r : primitive_roots(m))
            for (int n = 0; n <= N; ++n) acc[static_cast<std::size_t>(n)] += -a * unit_root(-r.n * (n + 1), m);
    }
    std::vector<cplx> out;
    for (auto& s : acc) out.push_back(s.value());
    return out;
}

// G(q) = sum_{m>=2} sum_{Lambda in R_m^*} e^{-m} / (q - Lambda)
inline EvalResult G_eval(cplx q, double tol = 1e-15) {
    double dist = std::abs(std::abs(q) - 1);
    if (!(dist > 0)) throw NearResonance("q on the unit circle needs a root-distance certificate");
    CSum s;
    double rnd = 0;
    long long m = 2;
    double tail = inf;
    for (; m <= 2000; ++m) {
        double a = std::exp(-static_cast<double>(m));
        for (const auto& r : primitive_roots(m)) {
            cplx d = q - r.value;
            if (std::abs(d) < 1e-300) throw NearResonance("q coincides with a root");
            cplx t = a / d;
            s += t;
            rnd += std::abs(t);
        }
        double M = static_cast<double>(m), e = std::exp(-1.0);
        tail = std::exp(-(M + 1)) * ((M + 1) - M * e) / ((1 - e) * (1 - e)) / dist;
        if (tail < 0.5 * tol) break;
    }
    double err = tail + 1e-16 * rnd;
    if (!(err <= tol)) throw NearResonance("G tail not certified: q too close to the circle");
    return {s.value(), err, Method::bwd, m};
}

// G at real q off the circle at 256 bits via sum_{d|m} mu(m/d) d q^{d-1}/(q^d - 1).
inline MpReal G_eval_mp(const MpReal& q) {
    const long long M = 200;
    MpReal s = 0;
    std::vector<MpReal> qd(static_cast<std::size_t>(M) + 1);
    qd[0] = 1;
    for (long long d = 1; d <= M; ++d) qd[static_cast<std::size_t>(d)] = qd[static_cast<std::size_t>(d - 1)] * q;
    for (long long m = 2; m <= M; ++m) {
        MpReal sm = 0;
        for (long long d : divisors(m)) {
            int mu = mobius(m / d);
            if (mu == 0) continue;
            sm += MpReal(mu * d) * qd[static_cast<std::size_t>(d - 1)] / (qd[static_cast<std::size_t>(d)] - 1);
        }
        s += exp(MpReal(-m)) * sm;
    }
    return s;
}

struct PadeRow {
    int N = 0;
    double value = 0;
    double error = 0;
    double residual = 0;
    double min_pivot = 0;
};

inline std::vector<PadeRow> pade_continuation(const std::vector<int>& Ns, double q_target) {
    int Nmax = 0;
    for (int N : Ns) Nmax = std::max(Nmax, N);
    auto c = g_taylor_of_G(2 * Nmax + 1);
    MpReal q = q_target;
    MpReal ref = G_eval_mp(q);
    std::vector<PadeRow> out;
    for (int N : Ns) {
        std::vector<MpReal> cn(c.begin(), c.begin() + 2 * N + 2);
        auto P = pade(cn, N);
        MpReal v = pade_eval(P, q);
        out.push_back({N, v.convert_to<double>(), static_cast<double>(abs(v - ref)), P.residual, P.min_pivot});
    }
    return out;
}

// |sum_{n<=2N+1} c_n q^n - G(q)| for comparison with the Pade row.
inline double taylor_truncation_error(int N, double q_target) {
    auto c = g_taylor_of_G(2 * N + 1);
    MpReal q = q_target, s = 0, p = 1;
    for (auto& v : c) {
        s += v * p;
        p *= q;
    }
    return static_cast<double>(abs(s - G_eval_mp(q)));
}

struct ContinuationRow {
    cplx eta;
    cplx resummed;
    cplx direct;
    double diff = 0;
    double error = 0;
};

// resum at Lambda0 = 1 against direct evaluation of f_g(e^eta, z) on each side.
inline std::vector<ContinuationRow> resonance_continuation(const GammelSeries& gs, const std::vector<cplx>& etas,
                                                          cplx z = 0.999, double tol = 1e-10) {
    if (!gs.within_hypotheses) throw InvalidArgument(gs.note);
    auto res = make_resonance(0, 1);
    std::vector<ContinuationRow> out;
    for (cplx eta : etas) {
        auto r = resum(res, gs.g, eta, z, tol);
        auto d = eval_f_g(gs.g, make_point(std::exp(eta), z), tol);
        out.push_back({eta, r.value, d.value, std::abs(r.value - d.value), r.error + d.error});
    }
    return out;
}

}  // namespace qlog

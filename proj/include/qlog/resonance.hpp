#pragma once

#include <optional>
#include <vector>

#include "borel.hpp"
#include "series.hpp"

namespace qlog {

struct Resonance {
    long long n0 = 0, m0 = 1;
    cplx Lambda0{1, 0};
    long long n0_prime = 0, m0_prime = 1;  // m0 m0' + n0 n0' = 1
    cplx Omega{0, 0};
};

inline Resonance make_resonance(long long n0, long long m0) {
    if (m0 < 1 || n0 < 0 || n0 >= m0 || std::gcd(n0, m0) != 1) throw InvalidArgument("need coprime 0 <= n0 < m0");
    Resonance r;
    r.n0 = n0;
    r.m0 = m0;
    r.Lambda0 = unit_root(n0, m0);
    r.Omega = cplx(0, two_pi * static_cast<double>(n0) / static_cast<double>(m0));
    // extended Euclid on (m0, n0)
    long long old_r = m0, rr = n0, old_s = 1, s = 0, old_t = 0, t = 1;
    while (rr != 0) {
        long long q = old_r / rr;
        long long tmp = old_r - q * rr;
        old_r = rr;
        rr = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    r.m0_prime = old_s;
    r.n0_prime = old_t;
    if (m0 == 1) {
        r.m0_prime = 1;
        r.n0_prime = 0;
    }
    return r;
}

struct MovingPole {
    long long a = 1, b = 0;
    cplx location;
    cplx residue;
};

inline cplx pole_location(const Resonance& r, cplx z, long long a, long long b) {
    double m0 = static_cast<double>(r.m0);
    return two_pi * static_cast<double>(a) / m0 * (-I * std::log(z) + two_pi * static_cast<double>(b) / m0);
}

// Residue of the closed form at xi_{a,b}: (1/m0) e^{2 pi i a b n0'/m0}.
inline cplx pole_residue(const Resonance& r, long long a, long long b) {
    long long e = ((a % r.m0) * (b % r.m0) % r.m0 * (r.n0_prime % r.m0)) % r.m0;
    return unit_root(e, r.m0) / static_cast<double>(r.m0);
}

inline MovingPole moving_pole(const Resonance& r, cplx z, long long a, long long b) {
    if (a == 0) throw InvalidArgument("a must be nonzero");
    return {a, b, pole_location(r, z, a, b), pole_residue(r, a, b)};
}

struct AsymCoeffs {
    Resonance base;
    cplx residue;  // a_{Lambda0}, the constant term of (q - Lambda0) f
    std::vector<cplx> A;
    std::vector<double> tail;
    long long m_used = 0;
};

// A_n = (-1)^n sum_{Lambda != Lambda0} a_Lambda / (Lambda0 - Lambda)^{n+1}
inline AsymCoeffs asym_coeffs(const BWDCoefficients& a, const Resonance& res, int N, cplx z, double rel_tol = 1e-14,
                              long long m_cap = 5000) {
    AsymCoeffs out;
    out.base = res;
    std::vector<CSum> acc(static_cast<std::size_t>(N + 1));
    double c = a.c, r = a.r;
    if (a.from_solution() && !a.source->exact) {
        double t = std::abs(z) / a.source->radius;
        r = t;
        c = a.source->cert / (1 - t);
    }
    const double gamma1 = 4.0 / static_cast<double>(res.m0);
    auto add_root = [&](const PrimitiveRoot& L, cplx aL) {
        if (L.m == res.m0 && L.n == res.n0) {
            out.residue += aL;
            return;
        }
        cplx w = 1.0 / (res.Lambda0 - L.value);
        cplx p = aL * w;
        for (int n = 0; n <= N; ++n) {
            acc[static_cast<std::size_t>(n)] += (n % 2 ? -1.0 : 1.0) * p;
            p *= w;
        }
    };
    auto tail_at = [&](long long M, int n) {
        // sum_{m>M} m * c r^m / m * (m / gamma1)^{n+1}
        auto term = [&](long long m) {
            double x = static_cast<double>(m);
            return c * std::exp(static_cast<double>(m) * std::log(r) + (n + 1) * std::log(x / gamma1));
        };
        double t1 = term(M + 1), t2 = term(M + 2);
        double ratio = t2 / t1;
        if (!(ratio < 1)) return inf;
        return t1 / (1 - ratio);
    };
    long long M = 0;
    if (!a.from_solution()) {
        for (const auto& e : a.entries) add_root(e.root, e.value);
        M = a.m_cutoff;
        out.tail.assign(static_cast<std::size_t>(N + 1), 0.0);
    } else {
        for (long long m = 1; m <= m_cap; ++m) {
            cplx P = a.payload(m, z).value;
            for (long long n = 0; n < m; ++n) {
                if (std::gcd(n, m) != 1) continue;
                PrimitiveRoot L{n, m, unit_root(n, m)};
                add_root(L, L.value * P);
            }
            M = m;
            if (a.source->exact && static_cast<std::size_t>(m) >= a.source->order()) break;
            if (m % 10 == 0 && m > 20) {
                double tN = tail_at(m, N);
                double ref = std::abs(acc[static_cast<std::size_t>(N)].value());
                if (tN <= rel_tol * ref) break;
            }
        }
        out.tail.resize(static_cast<std::size_t>(N + 1));
        for (int n = 0; n <= N; ++n)
            out.tail[static_cast<std::size_t>(n)] =
                (a.source->exact && static_cast<std::size_t>(M) >= a.source->order()) ? 0 : tail_at(M, n);
    }
    out.m_used = M;
    for (int n = 0; n <= N; ++n) out.A.push_back(acc[static_cast<std::size_t>(n)].value());
    return out;
}

namespace detail {

// (theta^p g)(w) = sum n^p g_n w^n for p = 0..P
inline std::vector<cplx> theta_powers(const TruncatedPowerSeries& g, cplx w, int P) {
    std::vector<CSum> acc(static_cast<std::size_t>(P + 1));
    double aw = std::abs(w);
    double t = g.exact ? 0 : aw / g.radius;
    if (!g.exact && !(t < 1)) throw DiskExceeded("shifted argument outside the certified disk of g");
    cplx wn = 1;
    for (long long n = 1;; ++n) {
        wn *= w;
        if (!g.knows(n)) throw PrecisionExhausted("g coefficients exhausted in theta powers");
        cplx term = g.coeff(n) * wn;
        double np = 1;
        for (int p = 0; p <= P; ++p) {
            acc[static_cast<std::size_t>(p)] += term * np;
            np *= static_cast<double>(n);
        }
        if (g.exact && static_cast<std::size_t>(n) >= g.order()) break;
        double x = static_cast<double>(n);
        if (!g.exact && n > 8 && g.cert * std::exp(P * std::log(x) + x * std::log(t)) < 1e-19 && x * std::log(1 / t) > P)
            break;
        if (n > 200000) break;
    }
    std::vector<cplx> out;
    for (auto& s : acc) out.push_back(s.value());
    return out;
}

inline cplx g_at(const TruncatedPowerSeries& g, cplx w) { return eval_series(g, w, 1e-17).value; }

}  // namespace detail

struct PsiHatOptions {
    long long a_min = 64;
    double tol = 1e-13;
    double pole_radius = 1e-9;
};

// Closed form of the Borel transform at the resonance, with the |a| > A tail summed through
// Hurwitz zeta values.
inline cplx psi_hat(const Resonance& res, const TruncatedPowerSeries& g, cplx xi, cplx z, const PsiHatOptions& o = {}) {
    if (z == 0.0) throw InvalidArgument("z must be nonzero");
    const long long m0 = res.m0;
    const double m0d = static_cast<double>(m0);
    cplx u = m0d * xi / two_pi;
    if (!g.exact && !(std::abs(z) < g.radius)) throw DiskExceeded("|z| outside the certified disk of g");
    // distance in log scale from the shifted arguments to the singularities of g
    double lz = g.exact ? 1.0 : std::log(g.radius / std::abs(z));
    if (g.is_delta) {
        for (long long a = -o.a_min; a <= o.a_min; ++a) {
            if (a == 0) continue;
            // b nearest to the pole line
            cplx base = pole_location(res, z, a, 0);
            cplx step = pole_location(res, z, a, 1) - base;
            double bb = std::round(((xi - base) / step).real());
            cplx p = base + bb * step;
            if (std::abs(xi - p) < o.pole_radius) throw PoleProximity("xi is on a pole of the closed form");
        }
    }
    std::vector<cplx> wk(static_cast<std::size_t>(m0));
    std::vector<cplx> gk(static_cast<std::size_t>(m0));
    CSum s;
    for (long long k = 0; k < m0; ++k) {
        wk[static_cast<std::size_t>(k)] = unit_root(k * res.n0, m0) * z;
        gk[static_cast<std::size_t>(k)] = detail::g_at(g, wk[static_cast<std::size_t>(k)]);
        s += (static_cast<double>(k) / m0d - 0.5) * gk[static_cast<std::size_t>(k)];
    }
    long long A = std::max<long long>(o.a_min, static_cast<long long>(std::ceil(4 * std::abs(u) / std::max(lz, 1e-3))));
    A = ((A + m0 - 1) / m0) * m0;
    if (xi == 0.0) return s.value();
    for (long long a = 1; a <= A; ++a) {
        for (long long k = 0; k < m0; ++k) {
            cplx wkk = wk[static_cast<std::size_t>(k)];
            cplx gkk = gk[static_cast<std::size_t>(k)];
            cplx ph = unit_root(k * a, m0);
            double ad = static_cast<double>(a);
            cplx tp = ph / (two_pi * I * ad) * (detail::g_at(g, wkk * std::exp(-I * u / ad)) - gkk);
            cplx tm = std::conj(ph) / (two_pi * I * -ad) * (detail::g_at(g, wkk * std::exp(I * u / ad)) - gkk);
            s += -(tp + tm);
        }
    }
    // tail: sum_p (-iu)^p/p! (theta^p g)(w_k) S_{p+1}(A; k)
    double ratio = std::abs(u) / static_cast<double>(A) / std::max(lz, 1e-3);
    const int P = std::min(60, static_cast<int>(std::ceil(std::log(1e-3 * o.tol) / std::log(std::max(ratio, 1e-300)))) + 3);
    for (long long k = 0; k < m0; ++k) {
        auto th = detail::theta_powers(g, wk[static_cast<std::size_t>(k)], P);
        cplx up = 1;
        double pf = 1;
        for (int p = 1; p <= P; ++p) {
            up *= -I * u;
            pf *= p;
            int sp = p + 1;
            cplx S = 0;
            for (long long c = 0; c < m0; ++c) {
                long long ac = A + 1 + (((c - (A + 1)) % m0) + m0) % m0;
                double hz = hurwitz_zeta(sp, static_cast<double>(ac) / m0d) * std::pow(m0d, -sp);
                cplx e = unit_root(k * c, m0);
                S += (e + (sp % 2 ? -1.0 : 1.0) * std::conj(e)) * hz;
            }
            S /= two_pi * I;
            cplx term = up / pf * th[static_cast<std::size_t>(p)] * S;
            s += -term;
            if (std::abs(term) < 1e-3 * o.tol && p > 3 && std::pow(ratio, p) < 1e-3 * o.tol) break;
        }
    }
    return s.value();
}

struct ResidueCheck {
    cplx estimate;
    cplx expected;
    double error = 0;
};

inline ResidueCheck pole_residue_check(const Resonance& res, cplx z, long long a, long long b, double radius = 0.1,
                                       int points = 64) {
    auto pole = moving_pole(res, z, a, b);
    for (long long da = -3; da <= 3; ++da) {
        for (long long db = -3; db <= 3; ++db) {
            if ((da == 0 && db == 0) || a + da == 0) continue;
            cplx other = pole_location(res, z, a + da, b + db);
            if (std::abs(other - pole.location) < 3 * radius) throw PoleCluster("neighboring pole within 3 radii");
        }
    }
    auto g = delta_series(64);
    PsiHatOptions o;
    o.a_min = std::max<long long>(64, 4 * std::abs(a));
    CSum s, s_half;
    for (int j = 0; j < points; ++j) {
        cplx e = std::polar(1.0, two_pi * j / points);
        cplx v = psi_hat(res, g, pole.location + radius * e, z, o) * radius * e;
        s += v;
        if (j % 2 == 0) s_half += v;
    }
    cplx est = s.value() / static_cast<double>(points);
    cplx est_half = s_half.value() / static_cast<double>(points / 2);
    return {est, pole.residue, std::abs(est - est_half)};
}

struct ResumResult {
    cplx value;
    double error = 0;
    double theta = 0;
};

// f_g(Lambda0 e^eta, z) = (1/eta) [ (L_m0 . g)(z) + int_ray psi_hat e^{-xi/eta} d xi ]
inline ResumResult resum(const Resonance& res, const TruncatedPowerSeries& g, cplx eta, cplx z, double tol = 1e-12) {
    if (eta.real() == 0) throw InvalidArgument("Re eta must be nonzero");
    double theta = eta.real() > 0 ? 0.0 : pi;
    cplx x = 1.0 / eta;
    BorelGerm germ;
    PsiHatOptions po;
    po.tol = 0.1 * tol;
    germ.eval = [&](cplx xi) { return psi_hat(res, g, xi, z, po); };
    germ.validity = "closed form, away from the pole lattice";
    // linear growth; the constant is fitted on the ray
    auto fit_growth = [&](double th) {
        double C = 0;
        for (double r : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0}) {
            cplx xi = std::polar(r, th);
            C = std::max(C, std::abs(germ.eval(xi)) / (1 + r));
        }
        return Growth{1.0, 2 * C + 1e-3};
    };
    // tilt the ray when poles of the delta lattice lie on it
    auto clear = [&](double th) {
        if (!g.is_delta) return true;
        cplx dir = std::polar(1.0, th);
        for (long long a = -40; a <= 40; ++a) {
            if (a == 0) continue;
            for (long long b = -40; b <= 40; ++b) {
                cplx p = pole_location(res, z, a, b) * std::conj(dir);
                if (p.real() > 0 && p.real() < 60 && std::abs(p.imag()) < 0.05) return false;
            }
        }
        return true;
    };
    double th = theta;
    for (int k = 1; !clear(th); ++k) {
        if (k > 20) throw RayHitsSingularity("no pole-free ray within 20 degrees");
        double d = (k + 1) / 2 * (pi / 180.0) * (k % 2 ? 1 : -1);
        th = theta + d;
    }
    germ.growth = fit_growth(th);
    LaplaceOptions lo;
    lo.tol = tol;
    lo.max_panel = 0.5;
    auto lr = laplace_ray(germ, th, x, lo);
    BWDCoefficients bc;
    bc.source = g;
    auto L = bc.payload(res.m0, z).value;
    return {(L + lr.value) / eta, (lr.error) / std::abs(eta), th};
}

// lim (h - n/m) f_delta(e^{2 pi i h}, z) reconstructed from the pole data at Lambda0.
inline ResidueResult cross_resonance_limit(const Resonance& res, const PrimitiveRoot& target, cplx z, double t0 = 0.05,
                                           int steps = 7) {
    if (target.m == res.m0 && target.n == res.n0) throw InvalidArgument("target must differ from the resonance");
    const double m0 = static_cast<double>(res.m0);
    const double n0 = static_cast<double>(res.n0);
    const double hn = static_cast<double>(target.n) / static_cast<double>(target.m);
    cplx s = std::log(z);
    auto S = [&](cplx h) {
        cplx den = m0 * h - n0;
        cplx X = (static_cast<double>(res.n0_prime) * h + static_cast<double>(res.m0_prime)) / den;
        CSum acc;
        for (long long a = 1; a < 100000; ++a) {
            double ad = static_cast<double>(a);
            cplx num = std::exp(ad * s / den);
            cplx term = num / (1.0 - std::exp(two_pi * I * ad * X));
            acc += term;
            if (std::abs(num) < 1e-19 && a > 5) break;
        }
        return acc.value() / m0;
    };
    return richardson_limit(
        [&](double t) {
            cplx h = hn - I * t;
            return (h - hn) * S(h) / (h - n0 / m0);
        },
        t0, steps);
}

// L(t) = 1/log(1+t) - 1/t = sum_{n>=0} L_n t^n
inline std::vector<double> l_of_t_coeffs(int N) {
    // log(1+t)/t = sum (-1)^k t^k/(k+1); invert, then subtract 1/t
    std::vector<double> a(static_cast<std::size_t>(N + 2));
    for (int k = 0; k <= N + 1; ++k) a[static_cast<std::size_t>(k)] = (k % 2 ? -1.0 : 1.0) / (k + 1);
    std::vector<double> inv(static_cast<std::size_t>(N + 2));
    inv[0] = 1;
    for (int n = 1; n <= N + 1; ++n) {
        double s = 0;
        for (int k = 1; k <= n; ++k) s += a[static_cast<std::size_t>(k)] * inv[static_cast<std::size_t>(n - k)];
        inv[static_cast<std::size_t>(n)] = -s;
    }
    // t/log(1+t) = sum inv_n t^n, so L(t) = sum_{n>=0} inv_{n+1} t^n
    std::vector<double> L(static_cast<std::size_t>(N + 1));
    for (int n = 0; n <= N; ++n) L[static_cast<std::size_t>(n)] = inv[static_cast<std::size_t>(n + 1)];
    return L;
}

// gamma_p(a) from X/(a e^X - 1) = sum gamma_p X^p
inline std::vector<cplx> gamma_coeffs(cplx a, int P) {
    std::vector<cplx> out(static_cast<std::size_t>(P + 1));
    std::vector<cplx> d(static_cast<std::size_t>(P + 2));
    double f = 1;
    if (std::abs(a - 1.0) < 1e-14) {
        // 1 / sum X^k/(k+1)!
        for (int k = 0; k <= P + 1; ++k) {
            f *= (k + 1);
            d[static_cast<std::size_t>(k)] = 1.0 / f;
        }
        out[0] = 1.0 / d[0];
        for (int n = 1; n <= P; ++n) {
            cplx s = 0;
            for (int k = 1; k <= n; ++k) s += d[static_cast<std::size_t>(k)] * out[static_cast<std::size_t>(n - k)];
            out[static_cast<std::size_t>(n)] = -s / d[0];
        }
        return out;
    }
    // X * 1/((a-1) + a X + a X^2/2 + ...)
    d[0] = a - 1.0;
    for (int k = 1; k <= P + 1; ++k) {
        f *= k;
        d[static_cast<std::size_t>(k)] = a / f;
    }
    std::vector<cplx> inv(static_cast<std::size_t>(P + 1));
    inv[0] = 1.0 / d[0];
    for (int n = 1; n <= P; ++n) {
        cplx s = 0;
        for (int k = 1; k <= n; ++k) s += d[static_cast<std::size_t>(k)] * inv[static_cast<std::size_t>(n - k)];
        inv[static_cast<std::size_t>(n)] = -s / d[0];
    }
    out[0] = 0;
    for (int p = 1; p <= P; ++p) out[static_cast<std::size_t>(p)] = inv[static_cast<std::size_t>(p - 1)];
    return out;
}

// Li_{-p}(w) = sum n^p w^n for |w| < 1
inline cplx polylog_neg(int p, cplx w) {
    double aw = std::abs(w);
    if (!(aw < 1)) throw DiskExceeded("polylog argument outside the unit disk");
    CSum s;
    cplx wn = 1;
    for (long long n = 1; n < 10000000; ++n) {
        wn *= w;
        double x = static_cast<double>(n);
        cplx t = std::pow(x, p) * wn;
        s += t;
        if (x * std::log(1 / aw) > p + 1 && std::abs(t) < 1e-20 * std::max(1.0, std::abs(s.value()))) break;
    }
    return s.value();
}

// Psi_p(z) for p = 0..P from the formal solution of the difference equation (g = delta).
inline std::vector<cplx> formal_psi_coeffs(const Resonance& res, cplx z, int P) {
    const long long m0 = res.m0;
    std::vector<cplx> out(static_cast<std::size_t>(P + 1));
    out[0] = l_m_value(m0, z);
    std::vector<std::vector<cplx>> gam;
    for (long long r = 0; r < m0; ++r) gam.push_back(gamma_coeffs(unit_root(r * res.n0, m0), P));
    for (int p = 1; p <= P; ++p) {
        CSum s;
        for (long long r = 0; r < m0; ++r) {
            for (long long k = 0; k < m0; ++k) {
                cplx w = unit_root(k * res.n0, m0) * z;
                s += gam[static_cast<std::size_t>(r)][static_cast<std::size_t>(p)] * unit_root(-k * r * res.n0, m0) /
                     static_cast<double>(m0) * polylog_neg(p - 1, w);
            }
        }
        out[static_cast<std::size_t>(p)] = s.value();
    }
    return out;
}

// Taylor coefficients b_0..b_{N-1} of xi -> psi_hat(xi) by a Cauchy integral of radius rho.
inline std::vector<cplx> psi_hat_taylor(const Resonance& res, const TruncatedPowerSeries& g, cplx z, int N, double rho,
                                        int points = 128) {
    std::vector<cplx> vals(static_cast<std::size_t>(points));
    for (int j = 0; j < points; ++j) vals[static_cast<std::size_t>(j)] = psi_hat(res, g, std::polar(rho, two_pi * j / points), z);
    std::vector<cplx> b(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        CSum s;
        for (int j = 0; j < points; ++j) s += vals[static_cast<std::size_t>(j)] * std::polar(1.0, -two_pi * n * j / points);
        b[static_cast<std::size_t>(n)] = s.value() / static_cast<double>(points) / std::pow(rho, n);
    }
    return b;
}

struct ChainReport {
    std::vector<cplx> phi_direct;   // from the asymptotic coefficients
    std::vector<cplx> phi_chain;    // from psi_hat through the composition chain
    std::vector<cplx> psi_cauchy;   // Taylor coefficients of psi_hat
    std::vector<cplx> psi_formal;   // from the formal solution
    double max_phi_diff = 0;
    double max_psi_diff = 0;
};

inline ChainReport eta_t_chain_check(const Resonance& res, cplx z, int N) {
    if (N < 1 || N > 16) throw InvalidArgument("chain check supports 1 <= N <= 16");
    ChainReport rep;
    auto g = delta_series(64);
    auto bc = bwd_from_solution(g, 1.0, std::abs(z), 0);
    auto A = asym_coeffs(bc, res, N, z, 1e-16);
    cplx L0 = res.Lambda0;
    double fact = 1;
    cplx lp = L0;
    for (int n = 0; n < N; ++n) {
        if (n > 0) fact *= n;
        rep.phi_direct.push_back(lp * A.A[static_cast<std::size_t>(n)] / fact);
        lp *= L0;
    }
    // nearest pole of the lattice sets the Cauchy radius
    double dmin = inf;
    for (long long a = -4; a <= 4; ++a)
        for (long long b = -4; b <= 4; ++b)
            if (a != 0) dmin = std::min(dmin, std::abs(pole_location(res, z, a, b)));
    rep.psi_cauchy = psi_hat_taylor(res, g, z, N, 0.45 * dmin);
    auto Pf = formal_psi_coeffs(res, z, N);
    fact = 1;
    for (int n = 0; n < N; ++n) {
        if (n > 0) fact *= n;
        rep.psi_formal.push_back(Pf[static_cast<std::size_t>(n + 1)] / fact);
        rep.max_psi_diff = std::max(rep.max_psi_diff, std::abs(rep.psi_formal.back() - rep.psi_cauchy[static_cast<std::size_t>(n)]));
    }
    auto Lc = l_of_t_coeffs(N + 1);
    BorelGerm psi;
    psi.b = rep.psi_cauchy;
    BorelGerm ell, Mh;
    fact = 1;
    for (int n = 1; n <= N; ++n) {
        ell.b.push_back(Lc[static_cast<std::size_t>(n)] / fact);
        fact *= n;
    }
    fact = 1;
    for (int n = 0; n < N; ++n) {
        if (n > 0) fact *= n;
        Mh.b.push_back(Lc[static_cast<std::size_t>(n)] / fact);
    }
    auto chi = composition_convolution(borel_translate(psi, 0.5), ell, static_cast<std::size_t>(N), static_cast<std::size_t>(N));
    auto Mchi = convolve(Mh, chi, static_cast<std::size_t>(N));
    cplx Lm = l_m_value(res.m0, z);
    for (int n = 0; n < N; ++n) {
        auto idx = static_cast<std::size_t>(n);
        cplx v = L0 * (Mh.b[idx] * Lm + chi.b[idx] + Mchi.b[idx]);
        rep.phi_chain.push_back(v);
        rep.max_phi_diff = std::max(rep.max_phi_diff, std::abs(v - rep.phi_direct[idx]) / std::max(1.0, std::abs(v)));
    }
    return rep;
}

}  // namespace qlog

#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <vector>

#include "borel.hpp"
#include "lagrange.hpp"
#include "series.hpp"

namespace qlog {

struct QuadPointData {
    QuadraticIrrational alpha;
    SpectralData spectral;
    cplx lambda;
    cplx s;

    double gap() const { return std::abs(alpha.alpha_d() - alpha.alpha_bar_d()); }
    double lead() const { return alpha.a.convert_to<double>(); }
    // Lower bound on D^2 |Z| for nearest pairs with D >= D0 on this side.
    double nu_low(int side, long long D0) const {
        double F = D0 > spectral.d_warm ? static_cast<double>(spectral.r(side)) : 1.0;
        return F / (lead() * (gap() + 1.0 / static_cast<double>(D0)));
    }
    double kappa_low(int side, long long D0) const { return std::min(1.0, std::sqrt(nu_low(side, D0))); }
};

inline QuadPointData make_quad_point(const QuadraticIrrational& q, cplx s, long long D_scan = 100000) {
    if (!(s.real() < 0)) throw InvalidArgument("need Re s < 0");
    return {q, spectral_constants(q, D_scan), std::polar(1.0, two_pi * q.alpha_d()), s};
}

// ||D alpha|| >= gamma / D from |F| >= 1.
inline SmallDivisorBound dc_bound(const QuadraticIrrational& q) {
    double gap = std::abs(q.alpha_d() - q.alpha_bar_d());
    return {1.0 / (q.a.convert_to<double>() * (gap + 0.5)), 2.0};
}

struct SidePair {
    long long D = 0;
    long long N = 0;
    double Z = 0;
};

namespace detail {
// Distance from alpha D to the nearest integer on the given side, |N - alpha D|.
inline double side_offset(const QuadraticIrrational& q, int side, long long D) {
    long long Nm = floor_alpha_times(q, D);
    return side > 0 ? z_times_d(q, Nm + 1, D) : -z_times_d(q, Nm, D);
}

inline double log_hurwitz(double k, double a) {
    double la = std::log(a);
    return -k * la + std::log1p(std::exp(k * la) * hurwitz_zeta(k, a + 1));
}

// sum_{D>M} f(D) for f eventually of decreasing ratio; inf when not summable.
template <class F>
double ratio_tail(F f, long long M) {
    double acc = 0;
    for (long long D = M + 1; D < M + 20000000; ++D) {
        double a = f(D), b = f(D + 1);
        if (!std::isfinite(a)) return inf;
        acc += a;
        if (b == 0) return acc;
        double rho = b / a;
        if (rho < 1) {
            double rem = b / (1 - rho);
            if (rem <= 1e-6 * acc || rem < 1e-300) return acc + rem;
        }
    }
    return inf;
}

// log of sum_{D>M} C D^p e^{-sigma D}
inline double log_poly_exp_tail(double logC, double p, double sigma, long long M) {
    if (!(sigma > 0)) return inf;
    long long D = M + 1;
    while (p * std::log1p(1.0 / static_cast<double>(D)) - sigma >= -1e-3) ++D;
    double logf = [&](long long x) { return logC + p * std::log(static_cast<double>(x)) - sigma * static_cast<double>(x); }(D);
    double rho = std::exp(p * std::log1p(1.0 / static_cast<double>(D)) - sigma);
    double head = -inf;
    for (long long x = M + 1; x < D; ++x) {
        double lx = logC + p * std::log(static_cast<double>(x)) - sigma * static_cast<double>(x);
        head = head == -inf ? lx : std::max(head, lx) + std::log1p(std::exp(-std::abs(head - lx)));
    }
    double rem = logf - std::log1p(-rho);
    if (head == -inf) return rem;
    return std::max(head, rem) + std::log1p(std::exp(-std::abs(head - rem)));
}
}  // namespace detail

// Pairs (D, N) with the sign of Z = N/D - alpha given by side and |Z| <= window.
inline std::vector<SidePair> side_pairs(const QuadraticIrrational& q, int side, long long D_max, double window = 1.0) {
    std::vector<SidePair> out;
    for (long long D = 1; D <= D_max; ++D) {
        double a = detail::side_offset(q, side, D);
        long long Nm = floor_alpha_times(q, D);
        for (long long j = 0;; ++j) {
            double Z = (a + static_cast<double>(j)) / static_cast<double>(D);
            if (Z > window) break;
            out.push_back({D, side > 0 ? Nm + 1 + j : Nm - j, side > 0 ? Z : -Z});
        }
    }
    return out;
}

// Certified bound on the discarded part of psi_hat^side for D > M at strip coordinate x.
inline double psi_tail(const QuadPointData& d, int side, double x, long long M) {
    double nu = d.nu_low(side, M + 1), ka = d.kappa_low(side, M + 1);
    double dp = -d.s.real() - x / ka;
    if (!(dp > 0)) return inf;
    return detail::ratio_tail(
        [&](long long D) {
            double t = static_cast<double>(D);
            return (t * t * t / (nu * nu) + 2 * t) * std::exp(-dp * t);
        },
        M);
}

inline long long psi_certified_dmax(const QuadPointData& d, int side, double x, double tol, long long D_cap) {
    if (!(psi_tail(d, side, x, D_cap) <= tol))
        throw TailNotCertified("psi_hat tail exceeds tolerance at D_max = " + std::to_string(D_cap));
    long long lo = 1, hi = 8;
    while (hi < D_cap && !(psi_tail(d, side, x, hi) <= tol)) {
        lo = hi;
        hi *= 2;
    }
    hi = std::min(hi, D_cap);
    while (hi - lo > 1) {
        long long mid = (lo + hi) / 2;
        if (psi_tail(d, side, x, mid) <= tol)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

// Truncated psi_hat^side with per-D tail moments for the far N.
class PsiHatSum {
public:
    PsiHatSum(const QuadPointData& d, int side, long long D_max, double zeta_max)
        : side_(side), s_(d.s), zmax_(std::max(zeta_max, 0.5)) {
        if (side != 1 && side != -1) throw InvalidArgument("side must be +1 or -1");
        rows_.reserve(static_cast<std::size_t>(D_max));
        for (long long D = 1; D <= D_max; ++D) {
            Row r;
            r.D = static_cast<double>(D);
            r.a = detail::side_offset(d.alpha, side, D);
            r.K = std::max<long long>(1, static_cast<long long>(std::ceil(r.D * zmax_ * zmax_ / 16.0)));
            double b = r.a + static_cast<double>(r.K);
            for (int n = 0; n < kTaylor; ++n) r.mom.push_back(std::pow(r.D, n + 2.0) * hurwitz_zeta(n + 2.0, b));
            r.abs_w = std::exp(r.D * s_.real()) / r.D;
            rows_.push_back(std::move(r));
        }
    }

    long long d_max() const { return static_cast<long long>(rows_.size()); }
    double zeta_max() const { return zmax_; }

    cplx operator()(cplx zeta) const {
        if (std::abs(zeta) > zmax_ * (1 + 1e-12)) throw InvalidArgument("zeta beyond the evaluator's range");
        CSum acc;
        cplx z2 = zeta * zeta;
        for (const auto& r : rows_) {
            cplx Ds = r.D * s_;
            for (long long j = 0; j < r.K; ++j) {
                double az = (r.a + static_cast<double>(j)) / r.D;
                cplx u = zeta / std::sqrt(az);
                if (side_ < 0) u *= I;
                acc += -0.5 / (az * az * r.D) * (std::exp(u + Ds) + std::exp(-u + Ds));
            }
            CSum far;
            cplx p = 1;
            double fact = 1;
            for (int n = 0; n < kTaylor; ++n) {
                cplx t = p / fact * r.mom[static_cast<std::size_t>(n)];
                if (side_ < 0 && n % 2) t = -t;
                far += t;
                if (n > 4 && std::abs(t) < 1e-18 * std::abs(far.value())) break;
                p *= z2;
                fact *= (2.0 * n + 1) * (2.0 * n + 2);
            }
            acc += -std::exp(Ds) / r.D * far.value();
        }
        return acc.value();
    }

    // sup of |psi_hat| on the ray where the strip coordinate vanishes
    double ray_bound() const {
        double b = 0;
        for (const auto& r : rows_) b += r.abs_w * r.D * r.D * hurwitz_zeta(2.0, r.a);
        return b;
    }

private:
    static constexpr int kTaylor = 40;
    struct Row {
        double D = 0, a = 0, abs_w = 0;
        long long K = 1;
        std::vector<double> mom;
    };
    int side_;
    cplx s_;
    double zmax_;
    std::vector<Row> rows_;
};

struct PsiValue {
    cplx value;
    double tail = 0;
    long long d_used = 0;
};

inline double strip_coordinate(int side, cplx zeta) { return side > 0 ? std::abs(zeta.real()) : std::abs(zeta.imag()); }

inline void check_strip(const QuadPointData& d, int side, cplx zeta) {
    if (!(strip_coordinate(side, zeta) < d.spectral.kappa(side) * (-d.s.real())))
        throw OutsideStrip("zeta outside the strip of analyticity");
}

// psi_hat^side(zeta, s), truncated at the smallest D <= D_max whose tail bound meets tol.
inline PsiValue psi_hat_pm(const QuadPointData& d, int side, cplx zeta, long long D_max, double tol) {
    check_strip(d, side, zeta);
    double x = strip_coordinate(side, zeta);
    long long M = psi_certified_dmax(d, side, x, tol, D_max);
    PsiHatSum ev(d, side, M, std::abs(zeta));
    return {ev(zeta), psi_tail(d, side, x, M), M};
}

// Single pair: chi_(D,N)(h, s) and its Borel transform.
inline cplx chi_single(double Z, long long D, cplx s, cplx h) {
    double t = static_cast<double>(D);
    return h / (Z * (h - Z)) * std::exp(t * s) / t;
}

inline BorelGerm psi_single(double Z, long long D, cplx s) {
    double t = static_cast<double>(D);
    cplx w = std::exp(t * s) / t;
    BorelGerm g;
    g.eval = [Z, w](cplx zeta) {
        cplx u = zeta / std::sqrt(std::abs(Z));
        return -w / (Z * Z) * (Z > 0 ? std::cosh(u) : std::cos(u));
    };
    g.growth = Growth{1.0 / std::sqrt(std::abs(Z)), std::abs(w) / (Z * Z)};
    for (int n = 0; n < 8; ++n) {
        g.b.push_back(-w / (Z * Z) * std::pow(Z, -n) / std::tgamma(2.0 * n + 1));
        g.b.push_back(0);
    }
    return g;
}

// Branch of h^{1/2}: positive imaginary part for +, positive real part for -.
inline cplx half_power(int side, cplx h) {
    cplx r = std::sqrt(h);
    if (side > 0 && r.imag() < 0) r = -r;
    return r;
}

inline double excluded_axis_distance(int side, cplx h) {
    bool same = side > 0 ? h.real() >= 0 : h.real() <= 0;
    return same ? std::abs(h.imag()) : std::abs(h);
}

struct ChiValue {
    cplx value;
    double error = 0;
    long long d_used = 0;
};

// sum over E^side of Z^{-1} h/(h - Z) e^{Ds}/D.
inline ChiValue chi_pm_direct(const QuadPointData& d, int side, cplx h, double tol, long long D_cap = 100000) {
    if (side != 1 && side != -1) throw InvalidArgument("side must be +1 or -1");
    double dh = excluded_axis_distance(side, h);
    if (!(dh > 0)) throw PoleProximity("h lies on the excluded half-axis");
    double ah = std::abs(h);
    auto tail = [&](long long M) {
        double nu = d.nu_low(side, M + 1);
        return detail::ratio_tail(
            [&](long long D) {
                double t = static_cast<double>(D);
                double J = std::ceil(2 * ah * t);
                double b = ah * t * t / (nu * dh) + ah * t * (1 + std::log(J + 1)) / dh + t;
                return b * std::exp(t * d.s.real()) / t;
            },
            M);
    };
    long long M = 8;
    while (M < D_cap && !(tail(M) <= 0.5 * tol)) M = std::min(D_cap, 2 * M);
    double tb = tail(M);
    if (!(tb <= tol)) throw TailNotCertified("chi tail exceeds tolerance at D_max = " + std::to_string(M));
    CSum acc;
    double sg = side;
    for (long long D = 1; D <= M; ++D) {
        double t = static_cast<double>(D);
        double a = detail::side_offset(d.alpha, side, D);
        cplx w = std::exp(t * d.s) / t;
        auto K = static_cast<long long>(std::ceil(2 * ah * t)) + 1;
        CSum part;
        for (long long j = 0; j < K; ++j) {
            double Z = sg * (a + static_cast<double>(j)) / t;
            cplx den = h - Z;
            if (std::abs(den) < 1e-14 * std::max(1.0, ah)) throw PoleProximity("h coincides with a pair Z");
            part += h / (Z * den);
        }
        // -sum_{n>=1} h^n sum_{j>=K} Z^{-n-1}
        double b = a + static_cast<double>(K);
        cplx hp = h;
        double sn = sg;
        for (int n = 1; n < 200; ++n) {
            sn *= sg;
            cplx term = -hp * sn * std::pow(t, n + 1.0) * hurwitz_zeta(n + 1.0, b);
            part += term;
            if (std::abs(term) < 1e-18 * std::max(1e-300, std::abs(part.value()))) break;
            hp *= h;
        }
        acc += w * part.value();
    }
    return {acc.value(), tb, M};
}

struct ChiLaplace {
    cplx value;
    double error = 0;
    long long d_used = 0;
    double length = 0;
};

// h^{1/2} int psi_hat^side e^{-zeta h^{-1/2}} d zeta along iR+ for + and R+ for -.
inline ChiLaplace chi_pm_laplace(const QuadPointData& d, int side, cplx h, const LaplaceOptions& o = {},
                                 double psi_tol = 1e-10, long long D_cap = 100000) {
    if (side != 1 && side != -1) throw InvalidArgument("side must be +1 or -1");
    if (!(excluded_axis_distance(side, h) > 0)) throw PoleProximity("h lies on the excluded half-axis");
    cplx h1 = half_power(side, h);
    cplx x = 1.0 / h1;
    double theta = side > 0 ? pi / 2 : 0.0;
    cplx dir = std::polar(1.0, theta);
    double margin = (x * dir).real();
    if (!(margin > 0)) throw DampingInsufficient("h^{-1/2} does not damp along the ray");
    long long M = psi_certified_dmax(d, side, 0.0, psi_tol, D_cap);
    PsiHatSum probe(d, side, M, 0.5);
    double C = probe.ray_bound() + psi_tol;
    double T = std::max(1.0, std::log(std::max(C, 1e-300) / (0.25 * o.tol * margin)) / margin);
    auto ev = std::make_shared<PsiHatSum>(d, side, M, 1.05 * T + 1);
    BorelGerm g;
    g.eval = [ev](cplx zeta) { return (*ev)(zeta); };
    g.growth = Growth{0.0, C};
    auto r = laplace_ray(g, theta, x, o);
    return {h1 * r.value, std::abs(h1) * (r.error + psi_tol / margin), M, r.length};
}

struct SingularTrend {
    cplx point;
    std::vector<double> offsets;
    std::vector<double> re_values;
    std::vector<double> tails;
    std::optional<double> uncertified_offset;
    bool strictly_decreasing = true;
    double min_value = inf;
};

inline cplx singular_point(const QuadPointData& d, int side, long long k, long long l) {
    cplx base = d.spectral.kappa(side) * (-d.s + two_pi * I * (static_cast<double>(k) * d.alpha.alpha_d() + static_cast<double>(l)));
    return side > 0 ? base : I * base;
}

// Re psi_hat^side at zeta_{k,l} minus offsets, from the left for + and from below for -.
inline SingularTrend singular_approach(const QuadPointData& d, int side, long long k, long long l,
                                       const std::vector<double>& offsets, double tol = 1e-8, long long D_cap = 400000) {
    SingularTrend tr;
    tr.point = singular_point(d, side, k, l);
    cplx dir = side > 0 ? cplx(-1, 0) : cplx(0, -1);
    for (double t : offsets) {
        cplx zeta = tr.point + t * dir;
        PsiValue v;
        try {
            v = psi_hat_pm(d, side, zeta, D_cap, tol);
        } catch (const TailNotCertified&) {
            tr.uncertified_offset = t;
            break;
        }
        if (!tr.re_values.empty() && !(v.value.real() < tr.re_values.back())) tr.strictly_decreasing = false;
        tr.offsets.push_back(t);
        tr.re_values.push_back(v.value.real());
        tr.tails.push_back(v.tail);
        tr.min_value = std::min(tr.min_value, v.value.real());
    }
    if (tr.offsets.empty()) throw TailNotCertified("no offset of the schedule could be certified");
    return tr;
}

// Partial sum of -sum D^{-1} Z^{-2} e^{Z^{-1/2} zeta + Ds} over the recurring class in the scan window.
inline cplx psi_recurring_class(const QuadPointData& d, int side, cplx zeta) {
    CSum acc;
    for (const auto& p : d.spectral.a_seq(side)) {
        double t = static_cast<double>(p.D);
        double az = std::abs(z_times_d(d.alpha, p.N, p.D)) / t;
        cplx u = zeta / std::sqrt(az);
        if (side < 0) u *= -I;
        acc += -std::exp(u + t * d.s) / (t * az * az);
    }
    return acc.value();
}

// chi_m(s) = -sum_{E+} e^{Ds} D^{-1} Z^{-m-1} - (-1)^{m-1} sum_{E-} e^{Ds} D^{-1} |Z|^{-m-1}, m >= 1.
inline ScaledComplex chi_coeff_side(const QuadPointData& d, int side, int m, double rel_tol = 1e-15,
                                    long long D_cap = 200000) {
    if (m < 1) throw InvalidArgument("coefficient index must be >= 1");
    double k = m + 1.0;
    double sigma = -d.s.real();
    double L = d.lead() * (d.gap() + 1);
    // per-D bound e^{-sigma D} D^{2k-1} 2 (L^k + 2)
    double logC = std::log(2.0) + std::log(std::pow(L, k) + 2);
    ScaledSum acc;
    double sgn = side > 0 ? -1.0 : ((m - 1) % 2 ? 1.0 : -1.0);
    for (long long D = 1; D <= D_cap; ++D) {
        double t = static_cast<double>(D);
        double a = detail::side_offset(d.alpha, side, D);
        double la = -t * sigma + (k - 1) * std::log(t) + detail::log_hurwitz(k, a);
        acc.add(la, sgn * std::polar(1.0, t * d.s.imag()));
        if (D % 16 == 0) {
            double lt = detail::log_poly_exp_tail(logC, 2 * k - 1, sigma, D);
            auto v = acc.value();
            if (lt < v.logabs + std::log(rel_tol)) return v;
        }
    }
    throw PrecisionExhausted("coefficient sum did not converge within D_cap");
}

inline ScaledComplex chi_coeff(const QuadPointData& d, int m, double rel_tol = 1e-15) {
    auto p = chi_coeff_side(d, 1, m, rel_tol), q = chi_coeff_side(d, -1, m, rel_tol);
    ScaledSum s;
    s.add(p.logabs, p.phase);
    s.add(q.logabs, q.phase);
    return s.value();
}

struct OddCoeff {
    int j = 0;
    double log_abs_chi = 0;  // log |chi_{2j-1}|
    bool negative = false;   // chi_{2j-1} < 0
    double root = 0;         // |chi_{2j-1}|^{1/(2j-1)}
    long long E = 0;
    double delta = 0;
    bool certified = false;
    bool holds = false;
};

struct OddCoeffReport {
    int eps = 1;
    double c = 0;
    std::size_t p0 = 0;
    long long j0 = 0;
    std::vector<OddCoeff> rows;
    std::vector<double> delta_sum;  // partial sums of delta_j^{-3/4} over certified j
};

inline OddCoeffReport chi_odd_coeffs(const QuadPointData& d, int j_max, double rel_tol = 1e-14) {
    if (d.s.imag() != 0) throw InvalidArgument("part (c) bounds need real s");
    OddCoeffReport rep;
    rep.eps = d.spectral.eps_side();
    rep.c = 1.5 * d.spectral.nu(rep.eps);
    auto seq = d.spectral.a_seq(rep.eps);
    std::sort(seq.begin(), seq.end(), [](const PairND& x, const PairND& y) { return x.D < y.D; });
    std::vector<long long> Ds;
    std::size_t p0 = seq.size();
    for (std::size_t p = seq.size(); p-- > 0;) {
        double t = static_cast<double>(seq[p].D);
        double val = t * std::abs(z_times_d(d.alpha, seq[p].N, seq[p].D));
        if (!(val <= rep.c)) break;
        p0 = p;
    }
    rep.p0 = p0;
    for (std::size_t p = p0; p < seq.size(); ++p) Ds.push_back(seq[p].D);
    if (Ds.empty()) throw WindowTooSmall("no recurring pair satisfies the |Z| <= c D^{-2} threshold");
    rep.j0 = (Ds.front() + 3) / 4;
    double z = std::exp(d.s.real());
    double partial = 0;
    for (int j = 1; j <= j_max; ++j) {
        OddCoeff row;
        row.j = j;
        auto v = chi_coeff(d, 2 * j - 1, rel_tol);
        row.log_abs_chi = v.logabs;
        row.negative = v.phase.real() < 0 && std::abs(v.phase.imag()) < 1e-12;
        row.root = std::exp(v.logabs / (2.0 * j - 1));
        long long lim = 4LL * j;
        for (long long D : Ds)
            if (D <= lim) row.E = D;
        row.certified = j >= rep.j0 && row.E > 0 && lim <= d.spectral.d_max;
        if (row.certified) {
            double E = static_cast<double>(row.E);
            row.delta = 0.5 / rep.c * z * z * E * E;
            row.holds = row.root > row.delta;
            partial += std::pow(row.delta, -0.75);
            rep.delta_sum.push_back(partial);
        }
        rep.rows.push_back(row);
    }
    return rep;
}

struct GevreyGrowth {
    std::vector<double> log_abs;  // log |a_k|, k = 0..k_max
    std::vector<cplx> phase;
    std::vector<double> log_tail;
    GevreyFit fit;
    long long m_used = 0;
};

// a_k = (-1)^k sum_Lambda a_Lambda (lambda - Lambda)^{-k-1} with lambda = e^{2 pi i alpha}.
inline GevreyGrowth gevrey_tau_growth(const BWDCoefficients& a, const Real& alpha, cplx z, int k_max,
                                      const DistanceBound& dist, std::size_t k_lo = 10, std::size_t k_hi = 40,
                                      double rel_tol = 1e-15, long long m_cap = 20000) {
    if (k_max < 0) throw InvalidArgument("k_max must be >= 0");
    std::vector<ScaledSum> acc(static_cast<std::size_t>(k_max) + 1);
    const double a_d = alpha.convert_to<double>();
    const cplx lam = std::polar(1.0, two_pi * a_d);
    auto add_root = [&](long long n, long long m, cplx value) {
        // lambda - Lambda = lambda 2i sin(pi theta) e^{-i pi theta}, theta = alpha - n/m
        Real am = alpha * m;
        Real fl = floor(am);
        double th = (static_cast<double>((am - fl).convert_to<double>()) + static_cast<double>(fl.convert_to<long long>() - n)) /
                    static_cast<double>(m);
        th -= std::round(th);
        double sn = std::sin(pi * th);
        if (sn == 0) throw NearResonance("lambda coincides with a root");
        double ld = std::log(2 * std::abs(sn));
        cplx ph = lam * I * std::polar(1.0, -pi * th) * (sn < 0 ? -1.0 : 1.0);
        cplx inv = std::conj(ph);
        double lv = std::log(std::abs(value));
        cplx pv = value / std::abs(value);
        cplx p = pv * inv;
        for (int k = 0; k <= k_max; ++k) {
            acc[static_cast<std::size_t>(k)].add(lv - (k + 1) * ld, (k % 2 ? -1.0 : 1.0) * p);
            p *= inv;
        }
    };
    GevreyGrowth out;
    out.log_tail.assign(static_cast<std::size_t>(k_max) + 1, -inf);
    if (!a.from_solution()) {
        for (const auto& e : a.entries)
            if (e.value != 0.0) add_root(e.root.n, e.root.m, e.root.value * e.value);
        out.m_used = 0;
        for (const auto& e : a.entries) out.m_used = std::max(out.m_used, e.root.m);
    } else {
        double r = a.r, c = a.c;
        double tz = a.source->exact ? 0 : std::abs(z) / a.source->radius;
        if (!a.source->exact && tz < 1) {
            r = tz;
            c = a.source->cert / (1 - tz);
        }
        long long m = 1;
        bool done = false;
        for (; m <= m_cap && !done; ++m) {
            auto pv = a.payload(m, z);
            for (long long n = 0; n < m; ++n) {
                if (std::gcd(n, m) != 1) continue;
                cplx v = unit_root(n, m) * pv.value;
                if (v != 0.0) add_root(n, m, v);
            }
            if (a.source->exact && static_cast<std::size_t>(m) >= a.source->order()) {
                done = true;
                break;
            }
            if (m % 25 == 0 && m >= 50) {
                done = true;
                for (int k = 0; k <= k_max; ++k) {
                    // sum_{m'>m} c r^m' / lb(m')^{k+1}
                    double lr = std::log(r);
                    auto lt = [&](long long x) { return std::log(c) + static_cast<double>(x) * lr - (k + 1) * std::log(dist(x)); };
                    double l1 = lt(m + 1), l2 = lt(m + 2);
                    double lrho = l2 - l1;
                    double tl = lrho < 0 ? l1 - std::log1p(-std::exp(lrho)) : inf;
                    out.log_tail[static_cast<std::size_t>(k)] = tl;
                    if (!(tl < acc[static_cast<std::size_t>(k)].value().logabs + std::log(rel_tol))) {
                        done = false;
                        break;
                    }
                }
            }
        }
        if (!done) throw PrecisionExhausted("gevrey coefficients not converged within m_cap");
        out.m_used = m;
    }
    for (auto& s : acc) {
        auto v = s.value();
        out.log_abs.push_back(v.logabs);
        out.phase.push_back(v.phase);
    }
    if (k_hi <= static_cast<std::size_t>(k_max) && k_hi >= k_lo + 5) out.fit = gevrey_order_fit_log(out.log_abs, k_lo, k_hi);
    return out;
}

inline GevreyGrowth gevrey_tau_growth(const QuadPointData& d, int k_max, cplx z = 0.5, std::size_t k_lo = 10,
                                      std::size_t k_hi = 40) {
    auto a = bwd_from_solution(delta_series(64), 1.0, std::abs(z), 0);
    return gevrey_tau_growth(a, d.alpha.alpha, z, k_max, DistanceBound::diophantine(dc_bound(d.alpha)), k_lo, k_hi);
}

struct Rectangle {
    cplx rotation;         // (2 pi i lambda)^{1/2}
    double half_re = 0;    // kappa_+ log(1/|z|)
    double half_im = 0;    // kappa_- log(1/|z|)
    bool contains_rotated(cplx xi) const {
        cplx w = xi / rotation;
        return std::abs(w.real()) < half_re && std::abs(w.imag()) < half_im;
    }
    bool contains(cplx zeta) const { return std::abs(zeta.real()) < half_re && std::abs(zeta.imag()) < half_im; }
    double aspect() const { return half_im / half_re; }
};

inline Rectangle rec_rectangle(const SpectralData& sd, cplx lambda, cplx z) {
    double az = std::abs(z);
    if (!(az < 1) || az == 0) throw InvalidArgument("need 0 < |z| < 1");
    double L = std::log(1 / az);
    return {std::sqrt(two_pi * I * lambda), sd.kappa_plus * L, sd.kappa_minus * L};
}

struct QuadChainReport {
    std::vector<cplx> F;          // Taylor coefficients at lambda, n = 1..N
    std::vector<cplx> chi;        // chi_n, n = 1..N
    std::vector<cplx> G;          // odd coefficients of G_hat, xi^{2n-1}
    double max_chain_diff = 0;    // relative |G_{2n-1} - F_n/(2n-1)!|
    double max_chi_diff = 0;      // relative chi_n vs (2 pi i)^{n+1} sum lambda^r b_{r,n} F_r
};

namespace detail {
// coefficients of (u / log(1+u))^{1/2}
inline std::vector<double> sqrt_inverse_log_ratio(int n) {
    std::vector<double> l(static_cast<std::size_t>(n) + 1), inv(static_cast<std::size_t>(n) + 1, 0.0),
        w(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 0; k <= n; ++k) l[static_cast<std::size_t>(k)] = (k % 2 ? -1.0 : 1.0) / (k + 1.0);
    inv[0] = 1;
    for (int k = 1; k <= n; ++k) {
        double s = 0;
        for (int i = 1; i <= k; ++i) s += l[static_cast<std::size_t>(i)] * inv[static_cast<std::size_t>(k - i)];
        inv[static_cast<std::size_t>(k)] = -s;
    }
    w[0] = 1;
    for (int k = 1; k <= n; ++k) {
        double s = inv[static_cast<std::size_t>(k)];
        for (int i = 1; i < k; ++i) s -= w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(k - i)];
        w[static_cast<std::size_t>(k)] = s / 2;
    }
    return w;
}

// [x^n] (e^x - 1)^r
inline double composition_weight(int r, int n) {
    std::vector<double> e(static_cast<std::size_t>(n) + 1, 0.0), p(static_cast<std::size_t>(n) + 1, 0.0);
    double f = 1;
    for (int k = 1; k <= n; ++k) {
        f *= k;
        e[static_cast<std::size_t>(k)] = 1 / f;
    }
    p[0] = 1;
    for (int t = 0; t < r; ++t) {
        std::vector<double> q(static_cast<std::size_t>(n) + 1, 0.0);
        for (int i = 0; i <= n; ++i)
            for (int k = 1; i + k <= n; ++k) q[static_cast<std::size_t>(i + k)] += p[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(k)];
        p = q;
    }
    return p[static_cast<std::size_t>(n)];
}
}  // namespace detail

// Taylor coefficients of F_hat from the Borel chain of psi_hat, against the BWD Taylor coefficients at lambda.
inline QuadChainReport quad_chain_check(const QuadPointData& d, int N) {
    if (N < 1) throw InvalidArgument("N must be >= 1");
    QuadChainReport rep;
    auto gg = gevrey_tau_growth(d, N, std::exp(d.s), 0, 0);
    for (int n = 1; n <= N; ++n)
        rep.F.push_back(std::exp(gg.log_abs[static_cast<std::size_t>(n)]) * gg.phase[static_cast<std::size_t>(n)]);
    for (int n = 1; n <= N; ++n) rep.chi.push_back(chi_coeff(d, n).value());
    const std::size_t L = 2 * static_cast<std::size_t>(N);
    const cplx tpi = two_pi * I;
    const cplx c = std::sqrt(tpi * d.lambda);
    BorelGerm G2;
    G2.b.assign(L, 0.0);
    for (int n = 0; n < N; ++n) {
        auto k = static_cast<std::size_t>(2 * n + 1);
        cplx g1 = rep.chi[static_cast<std::size_t>(n)] / (std::tgamma(2.0 * n + 2) * tpi);
        G2.b[k] = std::pow(c, -1.0 - static_cast<double>(k)) * g1;
    }
    auto w = detail::sqrt_inverse_log_ratio(N + 1);
    BorelGerm L12;
    L12.b.assign(L, 0.0);
    for (int j = 1; 2 * j - 2 < static_cast<int>(L); ++j)
        L12.b[static_cast<std::size_t>(2 * j - 2)] =
            w[static_cast<std::size_t>(j)] * std::pow(d.lambda, -static_cast<double>(j)) / std::tgamma(2.0 * j - 1);
    auto G = composition_convolution(G2, L12, L, L);
    for (int n = 1; n <= N; ++n) {
        cplx g = G.b[static_cast<std::size_t>(2 * n - 1)];
        cplx f = rep.F[static_cast<std::size_t>(n - 1)] / std::tgamma(2.0 * n);
        rep.G.push_back(g);
        rep.max_chain_diff = std::max(rep.max_chain_diff, std::abs(g - f) / std::max(std::abs(f), 1e-300));
        CSum s;
        for (int r = 1; r <= n; ++r)
            s += std::pow(d.lambda, static_cast<double>(r)) * detail::composition_weight(r, n) * rep.F[static_cast<std::size_t>(r - 1)];
        cplx pred = std::pow(tpi, n + 1.0) * s.value();
        cplx chi = rep.chi[static_cast<std::size_t>(n - 1)];
        rep.max_chi_diff = std::max(rep.max_chi_diff, std::abs(pred - chi) / std::max(std::abs(chi), 1e-300));
    }
    return rep;
}

}  // namespace qlog

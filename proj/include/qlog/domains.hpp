#pragma once

#include <functional>
#include <vector>

#include "lagrange.hpp"

namespace qlog {

struct ApproximationFunction {
    enum class Kind { exponential, power, table };
    Kind kind = Kind::exponential;
    double gamma = 0.1;
    double param = 1.0;  // alpha for exponential, tau for power
    std::vector<double> values;  // table: values[m-1] = psi(m)

    static ApproximationFunction exponential(double gamma, double alpha) {
        return {Kind::exponential, gamma, alpha, {}};
    }
    static ApproximationFunction power(double gamma, double tau) { return {Kind::power, gamma, tau, {}}; }
    static ApproximationFunction table(std::vector<double> v) { return {Kind::table, 0, 0, std::move(v)}; }

    // -log psi(m); m may exceed the double range of psi itself.
    double neg_log(double m) const {
        switch (kind) {
            case Kind::exponential: return -std::log(gamma) + param * m;
            case Kind::power: return -std::log(gamma) + (param - 1) * std::log(m);
            case Kind::table: {
                auto i = static_cast<std::size_t>(m);
                if (i < 1 || i > values.size()) throw InvalidArgument("psi table exhausted");
                return -std::log(values[i - 1]);
            }
        }
        return 0;
    }
    double operator()(double m) const { return std::exp(-neg_log(m)); }
    Real inverse_real(long long m) const {
        if (kind == Kind::exponential) return boost::multiprecision::exp(Real(param) * m) / Real(gamma);
        return Real(std::exp(neg_log(static_cast<double>(m))));
    }

    // Checks decreasing, 2 sum psi < 1, psi(m) <= 1/(2m) for m <= m_check.
    void validate(long long m_check = 10000) const {
        double sum = 0, prev = inf;
        long long top = kind == Kind::table ? static_cast<long long>(values.size()) : m_check;
        for (long long m = 1; m <= top; ++m) {
            double v = (*this)(static_cast<double>(m));
            if (v == 0 && kind != Kind::table) break;
            if (!(v > 0) || v > prev) throw InvalidArgument("psi must be positive and decreasing");
            if (v > 0.5 / static_cast<double>(m) * (1 + 1e-12)) throw InvalidArgument("psi(m) exceeds 1/(2m)");
            sum += v;
            prev = v;
        }
        if (kind == Kind::exponential) sum = gamma * std::exp(-param) / (1 - std::exp(-param));
        if (kind == Kind::power && param <= 2) throw InvalidArgument("power psi needs tau > 2 to be summable");
        if (!(2 * sum < 1)) throw InvalidArgument("2 sum psi(m) must be < 1");
    }
};

namespace detail {
inline Certificate convergent_condition(const ContinuedFraction& cf, std::size_t k_max,
                                        const std::function<bool(std::size_t, const BigInt&, const BigInt&)>& ok) {
    Certificate cert;
    if (cf.finite && !cf.periodic() && cf.depth() < k_max + 1) {
        // rationals: the sequence of denominators stops, so the condition fails
        auto conv = convergents(cf, cf.depth());
        for (std::size_t k = 0; k + 1 < conv.size(); ++k) {
            cert.depth = k;
            if (!ok(k, conv[k].m, conv[k + 1].m)) {
                cert.holds = false;
                cert.violation = k;
                return cert;
            }
        }
        cert.holds = false;
        cert.violation = cf.depth();
        cert.depth = cf.depth();
        return cert;
    }
    if (!cf.periodic() && cf.depth() < k_max + 1) throw PrecisionExhausted("expansion shorter than k_max + 1");
    auto conv = convergents(cf, k_max + 1);
    for (std::size_t k = 0; k <= k_max; ++k) {
        cert.depth = k;
        if (!ok(k, conv[k].m, conv[k + 1].m)) {
            cert.holds = false;
            cert.violation = k;
            return cert;
        }
    }
    return cert;
}
}  // namespace detail

// m_{k+1} <= 1/psi(m_k) for k <= k_max; "holds" means no violation up to depth.
inline Certificate in_c_psi(const ContinuedFraction& cf, const ApproximationFunction& psi, std::size_t k_max) {
    return detail::convergent_condition(cf, k_max, [&](std::size_t, const BigInt& mk, const BigInt& mk1) {
        return log_abs(mk1) <= psi.neg_log(to_double(mk)) + 1e-15;
    });
}

inline Rational mod_one(const Rational& r) { return Rational(r.n - floor_div(r.n, r.m) * r.m, r.m); }

inline bool in_q_psi(const Rational& r0, const ApproximationFunction& psi) {
    Rational r = mod_one(r0);
    if (r.n == 0) return true;
    auto cf = cf_expand(r);
    auto conv = convergents(cf, cf.depth());
    for (std::size_t j = 0; j + 1 < conv.size(); ++j) {
        if (log_abs(conv[j + 1].m) > psi.neg_log(to_double(conv[j].m)) + 1e-15) return false;
    }
    return true;
}

// One side of a component: the endpoint lies strictly between
// center +- inner_gap (certified in the complement) and cpsi_point (certified in C_psi).
struct EndpointBracket {
    double cpsi_point = 0;
    double inner = 0;
};

struct DiamondComponent {
    Rational frac;
    double center = 0;
    EndpointBracket left, right;
    double inner_gap = 0;  // psi(m)/(2m), or the refined J-interval extent
    double outer_bound = 0;  // 2 psi(m)/m
    double kappa = 0.5;
};

namespace detail {
inline Real golden_tail() {
    static const Real g = (boost::multiprecision::sqrt(Real(5)) - 1) / 2;
    return g;
}
// [0; q_1, ..., q_r, last] with a real last entry.
inline Real cf_eval(const std::vector<BigInt>& q, const Real& last) {
    Real acc = last;
    for (std::size_t i = q.size(); i-- > 0;) acc = Real(q[i]) + 1 / acc;
    return 1 / acc;
}
// Does n/m sit at index k among the convergents of t, with m_{k+1}(t) > 1/psi(m)?
inline bool in_j_interval(const Rational& t, const Rational& r, const ApproximationFunction& psi) {
    auto cf = cf_expand(t);
    auto conv = convergents(cf, cf.depth());
    for (std::size_t k = 0; k < conv.size(); ++k) {
        if (conv[k].m == r.m && conv[k].n == r.n) {
            if (k + 1 >= conv.size()) return false;
            return log_abs(conv[k + 1].m) > psi.neg_log(to_double(r.m));
        }
        if (conv[k].m > r.m) return false;
    }
    return false;
}
}  // namespace detail

inline DiamondComponent component_bracket(const Rational& r0, const ApproximationFunction& psi, int refine = 0,
                                          double kappa = 0.5) {
    Rational r = mod_one(r0);
    if (!in_q_psi(r, psi)) throw InvalidArgument("fraction is not in Q_psi");
    DiamondComponent dc;
    dc.frac = r;
    dc.kappa = kappa;
    double m = to_double(r.m);
    double pm = psi(m);
    dc.center = to_double(r.n) / m;
    dc.inner_gap = pm / (2 * m);
    dc.outer_bound = 2 * pm / m;
    const Real g = detail::golden_tail();
    Real inv = psi.inverse_real(r.m.convert_to<long long>());
    Real xp, xm;
    if (r.n == 0) {
        BigInt a = boost::multiprecision::floor(inv).convert_to<BigInt>();
        xp = 1 / (Real(a) + g);
        xm = -xp;
    } else {
        auto cf = cf_expand(r);
        std::vector<BigInt> q = cf.quotients;
        auto conv = convergents(cf, cf.depth());
        BigInt m_minus = conv.size() >= 2 ? conv[conv.size() - 2].m : BigInt(0);
        BigInt a = boost::multiprecision::floor((inv - Real(m_minus)) / Real(r.m)).convert_to<BigInt>();
        BigInt b = boost::multiprecision::floor((inv + Real(m_minus)) / Real(r.m)).convert_to<BigInt>() - 1;
        std::vector<BigInt> qp = q;
        xp = detail::cf_eval(qp, Real(a) + g);
        std::vector<BigInt> qm = q;
        qm.back() -= 1;
        qm.push_back(1);
        xm = detail::cf_eval(qm, Real(b) + g);
    }
    double xpd = xp.convert_to<double>(), xmd = xm.convert_to<double>();
    double lo = std::min(xpd, xmd), hi = std::max(xpd, xmd);
    dc.left = {lo, dc.center - dc.inner_gap};
    dc.right = {hi, dc.center + dc.inner_gap};
    // Bisection on the exact J-interval boundary moves the inner bounds outward.
    for (int side = -1; side <= 1 && refine > 0; side += 2) {
        EndpointBracket& eb = side < 0 ? dc.left : dc.right;
        Real in = Real(eb.inner), out = Real(eb.cpsi_point);
        for (int it = 0; it < refine; ++it) {
            Real mid = (in + out) / 2;
            BigInt den = BigInt(1) << 200;
            Rational t(boost::multiprecision::floor(mid * Real(den)).convert_to<BigInt>(), den);
            if (detail::in_j_interval(t, r, psi))
                in = t.value();
            else
                out = mid;
        }
        eb.inner = in.convert_to<double>();
    }
    return dc;
}

struct CompactSpec {
    std::vector<double> gamma_seq;
    double alpha = 1.0;
    double kappa = 0.5;
    double d = 0.1;

    ApproximationFunction psi(std::size_t j) const {
        if (j >= gamma_seq.size()) throw InvalidArgument("compact index out of range");
        return ApproximationFunction::exponential(gamma_seq[j], alpha);
    }
    void validate() const {
        double cap = std::min({alpha * std::exp(1.0) / 2, (std::exp(alpha) - 1) / 2, 1.0});
        for (std::size_t j = 0; j < gamma_seq.size(); ++j) {
            if (!(gamma_seq[j] > 0 && gamma_seq[j] < cap)) throw InvalidArgument("gamma_j out of range");
            if (j > 0 && !(gamma_seq[j] < gamma_seq[j - 1])) throw InvalidArgument("gamma_j must decrease");
        }
        if (!(kappa > 0 && kappa < 1) || !(d > 0)) throw InvalidArgument("need 0 < kappa < 1 and d > 0");
    }
};

struct KjResult {
    bool member = false;
    double resolution = 0;
    std::string reason;
};

namespace detail {
// 0 = outside, 1 = inside, 2 = undecided for the diamond over the bracket.
inline int diamond_status(const DiamondComponent& dc, double shift, double X, double Y) {
    auto inside = [&](double l, double r) {
        double xl = l + shift, xr = r + shift;
        if (!(X > xl && X < xr)) return false;
        return std::abs(Y) < dc.kappa * std::min(X - xl, xr - X);
    };
    if (inside(dc.left.inner, dc.right.inner)) return 1;
    if (!inside(dc.left.cpsi_point, dc.right.cpsi_point)) return 0;
    return 2;
}
}  // namespace detail

inline KjResult in_kj(cplx q, const CompactSpec& spec, std::size_t j, long long m_max) {
    if (q == cplx(0)) return {false, 0, "q = 0"};
    auto psi = spec.psi(j);
    double X = std::arg(q) / two_pi;
    double Y = -std::log(std::abs(q)) / two_pi;
    X -= std::floor(X + 0.5);
    KjResult res;
    res.resolution = 2 * psi(static_cast<double>(m_max + 1)) / static_cast<double>(m_max + 1);
    if (std::abs(Y) > spec.d) {
        res.reason = "|Im x| > d";
        return res;
    }
    auto check = [&](long long m, bool tested) -> int {
        long long c = std::llround(X * static_cast<double>(m));
        for (long long cc = c - 1; cc <= c + 1; ++cc) {
            long long off = detail::floor_div64(cc, m);
            long long n = cc - off * m;
            if (std::gcd(n, m) != 1) continue;
            Rational r(n, m);
            if (!in_q_psi(r, psi)) continue;
            if (!tested) {
                double dist = std::abs(X - static_cast<double>(cc) / static_cast<double>(m));
                double w = 2 * psi(static_cast<double>(m)) / static_cast<double>(m);
                if (dist < w && std::abs(Y) < spec.kappa * w) return 2;
                continue;
            }
            auto dc = component_bracket(r, psi, 0, spec.kappa);
            int st = detail::diamond_status(dc, static_cast<double>(off), X, Y);
            if (st == 2) {
                dc = component_bracket(r, psi, 60, spec.kappa);
                st = detail::diamond_status(dc, static_cast<double>(off), X, Y);
            }
            if (st != 0) return st;
        }
        return 0;
    };
    for (long long m = 1; m <= m_max; ++m) {
        int st = check(m, true);
        if (st == 1) {
            res.reason = "inside the diamond of a fraction with denominator " + std::to_string(m);
            return res;
        }
        if (st == 2) throw Unresolved("point within the bracket uncertainty of the diamond at m = " + std::to_string(m));
    }
    for (long long m = m_max + 1; m <= 4 * m_max; ++m) {
        if (check(m, false) == 2)
            throw Unresolved("point within the resolution band of an untested diamond at m = " + std::to_string(m));
    }
    res.member = true;
    res.reason = "outside all diamonds with denominator <= m_max";
    return res;
}

inline double measure_lower_bound(const CompactSpec& spec, std::size_t j) {
    auto psi = spec.psi(j);
    RSum s;
    for (long long m = 1;; ++m) {
        double t = psi(static_cast<double>(m)) / static_cast<double>(m);
        t *= t;
        s += t;
        if (t < 1e-20 * s.value() || t == 0) break;
    }
    return 2 * spec.d - 8 * spec.kappa * s.value();
}

// m_{k+1} <= gamma^{-1} exp(s_k m_k) for k <= k_max.
inline Certificate in_w_set(const ContinuedFraction& cf, double gamma, const std::function<double(std::size_t, const BigInt&)>& s,
                            std::size_t k_max) {
    if (!(gamma > 0 && gamma < 1)) throw InvalidArgument("gamma must lie in (0,1)");
    return detail::convergent_condition(cf, k_max, [&](std::size_t k, const BigInt& mk, const BigInt& mk1) {
        return log_abs(mk1) <= -std::log(gamma) + s(k, mk) * to_double(mk) + 1e-15;
    });
}

}  // namespace qlog

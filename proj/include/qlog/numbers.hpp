#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "common.hpp"

namespace qlog {

using BigInt = boost::multiprecision::cpp_int;
using Real = boost::multiprecision::cpp_bin_float_100;

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    BigInt r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline BigInt isqrt(const BigInt& n) {
    if (n < 0) throw InvalidArgument("isqrt of negative");
    return boost::multiprecision::sqrt(n);
}

inline double to_double(const BigInt& x) { return x.convert_to<double>(); }

// Natural log of |x| for x != 0, valid beyond the double range.
inline double log_abs(const BigInt& x) {
    BigInt a = boost::multiprecision::abs(x);
    if (a == 0) return -inf;
    std::size_t bits = boost::multiprecision::msb(a);
    if (bits < 900) return std::log(a.convert_to<double>());
    std::size_t shift = bits - 60;
    BigInt top = a >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

struct Rational {
    BigInt n{0};
    BigInt m{1};

    Rational() = default;
    Rational(BigInt num, BigInt den) : n(std::move(num)), m(std::move(den)) {
        if (m == 0) throw InvalidArgument("zero denominator");
        if (m < 0) {
            n = -n;
            m = -m;
        }
        BigInt g = boost::multiprecision::gcd(boost::multiprecision::abs(n), m);
        if (g > 1) {
            n /= g;
            m /= g;
        }
    }
    Rational(long long num, long long den) : Rational(BigInt(num), BigInt(den)) {}

    Real value() const { return Real(n) / Real(m); }
    bool operator==(const Rational&) const = default;
};

// Quadratic surd (P + sqrt(D)) / Q with D > 0 not a perfect square.
struct QuadraticSurd {
    BigInt P, D, Q;
    Real value() const { return (Real(P) + boost::multiprecision::sqrt(Real(D))) / Real(Q); }
};

// High-precision sample with an absolute error bound.
struct RealSample {
    Real x;
    Real err;
};

enum class CFSource { rational, quadratic, float_sample };

struct ContinuedFraction {
    BigInt a0{0};
    std::vector<BigInt> quotients;  // a_1, a_2, ...
    CFSource source = CFSource::rational;
    bool finite = false;
    // Eventually periodic expansions: a_k = a_{k-K} for k > L (k >= 1).
    std::size_t preperiod = 0;
    std::size_t period = 0;
    Real value{0};

    std::size_t depth() const { return quotients.size(); }
    bool periodic() const { return period > 0; }

    // a_k for any k when periodic, otherwise within the stored depth.
    BigInt quotient(std::size_t k) const {
        if (k == 0) return a0;
        if (k <= quotients.size()) return quotients[k - 1];
        if (periodic()) {
            std::size_t L = preperiod;
            std::size_t j = L + 1 + (k - L - 1) % period;
            return quotients[j - 1];
        }
        throw InvalidArgument("continued fraction exhausted at index " + std::to_string(k));
    }
    bool has(std::size_t k) const { return k <= quotients.size() || periodic(); }
};

struct Convergent {
    std::size_t k = 0;
    BigInt n, m;
    Real beta;  // |m x - n|
};

inline ContinuedFraction cf_expand(const Rational& r, std::size_t depth = std::numeric_limits<std::size_t>::max()) {
    ContinuedFraction cf;
    cf.source = CFSource::rational;
    cf.finite = true;
    cf.value = r.value();
    BigInt p = r.n, q = r.m;
    cf.a0 = floor_div(p, q);
    BigInt rem = p - cf.a0 * q;
    p = q;
    q = rem;
    while (q != 0 && cf.quotients.size() < depth) {
        BigInt a = p / q;
        BigInt t = p - a * q;
        cf.quotients.push_back(a);
        p = q;
        q = t;
    }
    if (q != 0) cf.finite = false;
    return cf;
}

inline ContinuedFraction cf_expand(const QuadraticSurd& s, std::size_t depth) {
    if (s.D <= 0 || s.Q == 0) throw InvalidArgument("quadratic surd needs D > 0, Q != 0");
    BigInt r = isqrt(s.D);
    if (r * r == s.D) throw InvalidArgument("D is a perfect square");
    BigInt P = s.P, Q = s.Q, D = s.D;
    if ((D - P * P) % Q != 0) {
        BigInt aq = boost::multiprecision::abs(Q);
        P *= aq;
        D *= Q * Q;
        Q *= aq;
    }
    BigInt sq = isqrt(D);
    ContinuedFraction cf;
    cf.source = CFSource::quadratic;
    cf.value = s.value();
    std::map<std::pair<BigInt, BigInt>, std::size_t> seen;
    std::vector<BigInt> all;
    for (std::size_t k = 0;; ++k) {
        auto key = std::make_pair(P, Q);
        if (k >= 1) {
            auto it = seen.find(key);
            if (it != seen.end()) {
                cf.preperiod = it->second - 1;
                cf.period = k - it->second;
                break;
            }
            seen.emplace(key, k);
        }
        BigInt a = Q > 0 ? floor_div(P + sq, Q) : floor_div(P + sq + 1, Q);
        all.push_back(a);
        P = a * Q - P;
        Q = (D - P * P) / Q;
    }
    cf.a0 = all[0];
    cf.quotients.assign(all.begin() + 1, all.end());
    std::vector<BigInt> out;
    for (std::size_t k = 1; k <= depth; ++k) out.push_back(cf.quotient(k));
    if (out.size() > cf.quotients.size()) cf.quotients = out;
    return cf;
}

namespace detail {
inline Real pad(const Real& x) {
    static const Real eps = std::numeric_limits<Real>::epsilon() * 16;
    return boost::multiprecision::abs(x) * eps + std::numeric_limits<Real>::min();
}
}  // namespace detail

// Gauss-map iteration on the interval [x - err, x + err].
inline ContinuedFraction cf_expand(const RealSample& s, std::size_t depth) {
    ContinuedFraction cf;
    cf.source = CFSource::float_sample;
    cf.value = s.x;
    Real lo = s.x - s.err, hi = s.x + s.err;
    for (std::size_t k = 0; k <= depth; ++k) {
        Real fl = boost::multiprecision::floor(lo), fh = boost::multiprecision::floor(hi);
        if (fl != fh)
            throw PrecisionExhausted("cannot certify quotient a_" + std::to_string(k) + " from sample");
        BigInt a = fl.convert_to<BigInt>();
        if (k == 0)
            cf.a0 = a;
        else
            cf.quotients.push_back(a);
        if (k == depth) break;
        Real flo = lo - fl, fhi = hi - fl;
        if (flo <= 0) throw PrecisionExhausted("sample interval contains a rational at depth " + std::to_string(k));
        Real nlo = 1 / fhi, nhi = 1 / flo;
        lo = nlo - detail::pad(nlo);
        hi = nhi + detail::pad(nhi);
    }
    return cf;
}

// Expansion from explicit quotients; finite=false marks a prefix of an infinite expansion.
inline ContinuedFraction cf_from_quotients(BigInt a0, std::vector<BigInt> q, bool finite = false) {
    ContinuedFraction cf;
    cf.a0 = std::move(a0);
    cf.quotients = std::move(q);
    cf.finite = finite;
    BigInt n1 = 1, m1 = 0, n2 = 0, m2 = 1;
    for (std::size_t k = 0; k <= cf.quotients.size(); ++k) {
        BigInt a = cf.quotient(k);
        BigInt n = a * n1 + n2, m = a * m1 + m2;
        n2 = n1;
        m2 = m1;
        n1 = n;
        m1 = m;
    }
    cf.value = Real(n1) / Real(m1);
    return cf;
}

// Exact sum of a finite expansion.
inline Rational cf_value(const ContinuedFraction& cf, std::size_t k) {
    if (k == 0) return Rational(cf.a0, 1);
    Rational acc(cf.quotient(k), 1);
    for (std::size_t j = k - 1; j >= 1; --j) {
        acc = Rational(acc.n * cf.quotient(j) + acc.m, acc.n);
    }
    return Rational(cf.a0 * acc.n + acc.m, acc.n);
}

inline std::vector<Convergent> convergents(const ContinuedFraction& cf, std::size_t k_max) {
    std::vector<Convergent> out;
    BigInt n1 = 1, m1 = 0, n2 = 0, m2 = 1;
    for (std::size_t k = 0; k <= k_max; ++k) {
        if (!cf.has(k)) throw InvalidArgument("continued fraction supplies fewer than k_max quotients");
        BigInt a = cf.quotient(k);
        BigInt n = a * n1 + n2, m = a * m1 + m2;
        Convergent c;
        c.k = k;
        c.n = n;
        c.m = m;
        c.beta = boost::multiprecision::abs(Real(m) * cf.value - Real(n));
        out.push_back(std::move(c));
        n2 = n1;
        m2 = m1;
        n1 = n;
        m1 = m;
    }
    return out;
}

inline bool is_convergent(const ContinuedFraction& cf, const Rational& r, std::size_t depth) {
    std::size_t kmax = depth;
    if (!cf.periodic()) kmax = std::min(kmax, cf.depth());
    for (const auto& c : convergents(cf, kmax)) {
        if (c.n == r.n && c.m == r.m) return true;
        if (c.m > r.m) return false;
    }
    return false;
}

inline std::vector<long long> prime_factors(long long n) {
    std::vector<long long> p;
    for (long long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            p.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) p.push_back(n);
    return p;
}

inline int mobius(long long n) {
    if (n < 1) throw InvalidArgument("mobius needs n >= 1");
    int mu = 1;
    for (long long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            n /= d;
            if (n % d == 0) return 0;
            mu = -mu;
        }
    }
    if (n > 1) mu = -mu;
    return mu;
}

inline long long totient(long long n) {
    if (n < 1) throw InvalidArgument("totient needs n >= 1");
    long long r = n;
    for (long long p : prime_factors(n)) r = r / p * (p - 1);
    return r;
}

inline std::vector<long long> divisors(long long n) {
    std::vector<long long> lo, hi;
    for (long long d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            lo.push_back(d);
            if (d * d != n) hi.push_back(n / d);
        }
    }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
}

struct PrimitiveRoot {
    long long n = 0;
    long long m = 1;
    cplx value{1.0, 0.0};
    long long order() const { return m; }
    Rational frac() const { return Rational(n, m); }
};

inline cplx unit_root(long long n, long long m) {
    long long r = ((n % m) + m) % m;
    // reduce the angle to [-pi, pi] before evaluating
    double t = two_pi * static_cast<double>(2 * r > m ? r - m : r) / static_cast<double>(m);
    return {std::cos(t), std::sin(t)};
}

inline std::vector<PrimitiveRoot> primitive_roots(long long m) {
    if (m < 1) throw InvalidArgument("primitive_roots needs m >= 1");
    std::vector<PrimitiveRoot> out;
    for (long long n = 0; n < m; ++n) {
        if (std::gcd(n, m) == 1) out.push_back({n, m, unit_root(n, m)});
    }
    return out;
}

// Union of R_m^* for m <= M, ordered by increasing m then n.
inline std::vector<PrimitiveRoot> farey_roots(long long M) {
    std::vector<PrimitiveRoot> out;
    for (long long m = 1; m <= M; ++m) {
        auto r = primitive_roots(m);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

// c_m(n) = sum over primitive m-th roots of Lambda^n.
inline long long ramanujan_sum(long long m, long long n) {
    if (m < 1) throw InvalidArgument("ramanujan_sum needs m >= 1");
    long long g = std::gcd(m, n < 0 ? -n : n);
    if (n == 0) g = m;
    long long s = 0;
    for (long long d : divisors(g)) s += mobius(m / d) * d;
    return s;
}

}  // namespace qlog

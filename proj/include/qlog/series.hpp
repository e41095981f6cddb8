#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "numbers.hpp"

namespace qlog {

// Coefficients c[0..N] with |c_n| <= C rho^{-n} for n > N unless exact.
struct TruncatedPowerSeries {
    std::vector<cplx> c;
    double radius = inf;
    double cert = 0;
    bool exact = false;
    bool is_delta = false;
    std::function<cplx(cplx)> closed;
    std::function<cplx(long long)> rule;

    std::size_t order() const { return c.empty() ? 0 : c.size() - 1; }

    cplx coeff(long long n) const {
        if (n >= 0 && static_cast<std::size_t>(n) < c.size()) return c[static_cast<std::size_t>(n)];
        if (exact || n < 0) return 0;
        if (rule) return rule(n);
        throw PrecisionExhausted("coefficient beyond stored order and no rule");
    }
    bool knows(long long n) const { return exact || rule || static_cast<std::size_t>(n) < c.size(); }

    // Sup of the discarded tail on |z| <= r.
    double tail_bound(double r, std::size_t N) const {
        if (exact && N + 1 >= c.size()) return 0;
        double t = r / radius;
        if (!(t < 1)) return inf;
        return cert * std::pow(t, static_cast<double>(N + 1)) / (1 - t);
    }
};

struct SeriesValue {
    cplx value;
    double error = 0;
};

inline TruncatedPowerSeries polynomial(std::vector<cplx> c) {
    TruncatedPowerSeries s;
    s.c = std::move(c);
    s.exact = true;
    s.radius = inf;
    return s;
}

// delta(z) = z/(1-z)
inline TruncatedPowerSeries delta_series(std::size_t N) {
    TruncatedPowerSeries s;
    s.c.assign(N + 1, 1.0);
    s.c[0] = 0;
    s.radius = 1;
    s.cert = 1;
    s.is_delta = true;
    s.closed = [](cplx z) { return z / (1.0 - z); };
    s.rule = [](long long n) { return cplx(n >= 1 ? 1.0 : 0.0); };
    return s;
}

inline cplx l_m_value(long long m, cplx z) {
    cplx w = std::pow(z, static_cast<int>(m));
    if (std::abs(w) > 0.1) return -std::log(1.0 - w) / static_cast<double>(m);
    cplx acc = 0, p = w;
    for (int k = 1; k < 40; ++k) {
        acc += p / static_cast<double>(k);
        if (std::abs(p) < 1e-18 * std::abs(acc)) break;
        p *= w;
    }
    return acc / static_cast<double>(m);
}

inline TruncatedPowerSeries l_m_series(long long m, std::size_t N) {
    if (m < 1) throw InvalidArgument("l_m_series needs m >= 1");
    TruncatedPowerSeries s;
    s.c.assign(N + 1, 0.0);
    for (std::size_t n = static_cast<std::size_t>(m); n <= N; n += static_cast<std::size_t>(m))
        s.c[n] = 1.0 / static_cast<double>(n);
    s.radius = 1;
    s.cert = 1.0 / static_cast<double>(m);
    s.closed = [m](cplx z) { return l_m_value(m, z); };
    s.rule = [m](long long n) { return cplx(n > 0 && n % m == 0 ? 1.0 / static_cast<double>(n) : 0.0); };
    return s;
}

inline TruncatedPowerSeries hadamard(const TruncatedPowerSeries& A, const TruncatedPowerSeries& B) {
    if (A.is_delta) return B;
    if (B.is_delta) return A;
    TruncatedPowerSeries s;
    std::size_t N = std::min(A.order(), B.order());
    if (A.exact && B.rule) N = A.order();
    if (B.exact && A.rule) N = B.order();
    s.c.resize(N + 1);
    for (std::size_t n = 0; n <= N; ++n) s.c[n] = A.coeff(static_cast<long long>(n)) * B.coeff(static_cast<long long>(n));
    s.exact = (A.exact && N >= A.order()) || (B.exact && N >= B.order());
    s.radius = A.radius * B.radius;
    s.cert = A.cert * B.cert;
    if (A.rule && B.rule) {
        auto ra = A.rule, rb = B.rule;
        s.rule = [ra, rb](long long n) { return ra(n) * rb(n); };
    }
    return s;
}

// Value of the series at z from closed form, polynomial, or partial sum with certified tail.
inline SeriesValue eval_series(const TruncatedPowerSeries& g, cplx z, double tol = 1e-16) {
    if (g.closed) return {g.closed(z), 0};
    double az = std::abs(z);
    if (g.exact) {
        cplx acc = 0;
        for (std::size_t n = g.c.size(); n-- > 0;) acc = acc * z + g.c[n];
        return {acc, 0};
    }
    if (!(az < g.radius)) throw DiskExceeded("|z| outside the certified disk");
    CSum s;
    cplx zn = 1;
    std::size_t n = 0;
    for (;; ++n) {
        if (!g.knows(static_cast<long long>(n))) break;
        s += g.coeff(static_cast<long long>(n)) * zn;
        zn *= z;
        if (n >= g.order() && g.tail_bound(az, n) <= tol) break;
        if (n > 100000) break;
    }
    return {s.value(), g.tail_bound(az, n)};
}

struct SmallDivisorBound {
    double gamma = 0.3;  // ||n alpha|| >= gamma n^{1-tau}
    double tau = 2;
};

enum class Region { inside, outside, circle };

struct EvalPoint {
    cplx q;
    cplx z;
    Region region = Region::inside;
};

inline EvalPoint make_point(cplx q, cplx z) {
    double a = std::abs(q);
    Region r = std::abs(a - 1) <= 1e-14 ? Region::circle : (a < 1 ? Region::inside : Region::outside);
    return {q, z, r};
}

enum class Method { automatic, coefficient, iterated, bwd };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::coefficient: return "coefficient";
        case Method::iterated: return "iterated";
        case Method::bwd: return "bwd";
        default: return "auto";
    }
}

struct EvalResult {
    cplx value;
    double error = 0;
    Method method = Method::automatic;
    long long terms = 0;
};

struct EvalOptions {
    Method method = Method::automatic;
    std::optional<SmallDivisorBound> dc;
    long long max_terms = 2000000;
};

namespace detail {

inline double annulus_gap(cplx q) { return std::abs(std::abs(q) - 1); }

// sum_{n>M} C t^n / lb(n), with lb from the region of q.
inline double coefficient_tail(const TruncatedPowerSeries& g, const EvalPoint& p, const std::optional<SmallDivisorBound>& dc,
                               long long M) {
    double R = std::abs(p.q);
    double t = std::abs(p.z) / g.radius;
    if (g.exact && static_cast<std::size_t>(M) >= g.order()) return 0;
    if (!(t < 1)) return inf;
    double tM = std::pow(t, static_cast<double>(M + 1));
    if (p.region == Region::circle) {
        if (!dc) return inf;
        double e = dc->tau - 1;
        double ratio = t * std::pow(static_cast<double>(M + 2) / static_cast<double>(M + 1), e);
        if (!(ratio < 1)) return inf;
        return g.cert * tM * std::pow(static_cast<double>(M + 1), e) / (4 * dc->gamma * (1 - ratio));
    }
    double lb = R < 1 ? 1 - std::pow(R, static_cast<double>(M + 1)) : std::pow(R, static_cast<double>(M + 1)) - 1;
    return g.cert * tM / ((1 - t) * lb);
}

inline std::optional<EvalResult> coefficient_route(const TruncatedPowerSeries& g, const EvalPoint& p, double tol,
                                                   const EvalOptions& o) {
    if (p.region == Region::circle && !o.dc) return std::nullopt;
    CSum s;
    cplx qn = 1, zn = 1;
    long long n = 1;
    double err = inf;
    double rnd = 0;
    for (; n <= o.max_terms; ++n) {
        qn *= p.q;
        zn *= p.z;
        if (!g.knows(n)) {
            --n;
            err = coefficient_tail(g, p, o.dc, n);
            break;
        }
        cplx d = qn - 1.0;
        if (d == 0.0) throw NearResonance("q^n = 1 at n = " + std::to_string(n));
        cplx term = g.coeff(n) * zn / d;
        s += term;
        rnd += std::abs(term);
        if (g.exact && static_cast<std::size_t>(n) >= g.order()) {
            err = 0;
            break;
        }
        if (n >= 8 && n % 8 == 0) {
            err = coefficient_tail(g, p, o.dc, n);
            if (err <= 0.5 * tol) break;
        }
    }
    err += 4e-16 * rnd * std::sqrt(static_cast<double>(n));
    if (!(err <= tol)) return std::nullopt;
    return EvalResult{s.value(), err, Method::coefficient, n};
}

inline std::optional<EvalResult> iterated_route(const TruncatedPowerSeries& g, const EvalPoint& p, double tol,
                                                const EvalOptions& o) {
    if (p.region == Region::circle) return std::nullopt;
    double R = std::abs(p.q);
    double rho = R < 1 ? R : 1 / R;
    cplx step = R < 1 ? p.q : 1.0 / p.q;
    cplx w = R < 1 ? p.z : p.z * step;
    double az = std::abs(p.z);
    double t = az / g.radius;
    if (!g.exact && !(t < 1)) return std::nullopt;
    // |g(w)| <= C |w|/rho_g / (1 - t) for g(0) = 0
    double gmax = g.exact ? 0 : g.cert * t / (1 - t);
    if (g.exact) {
        double a = 0;
        for (std::size_t n = 1; n < g.c.size(); ++n) a += std::abs(g.c[n]) * std::pow(az, static_cast<double>(n));
        gmax = a;
    }
    CSum s;
    double err = inf, evalerr = 0;
    long long m = 0;
    double rm = R < 1 ? 1 : rho;  // |w| / |z|
    for (; m <= o.max_terms; ++m) {
        auto gv = eval_series(g, w, 0.01 * tol);
        s += gv.value;
        evalerr += gv.error;
        w *= step;
        rm *= rho;
        err = gmax * rm / (1 - rho);
        if (err + evalerr <= 0.5 * tol) break;
    }
    err += evalerr;
    if (!(err <= tol)) return std::nullopt;
    cplx v = R < 1 ? -s.value() : s.value();
    return EvalResult{v, err, Method::iterated, m + 1};
}

}  // namespace detail

// Decay certificate ||a_Lambda|| <= c r^m / m and the scalar payloads of a BWD series.
struct BWDCoefficients {
    struct Entry {
        PrimitiveRoot root;
        cplx value;
    };
    std::vector<Entry> entries;
    std::optional<TruncatedPowerSeries> source;  // a_Lambda = Lambda (L_m . g)
    double c = 1;
    double r = 0.5;
    long long m_cutoff = 0;

    bool from_solution() const { return source.has_value(); }

    // (L_m . g)(z), optionally truncated at exponents <= trunc.
    SeriesValue payload(long long m, cplx z, long long trunc = -1) const {
        const auto& g = *source;
        if (g.is_delta && trunc < 0) return {l_m_value(m, z), 0};
        double az = std::abs(z);
        double t = az / g.radius;
        CSum s;
        cplx zm = std::pow(z, static_cast<int>(m));
        cplx zjm = zm;
        long long j = 1;
        for (;; ++j) {
            long long n = j * m;
            if (trunc >= 0 && n > trunc) return {s.value(), 0};
            if (!g.knows(n)) break;
            s += g.coeff(n) * zjm / static_cast<double>(n);
            zjm *= zm;
            if (g.exact) {
                if (static_cast<std::size_t>(n) >= g.order()) return {s.value(), 0};
                continue;
            }
            double tail = g.cert * std::pow(t, static_cast<double>(n + m)) /
                          (static_cast<double>(n + m) * (1 - std::pow(t, static_cast<double>(m))));
            if (tail < 1e-17 * std::abs(s.value()) || tail < 1e-300) return {s.value(), tail};
        }
        double tm = std::pow(t, static_cast<double>(j * m));
        return {s.value(), g.cert * tm / (static_cast<double>(j * m) * (1 - std::pow(t, static_cast<double>(m))))};
    }
};

inline BWDCoefficients bwd_from_solution(const TruncatedPowerSeries& g, double r1, double r2, long long m_cutoff) {
    if (!(r2 > 0 && r2 < r1)) throw InvalidArgument("need 0 < r2 < r1");
    if (!g.exact && r1 > g.radius * (1 + 1e-12)) throw InvalidArgument("g is not certified on the disk r1");
    BWDCoefficients a;
    a.source = g;
    a.r = r2 / r1;
    double C = g.exact ? 0 : g.cert;
    if (g.exact) {
        for (std::size_t n = 1; n < g.c.size(); ++n)
            C = std::max(C, std::abs(g.c[n]) * std::pow(r1, static_cast<double>(n)));
    }
    a.c = C / (1 - a.r);
    a.m_cutoff = m_cutoff;
    return a;
}

inline BWDCoefficients bwd_single(const PrimitiveRoot& root, cplx value) {
    BWDCoefficients a;
    a.entries.push_back({root, value});
    a.c = std::abs(value) * static_cast<double>(root.m);
    a.r = 1;
    a.m_cutoff = root.m;
    return a;
}

// Lower bound on dist(q, R_m^*) for all m > some cutoff.
struct DistanceBound {
    enum class Kind { annulus, power, exponential };
    Kind kind = Kind::annulus;
    double c = 0;  // annulus: gap; power: c m^{-p}; exponential: c e^{-p m}/m
    double p = 0;

    double operator()(long long m) const {
        double x = static_cast<double>(m);
        switch (kind) {
            case Kind::annulus: return c;
            case Kind::power: return c * std::pow(x, -p);
            case Kind::exponential: return c * std::exp(-p * x) / x;
        }
        return 0;
    }
    static DistanceBound annulus(cplx q) { return {Kind::annulus, std::abs(std::abs(q) - 1), 0}; }
    static DistanceBound diophantine(const SmallDivisorBound& d) { return {Kind::power, 4 * d.gamma, d.tau}; }
};

namespace detail {
// sum_{m>M} phi(m) c r^m j! / (m lb(m)^{j+1}) with phi(m) <= m; the term ratio is
// non-increasing in m for the supported bounds.
inline double bwd_tail(double c, double r, const DistanceBound& lb, long long M, int j) {
    double jf = std::tgamma(j + 1.0);
    auto term = [&](long long m) {
        return c * std::pow(r, static_cast<double>(m)) * jf / std::pow(lb(m), j + 1);
    };
    double t1 = term(M + 1), t2 = term(M + 2);
    if (t1 == 0) return 0;
    double ratio = t2 / t1;
    if (!(ratio < 1)) return inf;
    return t1 / (1 - ratio);
}
}  // namespace detail

struct BWDOptions {
    std::optional<DistanceBound> dist;
    long long m_max = 4000;
    long long trunc = -1;  // payload truncation order (exponents <= trunc)
};

// sum_Lambda a_Lambda (-1)^j j! / (q - Lambda)^{j+1}
inline EvalResult termwise_derivative(const BWDCoefficients& a, int j, cplx q, cplx z, double tol,
                                      const BWDOptions& o = {}) {
    if (j < 0) throw InvalidArgument("derivative order must be >= 0");
    CSum s;
    double jf = std::tgamma(j + 1.0);
    double sign = j % 2 ? -1.0 : 1.0;
    double err = 0;
    if (!a.from_solution()) {
        for (const auto& e : a.entries) {
            cplx d = q - e.root.value;
            if (std::abs(d) < tol) throw NearResonance("q within tolerance of an enumerated root");
            s += e.value * sign * jf / std::pow(d, j + 1);
        }
        return {s.value(), 0, Method::bwd, static_cast<long long>(a.entries.size())};
    }
    DistanceBound lb = o.dist ? *o.dist : DistanceBound::annulus(q);
    if (lb.kind == DistanceBound::Kind::annulus && !(lb.c > 0))
        throw NearResonance("q on the unit circle needs a distance certificate");
    double r = a.r, c = a.c;
    double tz = a.source->exact ? 0 : std::abs(z) / a.source->radius;
    if (!a.source->exact && tz < 1) {
        // tighter scalar decay at this z
        r = tz;
        c = a.source->cert / (1 - tz);
    }
    if (lb.kind == DistanceBound::Kind::exponential && !(r * std::exp((j + 1) * lb.p) < 1))
        throw Divergent("termwise series diverges for this derivative order");
    long long M = 0;
    double tail = inf;
    long long terms = 0;
    long long m_end = o.trunc >= 0 ? o.trunc : o.m_max;
    for (long long m = 1; m <= m_end; ++m) {
        auto pv = a.payload(m, z, o.trunc);
        for (long long n = 0; n < m; ++n) {
            if (std::gcd(n, m) != 1) continue;
            cplx L = unit_root(n, m);
            cplx d = q - L;
            double ad = std::abs(d);
            if (ad < tol) throw NearResonance("q within tolerance of a root of order " + std::to_string(m));
            cplx pj = std::pow(d, j + 1);
            s += L * pv.value * sign * jf / pj;
            err += pv.error * jf / std::pow(ad, j + 1);
            ++terms;
        }
        M = m;
        if (o.trunc >= 0) continue;
        if (a.source->exact && static_cast<std::size_t>(m) >= a.source->order()) {
            tail = 0;
            break;
        }
        if (m >= 4) {
            tail = detail::bwd_tail(c, r, lb, m, j);
            if (tail + err <= 0.5 * tol) break;
        }
    }
    if (o.trunc >= 0) tail = 0;
    if (!(tail + err <= tol))
        throw NearResonance("BWD tail not certified within m <= " + std::to_string(M));
    return {s.value(), tail + err, Method::bwd, terms};
}

inline EvalResult eval_bwd(const BWDCoefficients& a, cplx q, cplx z, double tol, const BWDOptions& o = {}) {
    return termwise_derivative(a, 0, q, z, tol, o);
}

inline std::optional<EvalResult> bwd_route(const TruncatedPowerSeries& g, const EvalPoint& p, double tol,
                                           const EvalOptions& o) {
    if (p.region == Region::circle && !o.dc) return std::nullopt;
    if (!g.exact && !(std::abs(p.z) < g.radius)) return std::nullopt;
    BWDCoefficients a;
    a.source = g;
    a.r = 0.5;
    a.c = 1;
    try {
        BWDOptions bo;
        bo.m_max = 3000;
        if (p.region == Region::circle) bo.dist = DistanceBound::diophantine(*o.dc);
        return eval_bwd(a, p.q, p.z, tol, bo);
    } catch (const NearResonance&) {
        return std::nullopt;
    }
}

// f_g(q, z) = sum g_n z^n / (q^n - 1)
inline EvalResult eval_f_g(const TruncatedPowerSeries& g, const EvalPoint& p, double tol, const EvalOptions& o = {}) {
    if (!(tol > 0)) throw InvalidArgument("tol must be positive");
    if (!g.exact && !(std::abs(p.z) < g.radius)) throw DiskExceeded("|z| outside the certified disk of g");
    if (g.coeff(0) != 0.0) throw InvalidArgument("g must vanish at z = 0");
    if (std::abs(p.q) == 0) {
        auto v = eval_series(g, p.z, tol);
        return {-v.value, v.error, Method::coefficient, 0};
    }
    std::vector<Method> order;
    if (o.method != Method::automatic) {
        order = {o.method};
    } else {
        double R = std::abs(p.q);
        double lr = std::abs(std::log(R));
        double t = g.exact ? 0 : std::abs(p.z) / g.radius;
        double n_coef = t > 0 ? std::log(tol) / std::log(t) : static_cast<double>(g.order());
        double n_iter = lr > 0 ? std::log(tol) / -lr : inf;
        if (!g.closed && !g.exact) n_iter *= static_cast<double>(g.order() + 1);
        if (n_iter < n_coef)
            order = {Method::iterated, Method::coefficient, Method::bwd};
        else
            order = {Method::coefficient, Method::iterated, Method::bwd};
    }
    for (Method m : order) {
        std::optional<EvalResult> r;
        if (m == Method::coefficient) r = detail::coefficient_route(g, p, tol, o);
        if (m == Method::iterated) r = detail::iterated_route(g, p, tol, o);
        if (m == Method::bwd) r = bwd_route(g, p, tol, o);
        if (r) return *r;
    }
    throw NearResonance("no evaluator certifies the requested tolerance");
}

inline EvalResult eval_f_delta(const EvalPoint& p, double tol, const EvalOptions& o = {}) {
    return eval_f_g(delta_series(64), p, tol, o);
}

// Richardson limit of (q - Lambda0) f(q) along q = Lambda0 (1 + t), t = t0 2^{-k}.
struct ResidueResult {
    cplx value;
    double error = 0;
    std::vector<cplx> samples;
};

inline ResidueResult richardson_limit(const std::function<cplx(double)>& f, double t0, int steps) {
    if (steps < 2) throw InvalidArgument("need at least two steps");
    std::vector<double> ts;
    std::vector<cplx> vs;
    for (int k = 0; k < steps; ++k) {
        double t = t0 * std::ldexp(1.0, -k);
        ts.push_back(t);
        vs.push_back(f(t));
    }
    // Neville table at t = 0
    std::vector<cplx> P = vs;
    std::vector<double> diffs;
    cplx prev_best = P.back();
    for (int lvl = 1; lvl < steps; ++lvl) {
        for (int i = steps - 1; i >= lvl; --i) {
            double ti = ts[static_cast<std::size_t>(i)], tj = ts[static_cast<std::size_t>(i - lvl)];
            P[static_cast<std::size_t>(i)] = (ti * P[static_cast<std::size_t>(i - 1)] - tj * P[static_cast<std::size_t>(i)]) / (ti - tj);
        }
        diffs.push_back(std::abs(P.back() - prev_best));
        prev_best = P.back();
    }
    ResidueResult res;
    res.samples = vs;
    res.value = P.back();
    // use the best of the last two levels
    res.error = diffs.size() >= 2 ? std::max(diffs[diffs.size() - 1], 1e-16 * std::abs(res.value)) : diffs.back();
    if (diffs.size() >= 3 && diffs.back() > diffs.front()) throw NoConvergence("extrapolation residuals do not decrease");
    return res;
}

inline ResidueResult nontangential_residue(const BWDCoefficients& a, const PrimitiveRoot& root, cplx z, double t0 = 0.05,
                                           int steps = 8) {
    cplx L = root.value;
    return richardson_limit(
        [&](double t) {
            cplx q = L * (1.0 + t);
            return (q - L) * eval_bwd(a, q, z, 1e-12 * t).value;
        },
        t0, steps);
}

inline bool in_lower_half(double x, double alpha) {
    double u = x - alpha + 0.5;
    u -= std::floor(u);
    return u < 0.5;
}

// (delta^<_{n,l}, delta^>_{n,l}) for lambda = e^{2 pi i alpha}
inline std::pair<cplx, cplx> split_coefficients(double alpha, long long n, long long l) {
    if (n < 1 || l < 0 || l >= n) throw InvalidArgument("need n >= 1 and 0 <= l < n");
    CSum lo, hi;
    for (long long k = 0; k < n; ++k) {
        cplx v = unit_root(-k * l % n, n);
        if (in_lower_half(static_cast<double>(k) / static_cast<double>(n), alpha))
            lo += v;
        else
            hi += v;
    }
    double inv = 1.0 / static_cast<double>(n);
    return {lo.value() * inv, hi.value() * inv};
}

struct SplitResult {
    cplx lower_direct, upper_direct;
    cplx lower_hadamard, upper_hadamard;
    cplx total;
    double tail = 0;
    long long order = 0;
};

// Both routes truncated at the same order N, so they agree up to rounding.
inline SplitResult split_bwd(const TruncatedPowerSeries& g, double alpha, cplx q, cplx z, double tol) {
    auto p = make_point(q, z);
    if (p.region == Region::circle) throw NearResonance("split needs q off the unit circle");
    double gap = detail::annulus_gap(q);
    double t = g.exact ? 0 : std::abs(z) / g.radius;
    if (!g.exact && !(t < 1)) throw DiskExceeded("|z| outside the certified disk of g");
    long long N = 1;
    if (g.exact)
        N = static_cast<long long>(g.order());
    else
        while (g.cert * std::pow(t, static_cast<double>(N + 1)) / ((1 - t) * gap) > 0.5 * tol && N < 4000) ++N;
    SplitResult res;
    res.order = N;
    res.tail = g.exact ? 0 : g.cert * std::pow(t, static_cast<double>(N + 1)) / ((1 - t) * gap);
    BWDCoefficients a;
    a.source = g;
    CSum lo, hi;
    for (long long m = 1; m <= N; ++m) {
        cplx P = a.payload(m, z, N).value;
        for (long long n = 0; n < m; ++n) {
            if (std::gcd(n, m) != 1) continue;
            cplx L = unit_root(n, m);
            cplx d = q - L;
            if (std::abs(d) < tol) throw NearResonance("q within tolerance of a root");
            cplx term = L * P / d;
            if (in_lower_half(static_cast<double>(n) / static_cast<double>(m), alpha))
                lo += term;
            else
                hi += term;
        }
    }
    res.lower_direct = lo.value();
    res.upper_direct = hi.value();
    CSum hlo, hhi;
    cplx zn = 1, qn = 1;
    for (long long n = 1; n <= N; ++n) {
        zn *= z;
        qn *= q;
        CSum plo, phi;
        cplx ql = 1;
        for (long long l = 0; l < n; ++l) {
            auto [dl, dh] = split_coefficients(alpha, n, l);
            plo += dl * ql;
            phi += dh * ql;
            ql *= q;
        }
        cplx w = g.coeff(n) * zn / (qn - 1.0);
        hlo += w * plo.value();
        hhi += w * phi.value();
    }
    res.lower_hadamard = hlo.value();
    res.upper_hadamard = hhi.value();
    res.total = res.lower_direct + res.upper_direct;
    return res;
}

}  // namespace qlog

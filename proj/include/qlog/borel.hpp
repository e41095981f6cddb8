#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "common.hpp"

namespace qlog {

// a_0 + a_1 x^{-1} + ... + a_N x^{-N}
struct FormalSeries1 {
    std::vector<cplx> a;
    std::optional<std::pair<double, double>> gevrey1;  // |a_n| <= c0 c1^n n!

    bool certificate_holds() const {
        if (!gevrey1) return true;
        auto [c0, c1] = *gevrey1;
        for (std::size_t n = 0; n < a.size(); ++n) {
            double lhs = std::log(std::abs(a[n]));
            double rhs = std::log(c0) + static_cast<double>(n) * std::log(c1) + std::lgamma(static_cast<double>(n) + 1);
            if (lhs > rhs + 1e-12) return false;
        }
        return true;
    }
};

// |phi(xi)| <= C e^{delta |xi|}
struct Growth {
    double delta = 0;
    double C = 1;
};

// delta * delta_0 + sum b_n xi^n, optionally with a closed-form evaluator.
struct BorelGerm {
    std::vector<cplx> b;
    cplx delta = 0;
    std::function<cplx(cplx)> eval;
    std::string validity;
    std::optional<Growth> growth;
    std::vector<cplx> singular;

    std::size_t order() const { return b.size(); }
    cplx taylor(cplx xi) const {
        cplx acc = 0;
        for (std::size_t n = b.size(); n-- > 0;) acc = acc * xi + b[n];
        return acc;
    }
    cplx operator()(cplx xi) const { return eval ? eval(xi) : taylor(xi); }
};

inline std::pair<cplx, BorelGerm> formal_borel(const FormalSeries1& s) {
    BorelGerm g;
    double fact = 1;
    for (std::size_t n = 1; n < s.a.size(); ++n) {
        g.b.push_back(s.a[n] / fact);
        fact *= static_cast<double>(n);
    }
    return {s.a.empty() ? cplx(0) : s.a[0], g};
}

inline FormalSeries1 inverse_borel(cplx a0, const BorelGerm& g) {
    FormalSeries1 s;
    s.a.push_back(a0 + g.delta);
    double fact = 1;
    for (std::size_t n = 0; n < g.b.size(); ++n) {
        s.a.push_back(g.b[n] * fact);
        fact *= static_cast<double>(n + 1);
    }
    return s;
}

// Product of formal series truncated at x^{-N}.
inline FormalSeries1 formal_multiply(const FormalSeries1& f, const FormalSeries1& g, std::size_t N) {
    FormalSeries1 h;
    h.a.assign(N + 1, 0.0);
    for (std::size_t i = 0; i < f.a.size() && i <= N; ++i)
        for (std::size_t j = 0; j < g.a.size() && i + j <= N; ++j) h.a[i + j] += f.a[i] * g.a[j];
    return h;
}

namespace detail {
// i! j! / (i + j + 1)!
inline double beta_weight(std::size_t i, std::size_t j) {
    return std::exp(std::lgamma(i + 1.0) + std::lgamma(j + 1.0) - std::lgamma(i + j + 2.0));
}
}  // namespace detail

inline BorelGerm convolve(const BorelGerm& f, const BorelGerm& g, std::size_t N) {
    BorelGerm h;
    h.b.assign(N, 0.0);
    h.delta = f.delta * g.delta;
    for (std::size_t n = 0; n < N; ++n) {
        CSum s;
        if (n < g.b.size()) s += f.delta * g.b[n];
        if (n < f.b.size()) s += g.delta * f.b[n];
        for (std::size_t i = 0; i + 1 <= n; ++i) {
            std::size_t j = n - 1 - i;
            if (i < f.b.size() && j < g.b.size()) s += f.b[i] * g.b[j] * detail::beta_weight(i, j);
        }
        h.b[n] = s.value();
    }
    if (f.growth && g.growth)
        h.growth = Growth{std::max(f.growth->delta, g.growth->delta) + 1,
                          (f.growth->C + std::abs(f.delta)) * (g.growth->C + std::abs(g.delta))};
    return h;
}

inline BorelGerm borel_translate(const BorelGerm& g, cplx b) {
    BorelGerm h = g;
    std::size_t N = g.b.size();
    std::vector<cplx> e(N);
    cplx p = 1;
    for (std::size_t k = 0; k < N; ++k) {
        e[k] = p;
        p *= -b / static_cast<double>(k + 1);
    }
    for (std::size_t n = 0; n < N; ++n) {
        CSum s;
        for (std::size_t k = 0; k <= n; ++k) s += g.b[k] * e[n - k];
        h.b[n] = s.value();
    }
    if (g.eval) {
        auto f = g.eval;
        h.eval = [f, b](cplx xi) { return std::exp(-b * xi) * f(xi); };
    }
    if (g.growth) h.growth = Growth{g.growth->delta + std::abs(b), g.growth->C};
    return h;
}

inline BorelGerm borel_dilate(const BorelGerm& g, cplx lam) {
    if (lam == 0.0) throw InvalidArgument("dilation factor must be nonzero");
    BorelGerm h = g;
    cplx f = 1.0 / lam;
    cplx p = f;
    for (auto& c : h.b) {
        c *= p;
        p *= f;
    }
    if (g.eval) {
        auto e = g.eval;
        h.eval = [e, f](cplx xi) { return f * e(f * xi); };
    }
    if (g.growth) h.growth = Growth{g.growth->delta / std::abs(lam), g.growth->C / std::abs(lam)};
    for (auto& s : h.singular) s *= lam;
    return h;
}

// phi + sum_{r>=1} L^{*r} * ((-xi)^r phi) / r!
inline BorelGerm composition_convolution(const BorelGerm& g, const BorelGerm& Lhat, std::size_t N, std::size_t r_max,
                                         double tol = 1e-15) {
    BorelGerm out;
    out.b.assign(N, 0.0);
    out.delta = g.delta;
    for (std::size_t n = 0; n < N && n < g.b.size(); ++n) out.b[n] = g.b[n];
    bool has_delta = Lhat.delta != 0.0;
    std::size_t r_needed = has_delta ? r_max : N / 2 + 1;
    BorelGerm Lr;
    Lr.delta = 1;
    Lr.b.assign(N, 0.0);
    double rfact = 1;
    double scale = 0;
    for (auto c : out.b) scale = std::max(scale, std::abs(c));
    scale = std::max(scale, 1.0);
    double last = inf;
    for (std::size_t r = 1; r <= r_needed; ++r) {
        if (r > r_max) throw NotConverged("composition series needs more than r_max terms");
        Lr = convolve(Lr, Lhat, N);
        rfact *= static_cast<double>(r);
        BorelGerm D;
        D.b.assign(N, 0.0);
        double sgn = r % 2 ? -1.0 : 1.0;
        for (std::size_t n = r; n < N; ++n)
            if (n - r < g.b.size()) D.b[n] = sgn * g.b[n - r];
        BorelGerm T = convolve(Lr, D, N);
        double norm = 0;
        for (std::size_t n = 0; n < N; ++n) {
            out.b[n] += T.b[n] / rfact;
            norm = std::max(norm, std::abs(T.b[n]) / rfact);
        }
        last = norm;
        if (has_delta && norm < tol * scale && r >= 2) return out;
    }
    if (has_delta && !(last < tol * scale)) throw NotConverged("composition terms did not fall below tolerance by r_max");
    return out;
}

struct LaplaceOptions {
    double tol = 1e-12;
    double clearance = 1e-8;
    double max_panel = 1.0;
};

struct LaplaceResult {
    cplx value;
    double error = 0;
    double length = 0;
};

// int_0^{e^{i theta} infinity} phi(xi) e^{-x xi} d xi
inline LaplaceResult laplace_ray(const BorelGerm& g, double theta, cplx x, const LaplaceOptions& o = {}) {
    if (!g.eval) throw InvalidArgument("laplace_ray needs a germ evaluator");
    if (!g.growth) throw InvalidArgument("laplace_ray needs a growth bound");
    cplx dir = std::polar(1.0, theta);
    double sigma = (x * dir).real();
    double margin = sigma - g.growth->delta;
    if (!(margin > 0)) throw DampingInsufficient("Re(x e^{i theta}) does not exceed the growth rate");
    for (cplx s : g.singular) {
        double along = (s * std::conj(dir)).real();
        double off = std::abs((s * std::conj(dir)).imag());
        double dist = along < 0 ? std::abs(s) : off;
        if (dist < o.clearance * std::max(1.0, std::abs(s))) throw RayHitsSingularity("ray passes through a singular point");
    }
    double C = g.growth->C;
    double T = std::max(1.0, std::log(std::max(C, 1e-300) / (0.25 * o.tol * margin)) / margin);
    double tail = C * std::exp(-margin * T) / margin;
    double freq = std::abs((x * dir).imag()) + g.growth->delta;
    double h = std::min(o.max_panel, std::min(2.0, 1.0 / std::max(margin, 1e-3)));
    if (freq > 0) h = std::min(h, 3.0 / freq);
    for (cplx s : g.singular) {
        double along = (s * std::conj(dir)).real();
        if (along > 0) h = std::min(h, std::max(0.05, 0.5 * std::abs((s * std::conj(dir)).imag())));
    }
    auto panels = static_cast<std::size_t>(std::ceil(T / h));
    if (panels > 200000) throw DampingInsufficient("integration length too large");
    h = T / static_cast<double>(panels);
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [&](double u) {
        cplx xi = dir * u;
        return g.eval(xi) * std::exp(-x * xi) * dir;
    };
    CSum s;
    double qerr = 0;
    double ptol = std::max(1e-15, 0.1 * o.tol / std::sqrt(static_cast<double>(panels)));
    for (std::size_t k = 0; k < panels; ++k) {
        double a = h * static_cast<double>(k), b = a + h;
        double e = 0;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        cplx v = ts.integrate([&](double t) { return f(mid + half * t) * half; }, -1.0, 1.0, ptol, &e);
        s += v;
        qerr += e + 1e-16 * std::abs(v);
    }
    cplx val = s.value() + g.delta;
    return {val, qerr + tail, T};
}

struct GevreyFit {
    double tau = 0;
    double band = 0;
    double residual = 0;
};

// Least squares of log|a_k| on [k log k, k, 1]; tau is the k log k coefficient.
inline GevreyFit gevrey_order_fit_log(const std::vector<double>& log_abs, std::size_t k_lo, std::size_t k_hi) {
    if (k_hi >= log_abs.size() || k_lo < 1 || k_lo >= k_hi || k_hi - k_lo + 1 < 6)
        throw DegenerateFit("need at least 6 points with k >= 1");
    std::size_t n = k_hi - k_lo + 1;
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double k = static_cast<double>(k_lo + i);
        if (!std::isfinite(log_abs[k_lo + i])) throw DegenerateFit("zero or non-finite coefficient in range");
        A(static_cast<Eigen::Index>(i), 0) = k * std::log(k);
        A(static_cast<Eigen::Index>(i), 1) = k;
        A(static_cast<Eigen::Index>(i), 2) = 1;
        y(static_cast<Eigen::Index>(i)) = log_abs[k_lo + i];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < 3) throw DegenerateFit("regressors are collinear on the range");
    Eigen::VectorXd beta = qr.solve(y);
    Eigen::VectorXd res = y - A * beta;
    double dof = static_cast<double>(n) - 3;
    double s2 = dof > 0 ? res.squaredNorm() / dof : 0;
    Eigen::MatrixXd cov = (A.transpose() * A).inverse() * s2;
    GevreyFit f;
    f.tau = beta(0);
    f.band = 2 * std::sqrt(std::max(cov(0, 0), 0.0));
    f.residual = std::sqrt(res.squaredNorm() / static_cast<double>(n));
    return f;
}

inline GevreyFit gevrey_order_fit(const std::vector<cplx>& coeffs, std::size_t k_lo, std::size_t k_hi) {
    std::vector<double> la(coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k) la[k] = std::log(std::abs(coeffs[k]));
    return gevrey_order_fit_log(la, k_lo, k_hi);
}

struct CarlemanVerdict {
    bool decided = false;
    bool quasianalytic = false;
    std::vector<double> beta;
    std::vector<double> partial_sums;
    std::string note;
};

inline CarlemanVerdict carleman_gevrey(double tau) {
    CarlemanVerdict v;
    v.decided = true;
    v.quasianalytic = tau <= 1;
    v.note = "Gevrey class of order tau is quasianalytic iff tau <= 1";
    return v;
}

// M given for n = 1..K; beta_n = inf_{n' >= n} M_{n'}^{1/n'} over the available prefix.
inline CarlemanVerdict carleman_table(const std::vector<double>& M) {
    CarlemanVerdict v;
    std::size_t K = M.size();
    for (double m : M)
        if (!(m > 0)) throw InvalidArgument("table entries must be positive");
    v.beta.assign(K, inf);
    double run = inf;
    for (std::size_t i = K; i-- > 0;) {
        run = std::min(run, std::pow(M[i], 1.0 / static_cast<double>(i + 1)));
        v.beta[i] = run;
    }
    double s = 0;
    for (double b : v.beta) {
        s += 1 / b;
        v.partial_sums.push_back(s);
    }
    v.note = "divergence of sum 1/beta_n is not decidable from finite data";
    return v;
}

using MpReal = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<256>>;
using MpComplex = boost::multiprecision::cpp_complex<256>;

template <class T>
struct PadeApproximant {
    std::vector<T> num;  // degree N
    std::vector<T> den;  // degree N + 1, den[0] = 1
    double residual = 0;
    double min_pivot = 0;
    int rank = 0;
};

// [N/N+1] from c_0..c_{2N+1} by pivoted elimination at the precision of T.
template <class T>
PadeApproximant<T> pade(const std::vector<T>& c, int N) {
    if (N < 0 || c.size() < static_cast<std::size_t>(2 * N + 2)) throw InvalidArgument("pade needs 2N+2 coefficients");
    using boost::multiprecision::abs;
    using std::abs;
    int K = N + 1;
    auto coef = [&](int k) { return k < 0 ? T(0) : c[static_cast<std::size_t>(k)]; };
    // sum_{j=1}^{N+1} d_j c_{k-j} = -c_k for k = N+1..2N+1
    std::vector<std::vector<T>> A(static_cast<std::size_t>(K), std::vector<T>(static_cast<std::size_t>(K + 1)));
    for (int row = 0; row < K; ++row) {
        int k = N + 1 + row;
        for (int j = 1; j <= K; ++j) A[row][static_cast<std::size_t>(j - 1)] = coef(k - j);
        A[row][static_cast<std::size_t>(K)] = -coef(k);
    }
    auto mag = [](const T& v) { return static_cast<double>(abs(v)); };
    double scale = 0;
    for (auto& r : A)
        for (int j = 0; j < K; ++j) scale = std::max(scale, mag(r[static_cast<std::size_t>(j)]));
    PadeApproximant<T> P;
    P.min_pivot = inf;
    const double eps = std::ldexp(1.0, -240);
    int rank = 0;
    for (int col = 0; col < K; ++col) {
        int piv = col;
        for (int r = col + 1; r < K; ++r)
            if (mag(A[r][static_cast<std::size_t>(col)]) > mag(A[piv][static_cast<std::size_t>(col)])) piv = r;
        double pm = mag(A[piv][static_cast<std::size_t>(col)]);
        P.min_pivot = std::min(P.min_pivot, scale > 0 ? pm / scale : 0);
        if (!(pm > eps * scale)) {
            P.rank = rank;
            throw SingularSystem("Toeplitz system is singular at effective rank " + std::to_string(rank) + " of " +
                                 std::to_string(K));
        }
        ++rank;
        std::swap(A[col], A[piv]);
        for (int r = col + 1; r < K; ++r) {
            T f = A[r][static_cast<std::size_t>(col)] / A[col][static_cast<std::size_t>(col)];
            for (int j = col; j <= K; ++j) A[r][static_cast<std::size_t>(j)] -= f * A[col][static_cast<std::size_t>(j)];
        }
    }
    std::vector<T> d(static_cast<std::size_t>(K + 1));
    d[0] = 1;
    for (int i = K - 1; i >= 0; --i) {
        T s = A[i][static_cast<std::size_t>(K)];
        for (int j = i + 1; j < K; ++j) s -= A[i][static_cast<std::size_t>(j)] * d[static_cast<std::size_t>(j + 1)];
        d[static_cast<std::size_t>(i + 1)] = s / A[i][static_cast<std::size_t>(i)];
    }
    P.rank = rank;
    P.den = d;
    P.num.assign(static_cast<std::size_t>(N + 1), T(0));
    for (int k = 0; k <= N; ++k) {
        T s = 0;
        for (int j = 0; j <= std::min(k, K); ++j) s += d[static_cast<std::size_t>(j)] * coef(k - j);
        P.num[static_cast<std::size_t>(k)] = s;
    }
    double res = 0, cs = 0;
    for (int k = N + 1; k <= 2 * N + 1; ++k) {
        T s = 0;
        for (int j = 0; j <= K; ++j) s += d[static_cast<std::size_t>(j)] * coef(k - j);
        res = std::max(res, mag(s));
        cs = std::max(cs, mag(coef(k)));
    }
    P.residual = cs > 0 ? res / cs : res;
    return P;
}

template <class T, class Q>
Q pade_eval(const PadeApproximant<T>& p, const Q& q) {
    Q n = 0, d = 0;
    for (std::size_t k = p.num.size(); k-- > 0;) n = n * q + Q(p.num[k]);
    for (std::size_t k = p.den.size(); k-- > 0;) d = d * q + Q(p.den[k]);
    return n / d;
}

}  // namespace qlog

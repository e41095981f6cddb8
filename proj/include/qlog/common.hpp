#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlog {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};
inline constexpr double inf = std::numeric_limits<double>::infinity();

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define QLOG_ERROR(Name)                                                     \
    struct Name : Error {                                                    \
        explicit Name(const std::string& w) : Error(#Name, w) {}             \
    };

QLOG_ERROR(InvalidArgument)
QLOG_ERROR(PrecisionExhausted)
QLOG_ERROR(WindowTooSmall)
QLOG_ERROR(Unresolved)
QLOG_ERROR(NearResonance)
QLOG_ERROR(Divergent)
QLOG_ERROR(NoConvergence)
QLOG_ERROR(NotConverged)
QLOG_ERROR(DegenerateFit)
QLOG_ERROR(SingularSystem)
QLOG_ERROR(DampingInsufficient)
QLOG_ERROR(RayHitsSingularity)
QLOG_ERROR(PoleProximity)
QLOG_ERROR(PoleCluster)
QLOG_ERROR(DiskExceeded)
QLOG_ERROR(OutsideStrip)
QLOG_ERROR(TailNotCertified)
QLOG_ERROR(NotSummable)

#undef QLOG_ERROR

// Neumaier compensated accumulator; terms are added in call order.
template <class T>
class CompensatedSum {
public:
    void add(T x) {
        if constexpr (std::is_same_v<T, cplx>) {
            re_.add(x.real());
            im_.add(x.imag());
        } else {
            T t = s_ + x;
            if (std::abs(s_) >= std::abs(x))
                c_ += (s_ - t) + x;
            else
                c_ += (x - t) + s_;
            s_ = t;
        }
    }
    CompensatedSum& operator+=(T x) {
        add(x);
        return *this;
    }
    T value() const {
        if constexpr (std::is_same_v<T, cplx>)
            return {re_.value(), im_.value()};
        else
            return s_ + c_;
    }

private:
    struct Real {
        double s = 0, c = 0;
        void add(double x) {
            double t = s + x;
            if (std::abs(s) >= std::abs(x))
                c += (s - t) + x;
            else
                c += (x - t) + s;
            s = t;
        }
        double value() const { return s + c; }
    };
    T s_{}, c_{};
    Real re_, im_;
};

using CSum = CompensatedSum<cplx>;
using RSum = CompensatedSum<double>;

// Complex number held as log-magnitude and unit phase, for sums whose
// terms overflow binary64.
struct ScaledComplex {
    double logabs = -inf;
    cplx phase{1.0, 0.0};

    static ScaledComplex from(cplx z) {
        double a = std::abs(z);
        if (a == 0.0) return {};
        return {std::log(a), z / a};
    }
    cplx value() const { return std::exp(logabs) * phase; }
};

// Accumulates terms exp(logabs) * phase with a running scale.
class ScaledSum {
public:
    void add(double logabs, cplx phase) {
        if (logabs == -inf) return;
        if (logabs > scale_) {
            sum_ *= std::exp(scale_ - logabs);
            scale_ = logabs;
        }
        sum_ += std::exp(logabs - scale_) * phase;
    }
    ScaledComplex value() const {
        if (scale_ == -inf) return {};
        ScaledComplex r = ScaledComplex::from(sum_);
        r.logabs += scale_;
        return r;
    }

private:
    double scale_ = -inf;
    cplx sum_{0.0, 0.0};
};

// Hurwitz zeta sum_{k>=0} (k+a)^{-s} for real s > 1, a > 0.
inline double hurwitz_zeta(double s, double a) {
    if (!(s > 1.0) || !(a > 0.0)) throw InvalidArgument("hurwitz_zeta needs s > 1, a > 0");
    static const double b2k[] = {1.0 / 6,         -1.0 / 30,  1.0 / 42,  -1.0 / 30,
                                 5.0 / 66,        -691.0 / 2730, 7.0 / 6, -3617.0 / 510,
                                 43867.0 / 798,   -174611.0 / 330};
    double y_min = std::max(20.0, s + 15.0);
    RSum head;
    double y = a;
    while (y < y_min) {
        head += std::pow(y, -s);
        y += 1.0;
    }
    double tail = std::pow(y, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(y, -s);
    double poch = s;  // s (s+1) ... (s+2k-2)
    double fact = 2.0;
    double ypow = std::pow(y, -s - 1.0);
    for (int k = 1; k <= 10; ++k) {
        double term = b2k[k - 1] / fact * poch * ypow;
        tail += term;
        if (std::abs(term) < 1e-18 * std::abs(tail)) break;
        poch *= (s + 2 * k - 1) * (s + 2 * k);
        fact *= (2 * k + 1) * (2 * k + 2);
        ypow /= y * y;
    }
    return head.value() + tail;
}

inline std::string format_complex(cplx z, int digits = 17) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.*g%+.*gi", digits, z.real(), digits, z.imag());
    return buf;
}

}  // namespace qlog

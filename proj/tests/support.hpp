#pragma once

#include <random>

#include <qlog/numbers.hpp>

namespace qlog::test {

// Uniform dyadic rational k / 2^256 in (0,1).
inline Rational random_dyadic(std::mt19937_64& rng) {
    BigInt k = 0;
    for (int i = 0; i < 4; ++i) k = (k << 64) + BigInt(rng());
    if (k == 0) k = 1;
    return Rational(k, BigInt(1) << 256);
}

inline bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace qlog::test

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace dk2 {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long num, long den = 1) { return Rational(num, den); }

inline Int binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    Int r = 1;
    for (long i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

inline Int factorial(long n) {
    Int r = 1;
    for (long i = 2; i <= n; ++i) r *= i;
    return r;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

} // namespace dk2

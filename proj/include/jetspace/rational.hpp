#ifndef JETSPACE_RATIONAL_HPP
#define JETSPACE_RATIONAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include <jetspace/errors.hpp>

namespace jetspace
{

// GMP rationals are kept canonical (lowest terms, positive denominator) by
// every arithmetic operator; only direct construction from a numerator and
// denominator needs an explicit canonicalize().
using Integer = mpz_class;
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

inline Rational make_rational(const Integer &num, const Integer &den)
{
    detail::require(den != 0, "rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "p", "-p", "p/q".
inline Rational parse_rational(const std::string &s)
{
    Rational r;
    if (r.set_str(s, 10) != 0) {
        throw precondition_error("malformed rational: '" + s + "'");
    }
    detail::require(r.get_den() != 0, "rational with zero denominator: '" + s + "'");
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational &r)
{
    return r.get_str();
}

inline bool is_canonical(const Rational &r)
{
    if (r.get_den() <= 0) {
        return false;
    }
    Integer g;
    mpz_gcd(g.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return g == 1 || (r.get_num() == 0 && r.get_den() == 1);
}

// Falling factorial g (g-1) ... (g-k+1) on signed integers; k >= 0.
inline Integer falling_factorial(std::int64_t g, std::int64_t k)
{
    Integer r = 1;
    for (std::int64_t t = 0; t < k; ++t) {
        r *= static_cast<long>(g - t);
    }
    return r;
}

inline Integer factorial(std::int64_t k)
{
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(k));
    return r;
}

// Binomial coefficient with the combinatorial convention: zero when k < 0 or
// k > n for n >= 0. Negative top arguments use the polynomial extension.
inline Integer binomial(std::int64_t n, std::int64_t k)
{
    if (k < 0) {
        return 0;
    }
    return falling_factorial(n, k) / factorial(k);
}

} // namespace jetspace

#endif

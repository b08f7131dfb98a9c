#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <random>
#include <string>

namespace bridgelab {

using BigInt = mpz_class;
using Rational = mpq_class;

BigInt factorial(unsigned long n);
BigInt binomial(unsigned long n, unsigned long k);
BigInt power(unsigned long base, unsigned long exponent);

// Number of labeled trees on m vertices, m^(m-2), with the m = 1 value 1.
BigInt cayley_count(unsigned long m);

Rational make_rational(const BigInt& num, const BigInt& den);
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

// Exact dyadic conversion; the double must be finite.
Rational rational_from_double(double x);

// Random engine used everywhere a seed is accepted. Worker/restart streams are
// derived with derive_stream(seed, index) so results never depend on how work
// is scheduled.
using Rng = std::mt19937_64;
std::uint64_t splitmix64(std::uint64_t x);
Rng derive_stream(std::uint64_t seed, std::uint64_t index);

// Uniform integer in [0, bound) by rejection; portable across standard libraries.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);
BigInt uniform_below(Rng& rng, const BigInt& bound);
// Uniform double in [0, 1).
double uniform_unit(Rng& rng);

}  // namespace bridgelab

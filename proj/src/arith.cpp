#include "bridgelab/arith.hpp"

#include <cmath>
#include <stdexcept>

namespace bridgelab {

BigInt factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

BigInt power(unsigned long base, unsigned long exponent) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exponent);
  return r;
}

BigInt cayley_count(unsigned long m) {
  if (m == 0) throw std::invalid_argument("cayley_count: m must be positive");
  if (m <= 2) return 1;
  return power(m, m - 2);
}

Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }
std::string to_string(const BigInt& z) { return z.get_str(); }

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite value");
  Rational q(x);  // mpq_set_d is exact for finite doubles
  q.canonicalize();
  return q;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng derive_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(seed)),
                    static_cast<std::uint32_t>(splitmix64(seed) >> 32),
                    static_cast<std::uint32_t>(splitmix64(seed ^ splitmix64(index + 1))),
                    static_cast<std::uint32_t>(index)};
  return Rng(seq);
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: empty range");
  const std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

BigInt uniform_below(Rng& rng, const BigInt& bound) {
  if (bound <= 0) throw std::invalid_argument("uniform_below: empty range");
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  const unsigned top_bits = static_cast<unsigned>(bits - 64 * (words - 1));
  BigInt x;
  for (;;) {
    x = 0;
    for (std::size_t i = 0; i < words; ++i) {
      std::uint64_t w = rng();
      if (i == 0 && top_bits < 64) w &= (std::uint64_t{1} << top_bits) - 1;
      x <<= 64;
      BigInt word;
      mpz_import(word.get_mpz_t(), 1, 1, sizeof(w), 0, 0, &w);
      x += word;
    }
    if (x < bound) return x;
  }
}

double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace bridgelab

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "pellrsa/random.hpp"

namespace pellrsa {

/// Arbitrary-precision integer. Residues are kept in [0, modulus).
using Natural = mpz_class;

/// Reduce a (possibly negative) value into [0, n).
Natural reduce(const Natural& a, const Natural& n);

/// Inverse of a modulo n (n >= 2). Throws NotInvertible carrying gcd(a, n).
Natural mod_inv(const Natural& a, const Natural& n);

/// Jacobi symbol (a / n) for odd n >= 3.
int jacobi(const Natural& a, const Natural& n);

/// a^k mod n by left-to-right binary square-and-multiply.
Natural mod_pow(const Natural& a, const Natural& k, const Natural& n);

/// Unique x mod prod(moduli) with x = residues[i] (mod moduli[i]).
/// Throws NonCoprimeModuli when two moduli share a factor.
Natural crt_combine(std::span<const Natural> residues, std::span<const Natural> moduli);

/// Miller-Rabin with `rounds` random bases drawn from rng, after trial
/// division by small primes.
bool is_probable_prime(const Natural& n, RandomSource& rng, int rounds = 40);

/// Same test with an internal fixed-seed base stream; used for validating
/// inputs where the caller has no randomness source at hand.
bool is_probable_prime(const Natural& n);

/// Random probable prime with exactly `bits` bits (top bit set), bits >= 8.
/// Throws RandomnessExhausted if no prime turns up within a bounded number
/// of candidates.
Natural gen_prime(unsigned bits, RandomSource& rng);

Natural gcd(const Natural& a, const Natural& b);
Natural lcm(const Natural& a, const Natural& b);
std::size_t bit_length(const Natural& a);

struct PrimePower {
  Natural prime;
  unsigned long exponent = 1;

  Natural value() const;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// A modulus together with its prime-power factorization.
/// Invariants: primes pairwise distinct and probable primes, exponents >= 1.
class FactoredModulus {
 public:
  /// Validates the invariants; throws std::invalid_argument on violation.
  explicit FactoredModulus(std::vector<PrimePower> factors);

  const std::vector<PrimePower>& factors() const noexcept { return factors_; }
  const Natural& value() const noexcept { return value_; }
  std::size_t size() const noexcept { return factors_.size(); }

 private:
  std::vector<PrimePower> factors_;
  Natural value_;
};

}  // namespace pellrsa

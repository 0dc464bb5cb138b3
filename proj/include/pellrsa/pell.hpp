#pragma once

// Pell hyperbola x^2 - D y^2 = 1 over Z_n with the Brahmagupta product, the
// parameter group Z_n U {alpha}, the maps between them, and Redei-function
// exponentiation.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pellrsa/arith.hpp"

namespace pellrsa {

/// Ambient setting: the ring Z_modulus and the conic coefficient D.
/// Invariant: 1 <= D < modulus and gcd(D, modulus) = 1.
class PellParams {
 public:
  /// Throws std::invalid_argument when the invariant does not hold.
  PellParams(Natural modulus, Natural d);

  const Natural& modulus() const noexcept { return modulus_; }
  const Natural& d() const noexcept { return d_; }

 private:
  Natural modulus_;
  Natural d_;
};

/// A solution (x, y) of x^2 - D y^2 = 1. The curve is not stored; points
/// are only meaningful together with the PellParams that produced them.
struct HyperbolaPoint {
  Natural x;
  Natural y;

  /// Reduces the coordinates and checks the curve equation; throws
  /// std::invalid_argument for points off the curve.
  static HyperbolaPoint checked(const Natural& x, const Natural& y, const PellParams& pp);
  static HyperbolaPoint identity() { return {1, 0}; }

  friend bool operator==(const HyperbolaPoint&, const HyperbolaPoint&) = default;
};

bool on_curve(const HyperbolaPoint& p, const PellParams& pp);

/// Element of the parameter group: a residue, or the point at infinity alpha
/// (the group identity).
class PellParameter {
 public:
  static PellParameter alpha() { return PellParameter(); }
  static PellParameter finite(Natural m) { return PellParameter(std::move(m)); }
  /// Reduced into [0, modulus).
  static PellParameter finite(const Natural& m, const PellParams& pp);

  bool is_alpha() const noexcept { return !value_.has_value(); }
  /// Precondition: !is_alpha().
  const Natural& value() const { return value_.value(); }

  friend bool operator==(const PellParameter&, const PellParameter&) = default;

 private:
  PellParameter() = default;
  explicit PellParameter(Natural m) : value_(std::move(m)) {}

  std::optional<Natural> value_;
};

/// (A_k, B_k) with [[z, D], [1, z]]^k = [[A_k, D B_k], [B_k, A_k]].
struct RedeiPair {
  Natural a;
  Natural b;
  friend bool operator==(const RedeiPair&, const RedeiPair&) = default;
};

/// Counts group operations (or matrix products) performed by the power
/// routines, for checking their logarithmic cost.
struct OpCounter {
  std::size_t ops = 0;
};

// ---- hyperbola group -------------------------------------------------------

/// (x, y) (x) (w, z) = (xw + yzD, yw + xz). Division free.
HyperbolaPoint point_mul(const HyperbolaPoint& p, const HyperbolaPoint& q, const PellParams& pp);
HyperbolaPoint point_inverse(const HyperbolaPoint& p, const PellParams& pp);
HyperbolaPoint point_pow(const HyperbolaPoint& p, const Natural& k, const PellParams& pp,
                         OpCounter* counter = nullptr);

// ---- parameter group -------------------------------------------------------

/// a (.) b = (D + ab) / (a + b); alpha when a + b = 0. Throws
/// ImpossibleOperation when a + b is a nonzero non-unit.
PellParameter param_mul(const PellParameter& a, const PellParameter& b, const PellParams& pp);
PellParameter param_inverse(const PellParameter& a, const PellParams& pp);

/// k-th (.)-power. Runs square-and-multiply on the projective form [A + B x]
/// of the parameter (the class of A/B), which never divides, then normalizes
/// once. Throws ImpossibleOperation if the result is alpha modulo some but
/// not all prime factors of the modulus.
PellParameter param_pow(const PellParameter& m, const Natural& k, const PellParams& pp,
                        OpCounter* counter = nullptr);

/// Square-and-multiply directly with param_mul: one modular inversion per
/// step, and any intermediate non-unit denominator aborts.
PellParameter param_pow_affine(const PellParameter& m, const Natural& k, const PellParams& pp,
                               OpCounter* counter = nullptr);

// ---- morphisms -------------------------------------------------------------

/// (x, y) -> (1 + x) / y, (1, 0) -> alpha, (-1, 0) -> 0.
PellParameter phi(const HyperbolaPoint& p, const PellParams& pp);

/// m -> ((m^2 + D) / (m^2 - D), 2m / (m^2 - D)), alpha -> (1, 0).
/// Throws ImpossibleOperation carrying gcd(m^2 - D, modulus) when that is
/// not 1 (the gcd equals the modulus when m^2 = D).
HyperbolaPoint phi_inv(const PellParameter& m, const PellParams& pp);

// ---- Redei functions -------------------------------------------------------

/// Entries of the k-th power of [[z, D], [1, z]] mod `modulus`, by binary
/// powering of the matrix (reduced at every step). k = 0 gives (1, 0).
RedeiPair redei_eval(const Natural& d, const Natural& z, const Natural& k, const Natural& modulus,
                     OpCounter* counter = nullptr);

/// Q_k(D, z) = A_k / B_k as a parameter: alpha when B_k = 0, ImpossibleOperation
/// when B_k is a nonzero non-unit.
PellParameter redei_quotient(const RedeiPair& pair, const Natural& modulus);

/// Q_k(D, z) for odd moduli through a Lucas ladder on the norm-one image of
/// z: one squaring and one product per exponent bit plus two inversions.
/// Falls back to param_pow when z^2 - D or 2zD is not a unit.
PellParameter redei_ladder(const Natural& z, const Natural& k, const PellParams& pp,
                           OpCounter* counter = nullptr);

// ---- orders ----------------------------------------------------------------

/// prod p_i^(e_i - 1) (p_i + 1).
Natural psi(const FactoredModulus& fm);

/// Every (x, y) in Z_{p^r}^2 with x^2 - D y^2 = 1, ordered by (y, x).
/// Throws ModulusTooLarge when p^r > 10^6.
std::vector<HyperbolaPoint> enumerate_hyperbola(std::uint64_t p, unsigned r, std::uint64_t d);

}  // namespace pellrsa

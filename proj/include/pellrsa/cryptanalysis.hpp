#pragma once

// Attacker-side tools: factoring N from Psi(N), and the impossible-operation
// rate of the parameter group.

#include <chrono>
#include <cstddef>
#include <span>
#include <vector>

#include "pellrsa/arith.hpp"
#include "pellrsa/random.hpp"

namespace pellrsa {

struct AttackReport {
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::vector<Natural> factors_found;
  std::chrono::nanoseconds elapsed{0};

  double success_rate() const {
    return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
  }
  void merge(const AttackReport& other);
};

/// One trial of the Psi-based splitting algorithm with base a in [1, N-1]:
///   t = Psi / 2^h (t odd); return gcd(a, N) if it is not 1;
///   b = a^(.)t; for j < h: probe gcd(b, N) and gcd(b + 1, N), then b = b (.) b.
/// A non-invertible denominator met on the way is itself a factor and is
/// returned. Returns 0 when the trial fails. D must be a unit modulo N.
Natural find_factor_with_base(const Natural& n, const Natural& psi_n, const Natural& d,
                              const Natural& a);

/// Same with a uniformly random base.
Natural find_factor(const Natural& n, const Natural& psi_n, const Natural& d, RandomSource& rng);

/// Complete factorization using repeated trials with a fresh D (Jacobi
/// symbol -1) each time. The same psi_n serves every divisor. Prime powers
/// are split by exact root extraction. Throws TrialBudgetExhausted once more
/// than max_trials trials would be needed.
std::vector<PrimePower> full_factorization(const Natural& n, const Natural& psi_n,
                                           RandomSource& rng, std::size_t max_trials,
                                           AttackReport* report = nullptr);

/// 1 - prod (1 - 1/p_i).
double impossible_op_probability(std::span<const Natural> primes);

/// Empirical rate at which a random pair of operands has a denominator a + b
/// that is not a unit modulo N. Operands are drawn uniformly from Z_N U {alpha};
/// alpha has no denominator and is redrawn. trials >= 1000.
double monte_carlo_impossible_rate(const FactoredModulus& fm, std::size_t trials,
                                   RandomSource& rng);

}  // namespace pellrsa

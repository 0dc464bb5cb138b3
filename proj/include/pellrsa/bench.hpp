#pragma once

// Decryption timing: Pell scheme (CRT over r prime powers) against textbook
// two-prime CRT-RSA decrypting the same amount of plaintext.

#include <cstdint>
#include <string>
#include <vector>

#include "pellrsa/arith.hpp"
#include "pellrsa/pell.hpp"
#include "pellrsa/random.hpp"

namespace pellrsa {

/// Two-prime RSA with CRT decryption, on the same integer backend and the
/// same square-and-multiply as everything else.
class RsaBaseline {
 public:
  /// modulus_bits >= 512; e = 65537.
  static RsaBaseline generate(unsigned modulus_bits, RandomSource& rng);

  Natural encrypt(const Natural& m) const;
  /// Two half-size exponentiations plus recombination.
  Natural decrypt(const Natural& c, OpCounter* exponentiations = nullptr) const;

  const Natural& n() const noexcept { return n_; }
  const Natural& e() const noexcept { return e_; }
  const Natural& d() const noexcept { return d_; }

 private:
  Natural p_, q_, n_, e_, d_, dp_, dq_, q_inv_;
};

struct BenchConfig {
  unsigned modulus_bits = 2048;
  unsigned r = 2;
  std::vector<unsigned long> exponents;  // empty means all ones
  unsigned trials = 11;
  unsigned warmup = 3;
  std::uint64_t seed = 1;
};

struct BenchResult {
  unsigned modulus_bits = 0;
  unsigned r = 0;
  double pell_decrypt_ns = 0;    // median, Lucas-ladder evaluator
  double rsa_decrypt_ns = 0;     // median, two RSA blocks
  double measured_speedup = 0;   // rsa / pell
  double predicted_speedup = 0;  // r^2 / 2
  double matrix_decrypt_ns = 0;  // median, matrix-form Redei evaluator
  double affine_decrypt_ns = 0;  // median, (.) with one inversion per step
  std::size_t pell_modulus_bits = 0;
  std::size_t rsa_modulus_bits = 0;
  std::vector<std::size_t> reduced_exponent_bits;
};

double predicted_speedup(unsigned r);

/// Throws ConfigInfeasible for configurations that cannot be keyed.
BenchResult run_benchmark(const BenchConfig& config);

enum class ReportFormat { Table, Csv };

/// Columns: bits, r, pell_ns, rsa_ns, measured, predicted, matrix_ns,
/// affine_ns. Rows sorted by (bits, r).
std::string emit_report(std::vector<BenchResult> results, ReportFormat format);

}  // namespace pellrsa

#pragma once

#include <cstdint>
#include <random>

#include <gmpxx.h>

namespace pellrsa {

/// Source of uniformly distributed 64-bit words. Every operation that needs
/// randomness takes one of these explicitly so callers control seeding.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual std::uint64_t next_u64() = 0;
};

/// Deterministic stream (mt19937_64). Suitable for tests and reproducible
/// runs, not for keys that must stay secret.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next_u64() override { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Backed by std::random_device.
class SystemRandom final : public RandomSource {
 public:
  std::uint64_t next_u64() override;

 private:
  std::random_device device_;
};

/// Uniform integer with exactly `bits` random bits (value < 2^bits).
mpz_class random_bits(RandomSource& rng, unsigned bits);

/// Uniform integer in [0, bound). bound must be positive.
mpz_class random_below(RandomSource& rng, const mpz_class& bound);

/// Uniform integer in [lo, hi]. Requires lo <= hi.
mpz_class random_range(RandomSource& rng, const mpz_class& lo, const mpz_class& hi);

}  // namespace pellrsa

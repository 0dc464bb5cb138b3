#include "pellrsa/random.hpp"

#include <stdexcept>
#include <vector>

namespace pellrsa {

std::uint64_t SystemRandom::next_u64() {
  static_assert(sizeof(std::random_device::result_type) == 4);
  const std::uint64_t hi = device_();
  const std::uint64_t lo = device_();
  return (hi << 32) | lo;
}

mpz_class random_bits(RandomSource& rng, unsigned bits) {
  if (bits == 0) return 0;
  const std::size_t words = (bits + 63) / 64;
  std::vector<std::uint64_t> buf(words);
  for (auto& w : buf) w = rng.next_u64();
  const unsigned excess = static_cast<unsigned>(words * 64 - bits);
  if (excess != 0) buf.back() >>= excess;

  mpz_class out;
  // least significant word first
  mpz_import(out.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buf.data());
  return out;
}

mpz_class random_below(RandomSource& rng, const mpz_class& bound) {
  if (bound <= 0) throw std::invalid_argument("random_below: bound must be positive");
  const unsigned bits = static_cast<unsigned>(mpz_sizeinbase(bound.get_mpz_t(), 2));
  for (;;) {
    mpz_class candidate = random_bits(rng, bits);
    if (candidate < bound) return candidate;
  }
}

mpz_class random_range(RandomSource& rng, const mpz_class& lo, const mpz_class& hi) {
  if (lo > hi) throw std::invalid_argument("random_range: empty range");
  return lo + random_below(rng, hi - lo + 1);
}

}  // namespace pellrsa

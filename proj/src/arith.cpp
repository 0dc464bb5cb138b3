#include "pellrsa/arith.hpp"

#include <array>
#include <stdexcept>

#include "pellrsa/errors.hpp"

namespace pellrsa {
namespace {

constexpr std::array<unsigned, 54> kSmallPrimes = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,
    47,  53,  59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107,
    109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181,
    191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251};

bool miller_rabin_round(const Natural& n, const Natural& n_minus_1, const Natural& odd,
                        unsigned long twos, const Natural& base) {
  Natural x = mod_pow(base, odd, n);
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned long i = 1; i < twos; ++i) {
    x = x * x % n;
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

}  // namespace

Natural reduce(const Natural& a, const Natural& n) {
  Natural r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
  return r;
}

Natural gcd(const Natural& a, const Natural& b) {
  Natural g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Natural lcm(const Natural& a, const Natural& b) {
  Natural l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

std::size_t bit_length(const Natural& a) {
  if (a == 0) return 0;
  return mpz_sizeinbase(a.get_mpz_t(), 2);
}

Natural mod_inv(const Natural& a, const Natural& n) {
  if (n < 2) throw std::invalid_argument("mod_inv: modulus must be >= 2");
  Natural g, s;
  const Natural ar = reduce(a, n);
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), nullptr, ar.get_mpz_t(), n.get_mpz_t());
  if (g != 1) throw NotInvertible(g);
  return reduce(s, n);
}

int jacobi(const Natural& a, const Natural& n) {
  if (n < 3 || mpz_even_p(n.get_mpz_t()))
    throw std::invalid_argument("jacobi: modulus must be odd and >= 3");
  return mpz_jacobi(reduce(a, n).get_mpz_t(), n.get_mpz_t());
}

Natural mod_pow(const Natural& a, const Natural& k, const Natural& n) {
  if (n < 1) throw std::invalid_argument("mod_pow: modulus must be >= 1");
  if (k < 0) throw std::invalid_argument("mod_pow: negative exponent");
  if (n == 1) return 0;
  const Natural base = reduce(a, n);
  Natural acc = 1;
  for (auto bit = static_cast<long>(bit_length(k)) - 1; bit >= 0; --bit) {
    acc = acc * acc % n;
    if (mpz_tstbit(k.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) acc = acc * base % n;
  }
  return acc;
}

Natural crt_combine(std::span<const Natural> residues, std::span<const Natural> moduli) {
  if (residues.empty() || residues.size() != moduli.size())
    throw std::invalid_argument("crt_combine: need equally many residues and moduli");
  Natural x = reduce(residues[0], moduli[0]);
  Natural m = moduli[0];
  for (std::size_t i = 1; i < moduli.size(); ++i) {
    const Natural& mi = moduli[i];
    Natural inv;
    try {
      inv = mod_inv(m, mi);
    } catch (const NotInvertible& e) {
      throw NonCoprimeModuli("crt_combine: moduli share the factor " + e.gcd().get_str());
    }
    // x + m * ((r_i - x) * m^-1 mod m_i)
    const Natural t = reduce((residues[i] - x) * inv, mi);
    x += m * t;
    m *= mi;
  }
  return x;
}

bool is_probable_prime(const Natural& n, RandomSource& rng, int rounds) {
  if (n < 2) return false;
  for (unsigned p : kSmallPrimes) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  const Natural n_minus_1 = n - 1;
  Natural odd = n_minus_1;
  const unsigned long twos = mpz_scan1(odd.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(odd.get_mpz_t(), odd.get_mpz_t(), twos);

  const Natural base_span = n - 3;  // bases drawn from [2, n-2]
  for (int i = 0; i < rounds; ++i) {
    const Natural base = random_range(rng, 2, 2 + base_span - 1);
    if (!miller_rabin_round(n, n_minus_1, odd, twos, base)) return false;
  }
  return true;
}

bool is_probable_prime(const Natural& n) {
  SeededRandom rng(0x5eed'9e11'0f1e'2bd5ULL);
  return is_probable_prime(n, rng);
}

Natural gen_prime(unsigned bits, RandomSource& rng) {
  if (bits < 8) throw std::invalid_argument("gen_prime: need at least 8 bits");
  // A random odd b-bit number is prime with probability about 2/(b ln 2);
  // this bound is far beyond any realistic search length.
  const std::size_t max_candidates = 100 * static_cast<std::size_t>(bits) + 10000;
  for (std::size_t attempt = 0; attempt < max_candidates; ++attempt) {
    Natural candidate = random_bits(rng, bits);
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    mpz_setbit(candidate.get_mpz_t(), 0);
    // cheap single round first so composites are rejected quickly
    if (!is_probable_prime(candidate, rng, 1)) continue;
    if (is_probable_prime(candidate, rng, 40)) return candidate;
  }
  throw RandomnessExhausted("gen_prime: no prime found after " +
                            std::to_string(max_candidates) + " candidates");
}

Natural PrimePower::value() const {
  Natural v;
  mpz_pow_ui(v.get_mpz_t(), prime.get_mpz_t(), exponent);
  return v;
}

FactoredModulus::FactoredModulus(std::vector<PrimePower> factors)
    : factors_(std::move(factors)), value_(1) {
  if (factors_.empty()) throw std::invalid_argument("FactoredModulus: no factors");
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto& f = factors_[i];
    if (f.exponent < 1) throw std::invalid_argument("FactoredModulus: exponent must be >= 1");
    if (!is_probable_prime(f.prime))
      throw std::invalid_argument("FactoredModulus: " + f.prime.get_str() + " is not prime");
    for (std::size_t j = 0; j < i; ++j)
      if (factors_[j].prime == f.prime)
        throw std::invalid_argument("FactoredModulus: repeated prime " + f.prime.get_str());
    value_ *= f.value();
  }
}

}  // namespace pellrsa

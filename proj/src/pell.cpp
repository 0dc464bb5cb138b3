#include "pellrsa/pell.hpp"

#include <stdexcept>

#include "pellrsa/errors.hpp"

namespace pellrsa {
namespace {

// Projective parameter [A + B x]; also the structured Redei matrix
// [[A, D B], [B, A]]. Products of either kind use the same formula.
RedeiPair projective_mul(const RedeiPair& u, const RedeiPair& v, const Natural& d,
                         const Natural& n) {
  return {(u.a * v.a + d * (u.b * v.b)) % n, (u.a * v.b + u.b * v.a) % n};
}

RedeiPair projective_sqr(const RedeiPair& u, const Natural& d, const Natural& n) {
  return {(u.a * u.a + d * (u.b * u.b)) % n, 2 * u.a * u.b % n};
}

void count(OpCounter* counter, std::size_t n = 1) {
  if (counter != nullptr) counter->ops += n;
}

bool bit_set(const Natural& k, std::size_t bit) {
  return mpz_tstbit(k.get_mpz_t(), static_cast<mp_bitcnt_t>(bit)) != 0;
}

void require_exponent(const Natural& k) {
  if (k < 0) throw std::invalid_argument("negative exponent");
}

}  // namespace

PellParams::PellParams(Natural modulus, Natural d) : modulus_(std::move(modulus)), d_(std::move(d)) {
  if (modulus_ < 2) throw std::invalid_argument("PellParams: modulus must be >= 2");
  if (d_ < 1 || d_ >= modulus_) throw std::invalid_argument("PellParams: need 1 <= D < modulus");
  if (gcd(d_, modulus_) != 1) throw std::invalid_argument("PellParams: D must be a unit");
}

HyperbolaPoint HyperbolaPoint::checked(const Natural& x, const Natural& y, const PellParams& pp) {
  HyperbolaPoint p{reduce(x, pp.modulus()), reduce(y, pp.modulus())};
  if (!on_curve(p, pp)) throw std::invalid_argument("HyperbolaPoint: not on x^2 - D y^2 = 1");
  return p;
}

bool on_curve(const HyperbolaPoint& p, const PellParams& pp) {
  return reduce(p.x * p.x - pp.d() * p.y * p.y - 1, pp.modulus()) == 0;
}

PellParameter PellParameter::finite(const Natural& m, const PellParams& pp) {
  return PellParameter(reduce(m, pp.modulus()));
}

HyperbolaPoint point_mul(const HyperbolaPoint& p, const HyperbolaPoint& q, const PellParams& pp) {
  const Natural& n = pp.modulus();
  return {(p.x * q.x + pp.d() * (p.y * q.y)) % n, (p.y * q.x + p.x * q.y) % n};
}

HyperbolaPoint point_inverse(const HyperbolaPoint& p, const PellParams& pp) {
  return {p.x, reduce(-p.y, pp.modulus())};
}

HyperbolaPoint point_pow(const HyperbolaPoint& p, const Natural& k, const PellParams& pp,
                         OpCounter* counter) {
  require_exponent(k);
  if (k == 0) return HyperbolaPoint::identity();
  HyperbolaPoint acc = p;
  for (auto bit = static_cast<long>(bit_length(k)) - 2; bit >= 0; --bit) {
    acc = point_mul(acc, acc, pp);
    count(counter);
    if (bit_set(k, static_cast<std::size_t>(bit))) {
      acc = point_mul(acc, p, pp);
      count(counter);
    }
  }
  return acc;
}

PellParameter param_mul(const PellParameter& a, const PellParameter& b, const PellParams& pp) {
  if (a.is_alpha()) return b;
  if (b.is_alpha()) return a;
  const Natural& n = pp.modulus();
  const Natural sum = reduce(a.value() + b.value(), n);
  if (sum == 0) return PellParameter::alpha();
  const Natural g = gcd(sum, n);
  if (g != 1) throw ImpossibleOperation(g);
  return PellParameter::finite((pp.d() + a.value() * b.value()) * mod_inv(sum, n) % n);
}

PellParameter param_inverse(const PellParameter& a, const PellParams& pp) {
  if (a.is_alpha()) return a;
  return PellParameter::finite(reduce(-a.value(), pp.modulus()));
}

PellParameter param_pow(const PellParameter& m, const Natural& k, const PellParams& pp,
                        OpCounter* counter) {
  require_exponent(k);
  if (m.is_alpha() || k == 0) return PellParameter::alpha();
  const Natural& n = pp.modulus();
  const RedeiPair base{m.value(), 1};
  RedeiPair acc = base;
  for (auto bit = static_cast<long>(bit_length(k)) - 2; bit >= 0; --bit) {
    acc = projective_sqr(acc, pp.d(), n);
    count(counter);
    if (bit_set(k, static_cast<std::size_t>(bit))) {
      // product with [m + x]
      acc = {(acc.a * base.a + pp.d() * acc.b) % n, (acc.a + acc.b * base.a) % n};
      count(counter);
    }
  }
  return redei_quotient(acc, n);
}

PellParameter param_pow_affine(const PellParameter& m, const Natural& k, const PellParams& pp,
                               OpCounter* counter) {
  require_exponent(k);
  if (m.is_alpha() || k == 0) return PellParameter::alpha();
  PellParameter acc = m;
  for (auto bit = static_cast<long>(bit_length(k)) - 2; bit >= 0; --bit) {
    acc = param_mul(acc, acc, pp);
    count(counter);
    if (bit_set(k, static_cast<std::size_t>(bit))) {
      acc = param_mul(acc, m, pp);
      count(counter);
    }
  }
  return acc;
}

PellParameter phi(const HyperbolaPoint& p, const PellParams& pp) {
  const Natural& n = pp.modulus();
  if (p.y == 0) {
    if (p.x == 1) return PellParameter::alpha();
    if (p.x == n - 1) return PellParameter::finite(0);
    // x = 1 modulo some prime factors and -1 modulo others
    throw ImpossibleOperation(gcd(p.x - 1, n));
  }
  const Natural g = gcd(p.y, n);
  if (g != 1) throw ImpossibleOperation(g);
  return PellParameter::finite((1 + p.x) * mod_inv(p.y, n) % n);
}

HyperbolaPoint phi_inv(const PellParameter& m, const PellParams& pp) {
  if (m.is_alpha()) return HyperbolaPoint::identity();
  const Natural& n = pp.modulus();
  const Natural sq = m.value() * m.value() % n;
  const Natural den = reduce(sq - pp.d(), n);
  const Natural g = gcd(den, n);
  if (g != 1) throw ImpossibleOperation(g);
  const Natural inv = mod_inv(den, n);
  return {(sq + pp.d()) * inv % n, 2 * m.value() * inv % n};
}

RedeiPair redei_eval(const Natural& d, const Natural& z, const Natural& k, const Natural& modulus,
                     OpCounter* counter) {
  require_exponent(k);
  const Natural dr = reduce(d, modulus);
  RedeiPair power{reduce(z, modulus), 1 % modulus};
  std::optional<RedeiPair> result;
  const std::size_t bits = bit_length(k);
  for (std::size_t bit = 0; bit < bits; ++bit) {
    if (bit_set(k, bit)) {
      if (result) {
        result = projective_mul(*result, power, dr, modulus);
        count(counter);
      } else {
        result = power;
      }
    }
    if (bit + 1 < bits) {
      power = projective_sqr(power, dr, modulus);
      count(counter);
    }
  }
  if (!result) return {1 % modulus, 0};
  return *result;
}

PellParameter redei_quotient(const RedeiPair& pair, const Natural& modulus) {
  const Natural b = reduce(pair.b, modulus);
  if (b == 0) return PellParameter::alpha();
  const Natural g = gcd(b, modulus);
  if (g != 1) throw ImpossibleOperation(g);
  return PellParameter::finite(pair.a * mod_inv(b, modulus) % modulus);
}

PellParameter redei_ladder(const Natural& z0, const Natural& k, const PellParams& pp,
                           OpCounter* counter) {
  require_exponent(k);
  if (k == 0) return PellParameter::alpha();
  const Natural& n = pp.modulus();
  const Natural& d = pp.d();
  const Natural z = reduce(z0, n);
  const auto fallback = [&] { return param_pow(PellParameter::finite(z), k, pp, counter); };

  if (mpz_even_p(n.get_mpz_t())) return fallback();
  const Natural zz = z * z % n;
  const Natural norm = reduce(zz - d, n);
  const Natural two_zd = 2 * z * d % n;
  if (gcd(norm, n) != 1 || gcd(two_zd, n) != 1) return fallback();

  // norm-one image (x, y) = phi_inv(z); V_j = 2 x_j with V_{j+1} V_j ladder
  const Natural inv = mod_inv(norm, n);
  const Natural x = (zz + d) * inv % n;
  const Natural trace = 2 * x % n;
  Natural lo = 2;
  Natural hi = trace;
  for (auto bit = static_cast<long>(bit_length(k)) - 1; bit >= 0; --bit) {
    const Natural cross = reduce(lo * hi - trace, n);
    if (bit_set(k, static_cast<std::size_t>(bit))) {
      lo = cross;
      hi = reduce(hi * hi - 2, n);
    } else {
      hi = cross;
      lo = reduce(lo * lo - 2, n);
    }
    count(counter, 2);
  }

  // y_k = (V_{k+1} - x V_k) / (2 D y) and Q_k = (1 + x_k) / y_k
  const Natural den = reduce(hi - x * lo, n);
  if (den == 0) {
    if (lo == 2 % n) return PellParameter::alpha();
    if (reduce(lo + 2, n) == 0) return PellParameter::finite(0);
    return fallback();
  }
  if (gcd(den, n) != 1) return fallback();
  const Natural dy = two_zd * inv % n;
  return PellParameter::finite(dy * (2 + lo) % n * mod_inv(den, n) % n);
}

Natural psi(const FactoredModulus& fm) {
  Natural out = 1;
  for (const auto& f : fm.factors()) {
    Natural pk;
    mpz_pow_ui(pk.get_mpz_t(), f.prime.get_mpz_t(), f.exponent - 1);
    out *= pk * (f.prime + 1);
  }
  return out;
}

std::vector<HyperbolaPoint> enumerate_hyperbola(std::uint64_t p, unsigned r, std::uint64_t d) {
  constexpr std::uint64_t kLimit = 1'000'000;
  if (p < 2 || r < 1) throw std::invalid_argument("enumerate_hyperbola: need p >= 2, r >= 1");
  std::uint64_t m = 1;
  for (unsigned i = 0; i < r; ++i) {
    if (m > kLimit / p) throw ModulusTooLarge("enumerate_hyperbola: p^r exceeds 10^6");
    m *= p;
  }
  if (m > kLimit) throw ModulusTooLarge("enumerate_hyperbola: p^r exceeds 10^6");

  // square roots of every residue, bucketed by x^2 mod m (CSR layout)
  std::vector<std::uint32_t> start(m + 1, 0);
  for (std::uint64_t x = 0; x < m; ++x) ++start[x * x % m + 1];
  for (std::uint64_t v = 0; v < m; ++v) start[v + 1] += start[v];
  std::vector<std::uint32_t> roots(m);
  std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
  for (std::uint64_t x = 0; x < m; ++x) roots[fill[x * x % m]++] = static_cast<std::uint32_t>(x);

  const std::uint64_t dm = d % m;
  std::vector<HyperbolaPoint> out;
  for (std::uint64_t y = 0; y < m; ++y) {
    const std::uint64_t rhs = (1 + dm * (y * y % m)) % m;
    for (auto i = start[rhs]; i < start[rhs + 1]; ++i)
      out.push_back({Natural(static_cast<unsigned long>(roots[i])), Natural(static_cast<unsigned long>(y))});
  }
  return out;
}

}  // namespace pellrsa

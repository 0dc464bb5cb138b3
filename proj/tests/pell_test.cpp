#include "pellrsa/pell.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "pellrsa/errors.hpp"

namespace pellrsa {
namespace {

using u64 = std::uint64_t;

// ---- oracles (independent of the library's power routines) ----------------

// (z + x)^k in K[x]/(x^2 - D), one factor at a time.
RedeiPair naive_projective_power(u64 z, u64 k, u64 d, u64 n) {
  u64 a = 1 % n, b = 0;
  for (u64 i = 0; i < k; ++i) {
    const u64 na = (a * z + d * b) % n;
    const u64 nb = (a + b * z) % n;
    a = na;
    b = nb;
  }
  return {Natural(static_cast<unsigned long>(a)), Natural(static_cast<unsigned long>(b))};
}

// k-fold (.) by the defining formula; nullopt for alpha. Valid on prime moduli.
std::optional<u64> naive_affine_power(u64 z, u64 k, u64 d, u64 p) {
  std::optional<u64> acc;
  for (u64 i = 0; i < k; ++i) {
    if (!acc) {
      acc = z;
      continue;
    }
    const u64 s = (*acc + z) % p;
    if (s == 0) {
      acc.reset();
      continue;
    }
    acc = (d + *acc * z) % p * mod_inv(static_cast<unsigned long>(s), static_cast<unsigned long>(p)).get_ui() % p;
  }
  return acc;
}

u64 brute_force_count(u64 m, u64 d) {
  u64 count = 0;
  for (u64 x = 0; x < m; ++x)
    for (u64 y = 0; y < m; ++y)
      if ((x * x + m * m - d % m * (y * y % m) % m) % m == 1 % m) ++count;
  return count;
}

u64 smallest_qnr(u64 p) {
  for (u64 d = 2;; ++d)
    if (jacobi(static_cast<unsigned long>(d), static_cast<unsigned long>(p)) == -1) return d;
}

std::vector<u64> odd_primes_below(u64 limit) {
  std::vector<u64> out;
  for (u64 n = 3; n < limit; n += 2) {
    bool prime = true;
    for (u64 d = 3; d * d <= n; d += 2) prime = prime && n % d != 0;
    if (prime) out.push_back(n);
  }
  return out;
}

PellParameter fin(unsigned long v) { return PellParameter::finite(v); }

// ---- point group ----------------------------------------------------------

TEST(PointMul, Examples) {
  const PellParams pp(5, 2);
  const HyperbolaPoint p = HyperbolaPoint::checked(2, 2, pp);
  EXPECT_EQ(point_mul(p, HyperbolaPoint::identity(), pp), p);
  EXPECT_EQ(point_mul(p, point_inverse(p, pp), pp), HyperbolaPoint::identity());
  EXPECT_EQ(point_mul(p, p, pp), (HyperbolaPoint{2, 3}));
  EXPECT_THROW(HyperbolaPoint::checked(2, 1, pp), std::invalid_argument);
}

TEST(PointMul, ClosureAssociativityCommutativity) {
  SeededRandom rng(1);
  const Natural n = Natural(1000003) * 1000033;
  const PellParams pp(n, 1234567);
  const auto random_point = [&] { return phi_inv(PellParameter::finite(random_below(rng, n)), pp); };
  for (int i = 0; i < 200; ++i) {
    const auto a = random_point(), b = random_point(), c = random_point();
    const auto ab = point_mul(a, b, pp);
    EXPECT_TRUE(on_curve(ab, pp));
    EXPECT_EQ(ab, point_mul(b, a, pp));
    EXPECT_EQ(point_mul(ab, c, pp), point_mul(a, point_mul(b, c, pp), pp));
  }
}

TEST(PointPow, Examples) {
  const PellParams pp(5, 2);
  const HyperbolaPoint p{2, 2};
  EXPECT_EQ(point_pow(p, 0, pp), HyperbolaPoint::identity());
  // six naive multiplications
  HyperbolaPoint naive = p;
  for (int i = 0; i < 6; ++i) naive = point_mul(naive, p, pp);
  EXPECT_EQ(naive, p);
  EXPECT_EQ(point_pow(p, 7, pp), p);
}

TEST(PointPow, MorphismWithParamPow) {
  SeededRandom rng(2);
  const Natural n = Natural(10007) * 10009 * 10037;
  const PellParams pp(n, 5);
  for (int i = 0; i < 100; ++i) {
    const auto m = PellParameter::finite(random_below(rng, n));
    const Natural k = random_below(rng, 1 << 20);
    try {
      const auto point = phi_inv(m, pp);
      EXPECT_EQ(phi(point_pow(point, k, pp), pp), param_pow(m, k, pp));
    } catch (const ImpossibleOperation&) {
      // one side undefined
    }
  }
}

// ---- parameter group ------------------------------------------------------

TEST(ParamMul, Examples) {
  const PellParams pp(35, 18);
  EXPECT_EQ(param_mul(PellParameter::alpha(), fin(12), pp), fin(12));
  EXPECT_EQ(param_mul(fin(12), fin(23), pp), PellParameter::alpha());
  // (18 + 1) * 2^-1 mod 35, evaluated directly
  const unsigned long expected = (18 + 1) * 18 % 35;
  EXPECT_EQ(param_mul(fin(1), fin(1), pp), fin(expected));
  EXPECT_EQ(expected, 27u);
  // order-2 element pairs with itself
  EXPECT_EQ(param_mul(fin(0), fin(0), pp), PellParameter::alpha());
}

TEST(ParamMul, ImpossibleOperationCarriesFactor) {
  const PellParams pp(35, 18);
  try {
    param_mul(fin(3), fin(4), pp);  // 3 + 4 = 7
    FAIL();
  } catch (const ImpossibleOperation& e) {
    EXPECT_EQ(e.factor(), 7);
  }
}

TEST(ParamMul, GroupLaws) {
  SeededRandom rng(4);
  const Natural n = Natural(1000003) * 1000033;
  const PellParams pp(n, 1234567);
  for (int i = 0; i < 300; ++i) {
    const auto a = PellParameter::finite(random_below(rng, n));
    const auto b = PellParameter::finite(random_below(rng, n));
    const auto c = PellParameter::finite(random_below(rng, n));
    EXPECT_EQ(param_mul(a, b, pp), param_mul(b, a, pp));
    EXPECT_EQ(param_mul(param_mul(a, b, pp), c, pp), param_mul(a, param_mul(b, c, pp), pp));
    EXPECT_EQ(param_mul(a, PellParameter::alpha(), pp), a);
    EXPECT_EQ(param_mul(a, param_inverse(a, pp), pp), PellParameter::alpha());
  }
}

TEST(ParamPow, Examples) {
  const PellParams pp(35, 18);
  EXPECT_EQ(param_pow(fin(9), 1, pp), fin(9));
  EXPECT_EQ(param_pow(fin(9), 0, pp), PellParameter::alpha());
  EXPECT_EQ(param_pow(PellParameter::alpha(), 77, pp), PellParameter::alpha());

  // naive oracle: five projective factors, then divide
  const RedeiPair five = naive_projective_power(1, 5, 18, 35);
  EXPECT_EQ(redei_quotient(five, 35), fin(34));
  EXPECT_EQ(param_pow(fin(1), 5, pp), fin(34));
  // third power is alpha mod 7 only
  EXPECT_THROW(param_pow(fin(1), 3, pp), ImpossibleOperation);
  // square-and-multiply never forms the third power
  EXPECT_EQ(param_pow_affine(fin(1), 5, pp), fin(34));
}

TEST(ParamPow, EulerAnalogOnPsi) {
  SeededRandom rng(6);
  const FactoredModulus fm({{1009, 1}, {1013, 2}, {1019, 1}});
  const Natural& n = fm.value();
  // D non-residue modulo every prime
  Natural d;
  do {
    d = random_range(rng, 2, n - 1);
  } while (jacobi(d, 1009) != -1 || jacobi(d, 1013) != -1 || jacobi(d, 1019) != -1);
  const PellParams pp(n, d);
  const Natural order = psi(fm);
  for (int i = 0; i < 20; ++i) {
    Natural m;
    do {
      m = random_below(rng, n);
    } while (gcd(m, n) != 1);
    EXPECT_EQ(param_pow(PellParameter::finite(m), order, pp), PellParameter::alpha());
  }
}

// ---- morphisms ------------------------------------------------------------

TEST(Phi, Examples) {
  const PellParams pp(35, 18);
  EXPECT_EQ(phi(HyperbolaPoint::identity(), pp), PellParameter::alpha());
  EXPECT_EQ(phi({34, 0}, pp), fin(0));
  EXPECT_EQ(phi(HyperbolaPoint::checked(3, 4, pp), pp), fin(1));
  EXPECT_EQ(phi_inv(PellParameter::alpha(), pp), HyperbolaPoint::identity());
  EXPECT_EQ(phi_inv(fin(0), pp), (HyperbolaPoint{34, 0}));
  EXPECT_EQ(phi_inv(fin(1), pp), (HyperbolaPoint{3, 4}));
}

TEST(Phi, NonUnitCoordinates) {
  const PellParams pp(35, 18);
  // points with y = 0 and x = 1 mod 5, -1 mod 7 (x = 6)
  EXPECT_TRUE(on_curve({6, 0}, pp));
  EXPECT_THROW(phi({6, 0}, pp), ImpossibleOperation);
  // m^2 = D modulo 7: 2^2 = 4 = 18 mod 7
  try {
    phi_inv(fin(2), pp);
    FAIL();
  } catch (const ImpossibleOperation& e) {
    EXPECT_EQ(e.factor(), 7);
  }
}

TEST(Phi, RoundTripOnInvertibleY) {
  SeededRandom rng(7);
  const Natural n = Natural(65537) * 65539;
  const PellParams pp(n, 3);
  for (int i = 0; i < 200; ++i) {
    const auto m = PellParameter::finite(random_below(rng, n));
    const auto point = phi_inv(m, pp);
    EXPECT_TRUE(on_curve(point, pp));
    EXPECT_EQ(phi(point, pp), m);
    EXPECT_EQ(phi_inv(phi(point, pp), pp), point);
  }
}

TEST(Phi, MorphismExhaustiveOverPrimes) {
  // every pair of points, every odd prime below 1000
  for (u64 p : odd_primes_below(1000)) {
    const u64 d = smallest_qnr(p);
    const PellParams pp(static_cast<unsigned long>(p), static_cast<unsigned long>(d));
    const auto points = enumerate_hyperbola(p, 1, d);
    ASSERT_EQ(points.size(), p + 1);
    std::vector<PellParameter> images;
    for (const auto& pt : points) images.push_back(phi(pt, pp));
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = i; j < points.size(); ++j)
        ASSERT_EQ(phi(point_mul(points[i], points[j], pp), pp), param_mul(images[i], images[j], pp))
            << "p=" << p;
  }
}

// ---- Redei functions ------------------------------------------------------

TEST(RedeiEval, SmallPowers) {
  const Natural n = 1000003;
  EXPECT_EQ(redei_eval(7, 10, 1, n), (RedeiPair{10, 1}));
  // one hand multiplication: [[z, D], [1, z]]^2 = [[z^2 + D, 2zD], [2z, z^2 + D]]
  EXPECT_EQ(redei_eval(7, 10, 2, n), (RedeiPair{107, 20}));
  EXPECT_EQ(redei_eval(7, 10, 0, n), (RedeiPair{1, 0}));
}

TEST(RedeiEval, LinearRecurrence) {
  const Natural n = Natural(1000003) * 999983;
  for (unsigned long z : {2UL, 3UL, 12345UL}) {
    const Natural d = 5;
    const Natural trace = 2 * z;
    const Natural norm = Natural(z) * z - d;
    for (unsigned long k = 2; k <= 50; ++k) {
      const auto prev = redei_eval(d, z, k - 1, n);
      const auto cur = redei_eval(d, z, k, n);
      const auto next = redei_eval(d, z, k + 1, n);
      EXPECT_EQ(next.a, reduce(trace * cur.a - norm * prev.a, n));
      EXPECT_EQ(next.b, reduce(trace * cur.b - norm * prev.b, n));
    }
  }
}

TEST(RedeiEval, OracleEquivalence) {
  SeededRandom rng(10);
  for (u64 p : {1009ULL, 7919ULL, 65521ULL}) {
    const u64 d = smallest_qnr(p);
    const PellParams pp(static_cast<unsigned long>(p), static_cast<unsigned long>(d));
    for (u64 k = 1; k <= 200; ++k) {
      const u64 z = rng.next_u64() % p;
      const Natural kk = static_cast<unsigned long>(k);
      const auto pair = redei_eval(static_cast<unsigned long>(d), static_cast<unsigned long>(z), kk, pp.modulus());
      ASSERT_EQ(pair, naive_projective_power(z, k, d, p));
      const auto q = redei_quotient(pair, pp.modulus());
      const auto affine = naive_affine_power(z, k, d, p);
      ASSERT_EQ(q, affine ? fin(static_cast<unsigned long>(*affine)) : PellParameter::alpha());
      ASSERT_EQ(param_pow(fin(static_cast<unsigned long>(z)), kk, pp), q);
      ASSERT_EQ(param_pow_affine(fin(static_cast<unsigned long>(z)), kk, pp), q);
      ASSERT_EQ(redei_ladder(static_cast<unsigned long>(z), kk, pp), q) << "z=" << z << " k=" << k;
    }
  }
}

TEST(RedeiEval, QuotientMatchesParamPowOverComposite) {
  SeededRandom rng(12);
  const Natural n = Natural(4294967291UL) * 4294967279UL * 4294967231UL;
  const PellParams pp(n, 7);
  for (int i = 0; i < 200; ++i) {
    const Natural z = random_below(rng, n);
    const Natural k = 1 + random_below(rng, 1000);
    const auto q = redei_quotient(redei_eval(7, z, k, n), n);
    EXPECT_EQ(param_pow(PellParameter::finite(z), k, pp), q);
    EXPECT_EQ(redei_ladder(z, k, pp), q);
  }
}

TEST(RedeiLadder, FallbackCases) {
  const PellParams pp(35, 18);
  // z = 0: 2zD is not a unit
  EXPECT_EQ(redei_ladder(0, 3, pp), fin(0));
  EXPECT_EQ(redei_ladder(0, 4, pp), PellParameter::alpha());
  // z^2 - D not a unit modulo 7
  EXPECT_EQ(redei_ladder(2, 1, pp), fin(2));
  EXPECT_EQ(redei_ladder(9, 0, pp), PellParameter::alpha());
  // even modulus
  const PellParams even(16, 3);
  for (unsigned long z = 0; z < 16; ++z)
    for (unsigned long k = 1; k < 12; ++k) {
      try {
        const auto expected = redei_quotient(redei_eval(3, z, k, 16), 16);
        EXPECT_EQ(redei_ladder(z, k, even), expected);
      } catch (const ImpossibleOperation&) {
        EXPECT_THROW(redei_ladder(z, k, even), ImpossibleOperation);
      }
    }
}

TEST(RedeiEval, LogarithmicOperationCount) {
  const Natural n = Natural(1000003) * 999983;
  const PellParams pp(n, 5);
  for (unsigned long k : {1UL, 2UL, 3UL, 255UL, 256UL, 1000UL, 65535UL, 1UL << 20}) {
    const double bound = 2 * std::ceil(std::log2(static_cast<double>(k))) + 1;
    OpCounter matrix, param, point, ladder;
    redei_eval(5, 123, k, n, &matrix);
    param_pow(fin(123), k, pp, &param);
    point_pow(phi_inv(fin(123), pp), k, pp, &point);
    redei_ladder(123, k, pp, &ladder);
    EXPECT_LE(static_cast<double>(matrix.ops), bound) << k;
    EXPECT_LE(static_cast<double>(param.ops), bound) << k;
    EXPECT_LE(static_cast<double>(point.ops), bound) << k;
    EXPECT_LE(static_cast<double>(ladder.ops), bound + 1) << k;
  }
}

// ---- orders ---------------------------------------------------------------

TEST(Psi, Examples) {
  EXPECT_EQ(psi(FactoredModulus({{5, 1}, {7, 1}})), 48);
  EXPECT_EQ(psi(FactoredModulus({{5, 3}})), 150);
  EXPECT_EQ(psi(FactoredModulus({{5, 3}, {7, 2}})), 8400);
}

TEST(EnumerateHyperbola, Examples) {
  EXPECT_EQ(enumerate_hyperbola(5, 1, 2).size(), 6u);
  EXPECT_EQ(enumerate_hyperbola(5, 2, 2).size(), 30u);
  EXPECT_EQ(enumerate_hyperbola(7, 1, 3).size(), brute_force_count(7, 3));
  EXPECT_EQ(brute_force_count(7, 3), 8u);
  EXPECT_THROW(enumerate_hyperbola(1009, 2, 11), ModulusTooLarge);
  EXPECT_NO_THROW(enumerate_hyperbola(1000, 2, 3));
}

TEST(EnumerateHyperbola, MatchesBruteForceScan) {
  for (u64 m : {9ULL, 25ULL, 27ULL, 49ULL, 121ULL, 125ULL})
    for (u64 d = 1; d < 12; ++d) {
      u64 p = 3;
      while (m % p != 0) p += 2;
      unsigned r = 0;
      for (u64 t = m; t > 1; t /= p) ++r;
      const auto points = enumerate_hyperbola(p, r, d);
      EXPECT_EQ(points.size(), brute_force_count(m, d)) << m << " " << d;
      if (gcd(static_cast<unsigned long>(d), static_cast<unsigned long>(m)) != 1) continue;
      const PellParams pp(static_cast<unsigned long>(m), static_cast<unsigned long>(d % m));
      for (const auto& pt : points) EXPECT_TRUE(on_curve(pt, pp));
    }
}

TEST(EnumerateHyperbola, OrderFormulaSmallPrimes) {
  for (u64 p : odd_primes_below(20))
    for (unsigned r = 1; r <= 3; ++r)
      for (u64 d = 1; d < p; ++d) {
        if (jacobi(static_cast<unsigned long>(d), static_cast<unsigned long>(p)) != -1) continue;
        const u64 expected = static_cast<u64>(std::pow(p, r - 1)) * (p + 1);
        EXPECT_EQ(enumerate_hyperbola(p, r, d).size(), expected);
      }
}

}  // namespace
}  // namespace pellrsa

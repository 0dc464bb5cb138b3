#include "pellrsa/cryptanalysis.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "pellrsa/errors.hpp"
#include "pellrsa/pell.hpp"

namespace pellrsa {
namespace {

bool nontrivial(const Natural& g, const Natural& n) { return g != 1 && g != n; }

// Largest k with n = root^k, or 1 if n is not a perfect power.
unsigned long perfect_power(const Natural& n, Natural& root) {
  if (mpz_perfect_power_p(n.get_mpz_t()) == 0) return 1;
  for (auto k = static_cast<unsigned long>(bit_length(n)); k >= 2; --k) {
    if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) return k;
  }
  return 1;
}

}  // namespace

void AttackReport::merge(const AttackReport& other) {
  trials += other.trials;
  successes += other.successes;
  factors_found.insert(factors_found.end(), other.factors_found.begin(), other.factors_found.end());
  elapsed += other.elapsed;
}

Natural find_factor_with_base(const Natural& n, const Natural& psi_n, const Natural& d,
                              const Natural& a) {
  if (psi_n <= 0) throw std::invalid_argument("find_factor: Psi must be positive");
  Natural t = psi_n;
  const unsigned long h = mpz_scan1(t.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(t.get_mpz_t(), t.get_mpz_t(), h);

  const Natural g = gcd(a, n);
  if (g != 1) return g;
  if (h == 0) return 0;  // the probing loop below would not run

  const PellParams pp(n, d);
  try {
    PellParameter b = param_pow(PellParameter::finite(a, pp), t, pp);
    for (unsigned long j = 0; j < h; ++j) {
      if (b.is_alpha()) return 0;
      // b = 0 is the order-2 parameter; b = -1 is the point-coordinate analogue
      if (const Natural g0 = gcd(b.value(), n); nontrivial(g0, n)) return g0;
      if (const Natural g1 = gcd(b.value() + 1, n); nontrivial(g1, n)) return g1;
      b = param_mul(b, b, pp);
    }
  } catch (const ImpossibleOperation& e) {
    if (nontrivial(e.factor(), n)) return e.factor();
  }
  return 0;
}

Natural find_factor(const Natural& n, const Natural& psi_n, const Natural& d, RandomSource& rng) {
  return find_factor_with_base(n, psi_n, d, random_range(rng, 1, n - 1));
}

std::vector<PrimePower> full_factorization(const Natural& n, const Natural& psi_n,
                                           RandomSource& rng, std::size_t max_trials,
                                           AttackReport* report) {
  if (n < 1) throw std::invalid_argument("full_factorization: N must be positive");
  const auto start = std::chrono::steady_clock::now();
  AttackReport local;
  std::map<Natural, unsigned long> found;
  std::vector<std::pair<Natural, unsigned long>> pending{{n, 1}};

  while (!pending.empty()) {
    auto [m, mult] = std::move(pending.back());
    pending.pop_back();
    while (m > 1 && mpz_even_p(m.get_mpz_t())) {
      found[2] += mult;
      m /= 2;
    }
    if (m == 1) continue;
    if (is_probable_prime(m, rng)) {
      found[m] += mult;
      continue;
    }
    Natural root;
    if (const unsigned long k = perfect_power(m, root); k > 1) {
      pending.emplace_back(std::move(root), mult * k);
      continue;
    }

    // m is odd, composite and not a perfect power, so Jacobi(., m) takes the value -1
    for (;;) {
      const Natural d = random_range(rng, 2, m - 1);
      const int j = jacobi(d, m);
      if (j == 0) {
        const Natural g = gcd(d, m);
        pending.emplace_back(g, mult);
        pending.emplace_back(m / g, mult);
        break;
      }
      if (j != -1) continue;
      if (local.trials >= max_trials) {
        local.elapsed = std::chrono::steady_clock::now() - start;
        if (report != nullptr) report->merge(local);
        throw TrialBudgetExhausted("no factor of " + m.get_str() + " within " +
                                   std::to_string(max_trials) + " trials");
      }
      ++local.trials;
      const Natural f = find_factor(m, psi_n, d, rng);
      if (f == 0) continue;
      ++local.successes;
      local.factors_found.push_back(f);
      pending.emplace_back(f, mult);
      pending.emplace_back(m / f, mult);
      break;
    }
  }

  local.elapsed = std::chrono::steady_clock::now() - start;
  if (report != nullptr) report->merge(local);
  std::vector<PrimePower> out;
  for (auto& [p, e] : found) out.push_back({p, e});
  return out;
}

double impossible_op_probability(std::span<const Natural> primes) {
  double log_unit_fraction = 0.0;
  for (const auto& p : primes) log_unit_fraction += std::log1p(-1.0 / p.get_d());
  return -std::expm1(log_unit_fraction);
}

double monte_carlo_impossible_rate(const FactoredModulus& fm, std::size_t trials,
                                   RandomSource& rng) {
  if (trials < 1000) throw std::invalid_argument("monte_carlo_impossible_rate: need >= 1000 trials");
  const Natural& n = fm.value();
  // index n encodes alpha
  const auto draw_finite = [&] {
    for (;;) {
      Natural v = random_below(rng, n + 1);
      if (v != n) return v;
    }
  };
  std::size_t hits = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const Natural a = draw_finite();
    const Natural b = draw_finite();
    if (gcd(a + b, n) != 1) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace pellrsa

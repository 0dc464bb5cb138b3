#include "pellrsa/bench.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "pellrsa/errors.hpp"
#include "pellrsa/scheme.hpp"

namespace pellrsa {
namespace {

double median_ns(unsigned warmup, unsigned trials, const std::function<void()>& body) {
  for (unsigned i = 0; i < warmup; ++i) body();
  std::vector<double> samples;
  samples.reserve(trials);
  for (unsigned i = 0; i < trials; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const auto t1 = std::chrono::steady_clock::now();
    samples.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
  }
  std::sort(samples.begin(), samples.end());
  const std::size_t mid = samples.size() / 2;
  return samples.size() % 2 == 1 ? samples[mid] : (samples[mid - 1] + samples[mid]) / 2;
}

MessagePair random_message(const PublicKey& pk, RandomSource& rng) {
  for (;;) {
    MessagePair msg{random_range(rng, 2, pk.n - 2), random_range(rng, 2, pk.n - 2)};
    try {
      validate_message(pk, msg, Mode::Robust);
      return msg;
    } catch (const Error&) {
    }
  }
}

}  // namespace

RsaBaseline RsaBaseline::generate(unsigned modulus_bits, RandomSource& rng) {
  if (modulus_bits < 512) throw std::invalid_argument("RsaBaseline: need at least 512 bits");
  RsaBaseline k;
  k.e_ = 65537;
  const unsigned half = modulus_bits / 2;
  const auto draw = [&](const Natural& avoid) {
    for (;;) {
      Natural p = gen_prime(half, rng);
      if (p != avoid && gcd(k.e_, p - 1) == 1) return p;
    }
  };
  k.p_ = draw(0);
  k.q_ = draw(k.p_);
  k.n_ = k.p_ * k.q_;
  k.d_ = mod_inv(k.e_, (k.p_ - 1) * (k.q_ - 1));
  k.dp_ = k.d_ % (k.p_ - 1);
  k.dq_ = k.d_ % (k.q_ - 1);
  k.q_inv_ = mod_inv(k.q_, k.p_);
  return k;
}

Natural RsaBaseline::encrypt(const Natural& m) const { return mod_pow(m, e_, n_); }

Natural RsaBaseline::decrypt(const Natural& c, OpCounter* exponentiations) const {
  const Natural mp = mod_pow(c, dp_, p_);
  const Natural mq = mod_pow(c, dq_, q_);
  if (exponentiations != nullptr) exponentiations->ops += 2;
  return mq + q_ * reduce(q_inv_ * (mp - mq), p_);
}

double predicted_speedup(unsigned r) { return static_cast<double>(r) * r / 2.0; }

BenchResult run_benchmark(const BenchConfig& config) {
  if (config.r < 2) throw ConfigInfeasible("need at least two primes");
  if (config.trials < 1) throw ConfigInfeasible("need at least one timed trial");
  if (config.modulus_bits < 512) throw ConfigInfeasible("modulus must have at least 512 bits");
  std::vector<unsigned long> exponents = config.exponents;
  if (exponents.empty()) exponents.assign(config.r, 1);
  if (exponents.size() != config.r) throw ConfigInfeasible("one exponent per prime is required");
  if (std::any_of(exponents.begin(), exponents.end(), [](auto e) { return e % 2 == 0; }))
    throw ConfigInfeasible("prime exponents must be odd");
  const unsigned long weight = std::accumulate(exponents.begin(), exponents.end(), 0UL);
  const auto prime_bits = static_cast<unsigned>(config.modulus_bits / weight);
  if (prime_bits < 8)
    throw ConfigInfeasible("primes of " + std::to_string(prime_bits) + " bits are too small");

  SeededRandom rng(config.seed);
  KeygenOptions options;
  options.prime_count = config.r;
  options.exponents = exponents;
  options.prime_bits = prime_bits;
  const KeyPair pell = keygen(options, rng);
  const RsaBaseline rsa = RsaBaseline::generate(config.modulus_bits, rng);

  // 2 log N bits of plaintext on both sides
  const MessagePair msg = random_message(pell.pub, rng);
  const Ciphertext ct = encrypt(pell.pub, msg);
  const Natural m1 = random_below(rng, rsa.n());
  const Natural m2 = random_below(rng, rsa.n());
  const Natural c1 = rsa.encrypt(m1);
  const Natural c2 = rsa.encrypt(m2);
  if (decrypt(pell.priv, ct) != msg || rsa.decrypt(c1) != m1 || rsa.decrypt(c2) != m2)
    throw std::logic_error("benchmark round-trip failed");

  BenchResult out;
  out.modulus_bits = config.modulus_bits;
  out.r = config.r;
  out.pell_modulus_bits = bit_length(pell.pub.n);
  out.rsa_modulus_bits = bit_length(rsa.n());
  for (const auto& d : reduced_exponents(pell.priv, ct.d_coef)) out.reduced_exponent_bits.push_back(bit_length(d));

  const auto pell_path = [&](RedeiEvaluator ev) {
    return [&, ev] {
      if (decrypt(pell.priv, ct, ev).mx != msg.mx) throw std::logic_error("decrypt mismatch");
    };
  };
  out.pell_decrypt_ns = median_ns(config.warmup, config.trials, pell_path(RedeiEvaluator::Ladder));
  out.rsa_decrypt_ns = median_ns(config.warmup, config.trials, [&] {
    if (rsa.decrypt(c1) != m1 || rsa.decrypt(c2) != m2) throw std::logic_error("decrypt mismatch");
  });
  out.matrix_decrypt_ns = median_ns(config.warmup, config.trials, pell_path(RedeiEvaluator::Matrix));
  out.affine_decrypt_ns =
      median_ns(config.warmup, config.trials, pell_path(RedeiEvaluator::AffineParam));
  out.measured_speedup = out.rsa_decrypt_ns / out.pell_decrypt_ns;
  out.predicted_speedup = predicted_speedup(config.r);
  return out;
}

std::string emit_report(std::vector<BenchResult> results, ReportFormat format) {
  if (results.empty()) throw std::invalid_argument("emit_report: no results");
  std::stable_sort(results.begin(), results.end(), [](const auto& a, const auto& b) {
    return std::tie(a.modulus_bits, a.r) < std::tie(b.modulus_bits, b.r);
  });
  const std::vector<std::string> header = {"bits",     "r",         "pell_ns",  "rsa_ns",
                                           "measured", "predicted", "matrix_ns", "affine_ns"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : results) {
    const auto fixed = [](double v, int digits) {
      std::ostringstream os;
      os << std::fixed << std::setprecision(digits) << v;
      return os.str();
    };
    rows.push_back({std::to_string(r.modulus_bits), std::to_string(r.r), fixed(r.pell_decrypt_ns, 0),
                    fixed(r.rsa_decrypt_ns, 0), fixed(r.measured_speedup, 3),
                    fixed(r.predicted_speedup, 3), fixed(r.matrix_decrypt_ns, 0),
                    fixed(r.affine_decrypt_ns, 0)});
  }

  std::ostringstream os;
  if (format == ReportFormat::Csv) {
    const auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
      os << '\n';
    };
    line(header);
    for (const auto& row : rows) line(row);
    return os.str();
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) {
    width[i] = header[i].size();
    for (const auto& row : rows) width[i] = std::max(width[i], row[i].size());
  }
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      os << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << cells[i];
    os << '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
  return os.str();
}

}  // namespace pellrsa

#include "pellrsa/scheme.hpp"

#include <sstream>
#include <stdexcept>

#include "pellrsa/errors.hpp"

namespace pellrsa {
namespace {

constexpr unsigned kMaxPrimeCollisions = 64;

Natural prime_power_part(const PrimePower& f) {
  Natural pk;
  mpz_pow_ui(pk.get_mpz_t(), f.prime.get_mpz_t(), f.exponent - 1);
  return pk;
}

// Exponent of the parameter group modulo p^e for a unit D with the given
// Legendre symbol: p^(e-1)(p+1) for non-residues, p^(e-1)(p-1) for residues.
Natural component_order(const PrimePower& f, int legendre) {
  return prime_power_part(f) * (f.prime - legendre);
}

int legendre_or_fail(const Natural& d_coef, const PrimePower& f) {
  const int leg = jacobi(d_coef, f.prime);
  if (leg == 0) throw DecryptionFailure("D is not a unit modulo " + f.prime.get_str());
  return leg;
}

std::string residuosity_summary(const PrivateKey& sk, const Natural& d_coef) {
  std::ostringstream os;
  const auto legs = residuosity(sk, d_coef);
  for (std::size_t i = 0; i < legs.size(); ++i) {
    if (i != 0) os << ", ";
    os << "(D/p" << i + 1 << ") = " << legs[i];
  }
  return os.str();
}

void check_ciphertext_ranges(const Natural& n, std::initializer_list<const Natural*> values) {
  for (const Natural* v : values)
    if (*v < 0 || *v >= n) throw DecryptionFailure("ciphertext component outside [0, N)");
}

PellParameter evaluate(RedeiEvaluator evaluator, const Natural& c, const Natural& k,
                       const PellParams& pp) {
  switch (evaluator) {
    case RedeiEvaluator::Ladder:
      return redei_ladder(c, k, pp);
    case RedeiEvaluator::Matrix:
      return redei_quotient(redei_eval(pp.d(), c, k, pp.modulus()), pp.modulus());
    case RedeiEvaluator::AffineParam:
      return param_pow_affine(PellParameter::finite(c), k, pp);
  }
  throw std::logic_error("unknown evaluator");
}

struct Component {
  Natural modulus;     // p^e
  Natural d_coef;      // D mod p^e
  Natural exponent;    // reduced decryption exponent
};

std::vector<Component> components(const PrivateKey& sk, const Natural& d_coef) {
  std::vector<Component> out;
  for (const auto& f : sk.factors.factors()) {
    const int leg = legendre_or_fail(d_coef, f);
    Natural q = f.value();
    out.push_back({q, reduce(d_coef, q), sk.d % component_order(f, leg)});
  }
  return out;
}

}  // namespace

Natural exponent_modulus(const FactoredModulus& fm, Mode mode) {
  Natural l = 1;
  for (const auto& f : fm.factors()) {
    const Natural base = prime_power_part(f);
    const Natural order = mode == Mode::StrictPaper ? Natural(base * (f.prime + 1))
                                                    : Natural(base * (f.prime * f.prime - 1));
    l = lcm(l, order);
  }
  return l;
}

Natural default_public_exponent(const Natural& l) {
  Natural e = 65537;
  while (gcd(e, l) != 1) e += 2;
  return e;
}

KeyPair make_keypair(const FactoredModulus& fm, const std::optional<Natural>& e_choice, Mode mode) {
  for (const auto& f : fm.factors())
    if (f.prime == 2) throw std::invalid_argument("make_keypair: primes must be odd");
  const Natural l = exponent_modulus(fm, mode);
  Natural e;
  if (e_choice) {
    e = *e_choice;
    if (e < 3 || mpz_even_p(e.get_mpz_t()) || gcd(e, l) != 1)
      throw BadExponentChoice("public exponent " + e.get_str() +
                              " must be odd, >= 3 and coprime to " + l.get_str());
  } else {
    e = default_public_exponent(l);
  }
  return {PublicKey{fm.value(), e}, PrivateKey{fm, mod_inv(e, l), mode}};
}

KeyPair keygen(const KeygenOptions& options, RandomSource& rng) {
  if (options.prime_count < 2) throw std::invalid_argument("keygen: need at least two primes");
  if (options.exponents.size() != options.prime_count)
    throw std::invalid_argument("keygen: one exponent per prime is required");
  for (auto ex : options.exponents)
    if (ex % 2 == 0) throw std::invalid_argument("keygen: prime exponents must be odd");

  std::vector<PrimePower> factors;
  unsigned collisions = 0;
  while (factors.size() < options.prime_count) {
    Natural p = gen_prime(options.prime_bits, rng);
    bool repeated = false;
    for (const auto& f : factors) repeated = repeated || f.prime == p;
    if (repeated) {
      if (++collisions > kMaxPrimeCollisions)
        throw RandomnessExhausted("keygen: could not draw distinct primes");
      continue;
    }
    factors.push_back({std::move(p), options.exponents[factors.size()]});
  }
  return make_keypair(FactoredModulus(std::move(factors)), options.public_exponent, options.mode);
}

Natural public_exponent(const PrivateKey& sk) {
  return mod_inv(sk.d, exponent_modulus(sk.factors, sk.mode));
}

PublicKey public_key(const PrivateKey& sk) { return {sk.modulus(), public_exponent(sk)}; }

Natural validate_message(const PublicKey& pk, const MessagePair& msg, Mode mode) {
  const Natural& n = pk.n;
  if (msg.mx < 0 || msg.mx >= n || msg.my < 0 || msg.my >= n)
    throw MessageNotEncryptable("message components must lie in [0, N)");
  if (gcd(msg.mx, n) != 1) throw MessageNotEncryptable("Mx is not a unit modulo N");
  const Natural t = reduce(msg.mx * msg.mx - 1, n);
  const int j = jacobi(t, n);
  if (mode == Mode::StrictPaper && j != -1)
    throw MessageNotEncryptable("Jacobi symbol of Mx^2 - 1 is " + std::to_string(j) + ", need -1");
  if (mode == Mode::Robust && j == 0) throw MessageNotEncryptable("Mx^2 - 1 is not a unit");
  Natural inv;
  try {
    inv = mod_inv(msg.my, n);
  } catch (const NotInvertible& e) {
    throw ImpossibleOperation(e.gcd());
  }
  return t * inv % n * inv % n;
}

Ciphertext encrypt(const PublicKey& pk, const MessagePair& msg, Mode mode) {
  const Natural d_coef = validate_message(pk, msg, mode);
  const Natural m = (msg.mx + 1) * mod_inv(msg.my, pk.n) % pk.n;
  const PellParameter c = redei_quotient(redei_eval(d_coef, m, pk.e, pk.n), pk.n);
  if (c.is_alpha()) throw MessageNotEncryptable("message parameter has order dividing e");
  return {c.value(), d_coef};
}

PellParameter recover_parameter(const PrivateKey& sk, const Ciphertext& ct,
                                RedeiEvaluator evaluator) {
  const Natural& n = sk.modulus();
  check_ciphertext_ranges(n, {&ct.c, &ct.d_coef});
  std::vector<Natural> residues;
  std::vector<Natural> moduli;
  for (const auto& comp : components(sk, ct.d_coef)) {
    const PellParams pp(comp.modulus, comp.d_coef);
    PellParameter mi = PellParameter::alpha();
    try {
      mi = evaluate(evaluator, reduce(ct.c, comp.modulus), comp.exponent, pp);
    } catch (const ImpossibleOperation&) {
      throw DecryptionFailure("impossible operation while exponentiating modulo " +
                              comp.modulus.get_str());
    }
    if (mi.is_alpha()) throw DecryptionFailure("recovered parameter is the identity");
    residues.push_back(mi.value());
    moduli.push_back(comp.modulus);
  }
  return PellParameter::finite(crt_combine(residues, moduli));
}

PellParameter recover_parameter_direct(const PrivateKey& sk, const Ciphertext& ct) {
  const Natural& n = sk.modulus();
  return redei_quotient(redei_eval(ct.d_coef, ct.c, sk.d, n), n);
}

MessagePair decrypt(const PrivateKey& sk, const Ciphertext& ct, RedeiEvaluator evaluator) {
  const Natural& n = sk.modulus();
  const PellParameter m = recover_parameter(sk, ct, evaluator);
  if (gcd(ct.d_coef, n) != 1) throw DecryptionFailure("D is not a unit modulo N");
  const PellParams pp(n, ct.d_coef);

  if (sk.mode == Mode::StrictPaper) {
    // the exponent is only valid if D is a non-residue modulo every prime
    const Natural e = public_exponent(sk);
    for (const auto& f : sk.factors.factors()) {
      const Natural q = f.value();
      const PellParams ppq(q, reduce(ct.d_coef, q));
      const PellParameter back = redei_ladder(reduce(m.value(), q), e, ppq);
      if (back.is_alpha() || back.value() != reduce(ct.c, q))
        throw DecryptionFailure("decryption exponent does not invert e for this D; " +
                                residuosity_summary(sk, ct.d_coef));
    }
  }

  HyperbolaPoint point;
  try {
    point = phi_inv(m, pp);
  } catch (const ImpossibleOperation&) {
    throw DecryptionFailure("recovered parameter has no preimage on the hyperbola");
  }
  if (!on_curve(point, pp)) throw DecryptionFailure("recovered pair is not on the curve");
  return {point.x, point.y};
}

PointCiphertext encrypt_point(const PublicKey& pk, const MessagePair& msg, Mode mode) {
  const Natural d_coef = validate_message(pk, msg, mode);
  const PellParams pp(pk.n, d_coef);
  const HyperbolaPoint c = point_pow({msg.mx, msg.my}, pk.e, pp);
  return {c.x, c.y, d_coef};
}

MessagePair decrypt_point(const PrivateKey& sk, const PointCiphertext& ct) {
  const Natural& n = sk.modulus();
  check_ciphertext_ranges(n, {&ct.cx, &ct.cy, &ct.d_coef});
  if (gcd(ct.d_coef, n) != 1) throw DecryptionFailure("D is not a unit modulo N");
  const PellParams pp(n, ct.d_coef);
  if (!on_curve({ct.cx, ct.cy}, pp)) throw DecryptionFailure("ciphertext point is not on the curve");

  const std::optional<Natural> e =
      sk.mode == Mode::StrictPaper ? std::optional<Natural>(public_exponent(sk)) : std::nullopt;
  std::vector<Natural> xs, ys, moduli;
  for (const auto& comp : components(sk, ct.d_coef)) {
    const PellParams ppq(comp.modulus, comp.d_coef);
    const HyperbolaPoint cq{reduce(ct.cx, comp.modulus), reduce(ct.cy, comp.modulus)};
    const HyperbolaPoint mq = point_pow(cq, comp.exponent, ppq);
    if (e && point_pow(mq, *e, ppq) != cq)
      throw DecryptionFailure("decryption exponent does not invert e for this D; " +
                              residuosity_summary(sk, ct.d_coef));
    xs.push_back(mq.x);
    ys.push_back(mq.y);
    moduli.push_back(comp.modulus);
  }
  const HyperbolaPoint m{crt_combine(xs, moduli), crt_combine(ys, moduli)};
  if (!on_curve(m, pp)) throw DecryptionFailure("recovered pair is not on the curve");
  return {m.x, m.y};
}

std::vector<int> residuosity(const PrivateKey& sk, const Natural& d_coef) {
  std::vector<int> out;
  for (const auto& f : sk.factors.factors()) out.push_back(jacobi(d_coef, f.prime));
  return out;
}

std::vector<Natural> reduced_exponents(const PrivateKey& sk, const Natural& d_coef) {
  std::vector<Natural> out;
  for (auto& comp : components(sk, d_coef)) out.push_back(std::move(comp.exponent));
  return out;
}

}  // namespace pellrsa

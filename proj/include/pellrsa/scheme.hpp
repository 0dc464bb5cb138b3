#pragma once

// Multi-prime RSA-like encryption over the Pell hyperbola.
//
// N = prod p_i^e_i. A message is a pair (Mx, My) of units; it fixes the conic
// coefficient D = (Mx^2 - 1) / My^2 so that (Mx, My) lies on x^2 - D y^2 = 1.
// The compressed ciphertext is (C, D) with C the e-th (.)-power of the
// parameter of the message point; the uncompressed one is the e-th
// (x)-power of the point itself together with D.

#include <optional>
#include <vector>

#include "pellrsa/arith.hpp"
#include "pellrsa/pell.hpp"
#include "pellrsa/random.hpp"

namespace pellrsa {

/// How the decryption exponent is derived.
///  StrictPaper: d = e^-1 mod lcm p^(e-1) (p + 1). Correct only when D is a
///               non-residue modulo every prime.
///  Robust:      d = e^-1 mod lcm p^(e-1) (p^2 - 1). Correct for every unit D.
enum class Mode { StrictPaper, Robust };

/// Evaluator used for the per-prime Redei step during decryption.
enum class RedeiEvaluator { Ladder, Matrix, AffineParam };

struct PublicKey {
  Natural n;
  Natural e;
  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct PrivateKey {
  FactoredModulus factors;
  Natural d;
  Mode mode = Mode::Robust;

  const Natural& modulus() const noexcept { return factors.value(); }
};

struct KeyPair {
  PublicKey pub;
  PrivateKey priv;
};

struct MessagePair {
  Natural mx;
  Natural my;
  friend bool operator==(const MessagePair&, const MessagePair&) = default;
};

struct Ciphertext {
  Natural c;
  Natural d_coef;
  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

struct PointCiphertext {
  Natural cx;
  Natural cy;
  Natural d_coef;
  friend bool operator==(const PointCiphertext&, const PointCiphertext&) = default;
};

struct KeygenOptions {
  unsigned prime_count = 2;
  std::vector<unsigned long> exponents;  // one odd exponent per prime
  unsigned prime_bits = 512;
  std::optional<Natural> public_exponent;
  Mode mode = Mode::Robust;
};

/// L: lcm of p^(e-1)(p+1) (StrictPaper) or p^(e-1)(p^2-1) (Robust).
Natural exponent_modulus(const FactoredModulus& fm, Mode mode);

/// Smallest odd integer >= 65537 coprime to L.
Natural default_public_exponent(const Natural& exponent_modulus);

/// Builds keys from known primes. Throws BadExponentChoice if e is even,
/// below 3, or shares a factor with L.
KeyPair make_keypair(const FactoredModulus& fm, const std::optional<Natural>& e, Mode mode);

/// Generates r distinct primes of prime_bits bits and derives the keys.
KeyPair keygen(const KeygenOptions& options, RandomSource& rng);

/// The public exponent recovered from the private key (e = d^-1 mod L).
Natural public_exponent(const PrivateKey& sk);
PublicKey public_key(const PrivateKey& sk);

/// Checks that msg is encryptable under `mode` and returns D.
/// Throws MessageNotEncryptable, or ImpossibleOperation when My is not a unit.
Natural validate_message(const PublicKey& pk, const MessagePair& msg, Mode mode);

Ciphertext encrypt(const PublicKey& pk, const MessagePair& msg, Mode mode = Mode::Robust);

/// CRT decryption: per prime power, reduce d by p^(e-1)(p+1) or p^(e-1)(p-1)
/// according to the Legendre symbol of D, evaluate the Redei function, then
/// recombine and map back to the hyperbola. Throws DecryptionFailure.
MessagePair decrypt(const PrivateKey& sk, const Ciphertext& ct,
                    RedeiEvaluator evaluator = RedeiEvaluator::Ladder);

/// Division-free variant: the ciphertext is the point (Mx, My)^e itself.
PointCiphertext encrypt_point(const PublicKey& pk, const MessagePair& msg,
                              Mode mode = Mode::Robust);
MessagePair decrypt_point(const PrivateKey& sk, const PointCiphertext& ct);

/// The CRT fast path alone: Q_d(D, C) mod N assembled from its prime-power
/// components, without mapping back to the hyperbola or any checks.
PellParameter recover_parameter(const PrivateKey& sk, const Ciphertext& ct,
                                RedeiEvaluator evaluator = RedeiEvaluator::Ladder);

/// Q_d(D, C) mod N with the full exponent at full width.
PellParameter recover_parameter_direct(const PrivateKey& sk, const Ciphertext& ct);

/// Legendre symbol of D modulo each prime of the key, in factor order.
std::vector<int> residuosity(const PrivateKey& sk, const Natural& d_coef);

/// Per-prime decryption exponents after reduction, in factor order.
std::vector<Natural> reduced_exponents(const PrivateKey& sk, const Natural& d_coef);

}  // namespace pellrsa

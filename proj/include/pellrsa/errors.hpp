#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace pellrsa {

/// Base of every domain error raised by the library. `name()` is the stable
/// identifier the CLI prints on stderr.
class Error : public std::runtime_error {
 public:
  Error(std::string_view name, const std::string& what)
      : std::runtime_error(what), name_(name) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// gcd(a, n) > 1. The gcd is kept because it may be a proper factor of n.
class NotInvertible : public Error {
 public:
  explicit NotInvertible(mpz_class gcd)
      : Error("NotInvertible", "element is not invertible (gcd = " + gcd.get_str() + ")"),
        gcd_(std::move(gcd)) {}
  const mpz_class& gcd() const noexcept { return gcd_; }

 private:
  mpz_class gcd_;
};

/// A group operation hit a denominator sharing a factor with the modulus.
class ImpossibleOperation : public Error {
 public:
  explicit ImpossibleOperation(mpz_class factor)
      : Error("ImpossibleOperation",
              "impossible group operation (gcd with modulus = " + factor.get_str() + ")"),
        factor_(std::move(factor)) {}
  const mpz_class& factor() const noexcept { return factor_; }

 private:
  mpz_class factor_;
};

#define PELLRSA_SIMPLE_ERROR(Type)                                  \
  class Type : public Error {                                       \
   public:                                                          \
    explicit Type(const std::string& what) : Error(#Type, what) {}  \
  };

PELLRSA_SIMPLE_ERROR(NonCoprimeModuli)
PELLRSA_SIMPLE_ERROR(RandomnessExhausted)
PELLRSA_SIMPLE_ERROR(ModulusTooLarge)
PELLRSA_SIMPLE_ERROR(BadExponentChoice)
PELLRSA_SIMPLE_ERROR(MessageNotEncryptable)
PELLRSA_SIMPLE_ERROR(DecryptionFailure)
PELLRSA_SIMPLE_ERROR(TrialBudgetExhausted)
PELLRSA_SIMPLE_ERROR(ConfigInfeasible)
PELLRSA_SIMPLE_ERROR(ParseError)

#undef PELLRSA_SIMPLE_ERROR

}  // namespace pellrsa

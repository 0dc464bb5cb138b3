#pragma once

// Line-oriented text formats for keys and ciphertexts. Integers are
// lowercase hex except prime exponents, which are decimal.
//
//   pellrsa-pub v1        pellrsa-priv v1            pellrsa-ct v1
//   n=<hex>               mode=<strict|robust>       kind=<param|point>
//   e=<hex>               d=<hex>                    d_coef=<hex>
//                         factor=<p-hex>^<e-dec>     c=<hex> | cx=<hex>, cy=<hex>
//                         ...

#include <string>
#include <string_view>
#include <variant>

#include "pellrsa/scheme.hpp"

namespace pellrsa {

using AnyCiphertext = std::variant<Ciphertext, PointCiphertext>;

std::string format_public_key(const PublicKey& pk);
std::string format_private_key(const PrivateKey& sk);
std::string format_ciphertext(const AnyCiphertext& ct);

// All parsers throw ParseError on malformed input.
PublicKey parse_public_key(std::string_view text);
PrivateKey parse_private_key(std::string_view text);
AnyCiphertext parse_ciphertext(std::string_view text);

std::string_view mode_name(Mode mode);
/// "strict" or "robust"; throws ParseError otherwise.
Mode parse_mode(std::string_view name);

std::string to_hex(const Natural& v);
/// Lowercase hex digits only, non-empty; throws ParseError otherwise.
Natural parse_hex(std::string_view text);

}  // namespace pellrsa

#include "pellrsa/codec.hpp"

#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "pellrsa/errors.hpp"

namespace pellrsa {
namespace {

struct Field {
  std::string key;
  std::string value;
};

// Splits into header + key=value fields. Blank lines and a trailing newline
// are tolerated.
std::vector<Field> split_fields(std::string_view text, std::string_view header) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
  }
  if (lines.empty() || lines.front() != header)
    throw ParseError("expected header '" + std::string(header) + "'");

  std::vector<Field> fields;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto eq = lines[i].find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("malformed line: " + lines[i]);
    fields.push_back({lines[i].substr(0, eq), lines[i].substr(eq + 1)});
  }
  return fields;
}

class FieldSet {
 public:
  FieldSet(std::vector<Field> fields, std::initializer_list<std::string_view> allowed) {
    for (auto& f : fields) {
      bool known = false;
      for (auto a : allowed) known = known || f.key == a;
      if (!known) throw ParseError("unknown field '" + f.key + "'");
      values_[f.key].push_back(std::move(f.value));
    }
  }

  const std::string& one(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ParseError("missing field '" + key + "'");
    if (it->second.size() != 1) throw ParseError("repeated field '" + key + "'");
    return it->second.front();
  }

  std::vector<std::string> all(const std::string& key) const {
    auto it = values_.find(key);
    return it == values_.end() ? std::vector<std::string>{} : it->second;
  }

 private:
  std::map<std::string, std::vector<std::string>> values_;
};

}  // namespace

std::string to_hex(const Natural& v) { return v.get_str(16); }

Natural parse_hex(std::string_view text) {
  if (text.empty()) throw ParseError("empty hex value");
  for (char ch : text)
    if (!((ch >= '0' && ch <= '9') || (ch >= 'a' && ch <= 'f')))
      throw ParseError("invalid hex value '" + std::string(text) + "'");
  return Natural(std::string(text), 16);
}

std::string_view mode_name(Mode mode) { return mode == Mode::StrictPaper ? "strict" : "robust"; }

Mode parse_mode(std::string_view name) {
  if (name == "strict") return Mode::StrictPaper;
  if (name == "robust") return Mode::Robust;
  throw ParseError("unknown mode '" + std::string(name) + "'");
}

std::string format_public_key(const PublicKey& pk) {
  return "pellrsa-pub v1\nn=" + to_hex(pk.n) + "\ne=" + to_hex(pk.e) + "\n";
}

std::string format_private_key(const PrivateKey& sk) {
  std::string out = "pellrsa-priv v1\nmode=" + std::string(mode_name(sk.mode)) +
                    "\nd=" + to_hex(sk.d) + "\n";
  for (const auto& f : sk.factors.factors())
    out += "factor=" + to_hex(f.prime) + "^" + std::to_string(f.exponent) + "\n";
  return out;
}

std::string format_ciphertext(const AnyCiphertext& ct) {
  if (const auto* c = std::get_if<Ciphertext>(&ct))
    return "pellrsa-ct v1\nkind=param\nd_coef=" + to_hex(c->d_coef) + "\nc=" + to_hex(c->c) + "\n";
  const auto& p = std::get<PointCiphertext>(ct);
  return "pellrsa-ct v1\nkind=point\nd_coef=" + to_hex(p.d_coef) + "\ncx=" + to_hex(p.cx) +
         "\ncy=" + to_hex(p.cy) + "\n";
}

PublicKey parse_public_key(std::string_view text) {
  const FieldSet fs(split_fields(text, "pellrsa-pub v1"), {"n", "e"});
  return {parse_hex(fs.one("n")), parse_hex(fs.one("e"))};
}

PrivateKey parse_private_key(std::string_view text) {
  const FieldSet fs(split_fields(text, "pellrsa-priv v1"), {"mode", "d", "factor"});
  std::vector<PrimePower> factors;
  for (const auto& entry : fs.all("factor")) {
    const auto caret = entry.find('^');
    if (caret == std::string::npos) throw ParseError("factor needs the form <hex>^<dec>");
    unsigned long exponent = 0;
    const char* first = entry.data() + caret + 1;
    const char* last = entry.data() + entry.size();
    const auto [ptr, ec] = std::from_chars(first, last, exponent);
    if (ec != std::errc() || ptr != last || first == last || exponent == 0)
      throw ParseError("invalid factor exponent in '" + entry + "'");
    factors.push_back({parse_hex(std::string_view(entry).substr(0, caret)), exponent});
  }
  if (factors.empty()) throw ParseError("private key lists no factors");
  try {
    PrivateKey sk{FactoredModulus(std::move(factors)), parse_hex(fs.one("d")), parse_mode(fs.one("mode"))};
    for (const auto& f : sk.factors.factors())
      if (f.prime == 2) throw std::invalid_argument("even prime");
    return sk;
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid private key: ") + e.what());
  }
}

AnyCiphertext parse_ciphertext(std::string_view text) {
  const FieldSet fs(split_fields(text, "pellrsa-ct v1"), {"kind", "d_coef", "c", "cx", "cy"});
  const std::string& kind = fs.one("kind");
  if (kind == "param") {
    if (!fs.all("cx").empty() || !fs.all("cy").empty())
      throw ParseError("param ciphertext must not carry cx/cy");
    return Ciphertext{parse_hex(fs.one("c")), parse_hex(fs.one("d_coef"))};
  }
  if (kind == "point") {
    if (!fs.all("c").empty()) throw ParseError("point ciphertext must not carry c");
    return PointCiphertext{parse_hex(fs.one("cx")), parse_hex(fs.one("cy")), parse_hex(fs.one("d_coef"))};
  }
  throw ParseError("unknown ciphertext kind '" + kind + "'");
}

}  // namespace pellrsa

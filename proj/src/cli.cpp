#include "pellrsa/cli.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "pellrsa/bench.hpp"
#include "pellrsa/codec.hpp"
#include "pellrsa/cryptanalysis.hpp"
#include "pellrsa/errors.hpp"
#include "pellrsa/scheme.hpp"

namespace pellrsa::cli {
namespace {

// Raised for files that cannot be opened or written.
class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw FileError("cannot write " + path);
}

// Flag values: hex, case-insensitive, optional 0x prefix.
Natural flag_hex(std::string text, const std::string& flag) {
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) text.erase(0, 2);
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  try {
    return parse_hex(text);
  } catch (const ParseError&) {
    throw CLI::ValidationError(flag, "expected a hex integer");
  }
}

std::unique_ptr<RandomSource> make_rng(const std::optional<std::uint64_t>& seed) {
  if (seed) return std::make_unique<SeededRandom>(*seed);
  return std::make_unique<SystemRandom>();
}

const std::map<std::string, Mode> kModes = {{"strict", Mode::StrictPaper}, {"robust", Mode::Robust}};

struct KeygenArgs {
  unsigned bits = 0;
  unsigned primes = 0;
  std::vector<unsigned long> exponents;
  Mode mode = Mode::Robust;
  std::string pub_exp;
  std::optional<std::uint64_t> seed;
  std::string out;
};

struct EncryptArgs {
  std::string pub;
  std::string mx;
  std::string my;
  bool point = false;
  Mode mode = Mode::Robust;
  std::string out;
};

struct DecryptArgs {
  std::string key;
  std::string in;
};

struct FactorArgs {
  std::string n;
  std::string psi;
  std::size_t trials = 100;
  std::optional<std::uint64_t> seed;
};

struct BenchArgs {
  unsigned bits = 2048;
  unsigned primes = 2;
  std::vector<unsigned long> exponents;
  unsigned trials = 11;
  std::string format = "table";
  std::uint64_t seed = 1;
};

int run_keygen(const KeygenArgs& a, std::ostream& out) {
  std::vector<unsigned long> exponents = a.exponents;
  if (exponents.empty()) exponents.assign(a.primes, 1);
  if (exponents.size() != a.primes)
    throw CLI::ValidationError("--exponents", "needs one exponent per prime");
  const unsigned long weight = std::accumulate(exponents.begin(), exponents.end(), 0UL);
  KeygenOptions options;
  options.prime_count = a.primes;
  options.exponents = exponents;
  options.prime_bits = static_cast<unsigned>(a.bits / weight);
  options.mode = a.mode;
  if (!a.pub_exp.empty()) options.public_exponent = flag_hex(a.pub_exp, "--pub-exp");
  if (options.prime_bits < 8)
    throw CLI::ValidationError("--bits", "too small for the requested prime count");

  auto rng = make_rng(a.seed);
  const KeyPair keys = keygen(options, *rng);
  write_file(a.out + ".pub", format_public_key(keys.pub));
  write_file(a.out + ".key", format_private_key(keys.priv));
  out << "wrote " << a.out << ".pub and " << a.out << ".key (" << bit_length(keys.pub.n)
      << "-bit modulus)\n";
  return kOk;
}

int run_encrypt(const EncryptArgs& a, std::ostream& out) {
  const MessagePair msg{flag_hex(a.mx, "--mx"), flag_hex(a.my, "--my")};
  const PublicKey pk = parse_public_key(read_file(a.pub));
  const AnyCiphertext ct = a.point ? AnyCiphertext(encrypt_point(pk, msg, a.mode))
                                   : AnyCiphertext(encrypt(pk, msg, a.mode));
  const std::string text = format_ciphertext(ct);
  if (a.out.empty()) {
    out << text;
  } else {
    write_file(a.out, text);
  }
  return kOk;
}

int run_decrypt(const DecryptArgs& a, std::ostream& out) {
  const PrivateKey sk = parse_private_key(read_file(a.key));
  const AnyCiphertext ct = parse_ciphertext(read_file(a.in));
  const MessagePair msg = std::visit(
      [&](const auto& c) {
        if constexpr (std::is_same_v<std::decay_t<decltype(c)>, Ciphertext>) return decrypt(sk, c);
        else return decrypt_point(sk, c);
      },
      ct);
  out << "mx=" << to_hex(msg.mx) << " my=" << to_hex(msg.my) << '\n';
  return kOk;
}

int run_factor(const FactorArgs& a, std::ostream& out) {
  const Natural n = flag_hex(a.n, "--n");
  const Natural psi_n = flag_hex(a.psi, "--psi");
  if (n < 2) throw CLI::ValidationError("--n", "must be at least 2");
  if (psi_n < 1) throw CLI::ValidationError("--psi", "must be positive");
  auto rng = make_rng(a.seed);
  const auto factors = full_factorization(n, psi_n, *rng, a.trials);
  for (std::size_t i = 0; i < factors.size(); ++i)
    out << (i ? " * " : "") << to_hex(factors[i].prime) << '^' << factors[i].exponent;
  out << '\n';
  return kOk;
}

int run_bench(const BenchArgs& a, std::ostream& out) {
  BenchConfig cfg;
  cfg.modulus_bits = a.bits;
  cfg.r = a.primes;
  cfg.exponents = a.exponents;
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  const BenchResult result = run_benchmark(cfg);
  out << emit_report({result}, a.format == "csv" ? ReportFormat::Csv : ReportFormat::Table);
  return kOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-prime RSA-like cryptosystem over the Pell hyperbola", "pellrsa"};
  app.require_subcommand(1);

  KeygenArgs kg;
  auto* keygen_cmd = app.add_subcommand("keygen", "generate a key pair");
  keygen_cmd->add_option("--bits", kg.bits, "modulus size in bits")->required();
  keygen_cmd->add_option("--primes", kg.primes, "number of distinct primes")->required()
      ->check(CLI::Range(2u, 64u));
  keygen_cmd->add_option("--exponents", kg.exponents, "odd prime exponents, comma separated")
      ->delimiter(',');
  keygen_cmd->add_option("--mode", kg.mode, "strict|robust")
      ->transform(CLI::CheckedTransformer(kModes));
  keygen_cmd->add_option("--pub-exp", kg.pub_exp, "public exponent (hex)");
  keygen_cmd->add_option("--seed", kg.seed, "deterministic seed");
  keygen_cmd->add_option("--out", kg.out, "output prefix for .pub/.key")->required();

  EncryptArgs en;
  auto* encrypt_cmd = app.add_subcommand("encrypt", "encrypt a residue pair");
  encrypt_cmd->add_option("--pub", en.pub, "public key file")->required();
  encrypt_cmd->add_option("--mx", en.mx, "first message residue (hex)")->required();
  encrypt_cmd->add_option("--my", en.my, "second message residue (hex)")->required();
  encrypt_cmd->add_flag("--point", en.point, "uncompressed point ciphertext");
  encrypt_cmd->add_option("--mode", en.mode, "strict|robust")
      ->transform(CLI::CheckedTransformer(kModes));
  encrypt_cmd->add_option("--out", en.out, "ciphertext file (default stdout)");

  DecryptArgs de;
  auto* decrypt_cmd = app.add_subcommand("decrypt", "decrypt a ciphertext file");
  decrypt_cmd->add_option("--key", de.key, "private key file")->required();
  decrypt_cmd->add_option("--in", de.in, "ciphertext file")->required();

  FactorArgs fa;
  auto* factor_cmd = app.add_subcommand("factor", "factor N given Psi(N)");
  factor_cmd->add_option("--n", fa.n, "modulus (hex)")->required();
  factor_cmd->add_option("--psi", fa.psi, "Psi(N) (hex)")->required();
  factor_cmd->add_option("--trials", fa.trials, "trial budget");
  factor_cmd->add_option("--seed", fa.seed, "deterministic seed");

  BenchArgs be;
  auto* bench_cmd = app.add_subcommand("bench", "time decryption against CRT-RSA");
  bench_cmd->add_option("--bits", be.bits, "modulus size in bits");
  bench_cmd->add_option("--primes", be.primes, "number of primes");
  bench_cmd->add_option("--exponents", be.exponents, "odd prime exponents")->delimiter(',');
  bench_cmd->add_option("--trials", be.trials, "timed runs per path");
  bench_cmd->add_option("--format", be.format, "csv|table")->check(CLI::IsMember({"csv", "table"}));
  bench_cmd->add_option("--seed", be.seed, "deterministic seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (keygen_cmd->parsed()) return run_keygen(kg, out);
    if (encrypt_cmd->parsed()) return run_encrypt(en, out);
    if (decrypt_cmd->parsed()) return run_decrypt(de, out);
    if (factor_cmd->parsed()) return run_factor(fa, out);
    if (bench_cmd->parsed()) return run_bench(be, out);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const FileError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const ParseError& e) {
    err << e.name() << ": " << e.what() << '\n';
    return kIoError;
  } catch (const Error& e) {
    err << e.name() << ": " << e.what() << '\n';
    return kDomainError;
  }
  return kUsageError;
}

}  // namespace pellrsa::cli

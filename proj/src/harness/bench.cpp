#include "ledgerchat/harness/bench.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <ostream>
#include <random>

#include "ledgerchat/crypto/crypto.hpp"
#include "ledgerchat/crypto/primitives.hpp"

namespace ledgerchat::harness {

namespace {

using SteadyClock = std::chrono::steady_clock;

// Fixed associated data standing in for an envelope header.
constexpr std::string_view kBenchHeader = "bench|alice|bob|header";

template <typename F>
double TimeUs(F&& f) {
  const auto start = SteadyClock::now();
  f();
  const auto end = SteadyClock::now();
  const double us = std::chrono::duration<double, std::micro>(end - start).count();
  // Keep every reported time strictly positive even below clock resolution.
  return std::max(us, 1e-3);
}

double Median(std::vector<double> v) {
  if (v.empty()) return 0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid))) / 2;
  }
  return m;
}

// Fresh message keys from a fixed chain, so runs are repeatable.
class KeyStream {
 public:
  explicit KeyStream(std::uint64_t seed) {
    Key32 root{};
    for (std::size_t i = 0; i < 8; ++i) root[i] = static_cast<std::uint8_t>(seed >> (8 * i));
    chain_.key = crypto::Sha256(root);
  }
  crypto::MessageKey Next() {
    crypto::RatchetStep step = crypto::RatchetForward(chain_);
    chain_ = step.next;
    return step.message_key;
  }

 private:
  crypto::ChainKey chain_;
};

void CheckOptions(const BenchOptions& options) {
  if (options.lengths.empty()) throw Error(ErrorCode::kArgument, "no input lengths");
  if (options.repetitions < 1) throw Error(ErrorCode::kArgument, "repetitions must be >= 1");
}

void WriteFitMetadata(std::ostream& out, const std::vector<BenchRecord>& records,
                      double BenchRecord::*total) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : records) {
    xs.push_back(static_cast<double>(r.input_length));
    ys.push_back(r.*total);
  }
  LinearFit fit = FitLine(xs, ys);
  out << "# fit: total_us = slope * length + intercept\n"
      << "# slope=" << fit.slope << "\n"
      << "# intercept=" << fit.intercept << "\n"
      << "# r_squared=" << fit.r_squared << "\n";
}

}  // namespace

std::string GenerateInput(std::size_t length, std::uint64_t seed) {
  std::mt19937_64 gen(seed ^ (0x9e3779b97f4a7c15ULL * (length + 1)));
  std::uniform_int_distribution<int> printable(0x20, 0x7e);
  std::string out(length, ' ');
  for (auto& c : out) c = static_cast<char>(printable(gen));
  return out;
}

std::vector<std::size_t> LengthRange(std::size_t max_length, std::size_t step) {
  if (step == 0) throw Error(ErrorCode::kArgument, "step must be positive");
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n <= max_length; n += step) out.push_back(n);
  return out;
}

std::vector<BenchRecord> BenchEncrypt(const BenchOptions& options) {
  CheckOptions(options);
  KeyStream keys(options.seed);
  const ByteView ad = AsBytes(kBenchHeader);
  std::vector<BenchRecord> out;
  for (std::size_t length : options.lengths) {
    const std::string input = GenerateInput(length, options.seed);
    const ByteView plain = AsBytes(input);
    std::vector<double> enc, mac, total;
    for (int rep = 0; rep < options.repetitions; ++rep) {
      crypto::MessageKey mk = keys.Next();
      Bytes ct;
      enc.push_back(TimeUs([&] {
        ct = crypto::AesCbcEncryptBlocks(mk.cipher_key, mk.iv, crypto::Pkcs7Pad(plain));
      }));
      mac.push_back(TimeUs([&] { (void)crypto::HmacSha256(mk.mac_key, ad, ct); }));
      total.push_back(TimeUs([&] { (void)crypto::Seal(mk, plain, ad); }));
    }
    BenchRecord r;
    r.input_length = length;
    r.encrypt_us = Median(enc);
    r.mac_us = Median(mac);
    r.total_encrypt_us = Median(total);
    r.repetitions = options.repetitions;
    out.push_back(r);
  }
  return out;
}

DecryptRun BenchDecrypt(const BenchOptions& options) {
  CheckOptions(options);
  KeyStream keys(options.seed);
  const ByteView ad = AsBytes(kBenchHeader);
  DecryptRun run;
  for (std::size_t length : options.lengths) {
    const std::string input = GenerateInput(length, options.seed);
    const ByteView plain = AsBytes(input);
    std::vector<double> dec, verify, total;
    for (int rep = 0; rep < options.repetitions; ++rep) {
      crypto::MessageKey mk = keys.Next();
      const crypto::SealedPayload sealed = crypto::Seal(mk, plain, ad);
      bool mac_ok = false;
      verify.push_back(TimeUs([&] {
        mac_ok = crypto::ConstantTimeEqual(
            crypto::HmacSha256(mk.mac_key, ad, sealed.ciphertext), sealed.mac);
      }));
      Bytes pt;
      dec.push_back(TimeUs([&] {
        pt = crypto::AesCbcDecryptBlocks(mk.cipher_key, mk.iv, sealed.ciphertext);
        crypto::Pkcs7Unpad(pt);
      }));
      Bytes unsealed;
      total.push_back(TimeUs([&] { unsealed = crypto::Unseal(mk, sealed, ad); }));
      if (!mac_ok || pt != unsealed || AsString(unsealed) != input) {
        throw Error(ErrorCode::kCorruption, "benchmark round trip mismatch");
      }
    }
    BenchRecord r;
    r.input_length = length;
    r.decrypt_us = Median(dec);
    r.mac_verify_us = Median(verify);
    r.total_decrypt_us = Median(total);
    r.repetitions = options.repetitions;
    run.records.push_back(r);

    if (options.include_tampered) {
      crypto::MessageKey mk = keys.Next();
      crypto::SealedPayload sealed = crypto::Seal(mk, plain, ad);
      sealed.ciphertext[sealed.ciphertext.size() / 2] ^= 0x01;
      try {
        crypto::Unseal(mk, sealed, ad);
        ++run.accepted_forgeries;
      } catch (const Error& e) {
        run.failures.push_back({length, std::string(e.category())});
      }
    }
  }
  return run;
}

LinearFit FitLine(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw Error(ErrorCode::kArgument, "need at least two points of equal-length series");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0) throw Error(ErrorCode::kArgument, "all lengths are equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

void WriteEncryptCsv(std::ostream& out, const std::vector<BenchRecord>& records,
                     std::uint64_t seed) {
  out << std::setprecision(6);
  out << "# bench=encrypt cipher=AES-256-CBC mac=HMAC-SHA256 statistic=median\n"
      << "# seed=" << seed << " repetitions="
      << (records.empty() ? 0 : records.front().repetitions) << "\n";
  if (records.size() >= 2) WriteFitMetadata(out, records, &BenchRecord::total_encrypt_us);
  out << "length,encrypt_us,mac_us,total_us\n";
  for (const auto& r : records) {
    out << r.input_length << ',' << r.encrypt_us << ',' << r.mac_us << ','
        << r.total_encrypt_us << '\n';
  }
}

void WriteDecryptCsv(std::ostream& out, const DecryptRun& run, std::uint64_t seed) {
  out << std::setprecision(6);
  out << "# bench=decrypt cipher=AES-256-CBC mac=HMAC-SHA256 statistic=median\n"
      << "# seed=" << seed << " repetitions="
      << (run.records.empty() ? 0 : run.records.front().repetitions) << "\n";
  if (run.records.size() >= 2) {
    WriteFitMetadata(out, run.records, &BenchRecord::total_decrypt_us);
  }
  out << "# verification_failures=" << run.failures.size()
      << " accepted_forgeries=" << run.accepted_forgeries << "\n";
  out << "length,decrypt_us,mac_verify_us,total_us\n";
  for (const auto& r : run.records) {
    out << r.input_length << ',' << r.decrypt_us << ',' << r.mac_verify_us << ','
        << r.total_decrypt_us << '\n';
  }
  for (const auto& f : run.failures) {
    out << "# verification-failure,length=" << f.input_length
        << ",category=" << f.category << '\n';
  }
}

}  // namespace ledgerchat::harness

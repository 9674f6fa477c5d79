#pragma once

// Seal/unseal timing per input length. Times are medians over the
// repetitions, in microseconds.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ledgerchat::harness {

inline constexpr std::size_t kDefaultStep = 250;
inline constexpr std::size_t kDefaultMaxLength = 10000;
inline constexpr int kDefaultRepetitions = 100;
inline constexpr std::uint64_t kDefaultSeed = 0x5eed;

struct BenchRecord {
  std::size_t input_length = 0;
  double encrypt_us = 0;
  double mac_us = 0;
  double total_encrypt_us = 0;
  double decrypt_us = 0;
  double mac_verify_us = 0;
  double total_decrypt_us = 0;
  int repetitions = 0;
};

// A tampered payload that was (correctly) refused during a decrypt run.
struct VerificationFailure {
  std::size_t input_length = 0;
  std::string category;
};

struct BenchOptions {
  std::vector<std::size_t> lengths;
  int repetitions = kDefaultRepetitions;
  std::uint64_t seed = kDefaultSeed;
  // Decrypt runs only: also feed one tampered payload per length.
  bool include_tampered = false;
};

struct DecryptRun {
  std::vector<BenchRecord> records;
  std::vector<VerificationFailure> failures;
  // Tampered payloads that unsealed anyway. Always expected to be 0.
  std::size_t accepted_forgeries = 0;
};

// Printable ASCII of exactly `length` characters, a pure function of
// (length, seed).
std::string GenerateInput(std::size_t length, std::uint64_t seed = kDefaultSeed);

// 0, step, 2*step, ... up to and including max_length.
std::vector<std::size_t> LengthRange(std::size_t max_length, std::size_t step);

std::vector<BenchRecord> BenchEncrypt(const BenchOptions& options);
DecryptRun BenchDecrypt(const BenchOptions& options);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};

// Ordinary least squares of ys against xs. r_squared is 1 when ys is flat.
LinearFit FitLine(const std::vector<double>& xs, const std::vector<double>& ys);

// CSV with a leading block of '#' metadata lines, including the fit of the
// total column against length.
//   length,encrypt_us,mac_us,total_us
void WriteEncryptCsv(std::ostream& out, const std::vector<BenchRecord>& records,
                     std::uint64_t seed);
//   length,decrypt_us,mac_verify_us,total_us
// Verification failures appear as '# verification-failure' comment rows.
void WriteDecryptCsv(std::ostream& out, const DecryptRun& run, std::uint64_t seed);

}  // namespace ledgerchat::harness

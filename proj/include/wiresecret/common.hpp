#pragma once

// Shared error types, numeric conventions, and seed derivation used across
// the library. All information quantities are in bits (log base 2) and all
// Gaussian rate expressions carry the 1/2-per-real-dimension factor.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wiresecret {

// Input fails a structural or semantic contract (bad distribution, overlap
// between qualified and forbidden families, non-degraded channel, ...).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A numeric procedure exceeded its iteration or size budget.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Tolerance for checking that probability vectors and stochastic-matrix rows
// sum to one.
inline constexpr double kProbSumTol = 1e-12;

// Product alphabets larger than this are refused rather than enumerated.
inline constexpr std::size_t kMaxProductAlphabet = 10'000'000;

// Codebook tables larger than this many codewords are refused.
inline constexpr std::size_t kMaxCodebookEntries = 1'000'000;

// Joint message/output tables larger than this many entries are refused.
inline constexpr std::size_t kMaxJointTable = 10'000'000;

// splitmix64 step, used to derive independent per-trial seeds from a master
// seed without correlated low bits.
inline std::uint64_t mix_seed(std::uint64_t state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic stream seed for trial `index` under `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix_seed(master ^ mix_seed(index + 1));
}

}  // namespace wiresecret

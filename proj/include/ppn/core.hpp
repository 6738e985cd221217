#pragma once

// Prime-product neighborhood (PPN) encoding of DNA sequences.
//
// Each nucleotide is assigned one of the primes {2,3,5,7}. A neighborhood of
// radius l around a center position maps to the product of the assigned
// primes of its members, so the value factors uniquely back into the
// per-base frequencies. Centers are placed every t+1 positions starting at
// the first base; summing the products gives one scalar per prime
// assignment, and the 24 assignments give the 24-component PPN vector.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ppn/error.hpp"

namespace ppn {

enum class Nucleotide : std::uint8_t { A = 0, C = 1, G = 2, T = 3 };

inline constexpr std::size_t kAlphabetSize = 4;
inline constexpr std::size_t kPermutationCount = 24;
// 7^(2*10+1) is the largest prime power a window can produce; it fits in 63 bits.
inline constexpr int kMaxRadius = 10;
inline constexpr std::array<std::uint64_t, kAlphabetSize> kPrimes = {2, 3, 5, 7};

using GammaValue = std::uint64_t;
using EtaValue = unsigned __int128;

/// Case-insensitive; nullopt for anything outside ACGT.
std::optional<Nucleotide> nucleotide_from_char(char c) noexcept;
char to_char(Nucleotide n) noexcept;

enum class SanitizePolicy { Drop, Strict };

struct EncodedSequence {
  std::string id;
  std::vector<Nucleotide> codes;
  /// Non-whitespace characters removed by the Drop policy.
  std::size_t dropped = 0;

  std::size_t size() const noexcept { return codes.size(); }
};

/// Whitespace is skipped silently. Other non-ACGT characters are dropped and
/// counted (Drop) or rejected with InvalidCharacter (Strict). Throws
/// EmptySequence when no nucleotide survives.
EncodedSequence encode(std::string_view raw,
                       SanitizePolicy policy = SanitizePolicy::Drop,
                       std::string id = {});

std::string decode(const EncodedSequence& seq);

enum class Metric { Euclidean, Manhattan };

std::string_view to_string(Metric metric) noexcept;
std::optional<Metric> metric_from_string(std::string_view name) noexcept;

struct PpnParams {
  int radius = 4;  // l
  int stride = 1;  // t: bases skipped between consecutive centers
  Metric metric = Metric::Euclidean;
  /// Permit stride > radius, leaving bases uncovered between windows.
  bool allow_gaps = false;
};

/// Throws InvalidParams unless 1 <= radius <= kMaxRadius and
/// 1 <= stride <= radius (stride > radius passes only with allow_gaps).
void validate(const PpnParams& params);

/// True when params leave gaps between neighborhoods (stride > radius).
inline bool leaves_gaps(const PpnParams& params) noexcept {
  return params.stride > params.radius;
}

// Permutation table. Row j gives the prime assigned to A, C, G, T in that
// order. Rows are the permutations of (2,3,5,7) in lexicographic order, so
// row 0 is the identity assignment A=2, C=3, G=5, T=7.
using PrimeAssignment = std::array<std::uint64_t, kAlphabetSize>;

const std::array<PrimeAssignment, kPermutationCount>& permutation_table() noexcept;

/// Inverse lookup into permutation_table(); nullopt if not a permutation of P.
std::optional<std::size_t> permutation_index(const PrimeAssignment& row) noexcept;

struct WindowCounts {
  std::array<std::uint32_t, kAlphabetSize> f{};

  std::uint32_t total() const noexcept { return f[0] + f[1] + f[2] + f[3]; }
  std::uint32_t& operator[](Nucleotide n) noexcept {
    return f[static_cast<std::size_t>(n)];
  }
  std::uint32_t operator[](Nucleotide n) const noexcept {
    return f[static_cast<std::size_t>(n)];
  }

  friend auto operator<=>(const WindowCounts&, const WindowCounts&) = default;
};

/// Number of neighborhoods for a sequence of `length` bases: 1 + (N-1)/(t+1).
std::size_t window_count(std::size_t length, std::size_t stride) noexcept;

/// 1-based center of the k-th neighborhood (k counted from 0).
inline std::size_t window_center(std::size_t k, std::size_t stride) noexcept {
  return 1 + k * (stride + 1);
}

/// Counts over positions max(1, center-l) .. min(N, center+l), 1-based.
/// Throws OutOfRange if center is not in [1, N].
WindowCounts window_counts_at(const EncodedSequence& seq, std::size_t center,
                              int radius);

/// Prime powers p^e for the four primes and e = 0 .. max_exponent.
class PrimePowerTable {
 public:
  explicit PrimePowerTable(int max_exponent);

  int max_exponent() const noexcept { return max_exponent_; }
  GammaValue power(std::size_t prime_index, std::uint32_t exponent) const {
    return table_[prime_index * stride_ + exponent];
  }

  /// Gamma for permutation row `j`; counts must not exceed max_exponent.
  GammaValue gamma(const WindowCounts& counts, std::size_t j) const;

 private:
  int max_exponent_;
  std::size_t stride_;
  std::vector<GammaValue> table_;
};

/// Product of assigned prime powers for permutation j. Throws OutOfRange for
/// j >= 24 and Overflow if the product does not fit 64 bits.
GammaValue gamma(const WindowCounts& counts, std::size_t j);

/// Inverse of gamma: recovers the per-base frequencies. Throws NotSmoothOverP
/// if `value` is zero or has a prime factor outside {2,3,5,7}.
WindowCounts factor_gamma(GammaValue value, std::size_t j);

/// Gamma values at centers 1, t+2, 2t+3, ... for permutation j.
std::vector<GammaValue> representative_sequence(const EncodedSequence& seq,
                                                const PpnParams& params,
                                                std::size_t j);

/// Sum of the representative sequence for permutation j, exact in 128 bits.
EtaValue eta(const EncodedSequence& seq, const PpnParams& params, std::size_t j);

struct CountHistogram {
  /// Distinct count tuples with their multiplicities, sorted by tuple.
  std::vector<std::pair<WindowCounts, std::uint64_t>> entries;

  std::uint64_t total() const noexcept;
};

/// Groups the neighborhoods of `seq` by count tuple in one pass.
CountHistogram count_histogram(const EncodedSequence& seq, const PpnParams& params);

struct PpnVector {
  std::array<EtaValue, kPermutationCount> etas{};
  std::size_t source_length = 0;
  std::size_t window_count = 0;
  PpnParams params;
};

PpnVector ppn_vector(const EncodedSequence& seq, const PpnParams& params);

/// Metric distance between two vectors built with the same radius and
/// stride (ParamsMismatch otherwise). Component differences are exact; the
/// reduction over the 24 components runs in double precision in index order.
/// With `normalize`, each component is first divided by its window count.
double distance(const PpnVector& a, const PpnVector& b, Metric metric,
                bool normalize = false);

std::string to_decimal(EtaValue value);

}  // namespace ppn

#include "ppn/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace ppn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::InvalidCharacter: return "InvalidCharacter";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NotSmoothOverP: return "NotSmoothOverP";
    case ErrorCode::ParamsMismatch: return "ParamsMismatch";
    case ErrorCode::MalformedFasta: return "MalformedFasta";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::MalformedMatrix: return "MalformedMatrix";
    case ErrorCode::NonFiniteDistance: return "NonFiniteDistance";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateLeaf: return "DuplicateLeaf";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::LeafSetMismatch: return "LeafSetMismatch";
    case ErrorCode::TooFewLeaves: return "TooFewLeaves";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::optional<Nucleotide> nucleotide_from_char(char c) noexcept {
  switch (c) {
    case 'A': case 'a': return Nucleotide::A;
    case 'C': case 'c': return Nucleotide::C;
    case 'G': case 'g': return Nucleotide::G;
    case 'T': case 't': return Nucleotide::T;
    default: return std::nullopt;
  }
}

char to_char(Nucleotide n) noexcept {
  static constexpr char kChars[] = {'A', 'C', 'G', 'T'};
  return kChars[static_cast<std::size_t>(n)];
}

EncodedSequence encode(std::string_view raw, SanitizePolicy policy, std::string id) {
  EncodedSequence seq;
  seq.id = std::move(id);
  seq.codes.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (auto n = nucleotide_from_char(c)) {
      seq.codes.push_back(*n);
    } else if (policy == SanitizePolicy::Strict) {
      throw Error(ErrorCode::InvalidCharacter,
                  "invalid character '" + std::string(1, c) + "' at position " +
                      std::to_string(i) +
                      (seq.id.empty() ? std::string() : " in " + seq.id));
    } else {
      ++seq.dropped;
    }
  }
  if (seq.codes.empty()) {
    throw Error(ErrorCode::EmptySequence,
                seq.id.empty() ? std::string("sequence is empty")
                               : "sequence " + seq.id + " is empty");
  }
  return seq;
}

std::string decode(const EncodedSequence& seq) {
  std::string out;
  out.reserve(seq.size());
  for (auto n : seq.codes) out.push_back(to_char(n));
  return out;
}

std::string_view to_string(Metric metric) noexcept {
  return metric == Metric::Euclidean ? "euclidean" : "manhattan";
}

std::optional<Metric> metric_from_string(std::string_view name) noexcept {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "euclidean") return Metric::Euclidean;
  if (lower == "manhattan") return Metric::Manhattan;
  return std::nullopt;
}

void validate(const PpnParams& params) {
  if (params.radius < 1 || params.radius > kMaxRadius) {
    throw Error(ErrorCode::InvalidParams,
                "radius l must be in [1, " + std::to_string(kMaxRadius) +
                    "], got " + std::to_string(params.radius));
  }
  if (params.stride < 1) {
    throw Error(ErrorCode::InvalidParams,
                "stride t must be >= 1, got " + std::to_string(params.stride));
  }
  if (params.stride > params.radius && !params.allow_gaps) {
    throw Error(ErrorCode::InvalidParams,
                "stride t=" + std::to_string(params.stride) +
                    " exceeds radius l=" + std::to_string(params.radius) +
                    "; neighborhoods would not overlap (use allow_gaps to override)");
  }
}

const std::array<PrimeAssignment, kPermutationCount>& permutation_table() noexcept {
  static const auto table = [] {
    std::array<PrimeAssignment, kPermutationCount> rows{};
    PrimeAssignment row = kPrimes;
    std::size_t j = 0;
    do {
      rows[j++] = row;
    } while (std::next_permutation(row.begin(), row.end()));
    return rows;
  }();
  return table;
}

std::optional<std::size_t> permutation_index(const PrimeAssignment& row) noexcept {
  const auto& table = permutation_table();
  auto it = std::lower_bound(table.begin(), table.end(), row);
  if (it == table.end() || *it != row) return std::nullopt;
  return static_cast<std::size_t>(it - table.begin());
}

std::size_t window_count(std::size_t length, std::size_t stride) noexcept {
  return 1 + (length - 1) / (stride + 1);
}

WindowCounts window_counts_at(const EncodedSequence& seq, std::size_t center,
                              int radius) {
  const std::size_t n = seq.size();
  if (center < 1 || center > n) {
    throw Error(ErrorCode::OutOfRange, "center " + std::to_string(center) +
                                           " outside [1, " + std::to_string(n) + "]");
  }
  const auto l = static_cast<std::size_t>(radius);
  const std::size_t first = center > l ? center - l : 1;
  const std::size_t last = std::min(n, center + l);
  WindowCounts counts;
  for (std::size_t pos = first; pos <= last; ++pos) ++counts[seq.codes[pos - 1]];
  return counts;
}

namespace {

GammaValue checked_power(std::uint64_t prime, std::uint32_t exponent) {
  GammaValue result = 1;
  for (std::uint32_t e = 0; e < exponent; ++e) {
    if (__builtin_mul_overflow(result, prime, &result)) {
      throw Error(ErrorCode::Overflow, "prime power exceeds 64 bits");
    }
  }
  return result;
}

void check_permutation(std::size_t j) {
  if (j >= kPermutationCount) {
    throw Error(ErrorCode::OutOfRange,
                "permutation index " + std::to_string(j) + " outside [0, 23]");
  }
}

// Slides the neighborhood from center to center, adjusting counts only for
// the bases that leave or enter; total work is O(N) for any radius.
class WindowWalker {
 public:
  WindowWalker(const std::vector<Nucleotide>& codes, const PpnParams& params)
      : codes_(codes),
        radius_(static_cast<std::size_t>(params.radius)),
        step_(static_cast<std::size_t>(params.stride) + 1) {}

  template <typename Visit>
  void for_each(Visit&& visit) {
    const std::size_t n = codes_.size();
    const std::size_t windows = window_count(n, step_ - 1);
    WindowCounts counts;
    std::size_t lo = 0;
    std::size_t hi = 0;  // counts cover codes_[lo, hi)
    for (std::size_t k = 0; k < windows; ++k) {
      const std::size_t center = k * step_;  // 0-based
      const std::size_t begin = center > radius_ ? center - radius_ : 0;
      const std::size_t end = std::min(n, center + radius_ + 1);
      if (begin >= hi) {
        counts = WindowCounts{};
        lo = hi = begin;
      }
      for (; lo < begin; ++lo) --counts[codes_[lo]];
      for (; hi < end; ++hi) ++counts[codes_[hi]];
      visit(counts);
    }
  }

 private:
  const std::vector<Nucleotide>& codes_;
  std::size_t radius_;
  std::size_t step_;
};

// permutation_table() expressed as indices into kPrimes.
const std::array<std::array<std::uint8_t, kAlphabetSize>, kPermutationCount>&
prime_index_rows() {
  static const auto rows = [] {
    std::array<std::array<std::uint8_t, kAlphabetSize>, kPermutationCount> out{};
    const auto& table = permutation_table();
    for (std::size_t j = 0; j < kPermutationCount; ++j) {
      for (std::size_t b = 0; b < kAlphabetSize; ++b) {
        out[j][b] = static_cast<std::uint8_t>(
            std::find(kPrimes.begin(), kPrimes.end(), table[j][b]) - kPrimes.begin());
      }
    }
    return out;
  }();
  return rows;
}

void require_nonempty(const EncodedSequence& seq) {
  if (seq.codes.empty()) {
    throw Error(ErrorCode::EmptySequence, "sequence " + seq.id + " is empty");
  }
}

void add_checked(EtaValue& acc, EtaValue term) {
  if (__builtin_add_overflow(acc, term, &acc)) {
    throw Error(ErrorCode::Overflow, "eta accumulator exceeds 128 bits");
  }
}

}  // namespace

PrimePowerTable::PrimePowerTable(int max_exponent)
    : max_exponent_(max_exponent),
      stride_(static_cast<std::size_t>(max_exponent) + 1),
      table_(kAlphabetSize * stride_) {
  if (max_exponent < 0 || max_exponent > 2 * kMaxRadius + 1) {
    throw Error(ErrorCode::InvalidParams,
                "prime power table exponent out of range: " +
                    std::to_string(max_exponent));
  }
  for (std::size_t p = 0; p < kAlphabetSize; ++p) {
    GammaValue value = 1;
    for (std::size_t e = 0; e < stride_; ++e) {
      table_[p * stride_ + e] = value;
      value *= kPrimes[p];
    }
  }
}

GammaValue PrimePowerTable::gamma(const WindowCounts& counts, std::size_t j) const {
  const auto& row = prime_index_rows()[j];
  return power(row[0], counts.f[0]) * power(row[1], counts.f[1]) *
         power(row[2], counts.f[2]) * power(row[3], counts.f[3]);
}

GammaValue gamma(const WindowCounts& counts, std::size_t j) {
  check_permutation(j);
  const auto& row = permutation_table()[j];
  GammaValue result = 1;
  for (std::size_t b = 0; b < kAlphabetSize; ++b) {
    if (__builtin_mul_overflow(result, checked_power(row[b], counts.f[b]), &result)) {
      throw Error(ErrorCode::Overflow, "gamma exceeds 64 bits");
    }
  }
  return result;
}

WindowCounts factor_gamma(GammaValue value, std::size_t j) {
  check_permutation(j);
  if (value == 0) {
    throw Error(ErrorCode::NotSmoothOverP, "0 has no prime factorization");
  }
  const auto& row = permutation_table()[j];
  WindowCounts counts;
  GammaValue rest = value;
  for (std::size_t b = 0; b < kAlphabetSize; ++b) {
    while (rest % row[b] == 0) {
      rest /= row[b];
      ++counts.f[b];
    }
  }
  if (rest != 1) {
    throw Error(ErrorCode::NotSmoothOverP,
                std::to_string(value) + " has a prime factor outside {2,3,5,7}");
  }
  return counts;
}

std::vector<GammaValue> representative_sequence(const EncodedSequence& seq,
                                                const PpnParams& params,
                                                std::size_t j) {
  validate(params);
  check_permutation(j);
  require_nonempty(seq);
  const PrimePowerTable powers(2 * params.radius + 1);
  std::vector<GammaValue> out;
  out.reserve(window_count(seq.size(), static_cast<std::size_t>(params.stride)));
  WindowWalker(seq.codes, params).for_each([&](const WindowCounts& counts) {
    out.push_back(powers.gamma(counts, j));
  });
  return out;
}

EtaValue eta(const EncodedSequence& seq, const PpnParams& params, std::size_t j) {
  EtaValue sum = 0;
  for (GammaValue g : representative_sequence(seq, params, j)) add_checked(sum, g);
  return sum;
}

std::uint64_t CountHistogram::total() const noexcept {
  std::uint64_t sum = 0;
  for (const auto& [counts, multiplicity] : entries) sum += multiplicity;
  return sum;
}

CountHistogram count_histogram(const EncodedSequence& seq, const PpnParams& params) {
  validate(params);
  require_nonempty(seq);
  // Dense index over all tuples with entries <= 2l+1: at most 22^4 slots.
  const std::size_t base = 2 * static_cast<std::size_t>(params.radius) + 2;
  std::vector<std::uint64_t> slots(base * base * base * base, 0);
  WindowWalker(seq.codes, params).for_each([&](const WindowCounts& c) {
    ++slots[((c.f[0] * base + c.f[1]) * base + c.f[2]) * base + c.f[3]];
  });

  CountHistogram histogram;
  for (std::size_t index = 0; index < slots.size(); ++index) {
    if (slots[index] == 0) continue;
    WindowCounts counts;
    std::size_t rest = index;
    for (std::size_t b = kAlphabetSize; b-- > 0;) {
      counts.f[b] = static_cast<std::uint32_t>(rest % base);
      rest /= base;
    }
    histogram.entries.emplace_back(counts, slots[index]);
  }
  return histogram;
}

PpnVector ppn_vector(const EncodedSequence& seq, const PpnParams& params) {
  const CountHistogram histogram = count_histogram(seq, params);
  const PrimePowerTable powers(2 * params.radius + 1);

  PpnVector vec;
  vec.source_length = seq.size();
  vec.window_count = window_count(seq.size(), static_cast<std::size_t>(params.stride));
  vec.params = params;
  for (const auto& [counts, multiplicity] : histogram.entries) {
    for (std::size_t j = 0; j < kPermutationCount; ++j) {
      add_checked(vec.etas[j], static_cast<EtaValue>(multiplicity) * powers.gamma(counts, j));
    }
  }
  return vec;
}

double distance(const PpnVector& a, const PpnVector& b, Metric metric, bool normalize) {
  if (a.params.radius != b.params.radius || a.params.stride != b.params.stride) {
    throw Error(ErrorCode::ParamsMismatch,
                "vectors built with different (l, t): (" +
                    std::to_string(a.params.radius) + ", " +
                    std::to_string(a.params.stride) + ") vs (" +
                    std::to_string(b.params.radius) + ", " +
                    std::to_string(b.params.stride) + ")");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < kPermutationCount; ++j) {
    double diff;
    if (normalize) {
      diff = static_cast<double>(a.etas[j]) / static_cast<double>(a.window_count) -
             static_cast<double>(b.etas[j]) / static_cast<double>(b.window_count);
    } else {
      const EtaValue x = a.etas[j];
      const EtaValue y = b.etas[j];
      diff = static_cast<double>(x > y ? x - y : y - x);
    }
    sum += metric == Metric::Euclidean ? diff * diff : std::fabs(diff);
  }
  return metric == Metric::Euclidean ? std::sqrt(sum) : sum;
}

std::string to_decimal(EtaValue value) {
  if (value == 0) return "0";
  std::string digits;
  while (value != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

}  // namespace ppn

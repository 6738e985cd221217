#include <array>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "ppn/seqio.hpp"

using namespace ppn;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected exception");
  return ErrorCode::Io;
}

std::vector<EncodedSequence> parse(const std::string& text) {
  std::istringstream in(text);
  return read_fasta(in);
}

}  // namespace

TEST_CASE("read_fasta concatenates sequence lines") {
  const auto seqs = parse(">s1\nACTG\nCCTC\n>s2\nGATAA\n");
  REQUIRE(seqs.size() == 2);
  CHECK(seqs[0].id == "s1");
  CHECK(seqs[0].size() == 8);
  CHECK(seqs[1].id == "s2");
  CHECK(seqs[1].size() == 5);
}

TEST_CASE("read_fasta accepts CRLF and descriptions") {
  std::istringstream in(">s1 some description here\r\nAC\r\ngt\r\n");
  const auto records = read_fasta_records(in);
  REQUIRE(records.size() == 1);
  CHECK(records[0].id == "s1");
  CHECK(records[0].description == "some description here");
  CHECK(records[0].raw == "ACgt");
}

TEST_CASE("read_fasta errors") {
  CHECK(code_of([] { parse(">s1\n\n"); }) == ErrorCode::EmptySequence);
  CHECK(code_of([] { parse("ACGT\n>s1\nACGT\n"); }) == ErrorCode::MalformedFasta);
  CHECK(code_of([] { parse(">\nACGT\n"); }) == ErrorCode::MalformedFasta);
  CHECK(code_of([] { parse(""); }) == ErrorCode::MalformedFasta);
  CHECK(code_of([] { parse(">a\nAC\n>a\nGT\n"); }) == ErrorCode::DuplicateId);
  std::istringstream strict(">a\nACNT\n");
  CHECK(code_of([&] { read_fasta(strict, SanitizePolicy::Strict); }) == ErrorCode::InvalidCharacter);
}

TEST_CASE("worked example end to end through FASTA") {
  const auto seqs = parse(">worked example\nACTGCCTCGATAA\n");
  REQUIRE(seqs.size() == 1);
  CHECK(seqs[0].size() == 13);
  PpnParams p;
  p.radius = 1;
  p.stride = 1;
  CHECK(eta(seqs[0], p, 0) == 281);
}

TEST_CASE("sanitization totals") {
  const std::string raw = "ACGTN\nnn-*ACRY  \nT";
  const auto seqs = parse(">x\n" + raw + "\n");
  std::size_t non_space = 0;
  for (char c : raw) non_space += !std::isspace(static_cast<unsigned char>(c));
  CHECK(seqs[0].size() + seqs[0].dropped == non_space);
  CHECK(seqs[0].size() == 7);
}

TEST_CASE("write_fasta wraps at 60 columns and round trips") {
  const auto seqs = simulate({3, 131, 5});
  std::ostringstream out;
  write_fasta(out, seqs);
  std::istringstream lines(out.str());
  std::size_t longest = 0;
  for (std::string line; std::getline(lines, line);) longest = std::max(longest, line.size());
  CHECK(longest == 60);

  std::istringstream in(out.str());
  const auto back = read_fasta(in);
  REQUIRE(back.size() == seqs.size());
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    CHECK(back[i].id == seqs[i].id);
    CHECK(back[i].codes == seqs[i].codes);
  }
}

TEST_CASE("simulate is deterministic and shaped") {
  const auto a = simulate({2, 10, 1});
  const auto b = simulate({2, 10, 1});
  REQUIRE(a.size() == 2);
  CHECK(a[0].codes == b[0].codes);
  CHECK(a[1].codes == b[1].codes);
  CHECK(a[0].codes != simulate({2, 10, 2})[0].codes);
  CHECK(a[0].id == "sim1");

  const auto padded = simulate({12, 5, 1});
  CHECK(padded[0].id == "sim01");
  CHECK(padded[11].id == "sim12");

  const auto big = simulate({100, 50000, 42});
  CHECK(big.size() == 100);
  for (const auto& s : big) CHECK(s.size() == 50000);
}

TEST_CASE("simulate base frequencies") {
  const auto seqs = simulate({5, 100000, 7});
  for (const auto& s : seqs) {
    std::array<std::size_t, 4> freq{};
    for (auto n : s.codes) ++freq[static_cast<std::size_t>(n)];
    for (auto f : freq) {
      const double p = static_cast<double>(f) / 100000.0;
      CHECK(p >= 0.24);
      CHECK(p <= 0.26);
    }
  }
}

TEST_CASE("simulate bit layout matches the documented generator contract") {
  std::mt19937_64 engine(9);
  const std::uint64_t first = engine();
  const auto seqs = simulate({1, 4, 9});
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(static_cast<std::uint64_t>(seqs[0].codes[k]) == ((first >> (2 * k)) & 3u));
  }
}

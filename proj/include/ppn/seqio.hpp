#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ppn/core.hpp"

namespace ppn {

struct FastaRecord {
  std::string id;           // first whitespace-delimited header token
  std::string description;  // remainder of the header line
  std::string raw;          // sequence lines concatenated, line breaks removed
};

/// Parses FASTA text (LF or CRLF). Throws MalformedFasta for sequence data
/// before the first header, a header without an id, or input with no
/// records; DuplicateId for repeated ids.
std::vector<FastaRecord> read_fasta_records(std::istream& in);

/// read_fasta_records followed by encode() on every record, in file order.
std::vector<EncodedSequence> read_fasta(std::istream& in,
                                        SanitizePolicy policy = SanitizePolicy::Drop);

void write_fasta(std::ostream& out, const std::vector<EncodedSequence>& seqs,
                 std::size_t line_width = 60);

struct SimulationSpec {
  std::size_t species_count = 2;
  std::size_t length = 50000;
  std::uint64_t seed = 1;
};

/// I.i.d. uniform sequences from std::mt19937_64 seeded with spec.seed. Each
/// 64-bit draw supplies 32 bases, two bits at a time from the least
/// significant end (00=A, 01=C, 10=G, 11=T); sequences are filled in order
/// from one continuous stream and unused bits of a draw are discarded at the
/// end of each sequence. Ids are "sim" followed by the 1-based index,
/// zero-padded to the width of species_count.
std::vector<EncodedSequence> simulate(const SimulationSpec& spec);

}  // namespace ppn

#include "ppn/seqio.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <random>
#include <unordered_set>

namespace ppn {

namespace {

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

std::vector<FastaRecord> read_fasta_records(std::istream& in) {
  std::vector<FastaRecord> records;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (!line.empty() && line.front() == '>') {
      const std::string header = line.substr(1);
      const auto id_begin = header.find_first_not_of(" \t");
      if (id_begin == std::string::npos) {
        throw Error(ErrorCode::MalformedFasta,
                    "header without id at line " + std::to_string(line_no));
      }
      const auto id_end = header.find_first_of(" \t", id_begin);
      FastaRecord record;
      record.id = header.substr(id_begin, id_end - id_begin);
      if (id_end != std::string::npos) {
        const auto desc_begin = header.find_first_not_of(" \t", id_end);
        if (desc_begin != std::string::npos) record.description = header.substr(desc_begin);
      }
      if (!seen.insert(record.id).second) {
        throw Error(ErrorCode::DuplicateId, "duplicate sequence id '" + record.id +
                                                "' at line " + std::to_string(line_no));
      }
      records.push_back(std::move(record));
    } else if (records.empty()) {
      if (!is_blank(line)) {
        throw Error(ErrorCode::MalformedFasta,
                    "sequence data before first header at line " + std::to_string(line_no));
      }
    } else {
      records.back().raw += line;
    }
  }
  if (in.bad()) throw Error(ErrorCode::Io, "read error on FASTA input");
  if (records.empty()) throw Error(ErrorCode::MalformedFasta, "no FASTA records found");
  return records;
}

std::vector<EncodedSequence> read_fasta(std::istream& in, SanitizePolicy policy) {
  std::vector<EncodedSequence> out;
  for (auto& record : read_fasta_records(in)) {
    out.push_back(encode(record.raw, policy, std::move(record.id)));
  }
  return out;
}

void write_fasta(std::ostream& out, const std::vector<EncodedSequence>& seqs,
                 std::size_t line_width) {
  std::string line;
  for (const auto& seq : seqs) {
    out << '>' << seq.id << '\n';
    for (std::size_t pos = 0; pos < seq.size(); pos += line_width) {
      const std::size_t end = std::min(seq.size(), pos + line_width);
      line.clear();
      for (std::size_t i = pos; i < end; ++i) line.push_back(to_char(seq.codes[i]));
      out << line << '\n';
    }
  }
}

std::vector<EncodedSequence> simulate(const SimulationSpec& spec) {
  std::mt19937_64 engine(spec.seed);
  const std::size_t width = std::to_string(spec.species_count).size();
  std::vector<EncodedSequence> out;
  out.reserve(spec.species_count);
  for (std::size_t s = 0; s < spec.species_count; ++s) {
    EncodedSequence seq;
    std::string index = std::to_string(s + 1);
    seq.id = "sim" + std::string(width - index.size(), '0') + index;
    seq.codes.resize(spec.length);
    for (std::size_t i = 0; i < spec.length; i += 32) {
      std::uint64_t bits = engine();
      const std::size_t end = std::min(spec.length, i + 32);
      for (std::size_t k = i; k < end; ++k, bits >>= 2) {
        seq.codes[k] = static_cast<Nucleotide>(bits & 3u);
      }
    }
    out.push_back(std::move(seq));
  }
  return out;
}

}  // namespace ppn

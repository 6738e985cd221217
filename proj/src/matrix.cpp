#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "ppn/parallel.hpp"
#include "ppn/phylo.hpp"

namespace ppn {

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)), values_(labels_.size() * labels_.size(), 0.0) {
  if (labels_.size() < 2) {
    throw Error(ErrorCode::MalformedMatrix, "distance matrix needs at least 2 taxa");
  }
  std::unordered_set<std::string> seen;
  for (const auto& label : labels_) {
    if (!seen.insert(label).second) {
      throw Error(ErrorCode::DuplicateId, "duplicate taxon label '" + label + "'");
    }
  }
}

void DistanceMatrix::set(std::size_t i, std::size_t j, double value) {
  if (i >= size() || j >= size()) {
    throw Error(ErrorCode::OutOfRange, "matrix index out of range");
  }
  if (value < 0.0) {
    throw Error(ErrorCode::MalformedMatrix, "negative distance between " + labels_[i] +
                                                " and " + labels_[j]);
  }
  if (i == j) {
    if (value != 0.0) {
      throw Error(ErrorCode::MalformedMatrix, "nonzero diagonal for " + labels_[i]);
    }
    return;
  }
  values_[i * size() + j] = value;
  values_[j * size() + i] = value;
}

DistanceMatrix pairwise_matrix(const std::vector<PpnVector>& vectors,
                               const std::vector<std::string>& labels, Metric metric,
                               std::size_t threads, bool normalize) {
  if (vectors.size() != labels.size()) {
    throw Error(ErrorCode::OutOfRange, "vector and label counts differ");
  }
  DistanceMatrix matrix(labels);
  const std::size_t k = vectors.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(k * (k - 1) / 2);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
  }
  std::vector<double> values(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t p) {
    values[p] = distance(vectors[pairs[p].first], vectors[pairs[p].second], metric, normalize);
  });
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    matrix.set(pairs[p].first, pairs[p].second, values[p]);
  }
  return matrix;
}

DistanceMatrix pairwise_matrix(const std::vector<EncodedSequence>& seqs,
                               const PpnParams& params, std::size_t threads,
                               bool normalize) {
  validate(params);
  std::vector<std::string> labels;
  labels.reserve(seqs.size());
  for (const auto& seq : seqs) labels.push_back(seq.id);
  DistanceMatrix check(labels);  // rejects < 2 records and duplicate ids early

  std::vector<PpnVector> vectors(seqs.size());
  parallel_for(seqs.size(), threads, [&](std::size_t i) {
    try {
      vectors[i] = ppn_vector(seqs[i], params);
    } catch (const Error& e) {
      throw Error(e.code(), "record '" + seqs[i].id + "': " + e.what());
    }
  });
  return pairwise_matrix(vectors, labels, params.metric, threads, normalize);
}

namespace {

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

double parse_double(const std::string& token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::MalformedMatrix, "invalid distance value '" + token + "'");
  }
  return value;
}

}  // namespace

void write_phylip(std::ostream& out, const DistanceMatrix& matrix) {
  out << matrix.size() << '\n';
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out << matrix.labels()[i];
    for (std::size_t j = 0; j < matrix.size(); ++j) out << ' ' << format_double(matrix(i, j));
    out << '\n';
  }
}

DistanceMatrix read_phylip(std::istream& in) {
  std::string line;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    std::istringstream header(line);
    std::string token;
    if (!(header >> token)) continue;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), count);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw Error(ErrorCode::MalformedMatrix, "expected taxon count, got '" + token + "'");
    }
    break;
  }
  if (count < 2) throw Error(ErrorCode::MalformedMatrix, "matrix needs at least 2 taxa");

  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  while (rows.size() < count && std::getline(in, line)) {
    std::istringstream row_in(line);
    std::string label;
    if (!(row_in >> label)) continue;
    std::vector<double> row;
    for (std::string token; row_in >> token;) row.push_back(parse_double(token));
    const std::size_t i = rows.size();
    if (row.size() != count && row.size() != i && row.size() != i + 1) {
      throw Error(ErrorCode::MalformedMatrix,
                  "row for '" + label + "' has " + std::to_string(row.size()) + " values");
    }
    labels.push_back(std::move(label));
    rows.push_back(std::move(row));
  }
  if (rows.size() != count) {
    throw Error(ErrorCode::MalformedMatrix, "expected " + std::to_string(count) +
                                                " rows, found " + std::to_string(rows.size()));
  }

  DistanceMatrix matrix(labels);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double lower = rows[i][j];
      if (rows[j].size() == count && rows[j][i] != lower &&
          !(std::isnan(lower) && std::isnan(rows[j][i]))) {
        throw Error(ErrorCode::MalformedMatrix,
                    "matrix not symmetric at " + labels[i] + ", " + labels[j]);
      }
      matrix.set(i, j, lower);
    }
    if (rows[i].size() > i && rows[i][i] != 0.0) {
      throw Error(ErrorCode::MalformedMatrix, "nonzero diagonal for " + labels[i]);
    }
  }
  return matrix;
}

}  // namespace ppn

#include "cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ppn/core.hpp"
#include "ppn/parallel.hpp"
#include "ppn/phylo.hpp"
#include "ppn/seqio.hpp"
#include "resource.hpp"

namespace ppn::cli {

namespace {

struct RunConfig {
  std::string input = "-";
  std::vector<std::string> inputs;  // treedist
  std::string output = "-";
  int radius = 4;
  int stride = 1;
  std::string metric = "euclidean";
  std::string policy = "drop";
  std::size_t threads = 0;
  bool allow_gaps = false;
  bool normalize = false;
  std::uint64_t seed = 1;
  std::vector<std::size_t> species{10};
  std::vector<std::size_t> lengths{50000};
  std::size_t reps = 10;
};

PpnParams make_params(const RunConfig& config, std::ostream& err) {
  PpnParams params;
  params.radius = config.radius;
  params.stride = config.stride;
  params.allow_gaps = config.allow_gaps;
  const auto metric = metric_from_string(config.metric);
  if (!metric) throw Error(ErrorCode::InvalidParams, "unknown metric '" + config.metric + "'");
  params.metric = *metric;
  validate(params);
  if (leaves_gaps(params)) {
    err << "warning: t=" << params.stride << " > l=" << params.radius
        << " leaves bases outside every neighborhood\n";
  }
  return params;
}

SanitizePolicy make_policy(const RunConfig& config) {
  if (config.policy == "drop") return SanitizePolicy::Drop;
  if (config.policy == "strict") return SanitizePolicy::Strict;
  throw Error(ErrorCode::InvalidParams, "unknown policy '" + config.policy + "'");
}

std::string read_text(const std::string& path) {
  std::ostringstream buffer;
  if (path == "-") {
    buffer << std::cin.rdbuf();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    buffer << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::Io, "read error on '" + path + "'");
  }
  return buffer.str();
}

std::vector<EncodedSequence> load_fasta(const std::string& text, SanitizePolicy policy,
                                        std::ostream& err) {
  std::istringstream in(text);
  auto seqs = read_fasta(in, policy);
  for (const auto& seq : seqs) {
    if (seq.dropped > 0) {
      err << "note: " << seq.id << ": dropped " << seq.dropped << " non-ACGT characters\n";
    }
  }
  return seqs;
}

// Writes `content` to path, or to `out` for "-". Files are written to a
// sibling temp file first and renamed into place.
void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
    out.flush();
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path temp = target;
  temp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream file(temp, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorCode::Io, "cannot write '" + temp.string() + "'");
    file << content;
    file.flush();
    if (!file) {
      std::error_code ec;
      fs::remove(temp, ec);
      throw Error(ErrorCode::Io, "write failed for '" + temp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    fs::remove(temp, ec);
    throw Error(ErrorCode::Io, "cannot rename into '" + path + "'");
  }
}

std::string format_real(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

std::vector<PpnVector> compute_vectors(const std::vector<EncodedSequence>& seqs,
                                       const PpnParams& params, std::size_t threads) {
  std::vector<PpnVector> vectors(seqs.size());
  parallel_for(seqs.size(), threads, [&](std::size_t i) {
    try {
      vectors[i] = ppn_vector(seqs[i], params);
    } catch (const Error& e) {
      throw Error(e.code(), "record '" + seqs[i].id + "': " + e.what());
    }
  });
  return vectors;
}

void cmd_vector(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const PpnParams params = make_params(config, err);
  const auto seqs = load_fasta(read_text(config.input), make_policy(config), err);
  const auto vectors = compute_vectors(seqs, params, config.threads);

  std::ostringstream table;
  table << "#id\tN\tn\tl\tt";
  for (std::size_t j = 0; j < kPermutationCount; ++j) table << "\teta" << j;
  table << '\n';
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    const PpnVector& v = vectors[i];
    table << seqs[i].id << '\t' << v.source_length << '\t' << v.window_count << '\t'
          << params.radius << '\t' << params.stride;
    for (EtaValue eta : v.etas) {
      table << '\t';
      if (config.normalize) {
        table << format_real(static_cast<double>(eta) / static_cast<double>(v.window_count));
      } else {
        table << to_decimal(eta);
      }
    }
    table << '\n';
  }
  emit(config.output, table.str(), out);
}

DistanceMatrix matrix_from_fasta(const RunConfig& config, const std::string& text,
                                 const PpnParams& params, std::ostream& err) {
  const auto seqs = load_fasta(text, make_policy(config), err);
  return pairwise_matrix(seqs, params, config.threads, config.normalize);
}

void cmd_matrix(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const PpnParams params = make_params(config, err);
  const auto matrix = matrix_from_fasta(config, read_text(config.input), params, err);
  std::ostringstream text;
  write_phylip(text, matrix);
  emit(config.output, text.str(), out);
}

void cmd_tree(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const std::string text = read_text(config.input);
  const auto first = text.find_first_not_of(" \t\r\n");
  std::optional<DistanceMatrix> matrix;
  if (first != std::string::npos && text[first] == '>') {
    matrix = matrix_from_fasta(config, text, make_params(config, err), err);
  } else {
    std::istringstream in(text);
    matrix = read_phylip(in);
  }
  emit(config.output, to_newick(upgma(*matrix)) + "\n", out);
}

void cmd_treedist(const RunConfig& config, std::ostream& out) {
  if (config.inputs.size() != 2) {
    throw Error(ErrorCode::InvalidParams, "treedist needs exactly two tree files");
  }
  const auto a = from_newick(read_text(config.inputs[0]));
  const auto b = from_newick(read_text(config.inputs[1]));
  char buf[64];
  std::snprintf(buf, sizeof buf, "nRF\t%.4f\nnQD\t%.4f\n", nrf(a, b), nqd(a, b));
  emit(config.output, buf, out);
}

void cmd_simulate(const RunConfig& config, std::ostream& out) {
  if (config.species.size() != 1 || config.lengths.size() != 1) {
    throw Error(ErrorCode::InvalidParams, "simulate takes one --species and one --length");
  }
  SimulationSpec spec{config.species[0], config.lengths[0], config.seed};
  std::ostringstream text;
  write_fasta(text, simulate(spec));
  emit(config.output, text.str(), out);
}

struct BenchRow {
  std::size_t species;
  std::size_t length;
  double mean_seconds;
  double mean_vector_seconds;
  std::uint64_t peak_rss_kib;
};

void cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const PpnParams params = make_params(config, err);
  if (config.reps < 1) throw Error(ErrorCode::InvalidParams, "--reps must be >= 1");
  auto species = config.species;
  std::sort(species.begin(), species.end());
  using Clock = std::chrono::steady_clock;

  std::vector<BenchRow> rows;
  for (std::size_t count : species) {
    for (std::size_t length : config.lengths) {
      const auto seqs = simulate({count, length, config.seed});
      double total = 0.0;
      double vector_total = 0.0;
      std::uint64_t peak = 0;
      for (std::size_t rep = 0; rep < config.reps; ++rep) {
        reset_peak_rss();
        const auto start = Clock::now();
        const auto vectors = compute_vectors(seqs, params, config.threads);
        const auto mid = Clock::now();
        std::vector<std::string> labels;
        for (const auto& s : seqs) labels.push_back(s.id);
        const auto matrix =
            pairwise_matrix(vectors, labels, params.metric, config.threads, config.normalize);
        const auto stop = Clock::now();
        total += std::chrono::duration<double>(stop - start).count();
        vector_total += std::chrono::duration<double>(mid - start).count();
        peak = std::max(peak, peak_rss_kib());
      }
      const double reps = static_cast<double>(config.reps);
      rows.push_back({count, length, total / reps, vector_total / reps, peak});
    }
  }

  std::ostringstream tsv;
  tsv << "#species\tlength\treps\tmean_seconds\tmean_vector_seconds\tpeak_rss_kib\n";
  err << std::left << std::setw(9) << "species" << std::setw(11) << "length"
      << std::setw(14) << "mean (s)" << std::setw(14) << "vectors (s)" << "peak RSS (MiB)\n";
  for (const auto& row : rows) {
    tsv << row.species << '\t' << row.length << '\t' << config.reps << '\t'
        << format_real(row.mean_seconds) << '\t' << format_real(row.mean_vector_seconds) << '\t'
        << row.peak_rss_kib << '\n';
    err << std::left << std::setw(9) << row.species << std::setw(11) << row.length
        << std::setw(14) << std::setprecision(6) << row.mean_seconds << std::setw(14)
        << row.mean_vector_seconds << std::fixed << std::setprecision(1)
        << static_cast<double>(row.peak_rss_kib) / 1024.0 << '\n'
        << std::defaultfloat;
  }
  emit(config.output, tsv.str(), out);
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io:
      return kIoError;
    case ErrorCode::InvalidParams:
    case ErrorCode::ParamsMismatch:
    case ErrorCode::LeafSetMismatch:
    case ErrorCode::TooFewLeaves:
    case ErrorCode::OutOfRange:
      return kValidationError;
    default:
      return kInputError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Alignment-free DNA comparison with prime-product neighborhood vectors", "ppn"};
  app.require_subcommand(1);

  auto add_params = [&](CLI::App* cmd) {
    cmd->add_option("--l", config.radius, "Neighborhood radius l")->capture_default_str();
    cmd->add_option("--t", config.stride, "Bases between neighborhood centers t")
        ->capture_default_str();
    cmd->add_option("--metric", config.metric, "euclidean or manhattan")
        ->check(CLI::IsMember({"euclidean", "manhattan"}, CLI::ignore_case))
        ->capture_default_str();
    cmd->add_option("--policy", config.policy, "Non-ACGT handling: drop or strict")
        ->check(CLI::IsMember({"drop", "strict"}))
        ->capture_default_str();
    cmd->add_option("--threads", config.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    cmd->add_flag("--allow-gaps", config.allow_gaps, "Permit t > l");
    cmd->add_flag("--normalize", config.normalize, "Divide each component by the window count");
  };
  auto add_io = [&](CLI::App* cmd) {
    cmd->add_option("-i,--input", config.input, "Input file ('-' for stdin)")
        ->capture_default_str();
    cmd->add_option("-o,--output", config.output, "Output file ('-' for stdout)")
        ->capture_default_str();
  };

  auto* vector = app.add_subcommand("vector", "Write the 24-component PPN vector of each record");
  add_io(vector);
  add_params(vector);
  auto* matrix = app.add_subcommand("matrix", "Write the pairwise distance matrix (PHYLIP)");
  add_io(matrix);
  add_params(matrix);
  auto* tree = app.add_subcommand("tree", "Build a UPGMA tree from FASTA or a PHYLIP matrix");
  add_io(tree);
  add_params(tree);

  auto* treedist = app.add_subcommand("treedist", "Compare two Newick trees (nRF, nQD)");
  treedist->add_option("trees,-i,--input", config.inputs, "Two Newick files")->expected(1, 2);
  treedist->add_option("-o,--output", config.output, "Output file ('-' for stdout)");

  auto* simulate_cmd = app.add_subcommand("simulate", "Generate i.i.d. uniform random FASTA");
  simulate_cmd->add_option("--species", config.species, "Number of sequences")->expected(1);
  simulate_cmd->add_option("--length", config.lengths, "Bases per sequence")->expected(1);
  simulate_cmd->add_option("--seed", config.seed, "Generator seed")->capture_default_str();
  simulate_cmd->add_option("-o,--output", config.output, "Output file ('-' for stdout)");

  auto* bench = app.add_subcommand("bench", "Time the vector and matrix stages on simulated data");
  bench->add_option("--species", config.species, "Species counts")->delimiter(',');
  bench->add_option("--length", config.lengths, "Sequence lengths")->delimiter(',');
  bench->add_option("--reps", config.reps, "Repetitions per size")->capture_default_str();
  bench->add_option("--seed", config.seed, "Generator seed")->capture_default_str();
  bench->add_option("-o,--output", config.output, "TSV output ('-' for stdout)");
  add_params(bench);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  try {
    if (config.threads > 4096) throw Error(ErrorCode::InvalidParams, "--threads too large");
    if (*vector) {
      cmd_vector(config, out, err);
    } else if (*matrix) {
      cmd_matrix(config, out, err);
    } else if (*tree) {
      cmd_tree(config, out, err);
    } else if (*treedist) {
      cmd_treedist(config, out);
    } else if (*simulate_cmd) {
      cmd_simulate(config, out);
    } else if (*bench) {
      cmd_bench(config, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kIoError;
  }
  return kOk;
}

}  // namespace ppn::cli

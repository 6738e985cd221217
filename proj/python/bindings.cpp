#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>

#include "ppn/core.hpp"
#include "ppn/phylo.hpp"
#include "ppn/seqio.hpp"

namespace py = pybind11;

namespace {

py::int_ to_pyint(ppn::EtaValue value) {
  const std::string digits = ppn::to_decimal(value);
  return py::reinterpret_steal<py::int_>(PyLong_FromString(digits.c_str(), nullptr, 10));
}

ppn::PpnParams make_params(int l, int t, const std::string& metric, bool allow_gaps) {
  ppn::PpnParams params;
  params.radius = l;
  params.stride = t;
  params.allow_gaps = allow_gaps;
  const auto m = ppn::metric_from_string(metric);
  if (!m) throw ppn::Error(ppn::ErrorCode::InvalidParams, "unknown metric '" + metric + "'");
  params.metric = *m;
  return params;
}

ppn::SanitizePolicy policy_of(bool strict) {
  return strict ? ppn::SanitizePolicy::Strict : ppn::SanitizePolicy::Drop;
}

ppn::WindowCounts counts_of(const std::array<std::uint32_t, 4>& f) { return ppn::WindowCounts{f}; }

}  // namespace

PYBIND11_MODULE(_ppn, m) {
  m.doc() = "Prime-product neighborhood (PPN) vectors for alignment-free DNA comparison";

  py::register_exception<ppn::Error>(m, "PpnError", PyExc_ValueError);

  py::class_<ppn::EncodedSequence>(m, "EncodedSequence")
      .def_readonly("id", &ppn::EncodedSequence::id)
      .def_readonly("dropped", &ppn::EncodedSequence::dropped)
      .def("__len__", &ppn::EncodedSequence::size)
      .def("__str__", &ppn::decode)
      .def("__repr__", [](const ppn::EncodedSequence& s) {
        return "<EncodedSequence id='" + s.id + "' N=" + std::to_string(s.size()) + ">";
      });

  m.def("encode", [](const std::string& raw, bool strict, std::string id) {
        return ppn::encode(raw, policy_of(strict), std::move(id));
      },
        py::arg("raw"), py::arg("strict") = false, py::arg("id") = "");

  m.def("window_count", &ppn::window_count, py::arg("length"), py::arg("t"));

  m.def("gamma", [](const std::array<std::uint32_t, 4>& f, std::size_t j) {
        return ppn::gamma(counts_of(f), j);
      },
        py::arg("counts"), py::arg("j") = 0);
  m.def("factor_gamma", [](ppn::GammaValue value, std::size_t j) {
        return ppn::factor_gamma(value, j).f;
      },
        py::arg("value"), py::arg("j") = 0);
  m.def("permutation_table", &ppn::permutation_table);

  m.def("representative_sequence",
        [](const ppn::EncodedSequence& seq, int l, int t, std::size_t j, bool allow_gaps) {
          return ppn::representative_sequence(seq, make_params(l, t, "euclidean", allow_gaps), j);
        },
        py::arg("seq"), py::arg("l") = 4, py::arg("t") = 1, py::arg("j") = 0,
        py::arg("allow_gaps") = false);
  m.def("eta",
        [](const ppn::EncodedSequence& seq, int l, int t, std::size_t j, bool allow_gaps) {
          return to_pyint(ppn::eta(seq, make_params(l, t, "euclidean", allow_gaps), j));
        },
        py::arg("seq"), py::arg("l") = 4, py::arg("t") = 1, py::arg("j") = 0,
        py::arg("allow_gaps") = false);

  py::class_<ppn::PpnVector>(m, "PpnVector")
      .def_property_readonly("etas",
                             [](const ppn::PpnVector& v) {
                               py::list out;
                               for (auto e : v.etas) out.append(to_pyint(e));
                               return out;
                             })
      .def_readonly("length", &ppn::PpnVector::source_length)
      .def_readonly("window_count", &ppn::PpnVector::window_count)
      .def_property_readonly("l", [](const ppn::PpnVector& v) { return v.params.radius; })
      .def_property_readonly("t", [](const ppn::PpnVector& v) { return v.params.stride; });

  m.def("ppn_vector",
        [](const ppn::EncodedSequence& seq, int l, int t, bool allow_gaps) {
          return ppn::ppn_vector(seq, make_params(l, t, "euclidean", allow_gaps));
        },
        py::arg("seq"), py::arg("l") = 4, py::arg("t") = 1, py::arg("allow_gaps") = false);
  m.def("distance",
        [](const ppn::PpnVector& a, const ppn::PpnVector& b, const std::string& metric,
           bool normalize) {
          return ppn::distance(a, b, make_params(1, 1, metric, false).metric, normalize);
        },
        py::arg("a"), py::arg("b"), py::arg("metric") = "euclidean",
        py::arg("normalize") = false);

  m.def("read_fasta",
        [](const std::string& path, bool strict) {
          std::ifstream in(path);
          if (!in) throw ppn::Error(ppn::ErrorCode::Io, "cannot open '" + path + "'");
          return ppn::read_fasta(in, policy_of(strict));
        },
        py::arg("path"), py::arg("strict") = false);
  m.def("simulate",
        [](std::size_t species, std::size_t length, std::uint64_t seed) {
          return ppn::simulate({species, length, seed});
        },
        py::arg("species"), py::arg("length"), py::arg("seed") = 1);

  py::class_<ppn::DistanceMatrix>(m, "DistanceMatrix")
      .def_property_readonly("labels", &ppn::DistanceMatrix::labels)
      .def("__len__", &ppn::DistanceMatrix::size)
      .def("__getitem__",
           [](const ppn::DistanceMatrix& d, std::pair<std::size_t, std::size_t> ij) {
             if (ij.first >= d.size() || ij.second >= d.size()) throw py::index_error();
             return d(ij.first, ij.second);
           })
      .def("tolist", [](const ppn::DistanceMatrix& d) {
        std::vector<std::vector<double>> rows(d.size(), std::vector<double>(d.size()));
        for (std::size_t i = 0; i < d.size(); ++i)
          for (std::size_t j = 0; j < d.size(); ++j) rows[i][j] = d(i, j);
        return rows;
      });

  m.def("pairwise_matrix",
        [](const std::vector<ppn::EncodedSequence>& seqs, int l, int t, const std::string& metric,
           std::size_t threads, bool normalize) {
          py::gil_scoped_release release;
          return ppn::pairwise_matrix(seqs, make_params(l, t, metric, false), threads, normalize);
        },
        py::arg("seqs"), py::arg("l") = 4, py::arg("t") = 1, py::arg("metric") = "euclidean",
        py::arg("threads") = 0, py::arg("normalize") = false);

  m.def("upgma", [](const ppn::DistanceMatrix& d) { return ppn::to_newick(ppn::upgma(d)); },
        py::arg("matrix"), "UPGMA tree of the matrix as a Newick string.");
  m.def("nrf",
        [](const std::string& a, const std::string& b) {
          return ppn::nrf(ppn::from_newick(a), ppn::from_newick(b));
        },
        py::arg("newick_a"), py::arg("newick_b"));
  m.def("nqd",
        [](const std::string& a, const std::string& b) {
          return ppn::nqd(ppn::from_newick(a), ppn::from_newick(b));
        },
        py::arg("newick_a"), py::arg("newick_b"));
}

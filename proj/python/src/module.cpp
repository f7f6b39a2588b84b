#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "slicing/config.hpp"
#include "slicing/error.hpp"
#include "slicing/harness.hpp"
#include "slicing/prng.hpp"
#include "slicing/slice.hpp"
#include "slicing/workers.hpp"

namespace py = pybind11;
using namespace slicing;

namespace {

using Rows = std::vector<std::vector<Element>>;

Matrix to_matrix(const Rows& rows) {
  const auto height = static_cast<std::int64_t>(rows.size());
  const auto width = height == 0 ? 0 : static_cast<std::int64_t>(rows.front().size());
  Matrix m(height, width);
  for (std::int64_t i = 0; i < height; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<std::int64_t>(row.size()) != width) {
      throw Error(ErrorKind::DimensionMismatch, "ragged matrix rows");
    }
    for (std::int64_t j = 0; j < width; ++j) {
      m.at(i, j) = row[static_cast<std::size_t>(j)];
    }
  }
  return m;
}

Rows to_rows(const Matrix& m) {
  Rows rows(static_cast<std::size_t>(m.rows));
  for (std::int64_t i = 0; i < m.rows; ++i) {
    rows[static_cast<std::size_t>(i)].assign(m.values.begin() + i * m.columns,
                                             m.values.begin() + (i + 1) * m.columns);
  }
  return rows;
}

py::dict config_dict(const BenchConfig& c) {
  py::dict d;
  d["benchmark"] = std::string(to_string(c.benchmark));
  d["mode"] = std::string(to_string(c.mode));
  d["size"] = c.size;
  d["dims"] = py::make_tuple(c.dims.m, c.dims.k, c.dims.n);
  d["seed"] = c.seed;
  d["workers"] = c.worker_counts;
  d["runs"] = c.runs;
  d["warmup"] = c.warmup;
  d["cutoff"] = c.cutoff;
  d["out"] = c.out;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Data-race-free array slicing for parallel workers";

  // Owned by the module for the life of the interpreter.
  static const py::handle slice_error = py::exception<Error>(m, "SliceError", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) {
        std::rethrow_exception(p);
      }
    } catch (const Error& e) {
      py::object instance = slice_error(e.what());
      instance.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(slice_error.ptr(), instance.ptr());
    }
  });

  using PySlice = Slice<Element>;
  using PyView = View<Element>;

  py::class_<PySlice>(m, "Slice")
      .def_static("make", &PySlice::make, py::arg("n"))
      .def_static("from_list", [](const std::vector<Element>& values) { return to_slice(values); })
      .def("slice_head", &PySlice::slice_head, py::arg("n"))
      .def("slice_tail", &PySlice::slice_tail, py::arg("n"))
      .def("is_adjacent", &PySlice::is_adjacent)
      .def_static("merge", &PySlice::merge)
      .def("item", &PySlice::item, py::arg("index"))
      .def("put", &PySlice::put, py::arg("value"), py::arg("index"))
      .def("swap", &PySlice::swap, py::arg("i"), py::arg("j"))
      .def("freeze", &PySlice::freeze)
      .def("melt", &PySlice::melt)
      .def_property_readonly("lower", &PySlice::lower)
      .def_property_readonly("upper", &PySlice::upper)
      .def_property_readonly("base", &PySlice::base)
      .def_property_readonly("readers", &PySlice::readers)
      .def_property_readonly("is_modifiable", &PySlice::is_modifiable)
      .def_property_readonly("empty", &PySlice::empty)
      .def("__len__", [](const PySlice& s) { return std::max<std::int64_t>(s.count(), 0); })
      .def("to_list", [](const PySlice& s) { return to_vector(s); })
      .def("__repr__", [](const PySlice& s) {
        return "Slice[" + std::to_string(s.lower()) + ".." + std::to_string(s.upper()) + "]";
      });

  py::class_<PyView>(m, "View")
      .def(py::init<PySlice&>(), py::arg("original"))
      .def("item", &PyView::item, py::arg("index"))
      .def("free", &PyView::free)
      .def_property_readonly("is_freed", &PyView::is_freed)
      .def_property_readonly("lower", &PyView::lower)
      .def_property_readonly("upper", &PyView::upper)
      .def("is_view_of", &PyView::is_view_of)
      .def("__enter__", [](PyView& v) -> PyView& { return v; }, py::return_value_policy::reference)
      .def("__exit__", [](PyView& v, py::args) {
        if (!v.is_freed()) {
          v.free();
        }
      });

  py::class_<Prng>(m, "Prng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("next", &Prng::next)
      .def("below", &Prng::below, py::arg("bound"))
      .def_property_readonly("state", &Prng::state);

  m.def(
      "parallel_quicksort",
      [](const std::vector<Element>& values, int workers, std::int64_t cutoff) {
        if (workers < 1) {
          throw Error(ErrorKind::InvalidConfig, "at least one worker is required");
        }
        auto slice = to_slice(values);
        {
          py::gil_scoped_release release;
          parallel_quicksort(slice, {workers, cutoff});
        }
        return to_vector(slice);
      },
      py::arg("values"), py::arg("workers") = 1, py::arg("cutoff") = 0);

  m.def(
      "threaded_quicksort",
      [](std::vector<Element> values, int workers, std::int64_t cutoff) {
        if (workers < 1) {
          throw Error(ErrorKind::InvalidConfig, "at least one worker is required");
        }
        py::gil_scoped_release release;
        threaded_quicksort(values, {workers, cutoff});
        return values;
      },
      py::arg("values"), py::arg("workers") = 1, py::arg("cutoff") = 0);

  m.def(
      "serialized_quicksort",
      [](std::vector<Element> values, int workers) {
        if (workers < 1) {
          throw Error(ErrorKind::InvalidConfig, "at least one worker is required");
        }
        py::gil_scoped_release release;
        serialized_quicksort(values, workers);
        return values;
      },
      py::arg("values"), py::arg("workers") = 1);

  m.def("seq_sort_oracle", &seq_sort_oracle, py::arg("values"));

  m.def(
      "parallel_matmul",
      [](const Rows& left, const Rows& right, int workers) {
        auto l = to_slice2d(to_matrix(left));
        auto r = to_slice2d(to_matrix(right));
        Matrix product;
        {
          py::gil_scoped_release release;
          product = slicing::to_matrix(parallel_matmul(l, r, workers));
        }
        return to_rows(product);
      },
      py::arg("left"), py::arg("right"), py::arg("workers") = 1);

  m.def(
      "threaded_matmul",
      [](const Rows& left, const Rows& right, int workers) {
        const auto l = to_matrix(left);
        const auto r = to_matrix(right);
        py::gil_scoped_release release;
        return to_rows(threaded_matmul(l, r, workers));
      },
      py::arg("left"), py::arg("right"), py::arg("workers") = 1);

  m.def(
      "seq_matmul_oracle",
      [](const Rows& left, const Rows& right) { return to_rows(seq_matmul_oracle(to_matrix(left), to_matrix(right))); },
      py::arg("left"), py::arg("right"));

  m.def("band_sizes", &band_sizes, py::arg("rows"), py::arg("workers"));

  py::class_<RunRecord>(m, "RunRecord")
      .def_property_readonly("benchmark", [](const RunRecord& r) { return std::string(to_string(r.benchmark)); })
      .def_property_readonly("mode", [](const RunRecord& r) { return std::string(to_string(r.mode)); })
      .def_readonly("workers", &RunRecord::workers)
      .def_readonly("run", &RunRecord::run)
      .def_readonly("seconds", &RunRecord::seconds)
      .def("__repr__", [](const RunRecord& r) {
        return "RunRecord(" + std::string(to_string(r.benchmark)) + ", " + std::string(to_string(r.mode)) +
               ", workers=" + std::to_string(r.workers) + ", run=" + std::to_string(r.run) +
               ", seconds=" + std::to_string(r.seconds) + ")";
      });

  m.def(
      "parse_config", [](const std::vector<std::string>& args) { return config_dict(parse_config(args)); },
      py::arg("args"), "Parses `bench` flags (without the program name) into a dict.");

  m.def(
      "run_benchmark",
      [](const std::vector<std::string>& args) {
        const auto config = parse_config(args);
        py::gil_scoped_release release;
        return run_benchmark(config);
      },
      py::arg("args"), "Runs the benchmark described by `bench` flags and returns the timed runs.");

  m.def(
      "write_csv",
      [](const std::vector<RunRecord>& records, const std::string& path) { write_csv(records, path); },
      py::arg("records"), py::arg("path"));

  m.def(
      "read_csv",
      [](const std::string& path) {
        const auto contents = read_csv(path);
        py::list means;
        for (const auto& mean : contents.means) {
          means.append(py::make_tuple(std::string(to_string(mean.benchmark)), std::string(to_string(mean.mode)),
                                      mean.workers, mean.seconds));
        }
        return py::make_tuple(contents.runs, means);
      },
      py::arg("path"), "Returns (runs, means); means are (benchmark, mode, workers, seconds) tuples.");
}

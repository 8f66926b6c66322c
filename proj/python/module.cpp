#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rekit/io.hpp"
#include "rekit/selftest.hpp"

namespace py = pybind11;
using namespace rekit;

namespace {

py::object json_to_py(const io::ordered_json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null:
      return py::none();
    case nlohmann::json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case nlohmann::json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case nlohmann::json::value_t::number_float:
      return py::float_(j.get<double>());
    case nlohmann::json::value_t::string:
      return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list out;
      for (const auto& item : j) out.append(json_to_py(item));
      return out;
    }
    case nlohmann::json::value_t::object: {
      py::dict out;
      for (const auto& [key, item] : j.items()) out[py::str(key)] = json_to_py(item);
      return out;
    }
    default:
      return py::none();
  }
}

NextGenMatrix matrix_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> arr,
                                std::optional<std::vector<double>> weights) {
  const auto buf = arr.request();
  if (buf.ndim != 2 || buf.shape[0] != buf.shape[1])
    throw input_error("matrix must be a square 2d array");
  const int n = static_cast<int>(buf.shape[0]);
  const double* data = static_cast<const double*>(buf.ptr);
  return NextGenMatrix(n, std::vector<double>(data, data + static_cast<std::size_t>(n) * n),
                       std::move(weights));
}

py::array_t<double> entries_as_array(const NextGenMatrix& m) {
  const int n = m.size();
  py::array_t<double> out({n, n});
  std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
  return out;
}

Strategy strategy_from_any(const py::object& obj, int n) {
  auto vec = obj.cast<std::vector<double>>();
  if (static_cast<int>(vec.size()) != n)
    throw input_error("strategy length does not match the matrix dimension");
  return Strategy(std::move(vec));
}

ViolationMode mode_from_name(const std::string& name) {
  if (name == "convexity") return ViolationMode::convexity;
  if (name == "concavity") return ViolationMode::concavity;
  throw input_error("mode must be 'convexity' or 'concavity'");
}

}  // namespace

PYBIND11_MODULE(_rekit, m) {
  m.doc() = "Effective reproduction number toolkit: spectral radius of "
            "next-generation matrices under vaccination strategies, shape "
            "certification, atomic decomposition, kernel discretization and "
            "budget-constrained minimization.";

  py::register_exception<input_error>(m, "InputError", PyExc_ValueError);
  py::register_exception<numerical_error>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<NextGenMatrix>(m, "NextGenMatrix")
      .def(py::init(&matrix_from_array), py::arg("entries"), py::arg("weights") = py::none())
      .def_property_readonly("n", &NextGenMatrix::size)
      .def_property_readonly("entries", &entries_as_array)
      .def_property_readonly("weights",
                             [](const NextGenMatrix& m_) { return m_.weights(); })
      .def("transposed", &NextGenMatrix::transposed)
      .def("__repr__", [](const NextGenMatrix& m_) {
        std::ostringstream os;
        os << "NextGenMatrix(n=" << m_.size() << ")";
        return os.str();
      });

  py::class_<QuadratureGrid>(m, "QuadratureGrid")
      .def_static("midpoint", &QuadratureGrid::midpoint, py::arg("m"))
      .def_static("trapezoid", &QuadratureGrid::trapezoid, py::arg("m"))
      .def_property_readonly("nodes", [](const QuadratureGrid& g) { return g.nodes; })
      .def_property_readonly("weights", [](const QuadratureGrid& g) { return g.weights; })
      .def_property_readonly("size", &QuadratureGrid::size);

  m.def("spectrum",
        [](const NextGenMatrix& mat, double tol, std::optional<double> cluster_radius) {
          return json_to_py(io::to_json(spectrum(mat, tol, cluster_radius)));
        },
        py::arg("matrix"), py::arg("tol") = 1e-8, py::arg("cluster_radius") = py::none());

  m.def("spectral_radius",
        [](const NextGenMatrix& mat) { return spectral_radius(mat); }, py::arg("matrix"));

  m.def("inertia",
        [](const NextGenMatrix& mat, std::optional<double> zero_band) {
          return json_to_py(io::to_json(inertia(spectrum(mat), zero_band)));
        },
        py::arg("matrix"), py::arg("zero_band") = py::none());

  m.def("perron_pair",
        [](const NextGenMatrix& mat) { return json_to_py(io::to_json(perron_pair(mat))); },
        py::arg("matrix"));

  m.def("symmetrize",
        [](const NextGenMatrix& mat, double tol) {
          return json_to_py(io::to_json(symmetrize(mat, tol)));
        },
        py::arg("matrix"), py::arg("tol") = 1e-12);

  m.def("symmetric_form",
        [](const NextGenMatrix& mat, const std::vector<double>& d) {
          return entries_as_array(symmetric_form(mat, SymmetrizationCertificate{d, 0.0}));
        },
        py::arg("matrix"), py::arg("d"));

  m.def("re",
        [](const NextGenMatrix& mat, const py::object& eta) {
          return json_to_py(io::to_json(re(mat, strategy_from_any(eta, mat.size()))));
        },
        py::arg("matrix"), py::arg("eta"));

  m.def("check_elementary_properties",
        [](const NextGenMatrix& mat, int trials, std::uint64_t seed, double tol) {
          return json_to_py(io::to_json(check_elementary_properties(mat, trials, seed, tol)));
        },
        py::arg("matrix"), py::arg("trials") = 1000, py::arg("seed") = 0, py::arg("tol") = 1e-9);

  m.def("check_transform_invariance",
        [](const NextGenMatrix& mat, const std::vector<double>& h, const py::object& eta) {
          return json_to_py(
              io::to_json(check_transform_invariance(mat, h, strategy_from_any(eta, mat.size()))));
        },
        py::arg("matrix"), py::arg("h"), py::arg("eta"));

  m.def("atomic_decomposition",
        [](const NextGenMatrix& mat) {
          return json_to_py(io::to_json(atomic_decomposition(mat)));
        },
        py::arg("matrix"));

  m.def("re_via_atoms",
        [](const NextGenMatrix& mat, const py::object& eta) {
          const auto rv = re_via_atoms(mat, strategy_from_any(eta, mat.size()));
          py::dict out;
          out["value"] = rv.value;
          out["argmax_atom"] = rv.argmax_atom ? py::object(py::int_(*rv.argmax_atom))
                                              : py::object(py::none());
          return out;
        },
        py::arg("matrix"), py::arg("eta"));

  m.def("is_monatomic",
        [](const NextGenMatrix& mat) { return json_to_py(io::to_json(is_monatomic(mat))); },
        py::arg("matrix"));

  m.def("classify_shape",
        [](const NextGenMatrix& mat, int samples, std::uint64_t seed) {
          return json_to_py(io::to_json(classify_shape(mat, samples, seed)));
        },
        py::arg("matrix"), py::arg("samples") = 10000, py::arg("seed") = 0);

  m.def("find_shape_violation",
        [](const NextGenMatrix& mat, const std::string& mode, int samples, std::uint64_t seed) {
          const auto v = find_shape_violation(mat, mode_from_name(mode), samples, seed);
          return v ? json_to_py(io::to_json(*v)) : py::object(py::none());
        },
        py::arg("matrix"), py::arg("mode"), py::arg("samples") = 10000, py::arg("seed") = 0);

  m.def("second_derivative",
        [](const NextGenMatrix& mat, const std::vector<double>& d, const py::object& eta0,
           const py::object& eta1, double alpha, double fd_step, double eta_floor) {
          return json_to_py(io::to_json(
              second_derivative(mat, SymmetrizationCertificate{d, 0.0},
                                strategy_from_any(eta0, mat.size()),
                                strategy_from_any(eta1, mat.size()), alpha, fd_step, eta_floor)));
        },
        py::arg("matrix"), py::arg("d"), py::arg("eta0"), py::arg("eta1"), py::arg("alpha"),
        py::arg("fd_step") = 1e-4, py::arg("eta_floor") = 1e-6);

  m.def("discretize",
        [](const std::function<double(double, double)>& kernel, const QuadratureGrid& grid) {
          return discretize(KernelSpec{kernel, "python"}, grid);
        },
        py::arg("kernel"), py::arg("grid"));

  m.def("double_norm",
        [](const std::function<double(double, double)>& kernel, double p,
           const QuadratureGrid& grid) {
          return double_norm(KernelSpec{kernel, "python"}, p, grid);
        },
        py::arg("kernel"), py::arg("p"), py::arg("grid"));

  m.def("configuration_re",
        [](const std::function<double(double)>& f, const std::function<double(double)>& g,
           const QuadratureGrid& grid, const py::object& eta) {
          return configuration_re(ConfigurationKernel{f, g}, grid,
                                  strategy_from_any(eta, grid.size()));
        },
        py::arg("f"), py::arg("g"), py::arg("grid"), py::arg("eta"));

  m.def("kernel_symmetrizability_check",
        [](const std::function<double(double)>& f,
           const std::function<double(double, double)>& s,
           const std::function<double(double)>& g, const QuadratureGrid& grid, double tol) {
          return json_to_py(io::to_json(
              kernel_symmetrizability_check(FactorizedKernel{f, s, g}, grid, tol)));
        },
        py::arg("f"), py::arg("s"), py::arg("g"), py::arg("grid"), py::arg("tol") = 1e-8);

  m.def("re_gradient",
        [](const NextGenMatrix& mat, const py::object& eta) {
          return re_gradient(mat, strategy_from_any(eta, mat.size()));
        },
        py::arg("matrix"), py::arg("eta"));

  m.def("minimize_re",
        [](const NextGenMatrix& mat, double budget, std::optional<std::vector<double>> costs,
           int samples, int max_iter, std::uint64_t seed) {
          const BudgetProblem problem(mat, budget, std::move(costs));
          const auto verdict = classify_shape(mat, samples, seed);
          return json_to_py(io::to_json(minimize_re(problem, verdict, max_iter, seed)));
        },
        py::arg("matrix"), py::arg("budget"), py::arg("costs") = py::none(),
        py::arg("samples") = 2000, py::arg("max_iter") = 500, py::arg("seed") = 0);

  m.def("builtin_matrix", &io::builtin_matrix, py::arg("name"));

  m.def("selftest", [] {
    std::ostringstream os;
    const int failures = run_selftest(os);
    py::dict out;
    out["failures"] = failures;
    out["log"] = os.str();
    return out;
  });

  m.attr("__version__") = "0.1.0";
}

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <iostream>
#include <string>
#include <vector>

#include "subpois/bounds.hpp"
#include "subpois/cli.hpp"
#include "subpois/error.hpp"
#include "subpois/exact.hpp"
#include "subpois/kernels.hpp"
#include "subpois/sampler.hpp"
#include "subpois/serialize.hpp"
#include "subpois/specfun.hpp"

namespace py = pybind11;
using namespace subpois;

namespace {

kernels::Interval to_interval(const std::pair<double, double>& w) {
  return kernels::Interval(w.first, w.second);
}

py::object to_python(const io::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Counting statistics and sub-Poissonian bounds for determinantal point processes";
  m.attr("__version__") = io::version();

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  m.def("airy_ai", &specfun::airy_ai, py::arg("x"));
  m.def("airy_ai_prime", &specfun::airy_ai_prime, py::arg("x"));
  m.def("bessel_j", &specfun::bessel_j, py::arg("nu"), py::arg("x"));
  m.def(
      "gauss_legendre",
      [](int n, double a, double b) {
        const auto r = specfun::gauss_legendre<double>(n, a, b);
        return py::make_tuple(r.nodes, r.weights);
      },
      py::arg("n"), py::arg("a") = -1.0, py::arg("b") = 1.0);

  m.def(
      "kernel",
      [](const std::string& id, double x, double y) {
        return kernels::eval_scalar(kernels::KernelSpec::parse(id), x, y);
      },
      py::arg("kernel"), py::arg("x"), py::arg("y"));

  m.def(
      "spectrum",
      [](const std::string& id, std::pair<double, double> window, int order) {
        const auto s = exact::spectrum_for(kernels::KernelSpec::parse(id), to_interval(window), order);
        return s.eigenvalues;
      },
      py::arg("kernel"), py::arg("window"), py::arg("order") = 200);

  m.def(
      "count_pmf",
      [](const std::vector<double>& eigenvalues) {
        return exact::count_distribution(exact::spectrum_from_values(eigenvalues)).pmf;
      },
      py::arg("eigenvalues"));

  m.def(
      "exp_moment_sq",
      [](const std::string& id, std::pair<double, double> window, double lambda, int order) {
        return exact::exact_exp_moment_sq(kernels::KernelSpec::parse(id), to_interval(window), lambda,
                                          order)
            .value;
      },
      py::arg("kernel"), py::arg("window"), py::arg("lam"), py::arg("order") = 200);

  m.def(
      "tail_log_bound",
      [](const std::string& id, std::pair<double, double> window, int n) {
        return bounds::tail_log_bound(kernels::KernelSpec::parse(id), to_interval(window), n);
      },
      py::arg("kernel"), py::arg("window"), py::arg("n"));

  m.def(
      "bound_report",
      [](const std::string& id, std::pair<double, double> window, int n_max) {
        return to_python(
            io::to_json(bounds::bound_report(kernels::KernelSpec::parse(id), to_interval(window), n_max)));
      },
      py::arg("kernel"), py::arg("window"), py::arg("n_max") = 64);

  m.def(
      "pfaffian",
      [](const std::vector<std::vector<double>>& rows) {
        const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
        Eigen::MatrixXd a(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
          if (static_cast<Eigen::Index>(rows[i].size()) != n) throw DomainError("pfaffian: matrix must be square");
          for (Eigen::Index j = 0; j < n; ++j) a(i, j) = rows[i][j];
        }
        return exact::pfaffian(a);
      },
      py::arg("matrix"));

  m.def(
      "sample",
      [](const std::string& id, std::pair<double, double> window, int order, int count, std::uint64_t seed) {
        const auto batch =
            sampler::sample(kernels::KernelSpec::parse(id), to_interval(window), order, count, seed);
        return batch.configurations;
      },
      py::arg("kernel"), py::arg("window"), py::arg("order"), py::arg("count"), py::arg("seed"));

  m.def(
      "additive_functional",
      [](const std::vector<double>& config, const std::function<double(double, double)>& q) {
        return sampler::additive_functional(config, q);
      },
      py::arg("config"), py::arg("q"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        py::gil_scoped_release release;
        return cli::run(args, std::cout, std::cerr);
      },
      py::arg("args"));
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "resrisk/backtest.hpp"
#include "resrisk/chain_ladder.hpp"
#include "resrisk/fiducial.hpp"
#include "resrisk/scr.hpp"
#include "resrisk/triangle.hpp"
#include "resrisk/true_world.hpp"

namespace py = pybind11;
using namespace resrisk;

namespace {

// Python sees 0-based lists f[0] = f_1; the C++ side keeps index 0 unused.
std::vector<double> strip_pad(const std::vector<double>& v) {
  return {v.begin() + 1, v.end()};
}

std::vector<double> add_pad(const std::vector<double>& v) {
  std::vector<double> out(1, 0.0);
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "stochastic one-year reserve risk engine";

  py::class_<Triangle>(m, "Triangle")
      .def(py::init(&Triangle::from_rows), py::arg("rows"))
      .def_property_readonly("horizon", &Triangle::horizon)
      .def_property_readonly("years", &Triangle::years)
      .def("cell", &Triangle::cell, py::arg("i"), py::arg("k"))
      .def("rows", &Triangle::rows)
      .def("__repr__", [](const Triangle& t) {
        return "<Triangle n=" + std::to_string(t.horizon()) + ">";
      });

  m.def("load_triangle", &load_triangle, py::arg("path"));
  m.def("parse_triangle",
        static_cast<Triangle (*)(const std::string&)>(&parse_triangle),
        py::arg("text"));
  m.def("serialize_triangle", &serialize_triangle, py::arg("triangle"));

  py::class_<DevFactorEstimates>(m, "DevFactorEstimates")
      .def_property_readonly("gamma",
                             [](const DevFactorEstimates& e) {
                               return static_cast<int>(e.gamma);
                             })
      .def_property_readonly("fhat",
                             [](const DevFactorEstimates& e) {
                               return strip_pad(e.fhat);
                             })
      .def_property_readonly("sigma2hat", [](const DevFactorEstimates& e) {
        return strip_pad(e.sigma2hat);
      });

  m.def(
      "estimate",
      [](const Triangle& tri, int gamma) {
        return estimate(tri, gamma_from_int(gamma));
      },
      py::arg("triangle"), py::arg("gamma"));

  m.def(
      "reserve_t0",
      [](const Triangle& tri, int gamma) {
        const auto est = estimate(tri, gamma_from_int(gamma));
        const auto res = reserve_t0(tri, est);
        return py::make_tuple(res.by_year, res.total);
      },
      py::arg("triangle"), py::arg("gamma"),
      "per-year reserves (index = accident year) and their total");

  m.def(
      "reserve_t1",
      [](const Triangle& tri, const std::vector<double>& z, int gamma) {
        return reserve_t1(extend(tri, NextDiagonal{z}),
                          gamma_from_int(gamma));
      },
      py::arg("triangle"), py::arg("z"), py::arg("gamma"));

  m.def(
      "cdr_loss",
      [](const Triangle& tri, const std::vector<double>& z, int gamma) {
        const auto est = estimate(tri, gamma_from_int(gamma));
        return cdr_loss(tri, est, NextDiagonal{z});
      },
      py::arg("triangle"), py::arg("z"), py::arg("gamma"));

  py::class_<ScrResult>(m, "ScrResult")
      .def_property_readonly(
          "method", [](const ScrResult& r) { return method_name(r.method); })
      .def_readonly("alpha", &ScrResult::alpha)
      .def_readonly("scr", &ScrResult::scr)
      .def_readonly("scenarios", &ScrResult::scenarios)
      .def_readonly("seed", &ScrResult::seed)
      .def_readonly("reserve0", &ScrResult::reserve0);

  m.def(
      "compute_scr",
      [](const Triangle& tri, const std::string& method, int gamma,
         double alpha, long scenarios, std::uint64_t seed, int workers) {
        const Method mm = method_from_name(method);
        const Gamma g = gamma_from_int(gamma);
        py::gil_scoped_release release;
        return compute_scr(tri, mm, g, alpha, scenarios, seed, workers);
      },
      py::arg("triangle"), py::arg("method"), py::arg("gamma"),
      py::arg("alpha"), py::arg("scenarios"), py::arg("seed"),
      py::arg("workers") = 0);

  py::class_<TrueParams>(m, "TrueParams")
      .def(py::init([](double f0, double sigma0,
                       const std::vector<double>& f,
                       const std::vector<double>& sigma, int gamma) {
             TrueParams p;
             p.f0 = f0;
             p.sigma0 = sigma0;
             p.f = add_pad(f);
             p.sigma = add_pad(sigma);
             p.gamma = gamma_from_int(gamma);
             p.validate();
             return p;
           }),
           py::arg("f0"), py::arg("sigma0"), py::arg("f"), py::arg("sigma"),
           py::arg("gamma"))
      .def_readwrite("f0", &TrueParams::f0)
      .def_readwrite("sigma0", &TrueParams::sigma0)
      .def_property(
          "f", [](const TrueParams& p) { return strip_pad(p.f); },
          [](TrueParams& p, const std::vector<double>& v) { p.f = add_pad(v); })
      .def_property(
          "sigma", [](const TrueParams& p) { return strip_pad(p.sigma); },
          [](TrueParams& p, const std::vector<double>& v) {
            p.sigma = add_pad(v);
          })
      .def_property(
          "gamma",
          [](const TrueParams& p) { return static_cast<int>(p.gamma); },
          [](TrueParams& p, int g) { p.gamma = gamma_from_int(g); });

  py::class_<SimulatedTriangle>(m, "SimulatedTriangle")
      .def_readonly("tri", &SimulatedTriangle::tri)
      .def_readonly("factor_resets", &SimulatedTriangle::factor_resets)
      .def_readonly("start_redraws", &SimulatedTriangle::start_redraws);

  m.def(
      "simulate_triangle",
      [](const TrueParams& params, std::uint64_t seed) {
        RngStream rng(seed);
        return simulate_triangle(params, rng);
      },
      py::arg("params"), py::arg("seed"));

  py::class_<BacktestConfig>(m, "BacktestConfig")
      .def(py::init<>())
      .def_readwrite("true_params", &BacktestConfig::true_params)
      .def_property(
          "methods",
          [](const BacktestConfig& c) {
            std::vector<std::string> out;
            for (Method mm : c.methods) out.emplace_back(method_name(mm));
            return out;
          },
          [](BacktestConfig& c, const std::vector<std::string>& names) {
            c.methods.clear();
            for (const auto& name : names)
              c.methods.push_back(method_from_name(name));
          })
      .def_readwrite("alphas", &BacktestConfig::alphas)
      .def_readwrite("s", &BacktestConfig::s)
      .def_readwrite("t", &BacktestConfig::t)
      .def_readwrite("master_seed", &BacktestConfig::master_seed)
      .def_readwrite("workers", &BacktestConfig::workers);

  m.def("load_backtest_config", &load_backtest_config, py::arg("path"));

  py::class_<BacktestCell>(m, "BacktestCell")
      .def_property_readonly(
          "method", [](const BacktestCell& c) { return method_name(c.method); })
      .def_readonly("alpha", &BacktestCell::alpha)
      .def_readonly("successes", &BacktestCell::successes)
      .def_readonly("s", &BacktestCell::s)
      .def_readonly("probability", &BacktestCell::probability)
      .def_readonly("std_error", &BacktestCell::std_error);

  py::class_<BacktestReport>(m, "BacktestReport")
      .def_readonly("cells", &BacktestReport::cells)
      .def_readonly("triangle_resets", &BacktestReport::triangle_resets)
      .def_readonly("start_redraws", &BacktestReport::start_redraws)
      .def_readonly("diagonal_resets", &BacktestReport::diagonal_resets)
      .def_readonly("replicate_redraws", &BacktestReport::replicate_redraws)
      .def_readonly("wall_seconds", &BacktestReport::wall_seconds)
      .def_readonly("warnings", &BacktestReport::warnings)
      .def("to_table",
           [](const BacktestReport& r) { return format_report_table(r); })
      .def("to_csv",
           [](const BacktestReport& r) { return format_report_csv(r); });

  m.def(
      "run_backtest",
      [](const BacktestConfig& config) {
        py::gil_scoped_release release;
        return run_backtest(config);
      },
      py::arg("config"));

  m.def(
      "scr_fiducial",
      [](int n, double sigma2hat, double alpha, long scenarios,
         std::uint64_t seed) {
        RngStream rng(seed);
        return scr_fiducial(n, sigma2hat, alpha, scenarios, rng);
      },
      py::arg("n"), py::arg("sigma2hat"), py::arg("alpha"),
      py::arg("scenarios"), py::arg("seed"));

  m.def("scr_fiducial_analytic", &scr_fiducial_analytic, py::arg("n"),
        py::arg("sigma2hat"), py::arg("alpha"));

  py::class_<FiducialCoverageRow>(m, "FiducialCoverageRow")
      .def_readonly("alpha", &FiducialCoverageRow::alpha)
      .def_readonly("s", &FiducialCoverageRow::s)
      .def_property_readonly("coverage_fiducial",
                             &FiducialCoverageRow::coverage_fiducial)
      .def_property_readonly("coverage_theoretical",
                             &FiducialCoverageRow::coverage_theoretical)
      .def_property_readonly("coverage_plugin",
                             &FiducialCoverageRow::coverage_plugin);

  m.def(
      "fiducial_coverage",
      [](double sigma_true, int n, const std::vector<double>& alphas, long s,
         long t, std::uint64_t seed, int workers) {
        py::gil_scoped_release release;
        return coverage_experiment(sigma_true, n, alphas, s, t, seed, workers);
      },
      py::arg("sigma_true"), py::arg("n"), py::arg("alphas"), py::arg("s"),
      py::arg("t"), py::arg("seed"), py::arg("workers") = 0);

  m.def("density_a", &density_A, py::arg("x"), py::arg("n"));
  m.def("density_b", &density_B, py::arg("x"), py::arg("n"));
}

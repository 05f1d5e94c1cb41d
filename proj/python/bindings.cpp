#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "drsplit/errors.hpp"
#include "drsplit/gap.hpp"
#include "drsplit/precond.hpp"
#include "drsplit/problems.hpp"
#include "drsplit/solvers.hpp"

namespace py = pybind11;
using namespace drsplit;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

GridImage to_image(const Array& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-d array");
  const auto h = static_cast<std::size_t>(a.shape(0)), w = static_cast<std::size_t>(a.shape(1));
  return GridImage(w, h, Vec(a.data(), a.data() + w * h));
}

Array to_array(std::span<const double> v, std::size_t w, std::size_t h) {
  Array out({h, w});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict denoise(const Array& f, double alpha, const std::string& model, double lambda,
                 const std::string& algorithm, const std::string& precond, long max_iter, double tol,
                 std::optional<double> sigma0, std::optional<double> tau0, std::optional<double> gamma,
                 bool strict) {
  const GridImage img = to_image(f);
  const Model m = parse_model(model);
  const SaddleProblem pr = m == Model::tv ? build_rof(img, alpha) : build_huber(img, alpha, lambda);
  RunConfig rc;
  rc.algorithm = parse_algorithm(algorithm);
  rc.precond = parse_preconditioner_spec(precond);
  rc.max_iter = max_iter;
  rc.gap_tol_per_pixel = tol;
  rc.strict = strict;
  if (sigma0) rc.sigma0 = *sigma0;
  rc.tau0 = tau0;
  rc.gamma = gamma;
  RunResult r;
  {
    py::gil_scoped_release release;
    r = run(pr, rc);
  }
  py::list history;
  for (const auto& rec : r.history)
    history.append(py::make_tuple(rec.iter, rec.gap_per_pixel, rec.elapsed_ms));
  py::dict out;
  out["u"] = to_array(r.state.x, img.width(), img.height());
  out["iterations"] = r.iterations;
  out["converged"] = r.converged;
  out["elapsed_ms"] = r.elapsed_ms;
  out["gap_per_pixel"] = r.history.empty() ? std::nan("") : r.history.back().gap_per_pixel;
  out["history"] = history;
  out["sigma"] = r.params.sigma;
  out["tau"] = r.params.tau;
  out["gamma"] = r.params.gamma;
  return out;
}

}  // namespace

PYBIND11_MODULE(_drsplit, mod) {
  mod.doc() = "Douglas-Rachford splitting for TV and Huber denoising";

  py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);
  py::register_exception<ContractViolation>(mod, "ContractViolation", PyExc_ValueError);
  py::register_exception<DivergenceError>(mod, "DivergenceError", PyExc_ArithmeticError);

  mod.def("denoise", &denoise, py::arg("f"), py::arg("alpha"), py::arg("model") = "tv",
          py::arg("lam") = 0.05, py::arg("algorithm") = "adr", py::arg("precond") = "gs2",
          py::arg("max_iter") = 1000, py::arg("tol") = 0.0, py::arg("sigma0") = py::none(),
          py::arg("tau0") = py::none(), py::arg("gamma") = py::none(), py::arg("strict") = true,
          "Denoise a 2-d array; returns a dict with the primal iterate and run statistics.");

  mod.def(
      "rof_gap",
      [](const Array& u, const Array& p1, const Array& p2, const Array& f, double alpha) {
        const GridImage ui = to_image(u), fi = to_image(f), a = to_image(p1), b = to_image(p2);
        Vec pv(a.values().begin(), a.values().end());
        pv.insert(pv.end(), b.values().begin(), b.values().end());
        return rof_gap(ui, DualField(ui.width(), ui.height(), std::move(pv)), fi, alpha).gap;
      },
      py::arg("u"), py::arg("p1"), py::arg("p2"), py::arg("f"), py::arg("alpha"));

  mod.def("synthetic_scene", [](std::size_t w, std::size_t h) {
    return to_array(synthetic_scene(w, h).values(), w, h);
  });

  mod.def("add_gaussian_noise", [](const Array& f, double stddev, std::uint64_t seed) {
    const GridImage img = to_image(f);
    return to_array(add_gaussian_noise(img, stddev, seed).values(), img.width(), img.height());
  });
}

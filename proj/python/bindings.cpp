#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstring>

#include "imrec/error.hpp"
#include "imrec/io.hpp"
#include "imrec/parallel.hpp"
#include "imrec/phantom.hpp"
#include "imrec/pipelines.hpp"

namespace py = pybind11;
using namespace imrec;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Image to_image(const Array& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw DimensionError("expected a square 2-D array");
  const int side = static_cast<int>(a.shape(0));
  std::vector<double> v(a.data(), a.data() + a.size());
  return Image(side, std::move(v));
}

Array to_array(const Image& m) {
  Array out({m.side(), m.side()});
  std::copy(m.data(), m.data() + m.size(), out.mutable_data());
  return out;
}

StepPolicy policy(const std::string& name) {
  const StepKind kind = parse_step_kind(name);
  if (kind == StepKind::Fixed) throw ParameterError("policy must be sd, lsd or hlsd");
  return {kind, 0.0};
}

py::dict to_dict(const PipelineReport& r) {
  py::list stages;
  for (const StageLog& s : r.stages) {
    py::dict d;
    d["name"] = s.name;
    d["status"] = s.status;
    d["iterations"] = s.iterations();
    d["seconds"] = s.seconds;
    std::vector<double> tau, rel_err, misfit_col, objective_col;
    for (const IterationRecord& rec : s.records) {
      tau.push_back(rec.tau);
      rel_err.push_back(rec.rel_err);
      misfit_col.push_back(rec.misfit);
      objective_col.push_back(rec.objective);
    }
    d["tau"] = tau;
    d["rel_err"] = rel_err;
    d["misfit"] = misfit_col;
    d["objective"] = objective_col;
    d["output"] = to_array(s.output);
    stages.append(d);
  }
  py::dict out;
  out["output"] = to_array(r.output);
  out["stages"] = stages;
  out["beta"] = r.beta_used;
  out["iterations"] = r.total_iterations();
  return out;
}

}  // namespace

PYBIND11_MODULE(_imrec, mod) {
  mod.doc() = "Image denoising and deblurring by accelerated gradient descent";

  // Translators run newest first: base class goes in first.
  py::register_exception<Error>(mod, "Error", PyExc_RuntimeError);
  py::register_exception<ParameterError>(mod, "ParameterError", PyExc_ValueError);
  py::register_exception<DimensionError>(mod, "DimensionError", PyExc_ValueError);
  py::register_exception<IoError>(mod, "IoError", PyExc_OSError);

  mod.def("set_num_threads", &set_num_threads, py::arg("threads"));

  mod.def(
      "phantom", [](const std::string& name, int side, std::uint64_t seed) { return to_array(phantom::by_name(name, side, seed)); },
      py::arg("name") = "portrait", py::arg("side") = 256, py::arg("seed") = 0);
  mod.def(
      "add_noise", [](const Array& m, double eta, std::uint64_t seed) { return to_array(add_gaussian_noise(to_image(m), {eta, seed})); },
      py::arg("image"), py::arg("eta"), py::arg("seed") = 0);
  mod.def(
      "noise_sigma", [](const Array& m, double eta) { return noise_sigma(to_image(m), eta); }, py::arg("image"),
      py::arg("eta"));
  mod.def("psnr", [](const Array& m, const Array& ref) { return psnr(to_image(m), to_image(ref)); });
  mod.def("misfit", [](const Array& m, const Array& b) { return misfit(to_image(m), to_image(b)); });
  mod.def("adaptive_gamma", [](const Array& m) { return adaptive_gamma(to_image(m)); });

  mod.def(
      "psf", [](const std::string& spec, int max_size) {
        const PsfKernel k = psf_from_spec(spec, max_size);
        Array out({k.rows, k.cols});
        std::copy(k.taps.begin(), k.taps.end(), out.mutable_data());
        return out;
      },
      py::arg("spec"), py::arg("max_size") = 0);
  mod.def(
      "blur", [](const Array& m, const std::string& spec) {
        const Image img = to_image(m);
        return to_array(forward_map(img, embed(psf_from_spec(spec, img.side()), img.side())));
      },
      py::arg("image"), py::arg("psf"));

  mod.def(
      "denoise", [](const Array& b, const std::string& pol, double tol, int max_iters) {
        return to_dict(denoise_explicit(to_image(b), policy(pol), {tol, max_iters}));
      },
      py::arg("image"), py::arg("policy") = "lsd", py::arg("tol") = 1e-4, py::arg("max_iters") = 2000);
  mod.def(
      "denoise_hybrid", [](const Array& b, const std::string& pol, double pre_tol, int irls_iters) {
        HybridOptions o;
        o.policy = policy(pol);
        o.pre_tol = pre_tol;
        o.irls_iters = irls_iters;
        return to_dict(denoise_hybrid(to_image(b), o));
      },
      py::arg("image"), py::arg("policy") = "lsd", py::arg("pre_tol") = 1e-4, py::arg("irls_iters") = 3);
  mod.def(
      "estimate_beta", [](const Array& m_bar, const Array& b) { return estimate_beta(to_image(m_bar), to_image(b)); },
      py::arg("m_bar"), py::arg("b"));
  mod.def(
      "sharpen", [](const Array& m, int steps) { return to_dict(sharpen_tukey(to_image(m), steps)); }, py::arg("image"),
      py::arg("steps") = 10);
  mod.def(
      "deblur",
      [](const Array& b, const std::string& spec, double beta, const std::string& pol, double tol, int max_iters) {
        const Image img = to_image(b);
        return to_dict(deblur(img, psf_from_spec(spec, img.side()), beta, policy(pol), {tol, max_iters}));
      },
      py::arg("image"), py::arg("psf"), py::arg("beta"), py::arg("policy") = "lsd", py::arg("tol") = 1e-4,
      py::arg("max_iters") = 2000);
  mod.def(
      "restore",
      [](const Array& b, const std::string& spec, double beta, const std::string& pol, int sharpen_steps) {
        const Image img = to_image(b);
        SplitOptions o;
        o.policy = policy(pol);
        o.sharpen_steps = sharpen_steps;
        return to_dict(restore_split(img, psf_from_spec(spec, img.side()), beta, o));
      },
      py::arg("image"), py::arg("psf"), py::arg("beta"), py::arg("policy") = "lsd", py::arg("sharpen_steps") = 10);

  mod.def("read_image", [](const std::string& path) { return to_array(read_image(path)); });
  mod.def(
      "write_image", [](const Array& m, const std::string& path) { write_image(to_image(m), path); }, py::arg("image"),
      py::arg("path"));
}

#include "imrec/regularization.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>

#include "imrec/error.hpp"
#include "imrec/parallel.hpp"

namespace imrec {

namespace {

std::mutex g_warn_mutex;
WarningHandler g_warn_handler = [](const std::string& msg) {
  std::cerr << "imrec: warning: " << msg << '\n';
};

void check_gamma(const RegularizerSpec& spec) {
  if (!(spec.gamma > 0.0) || !std::isfinite(spec.gamma)) {
    throw ParameterError("regularizer threshold must be finite and > 0, got " +
                         std::to_string(spec.gamma));
  }
}

// -div(c * grad v), node-centered coefficient on each forward-difference flux.
Image weighted_laplacian(const Image& coeff, const Image& v) {
  GradientField flux = gradient(v);
  for (std::size_t k = 0; k < flux.gx.size(); ++k) {
    flux.gx[k] *= coeff[k];
    flux.gy[k] *= coeff[k];
  }
  Image out = divergence(flux);
  out *= -1.0;
  return out;
}

}  // namespace

RegularizerSpec RegularizerSpec::tukey_from_huber(double huber_gamma) {
  return {Penalty::Tukey, kTukeyScale * huber_gamma, GammaRule::Fixed};
}

RegularizerSpec RegularizerSpec::resolved(const Image& m) const {
  if (rule == GammaRule::Fixed) return *this;
  const double base = adaptive_gamma(m);
  return {kind, kind == Penalty::Tukey ? kTukeyScale * base : base, GammaRule::Fixed};
}

std::string to_string(Penalty p) { return p == Penalty::Huber ? "huber" : "tukey"; }

void set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(g_warn_mutex);
  g_warn_handler = std::move(handler);
}

void warn(const std::string& message) {
  std::lock_guard lock(g_warn_mutex);
  if (g_warn_handler) g_warn_handler(message);
}

double degenerate_gamma_floor(const Image& m) { return 1e-8 * std::max(1.0, max_abs(m)); }

double adaptive_gamma(const Image& m) {
  const double h = m.h();
  const Image mag = gradient_magnitude(m);
  double total = 0.0;
  for (double v : mag.values()) total += v;
  const double gamma = h * h * h * total;
  if (gamma > 0.0) return gamma;
  warn("adaptive gamma is zero on a flat image; using floor " +
       std::to_string(degenerate_gamma_floor(m)));
  return degenerate_gamma_floor(m);
}

double rho(const RegularizerSpec& spec, double sigma) {
  const double s = std::abs(sigma);
  const double gam = spec.gamma;
  if (spec.kind == Penalty::Huber) {
    return s >= gam ? s : s * s / (2.0 * gam) + gam / 2.0;
  }
  if (s >= gam) return 1.0 / 3.0;
  const double r2 = (s / gam) * (s / gam);
  return r2 - r2 * r2 + r2 * r2 * r2 / 3.0;
}

double phi(const RegularizerSpec& spec, double sigma) {
  return sigma * edge_stop_g(spec, sigma);
}

double edge_stop_g(const RegularizerSpec& spec, double sigma) {
  const double s = std::abs(sigma);
  const double gam = spec.gamma;
  if (spec.kind == Penalty::Huber) return 1.0 / std::max(gam, s);
  if (s >= gam) return 0.0;
  const double t = 1.0 - (s / gam) * (s / gam);
  return 2.0 / (gam * gam) * t * t;
}

double reg_value(const Image& m, const RegularizerSpec& spec_in) {
  const RegularizerSpec spec = spec_in.resolved(m);
  check_gamma(spec);
  const Image mag = gradient_magnitude(m);
  double total = 0.0;
  for (double s : mag.values()) total += rho(spec, s);
  return m.h() * m.h() * total;
}

Image reg_gradient(const Image& m, const RegularizerSpec& spec) {
  return DiffusionOperator(m, spec).apply(m);
}

DiffusionOperator::DiffusionOperator(const Image& m_frozen, const RegularizerSpec& spec_in)
    : coeff_(m_frozen.side()) {
  const RegularizerSpec spec = spec_in.resolved(m_frozen);
  check_gamma(spec);
  gamma_ = spec.gamma;
  const Image mag = gradient_magnitude(m_frozen);
  for (std::size_t k = 0; k < coeff_.size(); ++k) coeff_[k] = edge_stop_g(spec, mag[k]);
}

Image DiffusionOperator::apply(const Image& v) const {
  if (!v.same_lattice(coeff_)) throw DimensionError("DiffusionOperator::apply: lattice mismatch");
  return weighted_laplacian(coeff_, v);
}

Image DiffusionOperator::diagonal() const {
  const int s = coeff_.side();
  const double inv_h2 = 1.0 / (coeff_.h() * coeff_.h());
  Image d(s);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      double acc = 0.0;
      if (j + 1 < s) acc += coeff_(i, j);
      if (j > 0) acc += coeff_(i, j - 1);
      if (i + 1 < s) acc += coeff_(i, j);
      if (i > 0) acc += coeff_(i - 1, j);
      d(i, j) = acc * inv_h2;
    }
  }
  return d;
}

Image apply_L(const Image& m_frozen, const Image& v, const RegularizerSpec& spec) {
  if (spec.kind != Penalty::Huber) {
    throw ParameterError("apply_L: the lagged-diffusivity operator is defined for Huber only");
  }
  return DiffusionOperator(m_frozen, spec).apply(v);
}

}  // namespace imrec

#include "imrec/image.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "imrec/error.hpp"
#include "imrec/parallel.hpp"

namespace imrec {

namespace {

void require_same(const Image& a, const Image& b, const char* op) {
  if (!a.same_lattice(b)) {
    throw DimensionError(std::string(op) + ": lattice mismatch (" + std::to_string(a.side()) +
                         " vs " + std::to_string(b.side()) + ")");
  }
}

}  // namespace

Image::Image(int side, double fill) : side_(side) {
  if (side < 2) throw ParameterError("Image: side must be >= 2, got " + std::to_string(side));
  values_.assign(static_cast<std::size_t>(side) * static_cast<std::size_t>(side), fill);
}

Image::Image(int side, std::vector<double> values) : side_(side), values_(std::move(values)) {
  if (side < 2) throw ParameterError("Image: side must be >= 2, got " + std::to_string(side));
  if (values_.size() != static_cast<std::size_t>(side) * static_cast<std::size_t>(side)) {
    throw DimensionError("Image: expected " + std::to_string(side * side) + " values, got " +
                         std::to_string(values_.size()));
  }
}

Image& Image::operator+=(const Image& other) {
  require_same(*this, other, "operator+=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

Image& Image::operator-=(const Image& other) {
  require_same(*this, other, "operator-=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

Image& Image::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Image& Image::axpy(double alpha, const Image& x) {
  require_same(*this, x, "axpy");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += alpha * x.values_[k];
  return *this;
}

Image operator+(Image a, const Image& b) { return a += b; }
Image operator-(Image a, const Image& b) { return a -= b; }
Image operator*(double s, Image a) { return a *= s; }

GradientField gradient(const Image& m) {
  const int s = m.side();
  const double inv_h = 1.0 / m.h();
  GradientField g(s);
  detail::for_rows(s, [&](int i) {
    const std::size_t row = static_cast<std::size_t>(i) * static_cast<std::size_t>(s);
    for (int j = 0; j + 1 < s; ++j) g.gx[row + j] = (m(i, j + 1) - m(i, j)) * inv_h;
    if (i + 1 < s) {
      for (int j = 0; j < s; ++j) g.gy[row + j] = (m(i + 1, j) - m(i, j)) * inv_h;
    }
  });
  return g;
}

Image divergence(const GradientField& p) {
  const int s = p.side;
  const double inv_h = static_cast<double>(s - 1);
  Image out(s);
  detail::for_rows(s, [&](int i) {
    const std::size_t row = static_cast<std::size_t>(i) * static_cast<std::size_t>(s);
    const std::size_t up = row - static_cast<std::size_t>(s);
    for (int j = 0; j < s; ++j) {
      double d = 0.0;
      if (j + 1 < s) d += p.gx[row + j];
      if (j > 0) d -= p.gx[row + j - 1];
      if (i + 1 < s) d += p.gy[row + j];
      if (i > 0) d -= p.gy[up + j];
      out(i, j) = d * inv_h;
    }
  });
  return out;
}

Image gradient_magnitude(const Image& m) {
  const GradientField g = gradient(m);
  Image mag(m.side());
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::hypot(g.gx[k], g.gy[k]);
  return mag;
}

double dot(const Image& a, const Image& b) {
  require_same(a, b, "dot");
  const int s = a.side();
  return detail::sum_rows(s, [&](int i) {
    const std::size_t row = static_cast<std::size_t>(i) * static_cast<std::size_t>(s);
    double acc = 0.0;
    for (int j = 0; j < s; ++j) acc += a[row + j] * b[row + j];
    return acc;
  });
}

double dot(const GradientField& a, const GradientField& b) {
  if (a.side != b.side) throw DimensionError("dot: gradient field lattice mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.gx.size(); ++k) acc += a.gx[k] * b.gx[k] + a.gy[k] * b.gy[k];
  return acc;
}

double norm(const Image& a) { return std::sqrt(dot(a, a)); }

double max_abs(const Image& a) {
  double mx = 0.0;
  for (double v : a.values()) mx = std::max(mx, std::abs(v));
  return mx;
}

double mean(const Image& a) {
  double acc = 0.0;
  for (double v : a.values()) acc += v;
  return acc / static_cast<double>(a.size());
}

double relative_error(const Image& m_next, const Image& m_prev) {
  require_same(m_next, m_prev, "relative_error");
  const double denom = norm(m_next);
  if (denom == 0.0) throw ZeroDenominatorError("relative_error: ||m_next|| is zero");
  return norm(m_next - m_prev) / denom;
}

double misfit(const Image& m, const Image& b) {
  require_same(m, b, "misfit");
  return norm(m - b) / static_cast<double>(m.n());
}

double psnr(const Image& m, const Image& reference, double peak) {
  require_same(m, reference, "psnr");
  const Image d = m - reference;
  const double mse = dot(d, d) / static_cast<double>(d.size());
  return 10.0 * std::log10(peak * peak / mse);
}

double noise_sigma(const Image& m, double eta_percent) {
  return eta_percent / 100.0 * norm(m) / static_cast<double>(m.side());
}

Image add_gaussian_noise(const Image& m, const NoiseSpec& spec) {
  if (!std::isfinite(spec.eta_percent) || spec.eta_percent < 0.0) {
    throw ParameterError("add_gaussian_noise: eta must be finite and >= 0");
  }
  Image out = m;
  if (spec.eta_percent == 0.0) return out;
  const double sigma = noise_sigma(m, spec.eta_percent);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  for (double& v : out.values()) v += gauss(rng);
  return out;
}

}  // namespace imrec

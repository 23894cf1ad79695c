#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "imrec/blur.hpp"
#include "imrec/error.hpp"

namespace imrec {

namespace {

PsfKernel square_kernel(PsfKind kind, int size, std::vector<double> taps) {
  PsfKernel k;
  k.kind = kind;
  k.rows = k.cols = size;
  k.center_row = k.center_col = size / 2;
  k.taps = std::move(taps);
  return k;
}

void normalize(std::vector<double>& taps) {
  const double s = std::accumulate(taps.begin(), taps.end(), 0.0);
  for (double& t : taps) t /= s;
}

int odd_window(int hsize, int max_size, const char* who) {
  if (hsize < 1) throw ParameterError(std::string(who) + ": hsize must be >= 1");
  int size = hsize;
  if (max_size > 0) size = std::min(size, max_size);
  if (size % 2 == 0) --size;
  return std::max(size, 1);
}

// Drop all-zero outer rings; keeps the window square and centered.
PsfKernel trim_zero_rings(PsfKernel k) {
  while (k.rows > 1) {
    const int s = k.rows;
    bool zero = true;
    for (int t = 0; t < s && zero; ++t) {
      zero = k.at(0, t) == 0.0 && k.at(s - 1, t) == 0.0 && k.at(t, 0) == 0.0 && k.at(t, s - 1) == 0.0;
    }
    if (!zero) break;
    std::vector<double> inner;
    inner.reserve(static_cast<std::size_t>((s - 2) * (s - 2)));
    for (int r = 1; r + 1 < s; ++r)
      for (int c = 1; c + 1 < s; ++c) inner.push_back(k.at(r, c));
    k = square_kernel(k.kind, s - 2, std::move(inner));
  }
  return k;
}

}  // namespace

std::string to_string(PsfKind kind) {
  switch (kind) {
    case PsfKind::Motion: return "motion";
    case PsfKind::Log: return "log";
    case PsfKind::Disk: return "disk";
    case PsfKind::Unsharp: return "unsharp";
    case PsfKind::Gaussian: return "gaussian";
    case PsfKind::Laplacian: return "laplacian";
    case PsfKind::Delta: return "delta";
    case PsfKind::Custom: return "custom";
  }
  return "unknown";
}

double PsfKernel::sum() const { return std::accumulate(taps.begin(), taps.end(), 0.0); }

PsfKernel make_gaussian(int hsize, double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("gaussian psf: sigma must be > 0");
  const int size = odd_window(hsize, 0, "gaussian psf");
  const int half = size / 2;
  std::vector<double> taps;
  taps.reserve(static_cast<std::size_t>(size * size));
  for (int y = -half; y <= half; ++y)
    for (int x = -half; x <= half; ++x) taps.push_back(std::exp(-(x * x + y * y) / (2.0 * sigma * sigma)));
  normalize(taps);
  return square_kernel(PsfKind::Gaussian, size, std::move(taps));
}

PsfKernel make_log(int hsize, double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("log psf: sigma must be > 0");
  const int size = odd_window(hsize, 0, "log psf");
  const int half = size / 2;
  const double s2 = sigma * sigma;
  std::vector<double> gauss;
  gauss.reserve(static_cast<std::size_t>(size * size));
  for (int y = -half; y <= half; ++y)
    for (int x = -half; x <= half; ++x) gauss.push_back(std::exp(-(x * x + y * y) / (2.0 * s2)));
  const double gsum = std::accumulate(gauss.begin(), gauss.end(), 0.0);
  std::vector<double> taps(gauss.size());
  std::size_t k = 0;
  for (int y = -half; y <= half; ++y) {
    for (int x = -half; x <= half; ++x, ++k) {
      taps[k] = (x * x + y * y - 2.0 * s2) / (s2 * s2) * gauss[k] / gsum;
    }
  }
  const double shift = std::accumulate(taps.begin(), taps.end(), 0.0) / static_cast<double>(taps.size());
  for (double& t : taps) t -= shift;
  return square_kernel(PsfKind::Log, size, std::move(taps));
}

PsfKernel make_disk(double radius) {
  if (!(radius > 0.0)) throw ParameterError("disk psf: radius must be > 0");
  constexpr int kSub = 16;
  const int half = static_cast<int>(std::ceil(radius));
  const int size = 2 * half + 1;
  const double r2 = radius * radius;
  std::vector<double> taps;
  taps.reserve(static_cast<std::size_t>(size * size));
  for (int y = -half; y <= half; ++y) {
    for (int x = -half; x <= half; ++x) {
      int inside = 0;
      for (int a = 0; a < kSub; ++a) {
        const double py = y - 0.5 + (a + 0.5) / kSub;
        for (int b = 0; b < kSub; ++b) {
          const double px = x - 0.5 + (b + 0.5) / kSub;
          if (px * px + py * py <= r2) ++inside;
        }
      }
      taps.push_back(static_cast<double>(inside) / (kSub * kSub));
    }
  }
  normalize(taps);
  return trim_zero_rings(square_kernel(PsfKind::Disk, size, std::move(taps)));
}

PsfKernel make_motion(double length, double theta_deg) {
  if (!(length >= 1.0) || !std::isfinite(length)) throw ParameterError("motion psf: len must be >= 1");
  if (!std::isfinite(theta_deg)) throw ParameterError("motion psf: theta must be finite");
  const double half_len = (length - 1.0) / 2.0;
  const double th = theta_deg * std::numbers::pi / 180.0;
  // Column offset grows with cos(theta); row offset shrinks with sin(theta)
  // because rows run downward.
  const double ux = std::cos(th);
  const double uy = -std::sin(th);
  const int half = static_cast<int>(std::ceil(half_len)) + 1;
  const int size = 2 * half + 1;
  std::vector<double> taps;
  taps.reserve(static_cast<std::size_t>(size * size));
  for (int y = -half; y <= half; ++y) {
    for (int x = -half; x <= half; ++x) {
      const double along = std::clamp(x * ux + y * uy, -half_len, half_len);
      const double dist = std::hypot(x - along * ux, y - along * uy);
      taps.push_back(std::max(0.0, 1.0 - dist));
    }
  }
  normalize(taps);
  return trim_zero_rings(square_kernel(PsfKind::Motion, size, std::move(taps)));
}

PsfKernel make_unsharp(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("unsharp psf: alpha must be in [0, 1]");
  const double a = alpha;
  const double s = 1.0 / (a + 1.0);
  return square_kernel(PsfKind::Unsharp, 3,
                       {-a * s, (a - 1) * s, -a * s,  //
                        (a - 1) * s, (a + 5) * s, (a - 1) * s,  //
                        -a * s, (a - 1) * s, -a * s});
}

PsfKernel make_laplacian(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("laplacian psf: alpha must be in [0, 1]");
  const double a = alpha;
  const double s = 4.0 / (a + 1.0);
  const double corner = s * a / 4.0;
  const double edge = s * (1.0 - a) / 4.0;
  return square_kernel(PsfKind::Laplacian, 3,
                       {corner, edge, corner,  //
                        edge, -s, edge,        //
                        corner, edge, corner});
}

PsfKernel make_delta() { return square_kernel(PsfKind::Delta, 1, {1.0}); }

PsfKernel make_custom(int rows, int cols, std::vector<double> taps) {
  if (rows < 1 || cols < 1) throw ParameterError("custom psf: empty kernel");
  if (taps.size() != static_cast<std::size_t>(rows * cols)) {
    throw DimensionError("custom psf: expected " + std::to_string(rows * cols) + " taps");
  }
  for (double t : taps) {
    if (!std::isfinite(t)) throw ParameterError("custom psf: non-finite tap");
  }
  PsfKernel k;
  k.kind = PsfKind::Custom;
  k.rows = rows;
  k.cols = cols;
  k.center_row = rows / 2;
  k.center_col = cols / 2;
  k.taps = std::move(taps);
  return k;
}

PsfKernel make_psf(const PsfParams& p) {
  switch (p.kind) {
    case PsfKind::Motion: return make_motion(p.length, p.theta_deg);
    case PsfKind::Log: return make_log(odd_window(p.hsize, p.max_size, "log psf"), p.sigma);
    case PsfKind::Disk: return make_disk(p.radius);
    case PsfKind::Unsharp: return make_unsharp(p.alpha);
    case PsfKind::Gaussian: return make_gaussian(odd_window(p.hsize, p.max_size, "gaussian psf"), p.sigma);
    case PsfKind::Laplacian: return make_laplacian(p.alpha);
    case PsfKind::Delta: return make_delta();
    case PsfKind::Custom: break;
  }
  throw ParameterError("make_psf: custom kernels are built with make_custom");
}

}  // namespace imrec

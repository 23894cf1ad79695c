#include "imrec/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "imrec/blur.hpp"
#include "imrec/error.hpp"

namespace imrec::phantom {

namespace {

using Shape = std::function<bool(double x, double y)>;

constexpr int kSuper = 4;

// Fraction of pixel (i, j) covered by a shape, coordinates in [0, 1]^2.
double coverage(const Shape& shape, int i, int j, int side) {
  const double n = side - 1;
  int hits = 0;
  for (int a = 0; a < kSuper; ++a) {
    const double y = (i - 0.5 + (a + 0.5) / kSuper) / n;
    for (int b = 0; b < kSuper; ++b) {
      const double x = (j - 0.5 + (b + 0.5) / kSuper) / n;
      if (shape(x, y)) ++hits;
    }
  }
  return static_cast<double>(hits) / (kSuper * kSuper);
}

// Blend `value` into m over the shape with anti-aliased coverage.
void paint(Image& m, const Shape& shape, const std::function<double(double, double)>& value) {
  const int s = m.side();
  const double n = s - 1;
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      const double c = coverage(shape, i, j, s);
      if (c > 0.0) m(i, j) = (1.0 - c) * m(i, j) + c * value(j / n, i / n);
    }
  }
}

void paint(Image& m, const Shape& shape, double value) {
  paint(m, shape, [value](double, double) { return value; });
}

Shape ellipse(double cx, double cy, double rx, double ry, double angle_deg = 0.0) {
  const double t = angle_deg * std::numbers::pi / 180.0;
  const double c = std::cos(t), s = std::sin(t);
  return [=](double x, double y) {
    const double u = (x - cx) * c + (y - cy) * s;
    const double v = -(x - cx) * s + (y - cy) * c;
    return (u * u) / (rx * rx) + (v * v) / (ry * ry) <= 1.0;
  };
}

Shape rect(double x0, double y0, double x1, double y1) {
  return [=](double x, double y) { return x >= x0 && x <= x1 && y >= y0 && y <= y1; };
}

// Thick segment from (x0,y0) to (x1,y1).
Shape bar(double x0, double y0, double x1, double y1, double half_width) {
  return [=](double x, double y) {
    const double dx = x1 - x0, dy = y1 - y0;
    const double len2 = dx * dx + dy * dy;
    const double t = std::clamp(((x - x0) * dx + (y - y0) * dy) / len2, 0.0, 1.0);
    return std::hypot(x - (x0 + t * dx), y - (y0 + t * dy)) <= half_width;
  };
}

Shape triangle(double ax, double ay, double bx, double by, double cx, double cy) {
  return [=](double x, double y) {
    auto edge = [&](double px, double py, double qx, double qy) {
      return (qx - px) * (y - py) - (qy - py) * (x - px);
    };
    const double e0 = edge(ax, ay, bx, by), e1 = edge(bx, by, cx, cy), e2 = edge(cx, cy, ax, ay);
    return (e0 >= 0 && e1 >= 0 && e2 >= 0) || (e0 <= 0 && e1 <= 0 && e2 <= 0);
  };
}

// Zero-mean, unit-std random field smoothed with a Gaussian of width `sigma` px.
Image smooth_field(int side, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Image w(side);
  for (double& v : w.values()) v = gauss(rng);
  const int hsize = std::min(2 * static_cast<int>(std::ceil(3.0 * sigma)) + 1, side - (side % 2 == 0));
  Image f = forward_map(w, embed(make_gaussian(hsize, sigma), side));
  const double mu = mean(f);
  for (double& v : f.values()) v -= mu;
  const double sd = norm(f) / side;
  f *= 1.0 / sd;
  return f;
}

void clamp_range(Image& m) {
  for (double& v : m.values()) v = std::clamp(v, 0.0, 255.0);
}

void require_side(int side) {
  if (side < 8) throw ParameterError("phantom: side must be >= 8");
}

}  // namespace

Image portrait(int side, std::uint64_t seed) {
  require_side(side);
  Image m(side);
  const double n = side - 1;
  const Image grain = smooth_field(side, 1.0, seed);
  const Image cloth = smooth_field(side, 2.5, seed + 1);
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      const double x = j / n, y = i / n;
      m(i, j) = 95.0 + 70.0 * x - 30.0 * y + 12.0 * std::sin(5.0 * x + 3.0 * y) + 6.0 * cloth(i, j);
    }
  }
  // shoulder / cloth region with coarse texture
  paint(m, ellipse(0.55, 1.05, 0.45, 0.3), [&](double x, double y) {
    return 120.0 - 40.0 * (y - 0.75) + 15.0 * std::sin(40.0 * x + 12.0 * y);
  });
  // hair band with fine stripes
  paint(m, ellipse(0.52, 0.42, 0.3, 0.36, -8.0), [](double x, double y) {
    return 75.0 + 22.0 * std::sin(90.0 * x + 25.0 * y);
  });
  // face, smoothly lit
  paint(m, ellipse(0.54, 0.45, 0.2, 0.27, -8.0), [](double x, double y) {
    return 205.0 - 55.0 * ((x - 0.45) * (x - 0.45) + (y - 0.35) * (y - 0.35)) * 4.0;
  });
  paint(m, ellipse(0.47, 0.38, 0.04, 0.018), 45.0);
  paint(m, ellipse(0.61, 0.37, 0.04, 0.018), 45.0);
  paint(m, bar(0.54, 0.42, 0.56, 0.52, 0.008), 150.0);
  paint(m, ellipse(0.555, 0.6, 0.07, 0.02), 120.0);
  // hat brim and feather
  paint(m, bar(0.2, 0.18, 0.85, 0.1, 0.03), 170.0);
  paint(m, bar(0.7, 0.08, 0.95, 0.45, 0.015), 225.0);
  for (std::size_t k = 0; k < m.size(); ++k) m[k] += 7.0 * grain[k];
  clamp_range(m);
  return m;
}

Image photographer(int side, std::uint64_t seed) {
  require_side(side);
  Image m(side);
  const double n = side - 1;
  const Image grass = smooth_field(side, 1.2, seed);
  const Image haze = smooth_field(side, 6.0, seed + 1);
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      const double x = j / n, y = i / n;
      m(i, j) = 195.0 + 25.0 * y - 10.0 * x + 4.0 * haze(i, j);
    }
  }
  // distant buildings
  paint(m, rect(0.05, 0.52, 0.14, 0.62), 165.0);
  paint(m, rect(0.12, 0.47, 0.18, 0.62), 150.0);
  paint(m, rect(0.82, 0.5, 0.95, 0.62), 158.0);
  // ground with grass texture
  paint(m, rect(-0.1, 0.62, 1.1, 1.1), [&](double x, double y) {
    const int i = std::clamp(static_cast<int>(std::lround(y * n)), 0, side - 1);
    const int j = std::clamp(static_cast<int>(std::lround(x * n)), 0, side - 1);
    return 125.0 - 35.0 * (y - 0.62) + 24.0 * grass(i, j);
  });
  // tripod
  paint(m, bar(0.62, 0.5, 0.52, 0.95, 0.006), 40.0);
  paint(m, bar(0.62, 0.5, 0.7, 0.95, 0.006), 40.0);
  paint(m, bar(0.62, 0.5, 0.63, 0.93, 0.005), 45.0);
  paint(m, rect(0.58, 0.43, 0.68, 0.5), 30.0);
  // figure: coat, legs, head, arm
  paint(m, ellipse(0.42, 0.47, 0.1, 0.17), [](double x, double) { return 25.0 + 20.0 * (x - 0.32); });
  paint(m, bar(0.39, 0.6, 0.36, 0.93, 0.025), 20.0);
  paint(m, bar(0.45, 0.6, 0.48, 0.93, 0.025), 22.0);
  paint(m, ellipse(0.43, 0.25, 0.045, 0.055), 55.0);
  paint(m, ellipse(0.44, 0.22, 0.05, 0.028), 15.0);
  paint(m, bar(0.48, 0.38, 0.6, 0.45, 0.02), 28.0);
  paint(m, ellipse(0.415, 0.33, 0.02, 0.02), 210.0);
  clamp_range(m);
  return m;
}

Image blocks(int side) {
  require_side(side);
  Image m(side, 40.0);
  paint(m, rect(0.1, 0.1, 0.45, 0.4), 200.0);
  paint(m, rect(0.25, 0.25, 0.35, 0.33), 110.0);
  paint(m, ellipse(0.7, 0.3, 0.17, 0.17), 160.0);
  paint(m, ellipse(0.7, 0.3, 0.06, 0.06), 240.0);
  paint(m, triangle(0.15, 0.9, 0.45, 0.55, 0.55, 0.9), 130.0);
  paint(m, rect(0.62, 0.6, 0.9, 0.88), 90.0);
  paint(m, bar(0.62, 0.6, 0.9, 0.88, 0.015), 220.0);
  return m;
}

Image two_level(int side, double low, double high) {
  Image m(side, low);
  for (int i = 0; i < side; ++i)
    for (int j = side / 2; j < side; ++j) m(i, j) = high;
  return m;
}

std::vector<std::string> names() { return {"portrait", "photographer", "blocks"}; }

Image by_name(const std::string& name, int side, std::uint64_t seed) {
  if (name == "portrait") return seed == 0 ? portrait(side) : portrait(side, seed);
  if (name == "photographer") return seed == 0 ? photographer(side) : photographer(side, seed);
  if (name == "blocks") return blocks(side);
  throw ParameterError("unknown phantom '" + name + "' (expected portrait, photographer or blocks)");
}

}  // namespace imrec::phantom

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace imrec {

/// Square lattice of (n+1) x (n+1) real intensities discretizing the unit
/// square with cell width h = 1/n. Row-major, row index first.
class Image {
 public:
  Image() = default;
  explicit Image(int side, double fill = 0.0);
  Image(int side, std::vector<double> values);

  int side() const noexcept { return side_; }
  int n() const noexcept { return side_ - 1; }
  double h() const noexcept { return 1.0 / static_cast<double>(side_ - 1); }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double& operator()(int i, int j) { return values_[index(i, j)]; }
  double operator()(int i, int j) const { return values_[index(i, j)]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  std::span<double> values() & noexcept { return values_; }
  std::span<const double> values() const& noexcept { return values_; }
  // A span into a temporary would dangle.
  void values() && = delete;
  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }

  Image& operator+=(const Image& other);
  Image& operator-=(const Image& other);
  Image& operator*=(double s);
  /// this += alpha * x
  Image& axpy(double alpha, const Image& x);

  bool same_lattice(const Image& other) const noexcept { return side_ == other.side_; }
  bool operator==(const Image& other) const = default;

 private:
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(side_) +
           static_cast<std::size_t>(j);
  }

  int side_ = 0;
  std::vector<double> values_;
};

Image operator+(Image a, const Image& b);
Image operator-(Image a, const Image& b);
Image operator*(double s, Image a);

/// Forward-difference gradient. gx is the column (x) direction, gy the row
/// (y) direction; both vanish on the trailing boundary.
struct GradientField {
  int side = 0;
  std::vector<double> gx;
  std::vector<double> gy;

  explicit GradientField(int s = 0)
      : side(s),
        gx(static_cast<std::size_t>(s) * static_cast<std::size_t>(s), 0.0),
        gy(static_cast<std::size_t>(s) * static_cast<std::size_t>(s), 0.0) {}
};

struct NoiseSpec {
  double eta_percent = 0.0;
  std::uint64_t seed = 0;
};

GradientField gradient(const Image& m);

/// Exact negative adjoint of gradient(): <gradient(m), p> = -<m, divergence(p)>.
Image divergence(const GradientField& p);

/// Node magnitudes |grad m| at every lattice point.
Image gradient_magnitude(const Image& m);

double dot(const Image& a, const Image& b);
double dot(const GradientField& a, const GradientField& b);
double norm(const Image& a);
double max_abs(const Image& a);
double mean(const Image& a);

/// ||m_next - m_prev|| / ||m_next||; throws ZeroDenominatorError when m_next == 0.
double relative_error(const Image& m_next, const Image& m_prev);

/// ||m - b|| / n.
double misfit(const Image& m, const Image& b);

/// Peak signal-to-noise ratio in dB against a reference, peak 255.
double psnr(const Image& m, const Image& reference, double peak = 255.0);

/// Standard deviation of eta% noise on m: (eta/100) * RMS(m).
double noise_sigma(const Image& m, double eta_percent);

/// m + eps with eps i.i.d. N(0, noise_sigma(m, eta)^2), seeded.
Image add_gaussian_noise(const Image& m, const NoiseSpec& spec);

}  // namespace imrec

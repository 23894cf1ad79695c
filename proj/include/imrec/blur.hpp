#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "imrec/image.hpp"

namespace imrec {

enum class PsfKind { Motion, Log, Disk, Unsharp, Gaussian, Laplacian, Delta, Custom };

std::string to_string(PsfKind kind);

/// Spatial point spread function. Tap (r, c) acts at offset
/// (r - center_row, c - center_col) from the output pixel.
struct PsfKernel {
  PsfKind kind = PsfKind::Delta;
  int rows = 1;
  int cols = 1;
  int center_row = 0;
  int center_col = 0;
  std::vector<double> taps{1.0};

  double at(int r, int c) const { return taps[static_cast<std::size_t>(r * cols + c)]; }
  double sum() const;
};

/// Parameters for make_psf. Unused fields are ignored for a given kind;
/// defaults follow the usual fspecial defaults.
struct PsfParams {
  PsfKind kind = PsfKind::Gaussian;
  double length = 9.0;     // motion
  double theta_deg = 0.0;  // motion, counterclockwise
  int hsize = 3;           // gaussian, log (odd window side)
  double sigma = 0.5;      // gaussian, log
  double radius = 5.0;     // disk
  double alpha = 0.2;      // unsharp, laplacian
  /// If > 0, gaussian/log windows are cropped to the largest odd size <= this.
  int max_size = 0;
};

PsfKernel make_psf(const PsfParams& params);

PsfKernel make_motion(double length, double theta_deg);
PsfKernel make_log(int hsize, double sigma);
PsfKernel make_disk(double radius);
PsfKernel make_unsharp(double alpha);
PsfKernel make_gaussian(int hsize, double sigma);
PsfKernel make_laplacian(double alpha);
PsfKernel make_delta();
/// Arbitrary rows x cols taps, centered at (rows/2, cols/2).
PsfKernel make_custom(int rows, int cols, std::vector<double> taps);

namespace detail {
class FftPlan;
}

/// Unnormalized 2D DFT of the periodically embedded PSF. Immutable after
/// construction and safe to share between threads.
class TransferFunction {
 public:
  int side() const noexcept { return side_; }
  const std::vector<std::complex<double>>& spectrum() const noexcept { return spectrum_; }
  /// Squared-tap sum, i.e. every diagonal entry of J^T J.
  double gram_diagonal() const noexcept { return gram_diag_; }

 private:
  friend TransferFunction embed(const PsfKernel& psf, int side);
  friend Image forward_map(const Image& m, const TransferFunction& tf);
  friend Image adjoint_map(const Image& r, const TransferFunction& tf);

  int side_ = 0;
  std::vector<std::complex<double>> spectrum_;
  double gram_diag_ = 0.0;
  std::shared_ptr<const detail::FftPlan> plan_;
};

/// Wrap the kernel center to index (0,0) of a side x side array and transform.
TransferFunction embed(const PsfKernel& psf, int side);

/// J m: circular convolution with the embedded PSF.
Image forward_map(const Image& m, const TransferFunction& tf);

/// J^T r: multiplication by the conjugate spectrum.
Image adjoint_map(const Image& r, const TransferFunction& tf);

/// O(N * taps) periodic convolution; reference for forward_map.
Image direct_convolve(const Image& m, const PsfKernel& psf);

}  // namespace imrec

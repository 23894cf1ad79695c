#include "imrec/blur.hpp"

#include <string>

#include "fft_plan.hpp"
#include "imrec/error.hpp"

namespace imrec {

namespace {

void require_side(const Image& m, const TransferFunction& tf, const char* op) {
  if (m.side() != tf.side()) {
    throw DimensionError(std::string(op) + ": image side " + std::to_string(m.side()) +
                         " does not match transfer function side " + std::to_string(tf.side()));
  }
}

int wrap(int i, int side) {
  const int r = i % side;
  return r < 0 ? r + side : r;
}

}  // namespace

TransferFunction embed(const PsfKernel& psf, int side) {
  if (side < 2) throw ParameterError("embed: side must be >= 2");
  if (psf.rows > side || psf.cols > side) {
    throw DimensionError("embed: kernel " + std::to_string(psf.rows) + "x" + std::to_string(psf.cols) +
                         " does not fit a " + std::to_string(side) + " lattice");
  }
  const std::size_t count = static_cast<std::size_t>(side) * static_cast<std::size_t>(side);
  TransferFunction tf;
  tf.side_ = side;
  tf.plan_ = detail::plan_for(side);

  detail::FftBuffer buf = detail::make_buffer(count);
  for (std::size_t k = 0; k < count; ++k) buf[k][0] = buf[k][1] = 0.0;
  double energy = 0.0;
  for (int r = 0; r < psf.rows; ++r) {
    for (int c = 0; c < psf.cols; ++c) {
      const double t = psf.at(r, c);
      const std::size_t idx = static_cast<std::size_t>(wrap(r - psf.center_row, side)) * side +
                              static_cast<std::size_t>(wrap(c - psf.center_col, side));
      buf[idx][0] += t;
      energy += t * t;
    }
  }
  tf.plan_->forward(buf.get());
  tf.spectrum_.resize(count);
  for (std::size_t k = 0; k < count; ++k) tf.spectrum_[k] = {buf[k][0], buf[k][1]};
  tf.gram_diag_ = energy;
  return tf;
}

namespace {

template <bool Conjugate>
Image spectral_multiply(const Image& m, const TransferFunction& tf,
                        const detail::FftPlan& plan) {
  const std::size_t count = m.size();
  detail::FftBuffer buf = detail::make_buffer(count);
  for (std::size_t k = 0; k < count; ++k) {
    buf[k][0] = m[k];
    buf[k][1] = 0.0;
  }
  plan.forward(buf.get());
  const auto& spec = tf.spectrum();
  for (std::size_t k = 0; k < count; ++k) {
    const std::complex<double> f = Conjugate ? std::conj(spec[k]) : spec[k];
    const std::complex<double> v = f * std::complex<double>(buf[k][0], buf[k][1]);
    buf[k][0] = v.real();
    buf[k][1] = v.imag();
  }
  plan.backward(buf.get());
  const double scale = 1.0 / static_cast<double>(count);
  Image out(m.side());
  for (std::size_t k = 0; k < count; ++k) out[k] = buf[k][0] * scale;
  return out;
}

}  // namespace

Image forward_map(const Image& m, const TransferFunction& tf) {
  require_side(m, tf, "forward_map");
  return spectral_multiply<false>(m, tf, *tf.plan_);
}

Image adjoint_map(const Image& r, const TransferFunction& tf) {
  require_side(r, tf, "adjoint_map");
  return spectral_multiply<true>(r, tf, *tf.plan_);
}

Image direct_convolve(const Image& m, const PsfKernel& psf) {
  const int s = m.side();
  Image out(s);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      double acc = 0.0;
      for (int r = 0; r < psf.rows; ++r) {
        const int src_i = wrap(i - (r - psf.center_row), s);
        for (int c = 0; c < psf.cols; ++c) {
          acc += psf.at(r, c) * m(src_i, wrap(j - (c - psf.center_col), s));
        }
      }
      out(i, j) = acc;
    }
  }
  return out;
}

}  // namespace imrec

#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <fftw3.h>

namespace imrec::detail {

// Forward/backward complex 2D plans for one lattice size. Plans are created
// and destroyed under a global lock (the FFTW planner is not reentrant);
// execution uses per-call buffers through the new-array interface.
class FftPlan {
 public:
  explicit FftPlan(int side);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  int side() const noexcept { return side_; }

  /// In-place unnormalized transforms on an fftw_malloc'ed buffer.
  void forward(fftw_complex* buf) const;
  void backward(fftw_complex* buf) const;

 private:
  int side_;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

std::shared_ptr<const FftPlan> plan_for(int side);

struct FftwFree {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using FftBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

FftBuffer make_buffer(std::size_t count);

}  // namespace imrec::detail

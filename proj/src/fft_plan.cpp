#include "fft_plan.hpp"

#include <map>
#include <mutex>
#include <new>

namespace imrec::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FftBuffer make_buffer(std::size_t count) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * count));
  if (p == nullptr) throw std::bad_alloc();
  return FftBuffer(p);
}

FftPlan::FftPlan(int side) : side_(side) {
  const std::size_t count = static_cast<std::size_t>(side) * static_cast<std::size_t>(side);
  FftBuffer scratch = make_buffer(count);
  std::lock_guard lock(planner_mutex());
  fwd_ = fftw_plan_dft_2d(side, side, scratch.get(), scratch.get(), FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_2d(side, side, scratch.get(), scratch.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
  if (fwd_ == nullptr || bwd_ == nullptr) throw std::bad_alloc();
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  if (fwd_ != nullptr) fftw_destroy_plan(fwd_);
  if (bwd_ != nullptr) fftw_destroy_plan(bwd_);
}

void FftPlan::forward(fftw_complex* buf) const { fftw_execute_dft(fwd_, buf, buf); }
void FftPlan::backward(fftw_complex* buf) const { fftw_execute_dft(bwd_, buf, buf); }

std::shared_ptr<const FftPlan> plan_for(int side) {
  static std::mutex cache_mutex;
  static std::map<int, std::weak_ptr<const FftPlan>> cache;
  std::lock_guard lock(cache_mutex);
  if (auto hit = cache[side].lock()) return hit;
  auto plan = std::make_shared<const FftPlan>(side);
  cache[side] = plan;
  return plan;
}

}  // namespace imrec::detail

#pragma once

#include <string>
#include <vector>

#include "imrec/blur.hpp"
#include "imrec/image.hpp"
#include "imrec/regularization.hpp"
#include "imrec/solvers.hpp"

namespace imrec {

struct StageLog {
  std::string name;
  std::vector<IterationRecord> records;
  Image output;
  double seconds = 0.0;
  std::string status;

  int iterations() const noexcept { return static_cast<int>(records.size()); }
};

struct PipelineReport {
  Image output;
  std::vector<StageLog> stages;  // execution order
  double beta_used = 0.0;

  int total_iterations() const;
  const StageLog* stage(const std::string& name) const;
};

/// Pure diffusion from m0 = b (Huber with an adaptive threshold by default).
PipelineReport denoise_explicit(const Image& b, const StepPolicy& policy, const StopRule& stop,
                                const RegularizerSpec& reg = RegularizerSpec::adaptive_huber());

/// beta = -sum (m_bar - b)^2 / sum (m_bar - b) R_m(m_bar). An adaptive reg
/// is evaluated at m_bar. Throws ParameterError if the result is not positive.
double estimate_beta(const Image& m_bar, const Image& b,
                     const RegularizerSpec& reg = RegularizerSpec::adaptive_huber());

/// True when the denominator of estimate_beta is negligible (|den| < 1e-14 |b|^2).
bool beta_denominator_negligible(const Image& m_bar, const Image& b, const RegularizerSpec& reg);

struct HybridOptions {
  StepPolicy policy = StepPolicy::lsd();
  double pre_tol = 1e-4;
  int pre_max_iters = 2000;
  int irls_iters = 3;
  CgOptions cg{1e-6, 2000};
  /// Treat b as noise-free: return it unchanged.
  bool noise_free = false;
};

/// Explicit pre-denoise, beta from the misfit invariance, then IRLS on
/// m - b + beta R_m(m) = 0 warm-started at the pre-denoised image.
PipelineReport denoise_hybrid(const Image& b, const HybridOptions& opts = {});

/// `steps` SD steps of pure diffusion with Tukey, gamma-hat = sqrt(5) *
/// adaptive_gamma(m_pre) fixed at entry.
PipelineReport sharpen_tukey(const Image& m_pre, int steps,
                             const StepPolicy& policy = StepPolicy::sd());

/// Tikhonov descent with blur J from m0 = b (Huber, adaptive threshold).
PipelineReport deblur(const Image& b, const PsfKernel& psf, double beta, const StepPolicy& policy,
                      const StopRule& stop);

struct SplitOptions {
  StepPolicy policy = StepPolicy::lsd();
  double pre_tol = 1e-4;
  int pre_max_iters = 2000;
  StopRule deblur_stop{1e-4, 2000};
  int sharpen_steps = 10;
  StepPolicy sharpen_policy = StepPolicy::sd();
  bool noise_free = false;  // skip the pre-denoise stage
};

/// Denoise to a coarse tolerance, deblur the result, then Tukey-sharpen.
PipelineReport restore_split(const Image& b, const PsfKernel& psf, double beta,
                             const SplitOptions& opts = {});

}  // namespace imrec

#include "imrec/pipelines.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "imrec/error.hpp"

namespace imrec {

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

StageLog descent_stage(std::string name, DescentResult&& r, double seconds) {
  StageLog s;
  s.name = std::move(name);
  s.records = std::move(r.records);
  s.output = std::move(r.solution);
  s.seconds = seconds;
  s.status = to_string(r.status);
  return s;
}

StageLog skipped_stage(std::string name, const Image& passthrough) {
  StageLog s;
  s.name = std::move(name);
  s.output = passthrough;
  s.status = "skipped";
  return s;
}

}  // namespace

int PipelineReport::total_iterations() const {
  int total = 0;
  for (const auto& s : stages) total += s.iterations();
  return total;
}

const StageLog* PipelineReport::stage(const std::string& name) const {
  for (const auto& s : stages) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

PipelineReport denoise_explicit(const Image& b, const StepPolicy& policy, const StopRule& stop,
                                const RegularizerSpec& reg) {
  const Stopwatch clock;
  DescentResult r = descent_run(ProblemSpec::diffusion(b, reg), policy, stop, b);
  PipelineReport report;
  report.output = r.solution;
  report.stages.push_back(descent_stage("denoise", std::move(r), clock.seconds()));
  return report;
}

namespace {

struct BetaTerms {
  double numerator;    // sum (m_bar - b)^2
  double denominator;  // sum (m_bar - b) R_m(m_bar)
};

BetaTerms beta_terms(const Image& m_bar, const Image& b, const RegularizerSpec& reg) {
  if (!m_bar.same_lattice(b)) throw DimensionError("estimate_beta: lattice mismatch");
  const Image diff = m_bar - b;
  return {dot(diff, diff), dot(diff, reg_gradient(m_bar, reg))};
}

}  // namespace

bool beta_denominator_negligible(const Image& m_bar, const Image& b, const RegularizerSpec& reg) {
  const BetaTerms t = beta_terms(m_bar, b, reg);
  return std::abs(t.denominator) < 1e-14 * dot(b, b);
}

double estimate_beta(const Image& m_bar, const Image& b, const RegularizerSpec& reg) {
  const BetaTerms t = beta_terms(m_bar, b, reg);
  if (t.denominator == 0.0) throw ZeroDenominatorError("estimate_beta: denominator is zero");
  const double beta = -t.numerator / t.denominator;
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ParameterError("estimate_beta: nonpositive beta " + std::to_string(beta) +
                         "; m_bar is not a descent smoothing of b");
  }
  return beta;
}

PipelineReport denoise_hybrid(const Image& b, const HybridOptions& opts) {
  if (!(opts.pre_tol > 0.0 && opts.pre_tol < 1.0)) throw ParameterError("denoise_hybrid: pre_tol must be in (0, 1)");
  if (opts.irls_iters < 0) throw ParameterError("denoise_hybrid: irls_iters must be >= 0");
  opts.policy.validate();

  PipelineReport report;
  if (opts.noise_free) {
    report.output = b;
    report.stages.push_back(skipped_stage("denoise", b));
    report.stages.push_back(skipped_stage("irls", b));
    return report;
  }

  const RegularizerSpec reg = RegularizerSpec::adaptive_huber();
  PipelineReport pre = denoise_explicit(b, opts.policy, {opts.pre_tol, opts.pre_max_iters}, reg);
  report.stages.push_back(std::move(pre.stages.front()));
  const Image m_bar = report.stages.back().output;

  if (beta_denominator_negligible(m_bar, b, reg)) {
    report.output = m_bar;
    report.stages.push_back(skipped_stage("irls", m_bar));
    return report;
  }
  report.beta_used = estimate_beta(m_bar, b, reg);

  const Stopwatch clock;
  const ProblemSpec prob = ProblemSpec::tikhonov(b, std::nullopt, report.beta_used, reg);
  IrlsResult irls = irls_outer(prob, m_bar, opts.irls_iters, opts.cg);
  StageLog s;
  s.name = "irls";
  s.records = std::move(irls.records);
  s.output = std::move(irls.solution);
  s.seconds = clock.seconds();
  s.status = "completed";
  report.output = s.output;
  report.stages.push_back(std::move(s));
  return report;
}

PipelineReport sharpen_tukey(const Image& m_pre, int steps, const StepPolicy& policy) {
  if (steps < 0) throw ParameterError("sharpen_tukey: steps must be >= 0");
  PipelineReport report;
  if (steps == 0) {
    report.output = m_pre;
    report.stages.push_back(skipped_stage("sharpen", m_pre));
    return report;
  }
  const Stopwatch clock;
  const RegularizerSpec tukey = RegularizerSpec::tukey_from_huber(adaptive_gamma(m_pre));
  // A fixed step budget: the tolerance never triggers before `steps`.
  const StopRule budget{std::numeric_limits<double>::min(), steps};
  DescentResult r = descent_run(ProblemSpec::diffusion(m_pre, tukey), policy, budget, m_pre);
  report.output = r.solution;
  report.stages.push_back(descent_stage("sharpen", std::move(r), clock.seconds()));
  return report;
}

PipelineReport deblur(const Image& b, const PsfKernel& psf, double beta, const StepPolicy& policy,
                      const StopRule& stop) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("deblur: beta must be > 0");
  const Stopwatch clock;
  const ProblemSpec prob =
      ProblemSpec::tikhonov(b, embed(psf, b.side()), beta, RegularizerSpec::adaptive_huber());
  DescentResult r = descent_run(prob, policy, stop, b);
  PipelineReport report;
  report.output = r.solution;
  report.beta_used = beta;
  report.stages.push_back(descent_stage("deblur", std::move(r), clock.seconds()));
  return report;
}

PipelineReport restore_split(const Image& b, const PsfKernel& psf, double beta, const SplitOptions& opts) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("restore_split: beta must be > 0");
  if (!(opts.pre_tol > 0.0 && opts.pre_tol < 1.0)) throw ParameterError("restore_split: pre_tol must be in (0, 1)");
  if (opts.sharpen_steps < 0) throw ParameterError("restore_split: sharpen_steps must be >= 0");
  opts.policy.validate();
  opts.deblur_stop.validate();

  PipelineReport report;
  report.beta_used = beta;
  if (opts.noise_free) {
    report.stages.push_back(skipped_stage("denoise", b));
  } else {
    PipelineReport pre = denoise_explicit(b, opts.policy, {opts.pre_tol, opts.pre_max_iters});
    report.stages.push_back(std::move(pre.stages.front()));
  }
  const Image pre_denoised = report.stages.back().output;

  PipelineReport deb = deblur(pre_denoised, psf, beta, opts.policy, opts.deblur_stop);
  report.stages.push_back(std::move(deb.stages.front()));

  PipelineReport sharp = sharpen_tukey(report.stages.back().output, opts.sharpen_steps, opts.sharpen_policy);
  report.stages.push_back(std::move(sharp.stages.front()));
  report.output = report.stages.back().output;
  return report;
}

}  // namespace imrec

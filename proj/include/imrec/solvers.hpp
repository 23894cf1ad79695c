#pragma once

#include <optional>
#include <string>
#include <vector>

#include "imrec/blur.hpp"
#include "imrec/image.hpp"
#include "imrec/regularization.hpp"

namespace imrec {

/// Tikhonov:      T(m) = 1/2 |Jm - b|^2_h + beta R(m), gradient J^T(Jm - b) + beta R_m(m).
/// PureDiffusion: the data enters only through m0; the gradient is R_m(m).
/// |.|_h carries the same h^2 quadrature weight as R, so the gradients above
/// are the Riesz representers of T in the h^2-weighted inner product.
enum class ProblemMode { Tikhonov, PureDiffusion };

struct ProblemSpec {
  Image data;
  std::optional<TransferFunction> blur;  // absent means J = I
  double beta = 0.0;
  RegularizerSpec reg = RegularizerSpec::adaptive_huber();
  ProblemMode mode = ProblemMode::Tikhonov;

  static ProblemSpec diffusion(Image b, RegularizerSpec reg = RegularizerSpec::adaptive_huber());
  static ProblemSpec tikhonov(Image b, std::optional<TransferFunction> blur, double beta,
                              RegularizerSpec reg = RegularizerSpec::adaptive_huber());

  void validate() const;
};

enum class StepKind { SD, LSD, HLSD, Fixed };

std::string to_string(StepKind kind);
/// Accepts "sd", "lsd", "hlsd", "fixed" (case-insensitive).
StepKind parse_step_kind(const std::string& name);

struct StepPolicy {
  StepKind kind = StepKind::LSD;
  double fixed_tau = 0.0;

  static StepPolicy sd() { return {StepKind::SD, 0.0}; }
  static StepPolicy lsd() { return {StepKind::LSD, 0.0}; }
  static StepPolicy hlsd() { return {StepKind::HLSD, 0.0}; }
  static StepPolicy fixed(double tau) { return {StepKind::Fixed, tau}; }

  void validate() const;
};

struct IterationRecord {
  int k = 0;
  double tau = 0.0;
  double rel_err = 0.0;    // |m^{k+1} - m^k| / |m^{k+1}|
  double misfit = 0.0;     // |m^{k+1} - b| / n
  double objective = 0.0;  // T(m^{k+1}), or R(m^{k+1}) in PureDiffusion mode
};

struct StopRule {
  double tol = 1e-4;
  int max_iters = 1000;

  void validate() const;
};

double objective(const Image& m, const ProblemSpec& prob);
Image objective_gradient(const Image& m, const ProblemSpec& prob);

/// Frozen quadratic part A = J^T J + beta L(m_frozen) (or L alone in
/// PureDiffusion mode). Accepts both penalty families; the public
/// quadratic_apply keeps the Huber-only contract.
class QuadraticOperator {
 public:
  QuadraticOperator(const Image& m_frozen, const ProblemSpec& prob);

  Image apply(const Image& v) const;
  Image diagonal() const;
  /// G(m) evaluated with this operator's frozen coefficients (m must be the
  /// frozen image for the result to equal objective_gradient).
  Image gradient_at(const Image& m) const;
  const DiffusionOperator& diffusion() const noexcept { return diffusion_; }

 private:
  const ProblemSpec* prob_;
  DiffusionOperator diffusion_;
};

Image quadratic_apply(const Image& m_frozen, const Image& v, const ProblemSpec& prob);

/// G^T G / G^T A G. Throws ZeroDenominatorError when G^T A G <= 0.
double rayleigh_quotient(const Image& g, const QuadraticOperator& a);

/// Everything step_size() needs about the current and previous iterates.
struct DescentState {
  int k = 0;
  Image iterate;   // m^k
  Image gradient;  // G(m^k)
  const QuadraticOperator* op = nullptr;  // A frozen at m^k; built on demand if null
  std::optional<double> current_quotient;   // SD quotient at m^k, once computed
  std::optional<double> previous_quotient;  // SD quotient at m^{k-1}
  std::optional<double> previous_tau;

  /// Shift to the next iterate.
  void advance(Image next_iterate, double tau_taken);
};

/// SD: quotient at m^k. LSD: quotient at m^{k-1} (SD at k = 0).
/// HLSD: SD at even k, previous step reused at odd k. Fixed: fixed_tau.
double step_size(const StepPolicy& policy, DescentState& state, const ProblemSpec& prob);

enum class DescentStatus { Converged, ZeroGradient, MaxIterations };

std::string to_string(DescentStatus status);

struct DescentResult {
  Image solution;
  std::vector<IterationRecord> records;
  DescentStatus status = DescentStatus::MaxIterations;

  int iterations() const noexcept { return static_cast<int>(records.size()); }
};

/// m^{k+1} = m^k - tau_k G(m^k). An adaptive threshold is refreshed from m^k
/// at every step and held fixed while the step size is evaluated. Throws
/// DivergenceError on a non-finite iterate.
DescentResult descent_run(const ProblemSpec& prob, const StepPolicy& policy, const StopRule& stop,
                          const Image& m0);

struct CgResult {
  Image solution;
  int iterations = 0;
  double rel_residual = 0.0;
};

/// Jacobi-preconditioned CG on A x = rhs with A = quadratic_apply(m_frozen, .).
/// Stops when |rhs - A x| <= tol |rhs|; throws ConvergenceError otherwise.
CgResult cg_solve(const Image& m_frozen, const ProblemSpec& prob, const Image& rhs, double tol,
                  int max_iters, const Image* x0 = nullptr);

struct CgOptions {
  double tol = 1e-6;
  int max_iters = 500;
};

struct IrlsResult {
  Image solution;
  std::vector<IterationRecord> records;  // tau holds beta, the implicit time step
  std::vector<double> objectives;        // T(m^0), ..., T(m^K)
  std::vector<int> cg_iterations;
};

/// Lagged diffusivity: solve (J^T J + beta L(m^k)) m^{k+1} = J^T b for
/// k = 0..outer_iters-1, each solve warm-started from m^k.
IrlsResult irls_outer(const ProblemSpec& prob, const Image& m0, int outer_iters,
                      const CgOptions& cg = {});

}  // namespace imrec

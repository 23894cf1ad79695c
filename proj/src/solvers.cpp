#include "imrec/solvers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "imrec/error.hpp"

namespace imrec {

namespace {

Image data_residual_gradient(const Image& m, const ProblemSpec& prob) {
  if (!prob.blur) return m - prob.data;
  Image r = forward_map(m, *prob.blur);
  r -= prob.data;
  return adjoint_map(r, *prob.blur);
}

Image gram_apply(const Image& v, const ProblemSpec& prob) {
  if (!prob.blur) return v;
  return adjoint_map(forward_map(v, *prob.blur), *prob.blur);
}

bool all_finite(const Image& m) {
  return std::all_of(m.values().begin(), m.values().end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

ProblemSpec ProblemSpec::diffusion(Image b, RegularizerSpec reg) {
  ProblemSpec p;
  p.data = std::move(b);
  p.reg = reg;
  p.mode = ProblemMode::PureDiffusion;
  return p;
}

ProblemSpec ProblemSpec::tikhonov(Image b, std::optional<TransferFunction> blur, double beta,
                                  RegularizerSpec reg) {
  ProblemSpec p;
  p.data = std::move(b);
  p.blur = std::move(blur);
  p.beta = beta;
  p.reg = reg;
  p.mode = ProblemMode::Tikhonov;
  return p;
}

void ProblemSpec::validate() const {
  if (data.empty()) throw ParameterError("problem: data image is empty");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ParameterError("problem: beta must be finite and >= 0");
  if (reg.rule == GammaRule::Fixed && !(reg.gamma > 0.0)) {
    throw ParameterError("problem: fixed regularizer threshold must be > 0");
  }
  if (mode == ProblemMode::PureDiffusion && blur) {
    throw ParameterError("problem: pure diffusion mode takes no blur operator");
  }
  if (mode == ProblemMode::Tikhonov && !(beta > 0.0) && !blur) {
    throw ParameterError("problem: Tikhonov mode needs beta > 0 or a blur operator");
  }
  if (blur && blur->side() != data.side()) {
    throw DimensionError("problem: blur operator side does not match the data");
  }
}

std::string to_string(StepKind kind) {
  switch (kind) {
    case StepKind::SD: return "sd";
    case StepKind::LSD: return "lsd";
    case StepKind::HLSD: return "hlsd";
    case StepKind::Fixed: return "fixed";
  }
  return "unknown";
}

StepKind parse_step_kind(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "sd") return StepKind::SD;
  if (s == "lsd") return StepKind::LSD;
  if (s == "hlsd") return StepKind::HLSD;
  if (s == "fixed") return StepKind::Fixed;
  throw ParameterError("unknown step policy '" + name + "' (expected sd, lsd, hlsd or fixed)");
}

void StepPolicy::validate() const {
  if (kind == StepKind::Fixed && !(fixed_tau > 0.0 && std::isfinite(fixed_tau))) {
    throw ParameterError("fixed step policy needs tau > 0");
  }
}

void StopRule::validate() const {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw ParameterError("stop rule: tol must be finite and > 0");
  if (max_iters < 1) throw ParameterError("stop rule: max_iters must be >= 1");
}

std::string to_string(DescentStatus status) {
  switch (status) {
    case DescentStatus::Converged: return "converged";
    case DescentStatus::ZeroGradient: return "zero-gradient";
    case DescentStatus::MaxIterations: return "max-iterations";
  }
  return "unknown";
}

double objective(const Image& m, const ProblemSpec& prob) {
  const double r = reg_value(m, prob.reg);
  if (prob.mode == ProblemMode::PureDiffusion) return r;
  Image resid = prob.blur ? forward_map(m, *prob.blur) : m;
  resid -= prob.data;
  const double h2 = m.h() * m.h();
  return 0.5 * h2 * dot(resid, resid) + prob.beta * r;
}

Image objective_gradient(const Image& m, const ProblemSpec& prob) {
  return QuadraticOperator(m, prob).gradient_at(m);
}

QuadraticOperator::QuadraticOperator(const Image& m_frozen, const ProblemSpec& prob)
    : prob_(&prob), diffusion_(m_frozen, prob.reg) {
  if (!m_frozen.same_lattice(prob.data)) throw DimensionError("quadratic operator: lattice mismatch");
}

Image QuadraticOperator::apply(const Image& v) const {
  Image lv = diffusion_.apply(v);
  if (prob_->mode == ProblemMode::PureDiffusion) return lv;
  Image out = gram_apply(v, *prob_);
  out.axpy(prob_->beta, lv);
  return out;
}

Image QuadraticOperator::diagonal() const {
  Image d = diffusion_.diagonal();
  if (prob_->mode == ProblemMode::PureDiffusion) return d;
  d *= prob_->beta;
  const double gram = prob_->blur ? prob_->blur->gram_diagonal() : 1.0;
  for (double& v : d.values()) v += gram;
  return d;
}

Image QuadraticOperator::gradient_at(const Image& m) const {
  Image lm = diffusion_.apply(m);
  if (prob_->mode == ProblemMode::PureDiffusion) return lm;
  Image g = data_residual_gradient(m, *prob_);
  g.axpy(prob_->beta, lm);
  return g;
}

Image quadratic_apply(const Image& m_frozen, const Image& v, const ProblemSpec& prob) {
  if (prob.reg.kind != Penalty::Huber) {
    throw ParameterError("quadratic_apply: L(m) is defined for the Huber family only");
  }
  return QuadraticOperator(m_frozen, prob).apply(v);
}

double rayleigh_quotient(const Image& g, const QuadraticOperator& a) {
  const double num = dot(g, g);
  const double den = dot(g, a.apply(g));
  if (!(den > 0.0) || !std::isfinite(den)) {
    throw ZeroDenominatorError("step size: G^T A G = " + std::to_string(den) + " is not positive");
  }
  return num / den;
}

void DescentState::advance(Image next_iterate, double tau_taken) {
  previous_quotient = current_quotient;
  current_quotient.reset();
  previous_tau = tau_taken;
  iterate = std::move(next_iterate);
  op = nullptr;
  ++k;
}

double step_size(const StepPolicy& policy, DescentState& state, const ProblemSpec& prob) {
  auto current = [&]() {
    if (!state.current_quotient) {
      if (state.op != nullptr) {
        state.current_quotient = rayleigh_quotient(state.gradient, *state.op);
      } else {
        const QuadraticOperator a(state.iterate, prob);
        state.current_quotient = rayleigh_quotient(state.gradient, a);
      }
    }
    return *state.current_quotient;
  };

  switch (policy.kind) {
    case StepKind::SD:
      return current();
    case StepKind::LSD: {
      // The quotient at m^k is needed at the next step either way.
      const double now = current();
      return state.previous_quotient ? *state.previous_quotient : now;
    }
    case StepKind::HLSD:
      if (state.k % 2 == 1 && state.previous_tau) return *state.previous_tau;
      return current();
    case StepKind::Fixed:
      return policy.fixed_tau;
  }
  throw ParameterError("step_size: unknown policy");
}

DescentResult descent_run(const ProblemSpec& prob, const StepPolicy& policy, const StopRule& stop,
                          const Image& m0) {
  prob.validate();
  policy.validate();
  stop.validate();
  if (!m0.same_lattice(prob.data)) throw DimensionError("descent_run: m0 lattice mismatch");

  DescentResult result;
  DescentState state;
  state.iterate = m0;

  while (state.k < stop.max_iters) {
    const QuadraticOperator a(state.iterate, prob);
    state.op = &a;
    state.gradient = a.gradient_at(state.iterate);
    if (dot(state.gradient, state.gradient) == 0.0) {
      result.status = DescentStatus::ZeroGradient;
      break;
    }

    const double tau = step_size(policy, state, prob);
    Image next = state.iterate;
    next.axpy(-tau, state.gradient);
    if (!std::isfinite(tau) || !all_finite(next)) {
      throw DivergenceError(state.k, "descent diverged: non-finite iterate at step " +
                                         std::to_string(state.k));
    }

    IterationRecord rec;
    rec.k = state.k;
    rec.tau = tau;
    rec.rel_err = relative_error(next, state.iterate);
    rec.misfit = misfit(next, prob.data);
    rec.objective = objective(next, prob);
    result.records.push_back(rec);

    state.advance(std::move(next), tau);
    if (rec.rel_err <= stop.tol) {
      result.status = DescentStatus::Converged;
      break;
    }
  }
  result.solution = std::move(state.iterate);
  return result;
}

CgResult cg_solve(const Image& m_frozen, const ProblemSpec& prob, const Image& rhs, double tol,
                  int max_iters, const Image* x0) {
  if (!(tol > 0.0)) throw ParameterError("cg_solve: tol must be > 0");
  if (max_iters < 1) throw ParameterError("cg_solve: max_iters must be >= 1");
  if (!rhs.same_lattice(prob.data)) throw DimensionError("cg_solve: rhs lattice mismatch");

  const QuadraticOperator a(m_frozen, prob);
  Image inv_diag = a.diagonal();
  for (double& d : inv_diag.values()) {
    if (!(d > 0.0)) throw ZeroDenominatorError("cg_solve: preconditioner diagonal is not positive");
    d = 1.0 / d;
  }

  CgResult out;
  out.solution = x0 != nullptr ? *x0 : Image(rhs.side());
  const double rhs_norm = norm(rhs);
  if (rhs_norm == 0.0 && x0 == nullptr) return out;

  Image r = rhs - a.apply(out.solution);
  double r_norm = norm(r);
  const double target = tol * rhs_norm;
  if (r_norm <= target) {
    out.rel_residual = rhs_norm > 0.0 ? r_norm / rhs_norm : r_norm;
    return out;
  }

  auto precondition = [&](const Image& v) {
    Image z = v;
    for (std::size_t k = 0; k < z.size(); ++k) z[k] *= inv_diag[k];
    return z;
  };

  Image z = precondition(r);
  Image p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= max_iters; ++it) {
    const Image ap = a.apply(p);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) throw ZeroDenominatorError("cg_solve: operator is not positive definite");
    const double alpha = rz / pap;
    out.solution.axpy(alpha, p);
    r.axpy(-alpha, ap);
    r_norm = norm(r);
    out.iterations = it;
    if (r_norm <= target) {
      out.rel_residual = r_norm / rhs_norm;
      return out;
    }
    z = precondition(r);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    p *= beta;
    p += z;
  }
  out.rel_residual = r_norm / rhs_norm;
  throw ConvergenceError(out.rel_residual, "cg_solve: no convergence after " + std::to_string(max_iters) +
                                               " iterations (relative residual " +
                                               std::to_string(out.rel_residual) + ")");
}

IrlsResult irls_outer(const ProblemSpec& prob, const Image& m0, int outer_iters, const CgOptions& cg) {
  prob.validate();
  if (prob.mode != ProblemMode::Tikhonov || !(prob.beta > 0.0)) {
    throw ParameterError("irls_outer: needs Tikhonov mode with beta > 0");
  }
  if (prob.reg.kind != Penalty::Huber) throw ParameterError("irls_outer: needs the Huber family");
  if (outer_iters < 0) throw ParameterError("irls_outer: outer_iters must be >= 0");
  if (!m0.same_lattice(prob.data)) throw DimensionError("irls_outer: m0 lattice mismatch");

  const Image rhs = prob.blur ? adjoint_map(prob.data, *prob.blur) : prob.data;
  IrlsResult out;
  out.solution = m0;
  out.objectives.push_back(objective(m0, prob));
  for (int k = 0; k < outer_iters; ++k) {
    CgResult step = cg_solve(out.solution, prob, rhs, cg.tol, cg.max_iters, &out.solution);
    IterationRecord rec;
    rec.k = k;
    rec.tau = prob.beta;
    rec.rel_err = relative_error(step.solution, out.solution);
    rec.misfit = misfit(step.solution, prob.data);
    rec.objective = objective(step.solution, prob);
    out.records.push_back(rec);
    out.objectives.push_back(rec.objective);
    out.cg_iterations.push_back(step.iterations);
    out.solution = std::move(step.solution);
  }
  return out;
}

}  // namespace imrec

#pragma once

#include <functional>
#include <string>

#include "imrec/image.hpp"

namespace imrec {

enum class Penalty { Huber, Tukey };

/// How the threshold is obtained when an operator is evaluated at an image.
///   Fixed    - use `gamma` as stored.
///   Adaptive - recompute from the image the operator is frozen at
///              (Huber: adaptive_gamma(m); Tukey: sqrt(5) * adaptive_gamma(m)).
enum class GammaRule { Fixed, Adaptive };

struct RegularizerSpec {
  Penalty kind = Penalty::Huber;
  double gamma = 1.0;  // Huber gamma, or Tukey gamma-hat
  GammaRule rule = GammaRule::Fixed;

  static RegularizerSpec huber(double gamma) { return {Penalty::Huber, gamma, GammaRule::Fixed}; }
  static RegularizerSpec adaptive_huber() { return {Penalty::Huber, 0.0, GammaRule::Adaptive}; }
  static RegularizerSpec tukey(double gamma_hat) { return {Penalty::Tukey, gamma_hat, GammaRule::Fixed}; }
  /// Tukey threshold that starts rejecting outliers where Huber(gamma) does.
  static RegularizerSpec tukey_from_huber(double huber_gamma);

  /// Copy with the threshold fixed to its value at m.
  RegularizerSpec resolved(const Image& m) const;
};

/// Ratio between the Tukey and Huber thresholds.
inline constexpr double kTukeyScale = 2.2360679774997896964;  // sqrt(5)

std::string to_string(Penalty p);

/// gamma = (h/|Omega|) * integral |grad m|, node quadrature with weight h^2.
/// A flat image falls back to degenerate_gamma_floor(m) and emits a warning.
double adaptive_gamma(const Image& m);
double degenerate_gamma_floor(const Image& m);

/// Receives library warnings (degenerate gamma, etc). Default prints to stderr.
using WarningHandler = std::function<void(const std::string&)>;
void set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

double rho(const RegularizerSpec& spec, double sigma);
double phi(const RegularizerSpec& spec, double sigma);
/// g(sigma) = phi(sigma) / sigma, finite at sigma = 0.
double edge_stop_g(const RegularizerSpec& spec, double sigma);

/// R(m) = h^2 * sum rho(|grad m|).
double reg_value(const Image& m, const RegularizerSpec& spec);

/// -div(g(|grad m|) grad m). Its h^2-weighted inner product with v is the
/// directional derivative of reg_value.
Image reg_gradient(const Image& m, const RegularizerSpec& spec);

/// Frozen-coefficient diffusion v -> -div(c grad v) with c = g(|grad m_frozen|).
/// Symmetric positive semidefinite for both penalty families.
class DiffusionOperator {
 public:
  DiffusionOperator(const Image& m_frozen, const RegularizerSpec& spec);

  Image apply(const Image& v) const;
  /// Diagonal of the assembled operator.
  Image diagonal() const;
  const Image& coefficients() const noexcept { return coeff_; }
  double gamma() const noexcept { return gamma_; }

 private:
  Image coeff_;
  double gamma_;
};

/// L(m) v = -div((1 / max(gamma, |grad m|)) grad v). Huber only.
Image apply_L(const Image& m_frozen, const Image& v, const RegularizerSpec& spec);

}  // namespace imrec
